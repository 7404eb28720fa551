"""
Cyclic McKay correspondence
===========================

The minimal resolution of xy = z^(n+1) has q^2 + nq points over F_q.  At
q = 1 this gives n + 1, the number of conjugacy classes of Z/(n+1).
"""
from zetaforge import mckay_check

for n in (1, 2, 4, 6):
    rep = mckay_check(n, [5, 7, 11, 13], r_max=2)
    print(f"A_{n}: C(q) = {rep.fitted}  C(1) = {rep.c_at_one}  classes = {rep.conjugacy_classes}"
          f"  {'PASS' if rep.verdict else 'FAIL'}")
    for p, why in rep.excluded.items():
        print("   skipped", p, "-", why)
