"""
p-adic volumes and point counts
===============================

The volume of X(Z_p) under the measure attached to a gauge form is
|X(F_p)| / p^dim.  The computation below never counts points directly; it
sums residue disks.
"""
from zetaforge import (PadicContext, PrimeField, canonical_measure, count_affine,
                       gallery_get, tube_measure, weil_measure)

chart = gallery_get("elliptic-5191-affine")

# %%
for p in (5, 7, 11, 13):
    for k in (1, 2):
        res = weil_measure(chart, PadicContext(p, k))
        print(f"p={p} k={k}: {res.value}  stable={res.stabilized}  disks={res.disk_count}")
    print("   brute count / p =", count_affine(chart, PrimeField(p)), "/", p)

# %%
# Without a global gauge form, measures are glued chart by chart.
print("A1 resolution, p=5:", canonical_measure(gallery_get("A1-resolution"), PadicContext(5, 1)).value)
print("conifold X+, p=3:  ", canonical_measure(gallery_get("conifold-plus"), PadicContext(3, 1)).value)

# %%
# Points within p^-m of a subvariety: the tube volume goes to zero.
for m in range(1, 5):
    plane = tube_measure(gallery_get("hyperplane-A2"), 2, PadicContext(5, m))
    curve = tube_measure(chart, 2, PadicContext(5, m)) if m < 4 else None
    print(f"m={m}: hyperplane {plane}   elliptic curve {curve}")
