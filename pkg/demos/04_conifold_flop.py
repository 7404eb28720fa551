"""
The conifold flop
=================

X+ and X- blow up different planes through the conifold singularity.  They
are not isomorphic over it, but their counts and canonical volumes agree.
"""
from zetaforge import PadicContext, canonical_measure, compare_zeta, gallery_get

pair = gallery_get("conifold-pair")
print(pair.notes)

# %%
for p in (2, 3, 5, 7):
    cmp = compare_zeta(pair, p, 3)
    print(f"p={p}:", cmp.left.counts, "==", cmp.right.counts, cmp.to_dict()["verdict"])

# %%
for p, k in ((3, 1), (3, 2), (5, 1)):
    ctx = PadicContext(p, k)
    left = canonical_measure(pair.left, ctx).value
    right = canonical_measure(pair.right, ctx).value
    print(f"p={p} k={k}: {left} vs {right}")

# %%
# The answer does not depend on which chart is listed first.
rev = gallery_get("conifold-plus-reversed")
print(canonical_measure(rev, PadicContext(3, 2)).value)
