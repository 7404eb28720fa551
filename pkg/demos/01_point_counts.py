"""
Counting points over finite fields
==================================

Point counts of a few small varieties over F_p and its extensions.
"""

# %%
# Projective spaces have the familiar 1 + q + ... + q^n points.
from zetaforge import PrimeField, count_points, count_sequence, gallery_get, make_extension

for n in range(4):
    table = count_sequence(gallery_get(f"P{n}"), 3, 4)
    print(f"P{n} over F_3^r:", table.counts)

# %%
# The plane cubic Y^2 Z = X^3 + X Z^2 + Z^3 over F_5, F_25, ...
curve = gallery_get("elliptic-5191")
table = count_sequence(curve, 5, 6)
print(table.to_text())

# %%
# Elements of F_25 are stored as integers c0 + 5 c1.  Arithmetic is vectorised.
import numpy as np

F = make_extension(5, 2)
print(F, "modulus (low degree first):", F.modulus)
a = np.arange(F.order)
print("squares in F_25:", sorted(set(F.mul(a, a).tolist())))

# %%
# The conifold xy = zw has a singular point at the origin; its two small
# resolutions are described by two-chart atlases.
conifold = gallery_get("conifold")
print("conifold over F_5:", count_points(conifold, PrimeField(5)))
for name in ("conifold-plus", "conifold-minus"):
    print(name, count_sequence(gallery_get(name), 2, 3).counts)
