"""
From point counts to Betti numbers
==================================

The counts N_1..N_R determine the zeta function; the sizes of its
reciprocal roots sort the factors by weight, and the degrees are Betti numbers.
"""
from zetaforge import (auto_reconstruct, count_sequence, gallery_get, pade_reconstruct,
                       weight_split, zeta_series)
from zetaforge.zeta import hasse_holds, trace_from_factor

# %%
table = count_sequence(gallery_get("elliptic-5191"), 5, 6)
series = zeta_series(table)
print("series coefficients:", series.coefficients)

# %%
# Two numerator and two denominator degrees, with two extra coefficients held back as a check.
z = pade_reconstruct(series, 2, 2)
print("Z(t) =", z)

split = weight_split(z, 5, 1)
print(split.to_text())

a = trace_from_factor(split.factor(1))
print(f"trace a = {a}, a^2 = {a * a} <= 4q = 20: {hasse_holds(a, 5)}")

# %%
# Without known degrees, the search tries the smallest total degree first.
for n in (1, 2, 3):
    t = count_sequence(gallery_get(f"P{n}"), 3, n + 3)
    zp = auto_reconstruct(zeta_series(t))
    print(f"P{n}:", zp, "betti", weight_split(zp, 3, n).betti)
