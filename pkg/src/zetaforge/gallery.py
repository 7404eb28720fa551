"""Built-in specs used by the tests, the demos and the command line."""
from .mckay import an_resolution_atlas, an_singular_model
from .schemes import (CANONICAL_PRESERVING, GELFAND_LERAY, BirationalPairSpec, Chart,
                      ChartAtlas, VarietySpec)
from .errors import InputError

ELLIPTIC_AFFINE = "y^2 - x^3 - x - 1"
ELLIPTIC_PROJECTIVE = "Y^2*Z - X^3 - X*Z^2 - Z^3"


def projective_space(n):
    return VarietySpec.projective(f"P{n}", n, dimension=n)


def elliptic_curve():
    return VarietySpec.projective("elliptic-5191", 2, [ELLIPTIC_PROJECTIVE], ("X", "Y", "Z"),
                                  dimension=1)


def elliptic_chart():
    return VarietySpec.affine("elliptic-5191-affine", 2, [ELLIPTIC_AFFINE], ("x", "y"),
                              dimension=1, density=GELFAND_LERAY)


def conifold():
    return VarietySpec.affine("conifold", 4, ["x*y - z*w"], ("x", "y", "z", "w"), dimension=3)


def conifold_plus():
    # blow-up of (x, z): chart a=1 has x = -z b, w = -y b; chart b=1 has z = -x a, y = -w a
    return ChartAtlas("conifold-plus", (
        Chart(("z", "y", "b")),
        Chart(("x", "w", "a"), (), ((0, "a"),)),
    ), 3)


def conifold_plus_reversed():
    return conifold_plus().reversed_with([(), ((0, "b"),)])


def conifold_minus():
    # blow-up of (x, w): chart a=1 has w = x b, y = z b; chart b=1 has x = w a, z = y a
    return ChartAtlas("conifold-minus", (
        Chart(("x", "z", "b")),
        Chart(("w", "y", "a"), (), ((0, "a"),)),
    ), 3)


def conifold_pair():
    return BirationalPairSpec(
        "conifold-pair", conifold_plus(), conifold_minus(), CANONICAL_PRESERVING,
        "the two small resolutions of xy = zw, related by the Atiyah flop")


def hyperplane(n):
    return VarietySpec.affine(f"hyperplane-A{n}", n, ["x1"], dimension=n - 1)


def builtin_gallery():
    """Name -> spec, in a fixed order."""
    items = [projective_space(n) for n in range(4)]
    items += [elliptic_curve(), elliptic_chart(), conifold(), conifold_plus(),
              conifold_plus_reversed(), conifold_minus(), conifold_pair()]
    for n in range(1, 7):
        items += [an_resolution_atlas(n), an_singular_model(n)]
    items += [hyperplane(n) for n in range(1, 4)]
    return {spec.name: spec for spec in items}


def gallery_get(name):
    if name.startswith("gallery:"):
        name = name[len("gallery:"):]
    gallery = builtin_gallery()
    if name not in gallery:
        raise InputError(f"no gallery entry {name!r}; known: {', '.join(gallery)}")
    return gallery[name]
