from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from zetaforge import (Chart, ChartAtlas, InputError, PadicContext, PrimeField, SingularClassError,
                       VarietySpec, canonical_measure, count_affine, count_atlas, gallery_get,
                       haar_box, padic_norm, tube_measure, valuation, weil_measure)
from zetaforge.schemes import GELFAND_LERAY

import oracles

nonzero = st.fractions().filter(lambda a: a != 0)


def test_valuation_examples():
    assert valuation(50, 5) == 2 and padic_norm(50, 5) == Fraction(1, 25)
    assert valuation(Fraction(3, 5), 5) == -1 and padic_norm(Fraction(3, 5), 5) == 5
    assert padic_norm(7, 5) == 1 and padic_norm(0, 5) == 0
    with pytest.raises(InputError):
        valuation(0, 5)


@settings(max_examples=100, deadline=None)
@given(nonzero, nonzero, st.sampled_from([2, 3, 5, 7]))
def test_valuation_is_additive(a, b, p):
    assert valuation(a * b, p) == valuation(a, p) + valuation(b, p)
    assert padic_norm(a * b, p) == padic_norm(a, p) * padic_norm(b, p)
    if a + b:
        assert valuation(a + b, p) >= min(valuation(a, p), valuation(b, p))


def test_haar_box():
    ctx = PadicContext(5, 1)
    assert haar_box(ctx) == 1
    assert haar_box(ctx, 1, (3,)) == Fraction(1, 125)
    assert haar_box(ctx, 2, (1, 1)) == Fraction(1, 25)


def test_context_limits(monkeypatch):
    with pytest.raises(InputError):
        PadicContext(6, 1)
    with pytest.raises(InputError):
        PadicContext(5, 9)
    with pytest.raises(InputError):
        PadicContext(5, 1, residue_degree=2)
    monkeypatch.setenv("ZETAFORGE_MAX_PRECISION", "10")
    assert PadicContext(5, 9).modulus == 5**9


@pytest.mark.parametrize("p", [5, 7, 11, 13])
@pytest.mark.parametrize("k", [1, 2])
def test_weil_measure_equals_count_over_p(p, k):
    chart = gallery_get("elliptic-5191-affine")
    G = oracles.GF(p)
    n = oracles.brute_affine([lambda x, y: y * y - x * x * x - x - 1], 2, G)
    res = weil_measure(chart, PadicContext(p, k))
    assert res.value == Fraction(n, p) and res.stabilized
    assert res.value * p == count_affine(chart, PrimeField(p))


def test_disk_count_grows_by_hensel_lifts():
    chart = gallery_get("elliptic-5191-affine")
    assert weil_measure(chart, PadicContext(5, 1)).disk_count == 8
    assert weil_measure(chart, PadicContext(5, 2)).disk_count == 40


def test_partial_choice_does_not_matter():
    chart = gallery_get("elliptic-5191-affine")
    for p in (5, 7):
        ctx = PadicContext(p, 2)
        assert weil_measure(chart, ctx, "smallest").value == \
            weil_measure(chart, ctx, "largest").value


def test_weil_measure_of_a_point():
    pt = VarietySpec.affine("origin", 1, ["t"], ("t",), dimension=0, density=GELFAND_LERAY)
    assert weil_measure(pt, PadicContext(7, 2)).value == 1


def test_singular_class_refused():
    chart = gallery_get("elliptic-5191-affine")
    with pytest.raises(SingularClassError) as info:
        weil_measure(chart, PadicContext(31, 1))
    assert info.value.residue == (14, 0)


def test_spec_without_density_rejected():
    with pytest.raises(InputError):
        weil_measure(gallery_get("conifold"), PadicContext(5, 1))


@pytest.mark.parametrize("name,p", [("A1-resolution", 5), ("A2-resolution", 7),
                                    ("conifold-plus", 3), ("conifold-minus", 3)])
def test_canonical_measure_is_atlas_count(name, p):
    atlas = gallery_get(name)
    res = canonical_measure(atlas, PadicContext(p, 1))
    assert res.stabilized
    assert res.value * p**atlas.dimension == count_atlas(atlas, PrimeField(p))


def test_canonical_examples():
    assert canonical_measure(gallery_get("A1-resolution"), PadicContext(5, 1)).value == \
        Fraction(6, 5)
    assert canonical_measure(gallery_get("conifold-plus"), PadicContext(3, 1)).value == \
        Fraction(4, 3)


def test_single_chart_atlas_is_weil_measure():
    atlas = ChartAtlas("one", (Chart(("x", "y"), ("y^2 - x^3 - x - 1",)),), 1)
    ctx = PadicContext(7, 2)
    assert canonical_measure(atlas, ctx).value == \
        weil_measure(gallery_get("elliptic-5191-affine"), ctx).value


@pytest.mark.parametrize("p,k", [(3, 1), (3, 2), (5, 1)])
def test_flop_preserves_canonical_measure(p, k):
    ctx = PadicContext(p, k)
    plus = canonical_measure(gallery_get("conifold-plus"), ctx)
    minus = canonical_measure(gallery_get("conifold-minus"), ctx)
    assert plus.value == minus.value == Fraction(p**3 + p**2, p**3)


def test_tube_of_hyperplane():
    sub = gallery_get("hyperplane-A2")
    for m in range(1, 5):
        assert tube_measure(sub, 2, PadicContext(5, m)) == Fraction(1, 5**m)


def test_tube_of_elliptic_curve_decays_by_one_over_p():
    sub = gallery_get("elliptic-5191-affine")
    values = [tube_measure(sub, 2, PadicContext(5, m)) for m in (1, 2, 3)]
    assert values == [Fraction(8, 25), Fraction(8, 125), Fraction(8, 625)]


def test_tube_of_ambient_is_everything():
    whole = VarietySpec.affine("A2", 2)
    assert all(tube_measure(whole, 2, PadicContext(3, m)) == 1 for m in (1, 2, 3))


def test_tube_input_checks():
    with pytest.raises(InputError):
        tube_measure(gallery_get("hyperplane-A2"), 3, PadicContext(5, 1))
    with pytest.raises(InputError):
        tube_measure(gallery_get("P1"), 2, PadicContext(5, 1))
