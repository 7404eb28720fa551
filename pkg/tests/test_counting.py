import pytest
from hypothesis import given, settings, strategies as st

from zetaforge import (BudgetExceeded, CountTable, IntPolynomial, PrimeField, VarietySpec,
                       count_affine, count_atlas, count_points, count_projective,
                       count_sequence, gallery_get, make_extension, smoothness_check)
from zetaforge.counting import count_zeros, dimension_estimate, plan_count
from zetaforge.polynomials import reduce_mod_p

import oracles

FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (5, 2)]


def cone(spec):
    return VarietySpec.affine(spec.name + "-cone", spec.ambient.nvars, spec.equations,
                              spec.variables)


@pytest.mark.parametrize("n", range(4))
@pytest.mark.parametrize("p,r", [(2, 1), (3, 2), (5, 1), (7, 2)])
def test_projective_space(n, p, r):
    q = p**r
    assert count_points(gallery_get(f"P{n}"), make_extension(p, r)) == \
        oracles.projective_space_count(n, q)


def test_elliptic_counts_match_trace_recursion():
    table = count_sequence(gallery_get("elliptic-5191"), 5, 6)
    assert table.counts == oracles.elliptic_counts(6) == [9, 27, 108, 675, 3069, 15552]


@pytest.mark.parametrize("p,r", [(5, 1), (5, 2), (7, 1), (2, 3)])
def test_elliptic_against_reference_field(p, r):
    G = oracles.GF(p, r)
    f = lambda X, Y, Z: Y * Y * Z - X * X * X - X * Z * Z - Z * Z * Z  # noqa: E731
    want = oracles.brute_projective([f], 3, G)
    assert count_projective(gallery_get("elliptic-5191"), make_extension(p, r)) == want


@pytest.mark.parametrize("p,r", FIELDS)
def test_affine_counts_against_reference_field(p, r):
    G = oracles.GF(p, r)
    F = make_extension(p, r)
    chart = lambda x, y: y * y - x * x * x - x - 1  # noqa: E731
    assert count_affine(gallery_get("elliptic-5191-affine"), F) == \
        oracles.brute_affine([chart], 2, G)
    coni = lambda x, y, z, w: x * y - z * w  # noqa: E731
    assert count_affine(gallery_get("conifold"), F) == oracles.brute_affine([coni], 4, G)


@pytest.mark.parametrize("p,r", FIELDS)
def test_split_and_brute_agree(p, r):
    F = make_extension(p, r)
    for name in ("conifold", "elliptic-5191-affine", "A2-singular", "hyperplane-A3"):
        spec = gallery_get(name)
        assert count_affine(spec, F, method="split") == count_affine(spec, F, method="brute")


terms = st.dictionaries(st.tuples(*[st.integers(0, 3)] * 4), st.integers(-4, 4), max_size=5)


@settings(max_examples=40, deadline=None)
@given(terms, terms, st.sampled_from([(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)]))
def test_random_systems_three_routes(t1, t2, pr):
    """Split, brute and the reference field agree on random two-equation systems."""
    names = ("a", "b", "c", "d")
    f, g = IntPolynomial(names, t1), IntPolynomial(names, t2)
    F = make_extension(*pr)
    polys = [reduce_mod_p(h, F) for h in (f, g)]
    polys = [h for h in polys if not h.is_zero()]
    split, _ = count_zeros(polys, 4, F, method="auto")
    brute, _ = count_zeros(polys, 4, F, method="brute")
    assert split == brute
    if F.order <= 5:
        G = oracles.GF(*pr)
        fns = [_callable(h) for h in (f, g)]
        assert brute == oracles.brute_affine(fns, 4, G)


def _callable(poly):
    def fn(*pt):
        total = pt[0].f(0)
        for exp, c in poly.terms.items():
            term = pt[0].f(c)
            for x, k in zip(pt, exp):
                term = term * x**k
            total = total + term
        return total
    return fn


def test_split_plan_is_cheaper_for_separable_equation():
    F = make_extension(7)
    f = reduce_mod_p(IntPolynomial.parse("x*y - z*w", ("x", "y", "z", "w")), F)
    plan = plan_count([f], 4, F)
    assert plan.method == "split" and plan.evaluations == 2 * 7**2


@pytest.mark.parametrize("name", ["P0", "P1", "P2", "P3", "elliptic-5191"])
@pytest.mark.parametrize("p,r", [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)])
def test_stratified_sum_equals_cone_count(name, p, r):
    spec = gallery_get(name)
    F = make_extension(p, r)
    cone_count = count_affine(cone(spec), F, method="brute")
    assert count_projective(spec, F) == (cone_count - 1) // (F.order - 1)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@pytest.mark.parametrize("r", [1, 2])
def test_conifold_resolutions_closed_form(p, r):
    q = p**r
    F = make_extension(p, r)
    for name in ("conifold-plus", "conifold-minus", "conifold-plus-reversed"):
        assert count_atlas(gallery_get(name), F) == oracles.conifold_resolution_count(q)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
@pytest.mark.parametrize("p", [3, 5, 7])
def test_an_resolution_closed_form(n, p):
    assert count_points(gallery_get(f"A{n}-resolution"), PrimeField(p)) == \
        oracles.an_resolution_count(n, p)


def test_singular_an_model_has_q_squared_points():
    for n in (1, 2, 4):
        for p in (5, 7, 11):
            if (n + 1) % p:
                assert count_affine(gallery_get(f"A{min(n, 6)}-singular"), PrimeField(p)) == p * p


def test_conifold_itself():
    # xy = zw: q^3 + q^2 - q points
    for q, F in ((5, PrimeField(5)), (9, make_extension(3, 2))):
        assert count_affine(gallery_get("conifold"), F) == q**3 + q**2 - q


@pytest.mark.parametrize("p,r", [(3, 1), (5, 1), (2, 2)])
def test_product_counts_multiply(p, r):
    F = make_extension(p, r)
    a = VarietySpec.affine("a", 2, ["y^2 - x^3 - x - 1"], ("x", "y"))
    b = VarietySpec.affine("b", 2, ["u*v - 1"], ("u", "v"))
    assert count_affine(a.product(b), F) == count_affine(a, F) * count_affine(b, F)


@pytest.mark.parametrize("workers", [2, 3])
def test_worker_count_does_not_change_results(workers):
    for name, p, R in (("elliptic-5191", 5, 4), ("conifold-plus", 3, 3), ("conifold", 5, 2)):
        one = count_sequence(gallery_get(name), p, R, workers=1)
        many = count_sequence(gallery_get(name), p, R, workers=workers)
        assert one.to_dict() == many.to_dict()


def test_budget_refusal_and_truncation():
    spec = gallery_get("conifold")
    with pytest.raises(BudgetExceeded) as info:
        count_affine(spec, PrimeField(7), budget=10, method="brute")
    assert info.value.required == 7**4
    table = count_sequence(gallery_get("elliptic-5191"), 5, 4, budget=300)
    assert table.truncated and table.counts == [9, 27] and table.required_budget == 250
    assert table.budget_used <= 300


def test_budget_environment_variable(monkeypatch):
    monkeypatch.setenv("ZETAFORGE_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        count_affine(gallery_get("conifold"), PrimeField(11), method="brute")


def test_count_table_text_round_trip():
    table = count_sequence(gallery_get("P1"), 3, 3)
    text = table.to_text()
    assert text.splitlines()[:3] == ["# spec=P1 p=3 R=3", "r q^r N_r", "1 3 4"]
    back = CountTable.from_text(text)
    assert back.counts == [4, 10, 28] and back.p == 3 and back.spec_name == "P1"
    assert table[2] == 10
    with pytest.raises(IndexError):
        table[0]


def test_dimension_estimate():
    assert dimension_estimate(count_sequence(gallery_get("conifold-plus"), 3, 3)) == 3
    assert dimension_estimate(count_sequence(gallery_get("elliptic-5191"), 5, 5)) == 1


def test_smoothness_of_elliptic_chart():
    spec = gallery_get("elliptic-5191-affine")
    assert smoothness_check(spec, PrimeField(5)).smooth
    # 31 divides the discriminant 4 + 27 of x^3 + x + 1
    bad = smoothness_check(spec, PrimeField(31))
    assert not bad.smooth and bad.singular_points == [(14, 0)]


def test_conifold_singular_only_at_origin():
    rep = smoothness_check(gallery_get("conifold"), PrimeField(5))
    assert rep.singular_points == [(0, 0, 0, 0)] and rep.checked_points == 145


def test_degenerate_affine_specs():
    assert count_affine(VarietySpec.affine("plane", 2), PrimeField(3)) == 9
    assert count_affine(gallery_get("hyperplane-A2"), PrimeField(7)) == 7
    assert count_affine(VarietySpec.affine("nothing", 2, ["x1^0 + 0*x2"]), PrimeField(3)) == 0
