import pytest

from zetaforge import InputError, PrimeField, an_case, count_affine, count_atlas, mckay_check
from zetaforge.mckay import bad_prime_evidence

import oracles


def test_case_shape():
    case = an_case(1)
    assert len(case.resolution.charts) == 2
    assert case.singular_model.equations[0].to_string() == "x*y - z^2"
    for n in range(1, 9):
        charts = an_case(n).resolution.charts
        assert len(charts) == n + 1
        assert all(len(c.variables) == 2 and not c.equations for c in charts)
        assert [len(c.cuts) for c in charts] == [0] + [1] * n
        assert all(c.cuts[0][0] == i - 1 for i, c in enumerate(charts) if i)


def test_range():
    with pytest.raises(InputError):
        an_case(0)
    with pytest.raises(InputError):
        an_case(9)


def test_an_counts():
    assert count_atlas(an_case(2).resolution, PrimeField(7)) == 63
    # xy = c has q - 1 or 2q - 1 solutions and z^(n+1) = 0 only at z = 0, so q^2 for every n
    for n in range(1, 9):
        assert count_affine(an_case(n).singular_model, PrimeField(5)) == 25


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_singular_model_brute(n):
    for p in (5, 7):
        if (n + 1) % p == 0:
            continue
        G = oracles.GF(p)
        want = oracles.brute_affine([lambda x, y, z: x * y - z ** (n + 1)], 3, G)
        assert want == p * p == count_affine(an_case(n).singular_model, PrimeField(p))


@pytest.mark.parametrize("n", [1, 2, 4])
def test_mckay_fit(n):
    primes = [p for p in (5, 7, 11, 13) if (n + 1) % p]
    rep = mckay_check(n, primes, r_max=2)
    assert rep.fitted == (0, n, 1)
    assert rep.c_at_one == n + 1 == rep.conjugacy_classes
    assert rep.verdict
    for t in rep.tables:
        assert t.counts == [oracles.an_resolution_count(n, t.p**r) for r in (1, 2)]


def test_mckay_alternative_primes():
    rep = mckay_check(4, [7, 11, 13, 17], r_max=1)
    assert rep.fitted == (0, 4, 1) and rep.c_at_one == 5


def test_bad_prime_is_excluded_with_evidence():
    rep = mckay_check(2, [3, 5, 7, 11, 13], r_max=1)
    assert list(rep.excluded) == [3]
    assert "reduces to 0 mod 3" in rep.excluded[3]
    assert rep.verdict
    assert bad_prime_evidence(an_case(2), 5) is None


def test_report_records_singular_model_and_euler_convention():
    d = mckay_check(1, [5, 7, 11, 13]).to_dict()
    assert d["verdict"] == "PASS" and d["C(1)"] == 2
    assert any("C(1)" in note for note in d["notes"])
    assert any("[0, 0, 1]" in note for note in d["notes"])


def test_insufficient_data_is_a_fail_not_a_crash():
    rep = mckay_check(4, [5, 7, 11, 13], r_max=1)
    assert not rep.verdict and rep.fit_error
