"""
Cyclic McKay harness: the A_n surface singularity xy = z^(n+1), the quotient
of A^2 by Z/(n+1) inside SL(2), and its toric minimal resolution.

The resolution is covered by n+1 affine planes U_0..U_n with coordinates
(u_i, v_i).  Consecutive charts glue along

    u_{i+1} = u_i^2 v_i,    v_{i+1} = 1 / u_i,

so U_i ∩ U_{i-1} is {v_i != 0} inside U_i.  Chart i > 0 contributes the
line {v_i = 0} beyond the earlier charts, and the count is q^2 + n q.
Its value at q = 1 is n + 1, the number of conjugacy classes of Z/(n+1).
"""
from dataclasses import dataclass, field as dc_field

from .config import DEFAULT_MAX_AN
from .counting import count_sequence
from .errors import FitError, InputError
from .polynomials import reduce_mod_p
from .fields import PrimeField
from .schemes import Chart, ChartAtlas, VarietySpec
from .zeta import count_polynomial_fit, eval_count_polynomial


@dataclass(frozen=True)
class CyclicMcKayCase:
    n: int
    singular_model: VarietySpec
    resolution: ChartAtlas

    @property
    def group_order(self):
        return self.n + 1

    @property
    def conjugacy_classes(self):
        # Z/(n+1) is abelian: every element is its own class
        return self.n + 1


def an_singular_model(n):
    return VarietySpec.affine(f"A{n}-singular", 3, [f"x*y - z^{n + 1}"], ("x", "y", "z"),
                              dimension=2)


def an_resolution_atlas(n):
    charts = [Chart(("u0", "v0"))]
    for i in range(1, n + 1):
        charts.append(Chart((f"u{i}", f"v{i}"), (), ((i - 1, f"v{i}"),)))
    return ChartAtlas(f"A{n}-resolution", tuple(charts), 2)


def an_case(n, max_n=DEFAULT_MAX_AN):
    n = int(n)
    if not 1 <= n <= max_n:
        raise InputError(f"A_n index {n} outside 1..{max_n}")
    return CyclicMcKayCase(n, an_singular_model(n), an_resolution_atlas(n))


def bad_prime_evidence(case, p):
    """Why p is excluded: the z-partial of xy - z^(n+1) vanishes identically mod p."""
    if case.group_order % p:
        return None
    dz = case.singular_model.equations[0].derivative("z")
    reduced = reduce_mod_p(dz, PrimeField(p))
    return (f"p = {p} divides the group order {case.group_order}: "
            f"d/dz (xy - z^{case.group_order}) = {dz} reduces to "
            f"{'0' if reduced.is_zero() else 'a nonzero polynomial'} mod {p}")


@dataclass
class McKayReport:
    n: int
    primes: list
    excluded: dict
    tables: list
    singular_tables: list
    fitted: tuple = None
    c_at_one: int = None
    conjugacy_classes: int = None
    fit_error: str = None
    notes: list = dc_field(default_factory=list)

    @property
    def verdict(self):
        expected = (0, self.n, 1)
        return (self.fitted == expected and self.c_at_one == self.conjugacy_classes)

    def to_dict(self):
        return {
            "n": self.n,
            "primes": list(self.primes),
            "excluded": {str(p): why for p, why in self.excluded.items()},
            "resolution_counts": {str(t.p): list(t.counts) for t in self.tables},
            "singular_counts": {str(t.p): list(t.counts) for t in self.singular_tables},
            "fitted": list(self.fitted) if self.fitted is not None else None,
            "C(1)": self.c_at_one,
            "conjugacy_classes": self.conjugacy_classes,
            "fit_error": self.fit_error,
            "verdict": "PASS" if self.verdict else "FAIL",
            "notes": list(self.notes),
        }


def mckay_check(n, primes, r_max=1, budget=None, workers=1):
    """Count the resolution over good primes, fit C(q), compare C(1) with the class count.

    Euler data comes from C(1) rather than from a zeta weight split: the
    resolution is not proper, so purity is not available.
    """
    case = an_case(n)
    excluded, tables, singular = {}, [], []
    for p in primes:
        why = bad_prime_evidence(case, p)
        if why:
            excluded[p] = why
            continue
        tables.append(count_sequence(case.resolution, p, r_max, budget, workers))
        singular.append(count_sequence(case.singular_model, p, r_max, budget, workers))
    report = McKayReport(n, list(primes), excluded, tables, singular,
                         conjugacy_classes=case.conjugacy_classes)
    report.notes.append("Euler number read as C(1) of the count polynomial (open variety)")
    try:
        report.fitted = count_polynomial_fit(tables, 2)
        report.c_at_one = eval_count_polynomial(report.fitted, 1)
    except (FitError, InputError) as exc:
        report.fit_error = str(exc)
    if singular:
        try:
            sing = count_polynomial_fit(singular, 2)
            report.notes.append(
                f"singular model counts fit {list(sing)}; resolving adds the exceptional locus")
        except (FitError, InputError) as exc:
            report.notes.append(f"singular model fit failed: {exc}")
    return report
