"""
p-adic norms and measures computed by residue-class enumeration.

We work over F = Q_p, R = Z_p with maximal ideal (p); the field norm
N_{F/Q_p} is then the identity, so ||a|| = p^(-ord_p a).  Integrals are
exact rationals m / p^(k n): the integration domain is cut into classes
modulo p^k, each of Haar measure p^(-k n) in the chart parameters, and the
classes are found by lifting solutions one p-adic digit at a time.
"""
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import default_budget, max_precision
from .counting import _map_chunks, _decode
from .errors import BudgetExceeded, InputError, SingularClassError
from .fields import is_prime
from .schemes import ChartAtlas, GaugeDensity, VarietySpec


def valuation(a, p):
    """ord_p of a nonzero rational."""
    a = Fraction(a)
    if a == 0:
        raise InputError("valuation of zero is undefined")
    v = 0
    num, den = a.numerator, a.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def padic_norm(a, p):
    """||a|| = p^(-ord_p a), with ||0|| = 0."""
    a = Fraction(a)
    if a == 0:
        return Fraction(0)
    return Fraction(p) ** (-valuation(a, p))


@dataclass(frozen=True)
class PadicContext:
    p: int
    precision: int = 1
    residue_degree: int = 1
    ramification: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputError(f"{self.p} is not prime")
        if self.residue_degree != 1 or self.ramification != 1:
            raise InputError("only F = Q_p is supported (unramified and ramified extensions are rejected)")
        cap = max_precision()
        if not 1 <= self.precision <= cap:
            raise InputError(f"precision {self.precision} outside 1..{cap}")

    @property
    def modulus(self):
        return self.p**self.precision

    def at(self, precision):
        return PadicContext(self.p, precision)


@dataclass
class PadicMeasureResult:
    value: Fraction
    precision_used: int
    stabilized: bool
    disk_count: int

    def to_dict(self):
        return {"value": f"{self.value.numerator}/{self.value.denominator}",
                "precision": self.precision_used, "stabilized": self.stabilized,
                "disks": self.disk_count}


def haar_box(context, n=1, exponents=None):
    """Haar measure of {x in Z_p^n : x_i = c_i mod p^(m_i)}; 1 for the unit box."""
    exponents = tuple(exponents or ())
    if len(exponents) > n:
        raise InputError("more congruence exponents than coordinates")
    if any(m < 0 for m in exponents):
        raise InputError("congruence exponents must be non-negative")
    return Fraction(1, context.p ** sum(exponents))


# -- residue-class lifting -----------------------------------------------------

def _solutions(polys, nvars, p, k, cuts=(), budget=None, workers=1):
    """All x mod p^k (as an (N, nvars) int64 array) with every poly = 0 mod p^k.

    ``cuts`` are only required to vanish modulo p.
    """
    budget = default_budget() if budget is None else budget
    if p**nvars > budget:
        raise BudgetExceeded(p**nvars, budget, "residue enumeration")

    def level_one(bounds):
        cols = _decode(*bounds, nvars, p)
        ok = np.ones(bounds[1] - bounds[0], dtype=bool)
        for f in tuple(polys) + tuple(cuts):
            ok &= f.evaluate_mod(cols, p) == 0
        return np.stack(cols, axis=1)[ok] if nvars else np.zeros((int(ok.sum()), 0), np.int64)

    sols = np.concatenate(_map_chunks(level_one, p**nvars, workers))
    used = p**nvars
    offsets = np.stack(_decode(0, p**nvars, nvars, p), axis=1) if nvars else np.zeros((1, 0), np.int64)
    for j in range(1, k):
        step = p**j
        need = len(sols) * len(offsets)
        used += need
        if used > budget:
            raise BudgetExceeded(used, budget, "residue lifting")
        cand = (sols[:, None, :] + step * offsets[None, :, :]).reshape(-1, nvars)
        mod = step * p
        ok = np.ones(len(cand), dtype=bool)
        cols = [cand[:, i] for i in range(nvars)]
        for f in polys:
            ok &= f.evaluate_mod(cols, mod) == 0
        sols = cand[ok]
    return sols


def _pick_partial(grads_mod_p, choice):
    """Index of the smallest (or largest) unit partial per row; -1 if none."""
    units = grads_mod_p != 0
    if choice == "smallest":
        idx = np.argmax(units, axis=1)
    elif choice == "largest":
        idx = units.shape[1] - 1 - np.argmax(units[:, ::-1], axis=1)
    else:
        raise InputError(f"partial choice must be 'smallest' or 'largest', not {choice!r}")
    return np.where(units.any(axis=1), idx, -1)


def _hypersurface_measure(f, variables, p, k, cuts=(), choice="smallest", budget=None, workers=1):
    """Gelfand-Leray measure of {f = 0} (restricted to cuts = 0 mod p) at precision k."""
    nvars = len(variables)
    n = nvars - 1
    sols = _solutions([f], nvars, p, k, cuts, budget, workers)
    partials = [f.derivative(v) for v in variables]
    total = Fraction(0)
    if len(sols):
        cols = [sols[:, i] for i in range(nvars)]
        grads = np.stack([np.broadcast_to(g.evaluate_mod(cols, p), (len(sols),))
                          for g in partials], axis=1)
        pick = _pick_partial(grads, choice)
        if np.any(pick < 0):
            bad = sols[np.argmax(pick < 0)] % p
            raise SingularClassError(bad)
        # a unit partial has norm 1, so the density 1/(df/dx_i) has norm 1 on the class
        total = Fraction(len(sols), p ** (k * n))
    return total, len(sols)


def _unit_measure(nvars, p, k, cuts=(), budget=None, workers=1):
    sols = _solutions([], nvars, p, k, cuts, budget, workers)
    return Fraction(len(sols), p ** (k * nvars)), len(sols)


def _as_density(obj):
    if isinstance(obj, GaugeDensity):
        return obj
    if isinstance(obj, VarietySpec):
        if obj.density is None:
            raise InputError(f"{obj.name} has no gauge density attached")
        return obj.gauge_density()
    raise InputError(f"expected a gauge density, got {type(obj).__name__}")


def weil_measure(density, context, partial_choice="smallest", budget=None, workers=1,
                 check_stability=True):
    """Integral of the Weil measure of a Gelfand-Leray density over X(Z_p)."""
    dens = _as_density(density)
    host = dens.host
    p, k = context.p, context.precision
    value, classes = _hypersurface_measure(dens.f, host.variables, p, k, (),
                                           partial_choice, budget, workers)
    stabilized = False
    if check_stability:
        again, _ = _hypersurface_measure(dens.f, host.variables, p, k + 1, (),
                                         partial_choice, budget, workers)
        stabilized = again == value
    return PadicMeasureResult(value, k, stabilized, classes)


def _chart_measure(chart, p, k, budget, workers, choice="smallest"):
    cuts = [g for _, g in chart.cuts]
    if not chart.equations:
        return _unit_measure(len(chart.variables), p, k, cuts, budget, workers)
    if len(chart.equations) == 1:
        return _hypersurface_measure(chart.equations[0], chart.variables, p, k, cuts,
                                     choice, budget, workers)
    raise InputError("charts with more than one equation have no Gelfand-Leray density")


def canonical_measure(atlas, context, budget=None, workers=1, check_stability=True):
    """Sum of chart measures over the first-chart-wins decomposition of X(Z_p).

    A Z_p-point of chart i lies in an earlier chart j exactly when the cut
    g_ij is a unit at it, so chart i contributes the classes where every
    cut vanishes modulo p.
    """
    if not isinstance(atlas, ChartAtlas):
        raise InputError("canonical_measure needs a ChartAtlas")
    p, k = context.p, context.precision

    def run(prec):
        total, classes = Fraction(0), 0
        for chart in atlas.charts:
            v, c = _chart_measure(chart, p, prec, budget, workers)
            total += v
            classes += c
        return total, classes

    value, classes = run(k)
    stabilized = False
    if check_stability:
        stabilized = run(k + 1)[0] == value
    return PadicMeasureResult(value, k, stabilized, classes)


def tube_measure(sub, ambient_n, context, m=None, budget=None, workers=1):
    """Haar measure of {x in Z_p^n : every equation of sub = 0 mod p^m}."""
    m = context.precision if m is None else int(m)
    if not 1 <= m <= max_precision():
        raise InputError(f"tube level {m} outside 1..{max_precision()}")
    if sub.is_projective:
        raise InputError("tube_measure needs an affine subvariety")
    if sub.ambient.dim != ambient_n:
        raise InputError(f"{sub.name} lives in A^{sub.ambient.dim}, not A^{ambient_n}")
    sols = _solutions(list(sub.equations), ambient_n, context.p, m, (), budget, workers)
    return Fraction(len(sols), context.p ** (ambient_n * m))
