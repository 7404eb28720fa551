"""
Weil zeta functions from point counts.

The pipeline is: counts N_1..N_R  ->  truncated series of
exp(sum N_r t^r / r)  ->  exact rational reconstruction P(t)/Q(t)  ->
split of P and Q into weight factors by reciprocal-root magnitude  ->
Betti numbers as factor degrees.

Polynomials in t are plain tuples of integers, lowest degree first.
Reconstruction and re-multiplication are exact; floating point (mpmath at
200 bits) is used only to decide which weight a reciprocal root has.
"""
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import mpmath

from .counting import count_sequence
from .errors import FitError, InputError, ReconstructionError, WeightError, ZetaforgeError

GUARD = 2
WEIGHT_TOL = 0.01
ROOT_PREC = 200


class InconsistentCounts(ZetaforgeError):
    """The exponential of the count series has a non-integral coefficient."""


# -- integer polynomials in t ------------------------------------------------

def _trim(a):
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return tuple(a) if a else (0,)


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def poly_prod(factors):
    out = (1,)
    for f in factors:
        out = poly_mul(out, f)
    return out


def poly_degree(a):
    a = _trim(a)
    return -1 if a == (0,) else len(a) - 1


def _fdivmod(a, b):
    """Division of rational-coefficient polynomials, lowest degree first."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in _trim(b)]
    if b == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        shift = len(a) - len(b)
        c = a[-1] / b[-1]
        q[shift] = c
        for j, bj in enumerate(b):
            a[shift + j] -= c * bj
        a.pop()
    return q, (a or [Fraction(0)])


def _fgcd(a, b):
    a = list(_trim([Fraction(x) for x in a]))
    b = list(_trim([Fraction(x) for x in b]))
    while any(b):
        _, r = _fdivmod(a, b)
        a, b = b, list(_trim(r))
    return a


def poly_text(a, var="t"):
    terms = []
    for k, c in enumerate(_trim(a)):
        if c == 0 and len(a) > 1:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        mag = abs(c)
        body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
        terms.append(("-" if c < 0 else "+", body))
    head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    return head + "".join(f" {s} {b}" for s, b in terms[1:])


# -- data types ----------------------------------------------------------------

@dataclass
class ZetaSeries:
    p: int
    coefficients: list  # c_0..c_R, c_0 = 1

    @property
    def R(self):
        return len(self.coefficients) - 1


@dataclass(frozen=True)
class ZetaFunction:
    numerator: tuple
    denominator: tuple

    def __post_init__(self):
        object.__setattr__(self, "numerator", _trim(self.numerator))
        object.__setattr__(self, "denominator", _trim(self.denominator))
        if self.numerator[0] != 1 or self.denominator[0] != 1:
            raise InputError("zeta numerator and denominator must have constant term 1")

    def series(self, R):
        """Power-series coefficients c_0..c_R of numerator / denominator."""
        num = list(self.numerator) + [0] * (R + 1)
        den = self.denominator
        out = []
        for k in range(R + 1):
            c = num[k] - sum(den[j] * out[k - j] for j in range(1, min(k, len(den) - 1) + 1))
            out.append(c)
        return out

    def to_text(self):
        return (f"numerator: {' '.join(map(str, self.numerator))}\n"
                f"denominator: {' '.join(map(str, self.denominator))}\n")

    def __str__(self):
        return f"({poly_text(self.numerator)}) / ({poly_text(self.denominator)})"

    def to_dict(self):
        return {"numerator": list(self.numerator), "denominator": list(self.denominator)}


@dataclass
class WeightSplit:
    q: int
    dimension: int
    factors: list  # (i, P_i) for i = 0..2n
    betti: list = dc_field(default_factory=list)
    euler: int = 0

    def factor(self, i):
        return dict(self.factors)[i]

    def to_text(self):
        lines = [f"P{i}: {' '.join(map(str, f))}" for i, f in self.factors]
        lines.append("betti: " + " ".join(map(str, self.betti)))
        lines.append(f"euler: {self.euler}")
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {"q": self.q, "dimension": self.dimension,
                "factors": {str(i): list(f) for i, f in self.factors},
                "betti": list(self.betti), "euler": self.euler}


# -- series ----------------------------------------------------------------------

def zeta_series(table, R=None):
    """Truncated exp(sum N_r t^r / r) in exact rational arithmetic.

    Uses c_k = (1/k) sum_{r=1}^k N_r c_{k-r}, which follows from Z' = Z L'.
    """
    counts = table.counts if hasattr(table, "counts") else list(table)
    p = getattr(table, "p", 0)
    R = len(counts) if R is None else R
    if R > len(counts):
        raise InputError(f"series to order {R} needs {R} counts, have {len(counts)}")
    c = [Fraction(1)]
    for k in range(1, R + 1):
        c.append(sum(Fraction(counts[r - 1]) * c[k - r] for r in range(1, k + 1)) / k)
    bad = [k for k, x in enumerate(c) if x.denominator != 1]
    if bad:
        raise InconsistentCounts(f"non-integral zeta coefficient at t^{bad[0]}: {c[bad[0]]}")
    return ZetaSeries(p, [int(x) for x in c])


def _solve(matrix, rhs):
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise ReconstructionError("singular Pade system (degrees too large or counts degenerate)")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [row[n] for row in a]


def pade_reconstruct(series, deg_num, deg_den, guard=GUARD):
    """Exact rational function of type (deg_num, deg_den) matching the series.

    The series must reach order deg_num + deg_den + guard; the ``guard``
    extra coefficients are checked, not fitted.
    """
    s = series.coefficients if hasattr(series, "coefficients") else list(series)
    m, d = int(deg_num), int(deg_den)
    if m < 0 or d < 0:
        raise InputError("degrees must be non-negative")
    need = m + d + guard
    if len(s) - 1 < need:
        raise ReconstructionError(
            f"type ({m}, {d}) with guard {guard} needs coefficients to t^{need}, have t^{len(s) - 1}")

    def sc(i):
        return s[i] if i >= 0 else 0

    if d:
        rows = [[sc(k - j) for j in range(1, d + 1)] for k in range(m + 1, m + d + 1)]
        qs = [Fraction(1)] + _solve(rows, [-sc(k) for k in range(m + 1, m + d + 1)])
    else:
        qs = [Fraction(1)]

    def conv(k):
        return sum(qs[j] * sc(k - j) for j in range(min(k, d) + 1))

    for k in range(m + d + 1, m + d + guard + 1):
        if conv(k) != 0:
            raise ReconstructionError(f"guard coefficient t^{k} disagrees: degrees ({m}, {d}) too small")
    ps = [conv(k) for k in range(m + 1)]
    g = _fgcd(ps, qs)
    if len(g) > 1:
        ps, _ = _fdivmod(ps, g)
        qs, _ = _fdivmod(qs, g)
        ps = [x / qs[0] for x in ps]
        qs = [x / qs[0] for x in qs]
    if any(Fraction(x).denominator != 1 for x in list(ps) + list(qs)):
        raise ReconstructionError("reconstructed zeta function has non-integral coefficients")
    return ZetaFunction(tuple(int(x) for x in ps), tuple(int(x) for x in qs))


def auto_reconstruct(series, guard=GUARD, max_total=None):
    """Smallest total degree whose reconstruction passes the guard check."""
    s = series.coefficients if hasattr(series, "coefficients") else list(series)
    top = len(s) - 1 - guard
    if max_total is not None:
        top = min(top, max_total)
    for total in range(top + 1):
        for m in range(total + 1):
            try:
                return pade_reconstruct(s, m, total - m, guard)
            except ReconstructionError:
                continue
    raise ReconstructionError(
        f"no rational function of total degree <= {max(top, 0)} fits; supply more counts")


# -- weights -----------------------------------------------------------------

def _divisors(n):
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _strip_rational(c):
    """Split off exact factors (1 - a t) with integer a; returns (linear a's, rest)."""
    c = _trim(c)
    found = []
    changed = True
    while changed and poly_degree(c) >= 1:
        changed = False
        for dv in _divisors(c[-1]):
            for a in (dv, -dv):
                # (1 - a t) | c  iff  sum c_k a^(d-k) == 0
                d = len(c) - 1
                if sum(ck * a ** (d - k) for k, ck in enumerate(c)) == 0:
                    quo, rem = _fdivmod(c, (1, -a))
                    assert all(x == 0 for x in rem)
                    c = _trim(int(x) for x in quo)
                    found.append(a)
                    changed = True
                    break
            if changed:
                break
    return found, c


def _weight(absval, q):
    return 2 * mpmath.log(absval) / mpmath.log(q)


def _assign_weight(w, tol):
    i = int(mpmath.nint(w))
    if abs(w - i) >= tol:
        raise WeightError(f"reciprocal root of weight {float(w):.4f} is not within {tol} of an integer")
    return i


def weight_split(z, q, n, tol=WEIGHT_TOL):
    """Group the zeta factors by weight; b_i = deg P_i.

    Odd weights must land in the numerator and even weights in the
    denominator, every weight must lie in 0..2n, and the factors must
    multiply back to the input exactly.
    """
    if q < 2:
        raise InputError("q must be at least 2")
    groups = {}
    with mpmath.workprec(ROOT_PREC):
        for part, parity in ((z.numerator, 1), (z.denominator, 0)):
            linear, rest = _strip_rational(part)
            for a in linear:
                i = _assign_weight(_weight(mpmath.mpf(abs(a)), q), tol)
                groups.setdefault((i, parity), []).append(("exact", (1, -a)))
            if poly_degree(rest) >= 1:
                roots = mpmath.polyroots(list(rest), maxsteps=400, extraprec=4 * ROOT_PREC)
                for alpha in roots:
                    i = _assign_weight(_weight(abs(alpha), q), tol)
                    groups.setdefault((i, parity), []).append(("root", alpha))
        factors = {}
        for (i, parity), items in sorted(groups.items()):
            if i % 2 != parity:
                where = "numerator" if parity else "denominator"
                raise WeightError(f"weight {i} factor found in the {where}")
            if not 0 <= i <= 2 * n:
                raise WeightError(f"weight {i} outside 0..{2 * n} for dimension {n}")
            exact = poly_prod(f for kind, f in items if kind == "exact")
            coeffs = [mpmath.mpc(1)]
            for kind, alpha in items:
                if kind == "root":
                    coeffs = [a - alpha * b for a, b in zip(coeffs + [0], [0] + coeffs)]
            rounded = []
            for cf in coeffs:
                k = int(mpmath.nint(cf.real))
                if abs(cf - k) > mpmath.mpf(10) ** -30:
                    raise WeightError(f"weight-{i} roots do not form an integer factor (mixed-weight factor)")
                rounded.append(k)
            factors[i] = poly_mul(exact, tuple(rounded))
    all_factors = [(i, factors.get(i, (1,))) for i in range(2 * n + 1)]
    odd = poly_prod(f for i, f in all_factors if i % 2)
    even = poly_prod(f for i, f in all_factors if i % 2 == 0)
    if odd != z.numerator or even != z.denominator:
        raise WeightError("weight factors do not multiply back to the zeta function")
    betti = [poly_degree(f) for _, f in all_factors]
    euler = sum((-1) ** i * b for i, b in enumerate(betti))
    return WeightSplit(q, n, all_factors, betti, euler)


def euler_from_zeta(z):
    """deg(denominator) - deg(numerator); equals sum (-1)^i b_i."""
    return poly_degree(z.denominator) - poly_degree(z.numerator)


# -- polynomial-count fits ---------------------------------------------------------

def count_polynomial_fit(tables, degree):
    """The integer polynomial C with C(p^r) = N_r for every supplied entry.

    Solved exactly from the first ``degree + 1`` distinct q and checked
    against every remaining entry.  Returns coefficients lowest first.
    """
    data = {}
    for t in tables:
        for r, n in enumerate(t.counts, start=1):
            q = t.p**r
            if data.get(q, n) != n:
                raise FitError(f"conflicting counts at q = {q}")
            data[q] = n
    qs = sorted(data)
    if len(qs) < degree + 2:
        raise InputError(f"degree-{degree} fit needs {degree + 2} distinct q, have {len(qs)}")
    base = qs[:degree + 1]
    mat = [[q**k for k in range(degree + 1)] for q in base]
    coeffs = _solve(mat, [data[q] for q in base])
    if any(c.denominator != 1 for c in coeffs):
        raise FitError(f"interpolant through q = {base} has non-integral coefficients {coeffs}")
    coeffs = [int(c) for c in coeffs]
    residuals = {q: data[q] - sum(c * q**k for k, c in enumerate(coeffs)) for q in qs}
    bad = {q: r for q, r in residuals.items() if r}
    if bad:
        raise FitError(f"counts are not a degree-{degree} polynomial in q; residuals {bad}")
    return tuple(coeffs)


def eval_count_polynomial(coeffs, q):
    return sum(c * q**k for k, c in enumerate(coeffs))


# -- comparison of birational pairs -------------------------------------------

@dataclass
class ZetaComparison:
    left: object
    right: object
    counts_equal: bool
    first_mismatch: int = None
    mode: str = "counts-only"
    zeta_left: ZetaFunction = None
    zeta_right: ZetaFunction = None
    zeta_equal: bool = None
    betti_left: list = None
    betti_right: list = None
    betti_equal: bool = None
    notes: list = dc_field(default_factory=list)

    @property
    def verdict(self):
        if not self.counts_equal:
            return False
        if self.mode == "full":
            return bool(self.zeta_equal and self.betti_equal)
        return True

    def to_dict(self):
        d = {"left": self.left.to_dict(), "right": self.right.to_dict(),
             "counts_equal": self.counts_equal, "first_mismatch": self.first_mismatch,
             "mode": self.mode, "verdict": "PASS" if self.verdict else "FAIL",
             "notes": list(self.notes)}
        if self.mode == "full":
            d.update(zeta_left=self.zeta_left.to_dict(), zeta_right=self.zeta_right.to_dict(),
                     zeta_equal=self.zeta_equal, betti_left=self.betti_left,
                     betti_right=self.betti_right, betti_equal=self.betti_equal)
        return d


def _zeta_of(table, dimension):
    z = auto_reconstruct(zeta_series(table))
    split = weight_split(z, table.p, dimension)
    return z, split


def compare_zeta(pair, p, R, budget=None, workers=1):
    """Compare counts, then (for proper specs) zeta functions and Betti vectors."""
    left = count_sequence(pair.left, p, R, budget, workers)
    right = count_sequence(pair.right, p, R, budget, workers)
    common = min(left.R, right.R)
    mismatch = next((r for r in range(1, common + 1) if left[r] != right[r]), None)
    out = ZetaComparison(left, right, mismatch is None and left.R == right.R, mismatch)
    if left.truncated or right.truncated:
        out.notes.append("budget truncated a count table")
    out.notes.append(f"checked r = 1..{common} at p = {p}")
    proper = getattr(pair.left, "is_proper", False) and getattr(pair.right, "is_proper", False)
    if not proper:
        out.notes.append("open variety: counts-only, no purity claim")
        return out
    try:
        zl, sl = _zeta_of(left, pair.left.dimension)
        zr, sr = _zeta_of(right, pair.right.dimension)
    except (ReconstructionError, WeightError, InconsistentCounts) as exc:
        out.notes.append(f"zeta stage skipped: {exc}")
        return out
    out.mode = "full"
    out.zeta_left, out.zeta_right = zl, zr
    out.zeta_equal = zl == zr
    out.betti_left, out.betti_right = sl.betti, sr.betti
    out.betti_equal = sl.betti == sr.betti
    return out


def hasse_holds(trace, q):
    """trace^2 <= 4q, checked in integers."""
    return trace * trace <= 4 * q


def trace_from_factor(p1):
    """Frobenius trace a of a weight-one factor 1 - a t + q t^2."""
    if poly_degree(p1) != 2:
        raise InputError("expected a quadratic weight-one factor")
    return -p1[1]
