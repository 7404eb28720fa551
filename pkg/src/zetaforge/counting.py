"""
Point counting over F_{p^r} with deterministic, chunked enumeration.

Every count reduces to one primitive: the number of points of A^k(F_q) at
which a system of field polynomials vanishes.  Two strategies are used.

``brute``
    enumerate all q^k points in contiguous index chunks and test membership.

``split`` (chosen by ``auto`` when it applies)
    when the variables fall into groups A, B such that no monomial mixes
    them, the system is F_A(x_A) + F_B(x_B) = 0.  Tabulate the values of F_B
    once, then for each x_A look up how many x_B hit -F_A(x_A).  The cost
    drops from q^(|A|+|B|) to q^|A| + q^|B| evaluations; the result is the
    same exact integer.

Variables absent from every equation contribute a factor q without being
enumerated.  Chunks are processed by a thread pool; partial counts are
integers, so the reduction cannot depend on scheduling.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
import itertools
import math

import numpy as np

from .config import default_budget
from .errors import BudgetExceeded, InputError
from .fields import make_extension
from .polynomials import FieldPolynomial, reduce_mod_p
from .schemes import ChartAtlas, VarietySpec

CHUNK = 1 << 18
_KEY_LIMIT = 1 << 62


@dataclass
class CountTable:
    p: int
    counts: list
    spec_name: str = ""
    budget_used: int = 0
    truncated: bool = False
    required_budget: int = None

    @property
    def R(self):
        return len(self.counts)

    def __getitem__(self, r):
        """N_r for r >= 1."""
        if r < 1:
            raise IndexError("counts are indexed from r = 1")
        return self.counts[r - 1]

    def to_text(self):
        lines = [f"# spec={self.spec_name} p={self.p} R={self.R}"
                 + (" truncated" if self.truncated else ""),
                 "r q^r N_r"]
        for r, n in enumerate(self.counts, start=1):
            lines.append(f"{r} {self.p ** r} {n}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        rows = [ln.split() for ln in text.splitlines()
                if ln.strip() and not ln.startswith("#") and not ln.startswith("r ")]
        header = next((ln for ln in text.splitlines() if ln.startswith("#")), "")
        meta = dict(tok.split("=", 1) for tok in header[1:].split() if "=" in tok)
        counts, p = [], None
        for k, (r, qr, n) in enumerate(rows, start=1):
            if int(r) != k:
                raise InputError(f"count table rows out of order at r = {r}")
            counts.append(int(n))
            if k == 1:
                p = int(qr)
        p = int(meta.get("p", p))
        return cls(p, counts, meta.get("spec", ""), truncated="truncated" in header)

    def to_dict(self):
        return {"spec": self.spec_name, "p": self.p, "counts": list(self.counts),
                "truncated": self.truncated, "budget_used": self.budget_used}


@dataclass
class SmoothnessReport:
    field: str
    checked_points: int
    singular_points: list = dc_field(default_factory=list)
    singular_count: int = 0
    truncated: bool = False

    @property
    def smooth(self):
        return self.singular_count == 0


# -- engine ----------------------------------------------------------------

def _components(polys, nvars):
    parent = list(range(nvars))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    occurring = set()
    for f in polys:
        for e, _ in f.terms:
            sup = [i for i, k in enumerate(e) if k]
            occurring.update(sup)
            for a, b in zip(sup, sup[1:]):
                parent[find(a)] = find(b)
    groups = {}
    for i in sorted(occurring):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: (-len(g), g)), occurring


def _restrict(f, idx, with_constant):
    pos = {v: k for k, v in enumerate(idx)}
    terms = []
    for e, c in f.terms:
        sup = [i for i, k in enumerate(e) if k]
        if not sup:
            if with_constant:
                terms.append(((0,) * len(idx), c))
        elif sup[0] in pos:
            new = [0] * len(idx)
            for i in sup:
                new[pos[i]] = e[i]
            terms.append((tuple(new), c))
    return FieldPolynomial(f.field, [f.variables[i] for i in idx], terms)


@dataclass
class _Plan:
    q: int
    free: int
    method: str
    groups: list
    evaluations: int
    trivial: int = None  # count already known without enumeration


def plan_count(polys, nvars, field, method="auto"):
    """Decide the strategy and its evaluation cost without evaluating."""
    q = field.order
    polys = [f for f in polys if not f.is_zero()]
    for f in polys:
        if all(sum(e) == 0 for e, _ in f.terms):
            return _Plan(q, 0, "empty", [], 0, trivial=0)
    comps, occurring = _components(polys, nvars)
    free = nvars - len(occurring)
    if not polys:
        return _Plan(q, free, "free", [], 0, trivial=q**nvars)
    m = len(polys)
    if method == "brute":
        idx = list(range(nvars))
        return _Plan(q, 0, "brute", [idx], q**nvars)
    if method not in ("auto", "split"):
        raise InputError(f"unknown counting method {method!r}")
    if len(comps) == 1 or q**m >= _KEY_LIMIT:
        idx = sorted(occurring)
        return _Plan(q, free, "brute", [idx], q ** len(idx))
    a, b = [], []
    for comp in comps:
        (a if len(a) < len(b) else b).extend(comp)
    a.sort()
    b.sort()
    return _Plan(q, free, "split", [a, b], q ** len(a) + q ** len(b))


def _chunks(total, size=CHUNK):
    return [(s, min(s + size, total)) for s in range(0, total, size)]


def _decode(start, stop, k, q):
    idx = np.arange(start, stop, dtype=np.int64)
    cols = []
    for _ in range(k):
        idx, d = np.divmod(idx, q)
        cols.append(d)
    return cols


def _map_chunks(fn, total, workers):
    chunks = _chunks(total)
    if workers <= 1 or len(chunks) == 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))


def _keys(values, q):
    key = np.zeros_like(values[0])
    for v in reversed(values):
        key = key * q + v
    return key


def _run(polys, nvars, field, plan, workers):
    q = field.order
    if plan.trivial is not None:
        return plan.trivial
    polys = [f for f in polys if not f.is_zero()]
    if plan.method == "brute":
        (idx,) = plan.groups
        sub = [_restrict(f, idx, True) for f in polys]

        def count_chunk(bounds):
            cols = _decode(*bounds, len(idx), q)
            powers = {}
            ok = np.ones(bounds[1] - bounds[0], dtype=bool)
            for f in sub:
                ok &= f.evaluate_arrays(cols, powers) == 0
            return int(np.count_nonzero(ok))

        n = sum(_map_chunks(count_chunk, q ** len(idx), workers))
        return n * q**plan.free

    a_idx, b_idx = plan.groups
    fa = [_restrict(f, a_idx, False) for f in polys]
    fb = [_restrict(f, b_idx, True) for f in polys]

    def hist_chunk(bounds):
        cols = _decode(*bounds, len(b_idx), q)
        powers = {}
        keys = _keys([np.broadcast_to(f.evaluate_arrays(cols, powers), cols[0].shape)
                      for f in fb], q)
        return np.unique(keys, return_counts=True)

    parts = _map_chunks(hist_chunk, q ** len(b_idx), workers)
    keys = np.concatenate([k for k, _ in parts])
    cnts = np.concatenate([c for _, c in parts]).astype(np.int64)
    ukeys, inverse = np.unique(keys, return_inverse=True)
    ucounts = np.zeros(len(ukeys), dtype=np.int64)
    np.add.at(ucounts, inverse, cnts)

    def lookup_chunk(bounds):
        cols = _decode(*bounds, len(a_idx), q)
        powers = {}
        target = _keys([field.neg(np.broadcast_to(f.evaluate_arrays(cols, powers),
                                                  cols[0].shape)) for f in fa], q)
        pos = np.searchsorted(ukeys, target)
        pos = np.minimum(pos, len(ukeys) - 1)
        hit = ukeys[pos] == target
        return int(ucounts[pos[hit]].sum())

    n = sum(_map_chunks(lookup_chunk, q ** len(a_idx), workers))
    return n * q**plan.free


def count_zeros(polys, nvars, field, budget=None, workers=1, method="auto"):
    """Number of points of A^nvars(field) where all field polynomials vanish.

    Returns ``(count, evaluations)``.
    """
    budget = default_budget() if budget is None else budget
    plan = plan_count(polys, nvars, field, method)
    if plan.evaluations > budget:
        raise BudgetExceeded(plan.evaluations, budget)
    return _run(polys, nvars, field, plan, workers), plan.evaluations


# -- public counting operations ---------------------------------------------

def _reduced(spec_polys, field):
    return [reduce_mod_p(f, field) for f in spec_polys]


def _affine(spec, field, budget, workers, method):
    if spec.is_projective:
        raise InputError(f"{spec.name} is projective; use count_projective")
    return count_zeros(_reduced(spec.equations, field), spec.ambient.dim, field,
                       budget, workers, method)


def _strata(reduced, order):
    out = []
    for j, lead in enumerate(order):
        fixed = {i: 0 for i in order[:j]}
        fixed[lead] = 1
        out.append(([f.substitute(fixed) for f in reduced], len(order) - j - 1))
    return out


def _cheapest_strata(reduced, nv, field, method):
    """Normalisation strata for the coordinate order with the least enumeration.

    The first nonzero coordinate (in the chosen order) is set to 1.  Any order
    gives a disjoint cover of P^N; ties go to the earliest permutation.
    """
    orders = itertools.permutations(range(nv)) if nv <= 5 else [tuple(range(nv))]
    best = None
    for order in orders:
        strata = _strata(reduced, order)
        cost = sum(plan_count(p, k, field, method).evaluations for p, k in strata)
        if best is None or cost < best[1]:
            best = (strata, cost)
    return best


def _projective(spec, field, budget, workers, method):
    if not spec.is_projective:
        raise InputError(f"{spec.name} is affine; use count_affine")
    for f in spec.equations:
        if not f.is_homogeneous():
            raise InputError(f"{spec.name}: equation {f} is not homogeneous")
    budget = default_budget() if budget is None else budget
    strata, total_cost = _cheapest_strata(_reduced(spec.equations, field),
                                          spec.ambient.nvars, field, method)
    if total_cost > budget:
        raise BudgetExceeded(total_cost, budget)
    total = used = 0
    for polys, k in strata:
        n, ev = count_zeros(polys, k, field, budget, workers, method)
        total += n
        used += ev
    return total, used


def _atlas(atlas, field, budget, workers, method):
    budget = default_budget() if budget is None else budget
    systems = []
    for chart in atlas.charts:
        polys = _reduced(chart.equations + tuple(g for _, g in chart.cuts), field)
        systems.append((polys, len(chart.variables)))
    total_cost = sum(plan_count(p, k, field, method).evaluations for p, k in systems)
    if total_cost > budget:
        raise BudgetExceeded(total_cost, budget)
    total = used = 0
    for polys, k in systems:
        n, ev = count_zeros(polys, k, field, budget, workers, method)
        total += n
        used += ev
    return total, used


def _dispatch(obj, field, budget=None, workers=1, method="auto"):
    if isinstance(obj, ChartAtlas):
        return _atlas(obj, field, budget, workers, method)
    if isinstance(obj, VarietySpec):
        if obj.is_projective:
            return _projective(obj, field, budget, workers, method)
        return _affine(obj, field, budget, workers, method)
    raise InputError(f"cannot count points of {type(obj).__name__}")


def count_affine(spec, field, budget=None, workers=1, method="auto"):
    """|spec(F_q)| for an affine spec."""
    return _affine(spec, field, budget, workers, method)[0]


def count_projective(spec, field, budget=None, workers=1, method="auto"):
    """|spec(F_q)| over normalised representatives (first nonzero coordinate 1)."""
    return _projective(spec, field, budget, workers, method)[0]


def count_atlas(atlas, field, budget=None, workers=1, method="auto"):
    """First-chart-wins count: chart i contributes the points where its cuts vanish."""
    return _atlas(atlas, field, budget, workers, method)[0]


def count_points(obj, field, budget=None, workers=1, method="auto"):
    return _dispatch(obj, field, budget, workers, method)[0]


def count_sequence(obj, p, R, budget=None, workers=1, method="auto"):
    """N_1..N_R, each in a freshly built F_{p^r}.

    The budget is cumulative over the whole sequence.  When it runs out the
    table is returned truncated, with ``required_budget`` set to the cost of
    the first refused entry.
    """
    budget = default_budget() if budget is None else budget
    if R < 1:
        raise InputError("R must be at least 1")
    counts, used = [], 0
    truncated, required = False, None
    for r in range(1, R + 1):
        field = make_extension(p, r)
        try:
            n, ev = _dispatch(obj, field, budget - used, workers, method)
        except BudgetExceeded as exc:
            truncated, required = True, exc.required
            break
        counts.append(n)
        used += ev
    return CountTable(p, counts, getattr(obj, "name", ""), used, truncated, required)


def dimension_estimate(table):
    """round(log N_R / log q^R): a heuristic check on user-declared dimensions."""
    n = table.counts[-1] if table.counts else 0
    if n <= 0:
        return -1
    return round(math.log(n) / (table.R * math.log(table.p)))


# -- smoothness ----------------------------------------------------------------

def _rank(rows, field):
    rows = [[field.element(v) for v in row] for row in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = rows[rank][col].inverse()
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                factor = rows[i][col] * inv
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def smoothness_check(spec, field, budget=None, limit=50):
    """Flag F_q-points where the Jacobian rank drops below the equation count.

    Only rational points of the given field are inspected, so a singularity
    with no F_q-rational witness goes unnoticed.
    """
    budget = default_budget() if budget is None else budget
    if spec.is_projective:
        raise InputError("smoothness_check works on affine specs")
    q, n = field.order, spec.ambient.dim
    if q**n > budget:
        raise BudgetExceeded(q**n, budget, "smoothness check")
    eqs = _reduced(spec.equations, field)
    jac = [[reduce_mod_p(f.derivative(v), field) for v in spec.variables]
           for f in spec.equations]
    m = len(eqs)
    checked = 0
    singular, singular_count = [], 0
    for start, stop in _chunks(q**n):
        cols = _decode(start, stop, n, q)
        powers = {}
        ok = np.ones(stop - start, dtype=bool)
        for f in eqs:
            ok &= f.evaluate_arrays(cols, powers) == 0
        pts = [c[ok] for c in cols]
        npts = int(np.count_nonzero(ok))
        checked += npts
        if m == 0 or npts == 0:
            continue
        grads = [[np.broadcast_to(g.evaluate_arrays(pts), (npts,)) for g in row] for row in jac]
        if m == 1:
            bad = np.all(np.stack(grads[0]) == 0, axis=0)
        else:
            bad = np.array([_rank([[int(grads[i][j][t]) for j in range(n)] for i in range(m)],
                                  field) < m for t in range(npts)], dtype=bool)
        singular_count += int(np.count_nonzero(bad))
        for t in np.nonzero(bad)[0]:
            if len(singular) < limit:
                singular.append(tuple(int(c[t]) for c in pts))
    return SmoothnessReport(field.label, checked, singular, singular_count,
                            singular_count > len(singular))
