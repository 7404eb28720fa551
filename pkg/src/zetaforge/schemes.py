"""
Geometric inputs: affine and projective subschemes over Z, glued chart
atlases, Gelfand-Leray gauge densities and birational pairs, plus the JSON
spec-file format.

Atlases use first-chart-wins bookkeeping.  Chart i lists, for each earlier
chart j it overlaps, a polynomial g with ``chart_i ∩ chart_j = {g != 0}``
inside chart i.  The points chart i contributes beyond the earlier charts
are those where every recorded cut vanishes.  Transition maps are not
stored; correctness of the cuts is the author's responsibility.
"""
import json
from dataclasses import dataclass, field

from .errors import InputError
from .polynomials import IntPolynomial, RationalFunction

AFFINE = "affine"
PROJECTIVE = "projective"

TRIVIAL_CANONICAL = "trivial-canonical"
CANONICAL_PRESERVING = "canonical-preserving"
CLAIMS = (TRIVIAL_CANONICAL, CANONICAL_PRESERVING)

GELFAND_LERAY = "gelfand-leray"


def _poly(p, variables):
    if isinstance(p, IntPolynomial):
        return p.with_variables(variables)
    return IntPolynomial.parse(str(p), variables)


def _default_vars(kind, dim):
    if kind == AFFINE:
        return tuple(f"x{i}" for i in range(1, dim + 1))
    return tuple(f"X{i}" for i in range(dim + 1))


@dataclass(frozen=True)
class Ambient:
    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in (AFFINE, PROJECTIVE):
            raise InputError(f"ambient type must be affine or projective, not {self.kind!r}")
        if self.dim < 0:
            raise InputError("ambient dimension must be non-negative")

    @property
    def nvars(self):
        return self.dim if self.kind == AFFINE else self.dim + 1


@dataclass(frozen=True)
class VarietySpec:
    """Closed subscheme of A^n or P^N cut out by integer equations."""

    name: str
    ambient: Ambient
    equations: tuple = ()
    variables: tuple = ()
    dimension: int = None
    density: str = None

    def __post_init__(self):
        variables = tuple(self.variables) or _default_vars(self.ambient.kind, self.ambient.dim)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "equations",
                           tuple(_poly(f, variables) for f in self.equations))
        if self.dimension is None:
            object.__setattr__(self, "dimension", self.ambient.dim - len(self.equations))

    @classmethod
    def affine(cls, name, dim, equations=(), variables=(), dimension=None, density=None):
        return cls(name, Ambient(AFFINE, dim), tuple(equations), tuple(variables),
                   dimension, density)

    @classmethod
    def projective(cls, name, dim, equations=(), variables=(), dimension=None):
        return cls(name, Ambient(PROJECTIVE, dim), tuple(equations), tuple(variables),
                   dimension)

    @property
    def is_projective(self):
        return self.ambient.kind == PROJECTIVE

    @property
    def is_proper(self):
        return self.is_projective

    def gauge_density(self):
        if self.density != GELFAND_LERAY:
            raise InputError(f"{self.name} carries no gauge density")
        return GaugeDensity(self)

    def product(self, other, name=None):
        """Equation union on disjoint variable sets (affine specs only)."""
        if self.is_projective or other.is_projective:
            raise InputError("products are built for affine specs only")
        clash = set(self.variables) & set(other.variables)
        if clash:
            raise InputError(f"variable sets overlap: {sorted(clash)}")
        variables = self.variables + other.variables
        return VarietySpec.affine(
            name or f"{self.name}x{other.name}", len(variables),
            [f.with_variables(variables) for f in self.equations + other.equations],
            variables, self.dimension + other.dimension)


@dataclass(frozen=True)
class Chart:
    variables: tuple
    equations: tuple = ()
    cuts: tuple = ()  # (earlier chart index, IntPolynomial)

    def __post_init__(self):
        variables = tuple(self.variables)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "equations",
                           tuple(_poly(f, variables) for f in self.equations))
        object.__setattr__(self, "cuts",
                           tuple((int(j), _poly(g, variables)) for j, g in self.cuts))

    @property
    def dimension(self):
        return len(self.variables) - len(self.equations)

    def as_spec(self, name="chart"):
        """The chart with its cut conditions g = 0 appended as equations."""
        return VarietySpec.affine(name, len(self.variables),
                                  self.equations + tuple(g for _, g in self.cuts),
                                  self.variables)


@dataclass(frozen=True)
class ChartAtlas:
    name: str
    charts: tuple
    dimension: int

    def __post_init__(self):
        object.__setattr__(self, "charts", tuple(self.charts))

    @property
    def is_proper(self):
        return False

    def reversed_with(self, cuts):
        """Same charts in reverse order with freshly supplied cut lists."""
        charts = [Chart(c.variables, c.equations, cut)
                  for c, cut in zip(reversed(self.charts), cuts)]
        return ChartAtlas(self.name + "-reversed", tuple(charts), self.dimension)


class GaugeDensity:
    """Gelfand-Leray density on a smooth affine hypersurface f = 0.

    On the locus where the partial in x_i is nonzero the density is
    1 / (df/dx_i) with the remaining coordinates as the disk parameters.
    """

    mode = GELFAND_LERAY

    def __init__(self, host):
        if host.is_projective or len(host.equations) != 1:
            raise InputError("Gelfand-Leray density needs an affine hypersurface")
        self.host = host

    @property
    def f(self):
        return self.host.equations[0]

    @property
    def dimension(self):
        return self.host.ambient.dim - 1

    def partials(self):
        return [self.f.derivative(v) for v in self.host.variables]

    def chart_density(self, i):
        return RationalFunction(IntPolynomial.constant(1, self.host.variables),
                                self.partials()[i])


@dataclass(frozen=True)
class BirationalPairSpec:
    name: str
    left: object
    right: object
    claim: str = TRIVIAL_CANONICAL
    notes: str = ""

    def __post_init__(self):
        if self.claim not in CLAIMS:
            raise InputError(f"claim must be one of {CLAIMS}, not {self.claim!r}")


@dataclass
class ValidationReport:
    name: str
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok


def validate_spec(spec):
    """Check homogeneity, arity and cut ordering; never raises on bad data."""
    report = ValidationReport(getattr(spec, "name", "?"))
    v = report.violations
    if isinstance(spec, VarietySpec):
        if len(spec.variables) != spec.ambient.nvars:
            v.append(f"{len(spec.variables)} variables for ambient needing {spec.ambient.nvars}")
        for k, f in enumerate(spec.equations):
            if f.variables != spec.variables:
                v.append(f"equation {k} uses foreign variables")
            if spec.is_projective and not f.is_homogeneous():
                v.append(f"equation {k} ({f}) is not homogeneous")
        if spec.density is not None:
            if spec.density != GELFAND_LERAY:
                v.append(f"unknown density mode {spec.density!r}")
            elif spec.is_projective or len(spec.equations) != 1:
                v.append("gelfand-leray density needs one equation in affine space")
        if spec.dimension is not None and not 0 <= spec.dimension <= spec.ambient.dim:
            v.append(f"dimension {spec.dimension} outside 0..{spec.ambient.dim}")
    elif isinstance(spec, ChartAtlas):
        if not spec.charts:
            v.append("atlas has no charts")
        for i, chart in enumerate(spec.charts):
            for j, g in chart.cuts:
                if not 0 <= j < i:
                    v.append(f"chart {i} cut references chart {j}, not an earlier chart")
                if g.variables != chart.variables:
                    v.append(f"chart {i} cut uses foreign variables")
            if chart.dimension != spec.dimension:
                v.append(f"chart {i} has dimension {chart.dimension}, atlas says {spec.dimension}")
    elif isinstance(spec, BirationalPairSpec):
        for side, obj in (("left", spec.left), ("right", spec.right)):
            sub = validate_spec(obj)
            v.extend(f"{side}: {msg}" for msg in sub.violations)
        if getattr(spec.left, "dimension", None) != getattr(spec.right, "dimension", None):
            v.append("pair sides have different dimensions")
    else:
        v.append(f"unsupported object {type(spec).__name__}")
    return report


# -- JSON spec files -----------------------------------------------------------

def spec_to_dict(spec):
    if isinstance(spec, VarietySpec):
        d = {
            "name": spec.name,
            "ambient": {"type": spec.ambient.kind, "dim": spec.ambient.dim},
            "variables": list(spec.variables),
            "equations": [f.to_string() for f in spec.equations],
            "dimension": spec.dimension,
        }
        if spec.density is not None:
            d["density"] = {"mode": spec.density, "f": spec.equations[0].to_string()}
        return d
    if isinstance(spec, ChartAtlas):
        return {
            "name": spec.name,
            "dimension": spec.dimension,
            "atlas": {"charts": [
                {"vars": list(c.variables),
                 "equations": [f.to_string() for f in c.equations],
                 "cuts": [{"chart": j, "poly": g.to_string()} for j, g in c.cuts]}
                for c in spec.charts]},
        }
    if isinstance(spec, BirationalPairSpec):
        return {
            "name": spec.name,
            "pair": {"left": spec_to_dict(spec.left), "right": spec_to_dict(spec.right),
                     "claim": spec.claim, "notes": spec.notes},
        }
    raise InputError(f"cannot serialise {type(spec).__name__}")


def spec_from_dict(d):
    if not isinstance(d, dict):
        raise InputError(f"spec document must be a JSON object, not {type(d).__name__}")
    try:
        name = d.get("name", "unnamed")
        if "pair" in d:
            pr = d["pair"]
            return BirationalPairSpec(name, spec_from_dict(pr["left"]),
                                      spec_from_dict(pr["right"]),
                                      pr.get("claim", TRIVIAL_CANONICAL), pr.get("notes", ""))
        if "atlas" in d:
            charts = []
            for c in d["atlas"]["charts"]:
                variables = tuple(c["vars"])
                charts.append(Chart(variables, tuple(c.get("equations", ())),
                                    tuple((cut["chart"], cut["poly"]) for cut in c.get("cuts", ()))))
            dim = d.get("dimension")
            if dim is None:
                dim = charts[0].dimension if charts else 0
            return ChartAtlas(name, tuple(charts), int(dim))
        amb = d["ambient"]
        ambient = Ambient(amb["type"], int(amb["dim"]))
        density = None
        if d.get("density"):
            density = d["density"].get("mode", GELFAND_LERAY)
        spec = VarietySpec(name, ambient, tuple(d.get("equations", ())),
                           tuple(d.get("variables", ())), d.get("dimension"), density)
        if density is not None and "f" in d["density"] and spec.equations:
            f = IntPolynomial.parse(d["density"]["f"], spec.variables)
            if f != spec.equations[0]:
                raise InputError("density polynomial differs from the host equation")
        return spec
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed spec document: {exc!r}") from None


def dumps_spec(spec):
    """Canonical, bit-exact JSON text."""
    return json.dumps(spec_to_dict(spec), sort_keys=True, indent=2) + "\n"


def loads_spec(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"spec file is not valid JSON: {exc}") from None
    return spec_from_dict(data)


def load_spec(path):
    with open(path, encoding="utf-8") as fh:
        return loads_spec(fh.read())
