"""
Sparse multivariate polynomials with integer coefficients.

``IntPolynomial`` is the input language for equations, densities and overlap
cuts.  Reduction into a finite field produces a ``FieldPolynomial`` whose
evaluation works on whole numpy arrays of field indices, which is what the
counting engine feeds it.
"""
import ast
import math
import re
from functools import lru_cache

import numpy as np

from .errors import InputError

# products of two residues must stay below 2**63
_INT64_SAFE = 3_000_000_000

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _grlex_key(exp):
    return (sum(exp), exp)


class IntPolynomial:
    """Immutable sparse polynomial over Z in a fixed, ordered variable list."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables, terms=None):
        variables = tuple(variables)
        for v in variables:
            if not _IDENT.match(v):
                raise InputError(f"bad variable name {v!r}")
        if len(set(variables)) != len(variables):
            raise InputError(f"duplicate variables in {variables}")
        n = len(variables)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n or any(e < 0 for e in exp):
                raise InputError(f"exponent {exp} does not fit variables {variables}")
            c = int(c)
            if c:
                clean[exp] = clean.get(exp, 0) + c
        self.variables = variables
        self.terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    # -- construction --------------------------------------------------------

    @classmethod
    def constant(cls, c, variables=()):
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, name, variables=None):
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            raise InputError(f"{name!r} not among {variables}")
        exp = tuple(int(v == name) for v in variables)
        return cls(variables, {exp: 1})

    @classmethod
    def parse(cls, text, variables=None):
        """Parse ``y^2 - x^3 - x - 1`` style text.

        Without ``variables`` the variable order is alphabetical; identifiers
        not listed in an explicit ``variables`` are rejected.
        """
        try:
            tree = ast.parse(text.replace("^", "**").strip(), mode="eval")
        except SyntaxError as exc:
            raise InputError(f"cannot parse polynomial {text!r}: {exc.msg}") from None
        names = sorted({n.id for n in ast.walk(tree) if isinstance(n, ast.Name)})
        if variables is None:
            variables = tuple(names)
        else:
            variables = tuple(variables)
            extra = [n for n in names if n not in variables]
            if extra:
                raise InputError(f"unknown variables {extra} in {text!r}")
        return _from_ast(tree.body, variables, text)

    # -- basic properties ------------------------------------------------------

    @property
    def nvars(self):
        return len(self.variables)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var):
        i = self._index(var)
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self):
        return len({sum(e) for e in self.terms}) <= 1

    def support(self):
        """Indices of variables that actually occur."""
        return sorted({i for e in self.terms for i, k in enumerate(e) if k})

    def content(self):
        return math.gcd(*self.terms.values()) if self.terms else 0

    def _index(self, var):
        if isinstance(var, int):
            if not 0 <= var < self.nvars:
                raise InputError(f"variable index {var} out of range")
            return var
        try:
            return self.variables.index(var)
        except ValueError:
            raise InputError(f"{var!r} not among {self.variables}") from None

    def sorted_terms(self):
        """Terms in canonical graded-lex order, highest first."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    # -- ring operations -------------------------------------------------------

    def with_variables(self, variables):
        """Re-express in a larger (or reordered) variable list."""
        variables = tuple(variables)
        missing = [v for i, v in enumerate(self.variables)
                   if v not in variables and any(e[i] for e in self.terms)]
        if missing:
            raise InputError(f"cannot drop occurring variables {missing}")
        pos = [variables.index(v) if v in variables else None for v in self.variables]
        terms = {}
        for e, c in self.terms.items():
            new = [0] * len(variables)
            for i, k in enumerate(e):
                if k:
                    new[pos[i]] = k
            terms[tuple(new)] = c
        return IntPolynomial(variables, terms)

    def _coerce(self, other):
        if isinstance(other, IntPolynomial):
            if other.variables == self.variables:
                return self, other
            merged = self.variables + tuple(v for v in other.variables if v not in self.variables)
            return self.with_variables(merged), other.with_variables(merged)
        if isinstance(other, (int, np.integer)):
            return self, IntPolynomial.constant(int(other), self.variables)
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        terms = dict(a.terms)
        for e, c in b.terms.items():
            terms[e] = terms.get(e, 0) + c
        return IntPolynomial(a.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return pair[0] + (-pair[1])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        terms = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                terms[e] = terms.get(e, 0) + ca * cb
        return IntPolynomial(a.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            raise InputError("negative powers are not polynomials")
        result = IntPolynomial.constant(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = IntPolynomial.constant(int(other), self.variables)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def derivative(self, var):
        i = self._index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                new = list(e)
                new[i] -= 1
                terms[tuple(new)] = c * e[i]
        return IntPolynomial(self.variables, terms)

    def substitute(self, values):
        """Fix some variables to integers; the result lives in the remaining ones."""
        idx = {self._index(k): int(v) for k, v in values.items()}
        keep = [i for i in range(self.nvars) if i not in idx]
        terms = {}
        for e, c in self.terms.items():
            for i, v in idx.items():
                c *= v ** e[i]
            if c:
                key = tuple(e[i] for i in keep)
                terms[key] = terms.get(key, 0) + c
        return IntPolynomial([self.variables[i] for i in keep], terms)

    def evaluate_int(self, point):
        if len(point) != self.nvars:
            raise InputError(f"expected {self.nvars} coordinates, got {len(point)}")
        total = 0
        for e, c in self.terms.items():
            m = c
            for x, k in zip(point, e):
                if k:
                    m *= int(x) ** k
            total += m
        return total

    def evaluate_mod(self, point, modulus):
        """Evaluate at integer arrays (or ints) modulo ``modulus``; vectorised."""
        if len(point) != self.nvars:
            raise InputError(f"expected {self.nvars} coordinates, got {len(point)}")
        modulus = int(modulus)
        dtype = np.int64 if modulus < _INT64_SAFE else object
        return _eval_mod(self, [np.asarray(x).astype(dtype) for x in point], modulus, dtype)

    # -- text ------------------------------------------------------------------

    def to_string(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    __str__ = to_string

    def __repr__(self):
        return f"IntPolynomial({self.to_string()!r}, variables={self.variables})"

    def reduce_mod_p(self, field):
        return reduce_mod_p(self, field)


_BINOPS = {ast.Add: "add", ast.Sub: "sub", ast.Mult: "mul", ast.Pow: "pow"}


def _from_ast(node, variables, text):
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return IntPolynomial.constant(node.value, variables)
    if isinstance(node, ast.Name):
        return IntPolynomial.variable(node.id, variables)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _from_ast(node.operand, variables, text)
        return -inner if isinstance(node.op, ast.USub) else inner
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        left = _from_ast(node.left, variables, text)
        if isinstance(node.op, ast.Pow):
            right = node.right
            if not (isinstance(right, ast.Constant) and isinstance(right.value, int)):
                raise InputError(f"exponent must be a non-negative integer literal in {text!r}")
            return left ** right.value
        right = _from_ast(node.right, variables, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        return left * right
    raise InputError(f"unsupported syntax in polynomial {text!r}")


def _eval_mod(poly, point, m, dtype=np.int64):
    shape = np.broadcast_shapes(*(x.shape for x in point)) if point else ()
    total = np.zeros(shape, dtype=dtype)
    cache = {}
    for e, c in poly.terms.items():
        term = np.full(shape, c % m, dtype=dtype)
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                if key not in cache:
                    cache[key] = _powmod_arr(point[i] % m, k, m)
                term = term * cache[key] % m
        total = (total + term) % m
    return total


def _powmod_arr(a, k, m):
    result = np.ones_like(a)
    base = a
    while k:
        if k & 1:
            result = result * base % m
        base = base * base % m
        k >>= 1
    return result


def jacobian(fs, variables=None):
    """Matrix of formal partials; row i is the gradient of fs[i]."""
    fs = list(fs)
    if variables is None:
        variables = fs[0].variables if fs else ()
    fs = [f.with_variables(variables) for f in fs]
    return [[f.derivative(v) for v in variables] for f in fs]


class RationalFunction:
    """Quotient of two integer polynomials with the integer content removed."""

    def __init__(self, numerator, denominator=None):
        if denominator is None:
            denominator = IntPolynomial.constant(1, numerator.variables)
        numerator, denominator = numerator._coerce(denominator)
        if denominator.is_zero():
            raise InputError("denominator is identically zero")
        g = math.gcd(numerator.content(), denominator.content())
        lead = denominator.sorted_terms()[0][1]
        if lead < 0:
            g = -g
        if g not in (0, 1):
            numerator = IntPolynomial(numerator.variables,
                                      {e: c // g for e, c in numerator.terms.items()})
            denominator = IntPolynomial(denominator.variables,
                                        {e: c // g for e, c in denominator.terms.items()})
        self.numerator = numerator
        self.denominator = denominator

    def __repr__(self):
        return f"RationalFunction(({self.numerator}) / ({self.denominator}))"

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator


class FieldPolynomial:
    """A polynomial whose coefficients are element indices of a finite field."""

    def __init__(self, field, variables, terms):
        self.field = field
        self.variables = tuple(variables)
        self.terms = tuple((tuple(e), int(c)) for e, c in terms if c)

    @property
    def nvars(self):
        return len(self.variables)

    def __repr__(self):
        return f"FieldPolynomial({self.field!r}, {self.variables}, {self.terms})"

    def __eq__(self, other):
        if not isinstance(other, FieldPolynomial):
            return NotImplemented
        return (self.field == other.field and self.variables == other.variables
                and sorted(self.terms) == sorted(other.terms))

    def is_zero(self):
        return not self.terms

    def support(self):
        return sorted({i for e, _ in self.terms for i, k in enumerate(e) if k})

    def max_exponents(self):
        out = [0] * self.nvars
        for e, _ in self.terms:
            for i, k in enumerate(e):
                out[i] = max(out[i], k)
        return out

    def substitute(self, fixed):
        """Fix variables (by index) to field-element indices."""
        f = self.field
        keep = [i for i in range(self.nvars) if i not in fixed]
        acc = {}
        for e, c in self.terms:
            coeff = c
            for i, v in fixed.items():
                if e[i]:
                    coeff = int(f.mul(coeff, f.power(v, e[i])))
            if coeff:
                key = tuple(e[i] for i in keep)
                acc[key] = int(f.add(acc.get(key, 0), coeff))
        return FieldPolynomial(f, [self.variables[i] for i in keep], acc.items())

    def evaluate(self, point):
        """Scalar evaluation at a vector of ``FieldElement``s or indices."""
        if len(point) != self.nvars:
            raise InputError(f"expected {self.nvars} coordinates, got {len(point)}")
        f = self.field
        vals = [f.element(x) for x in point]
        total = f.zero
        for e, c in self.terms:
            term = f.element(c)
            for x, k in zip(vals, e):
                if k:
                    term = term * x**k
            total = total + term
        return total

    def evaluate_arrays(self, columns, powers=None):
        """Evaluate on columns of index arrays (one per variable, broadcastable).

        ``powers`` may carry precomputed ``{(i, k): array}``; missing powers
        are computed and inserted so callers evaluating several polynomials
        on the same points share them.
        """
        f = self.field
        if len(columns) != self.nvars:
            raise InputError(f"expected {self.nvars} columns, got {len(columns)}")
        if powers is None:
            powers = {}
        shape = np.broadcast_shapes(*(np.shape(c) for c in columns)) if columns else ()
        total = np.zeros(shape, dtype=np.int64)
        for e, c in self.terms:
            term = None
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = f.power(columns[i], k)
                    term = powers[key] if term is None else f.mul(term, powers[key])
            if term is None:
                term = np.full(shape, c, dtype=np.int64)
            elif c != 1:
                term = f.mul(term, c)
            total = f.add(total, term)
        return np.broadcast_to(total, shape)


@lru_cache(maxsize=4096)
def reduce_mod_p(poly, field):
    """Map coefficients through Z -> F_p inside ``field`` and drop zero terms."""
    p = field.p
    return FieldPolynomial(field, poly.variables,
                           [(e, c % p) for e, c in poly.sorted_terms() if c % p])
