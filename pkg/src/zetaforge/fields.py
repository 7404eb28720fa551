"""
Exact arithmetic in prime fields F_p and extension fields F_{p^r}.

Elements are encoded as non-negative integers: the element
c_0 + c_1 x + ... + c_{r-1} x^{r-1} (coefficients in [0, p)) is stored as
the index c_0 + c_1 p + ... + c_{r-1} p^{r-1}.  The prime subfield therefore
occupies the indices 0..p-1, and an integer coefficient c reduces to the
element with index c mod p.

Two arithmetic routes are provided.  Scalar arithmetic (``FieldElement``)
works on coefficient vectors with schoolbook polynomial multiplication.  The
vectorised ``ExtensionField.add``/``mul``/... operate on numpy index arrays
and, for fields up to ``TABLE_LIMIT`` elements, use Zech-style log/exp
tables.  The two routes are independent and are cross-checked in the tests.
"""
import itertools
from functools import cached_property, lru_cache

import numpy as np

from .config import DEFAULT_MAX_DEGREE
from .errors import BudgetExceeded, InputError

TABLE_LIMIT = 1 << 20
ADD_TABLE_LIMIT = 1 << 10

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin, exact for all n < 3.3e24."""
    n = int(n)
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- dense polynomials over F_p, coefficient lists low degree first ----------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _pdivmod(a, b, p):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] * inv_lead % p
        q[shift] = c
        for j, bj in enumerate(b):
            a[shift + j] = (a[shift + j] - c * bj) % p
        a = _trim(a)
    return _trim(q), a


def _pmod(a, b, p):
    return _pdivmod(a, b, p)[1]


def _psub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _pgcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base, e, mod, p):
    result = [1]
    base = _pmod(base, mod, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), mod, p)
        base = _pmod(_pmul(base, base, p), mod, p)
        e >>= 1
    return result


def is_irreducible(coeffs, p):
    """Ben-Or test for a monic polynomial over F_p (coefficients low degree first)."""
    f = _trim(coeffs)
    r = len(f) - 1
    if r < 1:
        return False
    if r == 1:
        return True
    x = [0, 1]
    power = x
    for _ in range(r // 2):
        power = _ppowmod(power, p, f, p)
        g = _pgcd(f, _psub(power, x, p), p)
        if len(g) > 1:
            return False
    return True


def _has_root(coeffs, p):
    for x in range(p):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % p
        if acc == 0:
            return True
    return False


@lru_cache(maxsize=None)
def least_irreducible(p, r):
    """Lexicographically least monic irreducible of degree r over F_p.

    Coefficient vectors (c_0, ..., c_{r-1}) are compared with c_0 most
    significant.  Returns the full coefficient tuple including the leading 1.
    """
    if r == 1:
        return (0, 1)
    # c_0 = 0 means x divides; skip that whole block
    for tail in itertools.product(range(1, p), *[range(p)] * (r - 1)):
        cand = list(tail) + [1]
        if not _has_root(cand, p) and is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError(f"no irreducible of degree {r} over F_{p}")  # unreachable


# -- fields -------------------------------------------------------------------

class ExtensionField:
    """The finite field F_{p^r} = F_p[x]/(modulus)."""

    def __init__(self, p, r=1, max_degree=DEFAULT_MAX_DEGREE):
        p, r = int(p), int(r)
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        if p >= 1 << 31:
            raise InputError(f"p = {p} exceeds machine-word support")
        if not 1 <= r <= max_degree:
            raise InputError(f"extension degree {r} outside 1..{max_degree}")
        self.p = p
        self.r = r
        self.order = p**r
        self.modulus = least_irreducible(p, r)
        self._pows = np.array([p**i for i in range(r)], dtype=np.int64)

    def __repr__(self):
        return f"GF({self.p}^{self.r})" if self.r > 1 else f"GF({self.p})"

    @property
    def label(self):
        return f"F_{self.p}^{self.r}" if self.r > 1 else f"F_{self.p}"

    def __eq__(self, other):
        return isinstance(other, ExtensionField) and (self.p, self.r) == (other.p, other.r)

    def __hash__(self):
        return hash((self.p, self.r))

    def __len__(self):
        return self.order

    # -- scalar route ------------------------------------------------------

    def coeffs(self, value):
        v = int(value)
        out = []
        for _ in range(self.r):
            v, c = divmod(v, self.p)
            out.append(c)
        return out

    def index(self, coeffs):
        coeffs = list(coeffs)
        if len(coeffs) > self.r:
            coeffs = _pmod(coeffs, list(self.modulus), self.p)
        v = 0
        for c in reversed(coeffs):
            v = v * self.p + (int(c) % self.p)
        return v

    def element(self, value):
        if isinstance(value, FieldElement):
            if value.field != self:
                raise InputError("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.index(value))
        value = int(value)
        if not 0 <= value < self.order:
            raise InputError(f"index {value} outside 0..{self.order - 1}")
        return FieldElement(self, value)

    def from_int(self, n):
        """Image of the integer n under Z -> F_p inside this field."""
        return FieldElement(self, int(n) % self.p)

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)

    def _smul(self, a, b):
        return self.index(_pmod(_pmul(self.coeffs(a), self.coeffs(b), self.p),
                                list(self.modulus), self.p))

    def _spow(self, a, e):
        if e < 0:
            a = self._sinv(a)
            e = -e
        return self.index(_ppowmod(self.coeffs(a), e, list(self.modulus), self.p))

    def _sinv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._spow(a, self.order - 2)

    def _sadd(self, a, b):
        return self.index([(x + y) for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def _sneg(self, a):
        return self.index([-c for c in self.coeffs(a)])

    def elements(self, budget=None):
        return enumerate_field(self, budget)

    # -- vectorised route --------------------------------------------------

    def digits(self, a):
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._pows) % self.p

    def from_digits(self, d):
        return (np.asarray(d, dtype=np.int64) % self.p) @ self._pows

    @cached_property
    def primitive_element(self):
        n = self.order - 1
        if n == 1:
            return 1
        exps = [n // ell for ell in prime_factors(n)]
        for g in range(2, self.order):
            if all(self._spow(g, e) != 1 for e in exps):
                return g
        raise AssertionError("no primitive element")  # unreachable

    def _const_matrix(self, c):
        # column j holds the digits of c * x^j
        cols = [self.coeffs(self.index(_pmod(_pmul(self.coeffs(c), [0] * j + [1], self.p),
                                             list(self.modulus), self.p)))
                for j in range(self.r)]
        return np.array(cols, dtype=np.int64).T

    @cached_property
    def _tables(self):
        q = self.order
        n = q - 1
        g = self.primitive_element
        exp = np.empty(2 * n, dtype=np.int64)
        exp[0] = 1
        filled = 1
        step = g  # g^filled
        while filled < n:
            take = min(filled, n - filled)
            m = self._const_matrix(step)
            d = self.digits(exp[:take])
            exp[filled:filled + take] = self.from_digits(d @ m.T)
            filled += take
            step = self._smul(step, step)
        exp[n:] = exp[:n]
        log = np.full(q, -1, dtype=np.int64)
        log[exp[:n]] = np.arange(n, dtype=np.int64)
        return exp, log

    @cached_property
    def _add_table(self):
        a = np.arange(self.order, dtype=np.int64)
        d = self.digits(a)
        return self.from_digits(d[:, None, :] + d[None, :, :])

    @property
    def use_tables(self):
        return self.r > 1 and self.order <= TABLE_LIMIT

    @cached_property
    def _zech(self):
        # zech[k] = log(1 + g^k), or -1 where 1 + g^k = 0
        exp, log = self._tables
        n = self.order - 1
        one_plus = self._add_digits(np.ones(n, dtype=np.int64), exp[:n])
        return np.where(one_plus == 0, -1, log[one_plus])

    def _add_digits(self, a, b):
        return self.from_digits(self.digits(a) + self.digits(b))

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.r == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self.order <= ADD_TABLE_LIMIT:
            return self._add_table[a, b]
        if self.use_tables:
            exp, log = self._tables
            zech = self._zech
            la, lb = log[a], log[b]
            z = zech[(lb - la) % (self.order - 1)]
            out = np.where(z < 0, 0, exp[np.maximum(la, 0) + np.maximum(z, 0)])
            out = np.where(a == 0, b, out)
            return np.where(b == 0, a, out)
        return self._add_digits(a, b)

    def neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.r == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        if self.use_tables:
            exp, log = self._tables
            half = (self.order - 1) // 2
            return np.where(a == 0, 0, exp[np.maximum(log[a], 0) + half])
        return self.from_digits(-self.digits(a))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.r == 1:
            if self.p < 1 << 31:
                return (a * b) % self.p
        if self.use_tables:
            exp, log = self._tables
            out = exp[log[a] + log[b]]
            return np.where((a == 0) | (b == 0), 0, out)
        return self._mul_digits(a, b)

    def _mul_digits(self, a, b):
        a, b = np.broadcast_arrays(a, b)
        da, db = self.digits(a), self.digits(b)
        r, p = self.r, self.p
        prod = np.zeros(a.shape + (2 * r - 1,), dtype=np.int64)
        for i in range(r):
            prod[..., i:i + r] += da[..., i:i + 1] * db
        prod %= p
        mod = self.modulus
        for k in range(2 * r - 2, r - 1, -1):
            c = prod[..., k]
            for j in range(r):
                prod[..., k - r + j] -= c * mod[j]
            prod[..., k - r:k] %= p
        return self.from_digits(prod[..., :r])

    def power(self, a, e):
        a = np.asarray(a, dtype=np.int64)
        e = int(e)
        if e == 0:
            return np.ones_like(a)
        if e < 0:
            return self.power(self.inv(a), -e)
        if self.r == 1:
            return _modpow_array(a, e, self.p)
        if self.use_tables:
            exp, log = self._tables
            n = self.order - 1
            return np.where(a == 0, 0, exp[(log[a] * (e % n)) % n])
        result = np.ones_like(a)
        base = a
        while e:
            if e & 1:
                result = self._mul_digits(result, base)
            base = self._mul_digits(base, base)
            e >>= 1
        return result

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.power(a, self.order - 2)

    def frobenius(self, a):
        return self.power(a, self.p)


def _modpow_array(a, e, p):
    result = np.ones_like(a)
    base = a % p
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


class PrimeField(ExtensionField):
    """F_p, stored as the degree-one case with modulus x."""

    def __init__(self, p):
        super().__init__(p, 1)


def make_extension(p, r=1, max_degree=DEFAULT_MAX_DEGREE):
    """Build F_{p^r} with the lexicographically least monic irreducible modulus."""
    if int(r) == 1:
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        return PrimeField(p)
    return ExtensionField(p, r, max_degree=max_degree)


def enumerate_field(field, budget=None):
    """Yield every element of ``field`` once, in ascending index order."""
    if budget is not None and field.order > budget:
        raise BudgetExceeded(field.order, budget, "field enumeration")
    for v in range(field.order):
        yield FieldElement(field, v)


class FieldElement:
    """A single element of an ``ExtensionField``; immutable and hashable."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        self.field = field
        self.value = int(value)

    def __repr__(self):
        return f"FieldElement({self.field!r}, {self.coeffs})"

    @property
    def coeffs(self):
        return tuple(self.field.coeffs(self.value))

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise InputError(f"mixed-field operands: {self.field!r} and {other.field!r}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.field.p and self.value < self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.r, self.value))

    def __bool__(self):
        return self.value != 0

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field._sadd(self.value, b))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, self.field._sneg(self.value))

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field._sadd(self.value, self.field._sneg(b)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field._smul(self.value, b))

    __rmul__ = __mul__

    def inverse(self):
        return FieldElement(self.field, self.field._sinv(self.value))

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self * FieldElement(self.field, b).inverse()

    def __pow__(self, e):
        return FieldElement(self.field, self.field._spow(self.value, int(e)))

    def frobenius(self):
        return self ** self.field.p
