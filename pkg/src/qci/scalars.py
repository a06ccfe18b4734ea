"""Exact coefficient fields: prime fields F_p and cyclotomic fields Q(zeta_a).

Two element types live here, :class:`ModP` and :class:`Cyclo`.  Both are
immutable, hashable and compare by canonical data, so equality of scalars is
equality of their canonical representatives.  A :class:`FieldSpec` bundles
the field parameters with the helpers the linear algebra layer needs to pack
elements into numpy arrays (``int64`` residues for F_p, ``object`` arrays of
:class:`Cyclo` for cyclotomic fields).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd

import numpy as np
import sympy

from .errors import FieldMismatch, NoPrimitiveRoot

__all__ = [
    "Cyclo",
    "Cyclotomic",
    "FieldSpec",
    "ModP",
    "PrimeField",
    "parse_field",
    "primitive_root_of_unity",
    "sample_scalar",
]


# --------------------------------------------------------------------------
# F_p
# --------------------------------------------------------------------------


class ModP:
    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise FieldMismatch(f"F_{self.p} vs F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return ModP(-self.v, self.p)

    def inverse(self) -> ModP:
        if self.v == 0:
            raise ZeroDivisionError("inverse of 0 in F_%d" % self.p)
        return ModP(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * ModP(o, self.p).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return ModP(pow(self.inverse().v, -k, self.p), self.p)
        return ModP(pow(self.v, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, ModP):
            return self.v == other.v and self.p == other.p
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash(("ModP", self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"ModP({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


# --------------------------------------------------------------------------
# Q(zeta_a)
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _cyclotomic_poly(a: int) -> tuple[int, ...]:
    """Coefficients of the a-th cyclotomic polynomial, constant term first."""
    x = sympy.Symbol("x")
    coeffs = sympy.Poly(sympy.cyclotomic_poly(a, x), x).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


def _reduce_poly(coeffs: list[int], phi: tuple[int, ...]) -> list[int]:
    # phi is monic; fold high powers down
    d = len(phi) - 1
    for k in range(len(coeffs) - 1, d - 1, -1):
        c = coeffs[k]
        if c:
            base = k - d
            for j in range(d):
                coeffs[base + j] -= c * phi[j]
            coeffs[k] = 0
    return coeffs[:d]


class Cyclo:
    """Element of Q(zeta_a) as integer numerators over a common denominator.

    ``num[j]/den`` is the coefficient of ``zeta**j`` for ``j < phi(a)``.
    Canonical form: ``den > 0`` and ``gcd(num..., den) == 1``.
    """

    __slots__ = ("num", "den", "a")

    def __init__(self, num, den: int, a: int, _canonical: bool = False):
        if not _canonical:
            if den < 0:
                num = [-c for c in num]
                den = -den
            g = den
            for c in num:
                g = gcd(g, c)
                if g == 1:
                    break
            if g > 1:
                num = [c // g for c in num]
                den //= g
        self.num = tuple(num)
        self.den = den
        self.a = a

    # -- helpers ----------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.num)

    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def _lift(self, other) -> Cyclo:
        if isinstance(other, Cyclo):
            if other.a != self.a:
                raise FieldMismatch(f"Q(zeta_{self.a}) vs Q(zeta_{other.a})")
            return other
        if isinstance(other, int):
            num = [0] * len(self.num)
            num[0] = other
            return Cyclo(num, 1, self.a, _canonical=True)
        if isinstance(other, Fraction):
            num = [0] * len(self.num)
            num[0] = other.numerator
            return Cyclo(num, other.denominator, self.a, _canonical=True)
        return NotImplemented

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return Cyclo([x + y for x, y in zip(self.num, o.num)], self.den, self.a)
        return Cyclo(
            [x * o.den + y * self.den for x, y in zip(self.num, o.num)],
            self.den * o.den,
            self.a,
        )

    __radd__ = __add__

    def __neg__(self):
        return Cyclo([-x for x in self.num], self.den, self.a, _canonical=True)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        d = len(self.num)
        if d == 1:
            return Cyclo([self.num[0] * o.num[0]], self.den * o.den, self.a)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(self.num):
            if x:
                for j, y in enumerate(o.num):
                    if y:
                        prod[i + j] += x * y
        return Cyclo(_reduce_poly(prod, _cyclotomic_poly(self.a)), self.den * o.den, self.a)

    __rmul__ = __mul__

    def inverse(self) -> Cyclo:
        if not self:
            raise ZeroDivisionError("inverse of 0 in Q(zeta_%d)" % self.a)
        d = len(self.num)
        if d == 1:
            return Cyclo([self.den], self.num[0], self.a)
        # solve (self * y = 1) with y's coefficient vector as unknowns
        cols = []
        basis = [0] * d
        for j in range(d):
            e = list(basis)
            e[j] = 1
            cols.append((self * Cyclo(e, 1, self.a, _canonical=True)).coefficients())
        aug = [[cols[j][i] for j in range(d)] + [Fraction(int(i == 0))] for i in range(d)]
        for c in range(d):
            piv = next(r for r in range(c, d) if aug[r][c] != 0)
            aug[c], aug[piv] = aug[piv], aug[c]
            inv = 1 / aug[c][c]
            aug[c] = [v * inv for v in aug[c]]
            for r in range(d):
                if r != c and aug[r][c] != 0:
                    f = aug[r][c]
                    aug[r] = [v - f * w for v, w in zip(aug[r], aug[c])]
        return Cyclo.from_fractions([aug[i][d] for i in range(d)], self.a)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self._lift(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Cyclo):
            return self.a == other.a and self.den == other.den and self.num == other.num
        if isinstance(other, (int, Fraction)):
            o = self._lift(other)
            return self == o
        return NotImplemented

    def __hash__(self):
        return hash(("Cyclo", self.num, self.den, self.a))

    def __bool__(self):
        return any(self.num)

    def __repr__(self):
        return f"Cyclo({list(self.num)}, {self.den}, a={self.a})"

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coefficients()) + ")"

    @classmethod
    def from_fractions(cls, coeffs, a: int) -> Cyclo:
        coeffs = [Fraction(c) for c in coeffs]
        den = 1
        for c in coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        return cls([int(c * den) for c in coeffs], den, a)


# --------------------------------------------------------------------------
# field specifications
# --------------------------------------------------------------------------


class FieldSpec:
    """Common interface of :class:`PrimeField` and :class:`Cyclotomic`."""

    characteristic: int
    dtype: object

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    # array plumbing used by :mod:`qci.linalg`
    def raw(self, x):
        return self(x)

    def wrap(self, raw):
        return raw

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return arr

    def inv_raw(self, raw):
        return raw.inverse()

    def zeros(self, shape) -> np.ndarray:
        raise NotImplementedError

    def eye(self, n: int) -> np.ndarray:
        m = self.zeros((n, n))
        for i in range(n):
            m[i, i] = self.raw(1)
        return m

    def array(self, rows) -> np.ndarray:
        rows = [list(r) for r in rows]
        out = self.zeros((len(rows), len(rows[0]) if rows else 0))
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                out[i, j] = self.raw(x)
        return out

    def vector(self, xs) -> np.ndarray:
        xs = list(xs)
        out = self.zeros((len(xs),))
        for i, x in enumerate(xs):
            out[i] = self.raw(x)
        return out


@dataclass(frozen=True)
class PrimeField(FieldSpec):
    p: int

    def __post_init__(self):
        if self.p < 2 or not sympy.isprime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def spec_string(self) -> str:
        return f"p:{self.p}"

    @cached_property
    def dtype(self):
        # products of two residues must fit in int64
        return np.int64 if self.p < 2**31 else object

    def __call__(self, x) -> ModP:
        if isinstance(x, ModP):
            if x.p != self.p:
                raise FieldMismatch(f"F_{x.p} element used in F_{self.p}")
            return x
        if isinstance(x, Fraction):
            return ModP(x.numerator * pow(x.denominator, -1, self.p), self.p)
        if isinstance(x, str):
            return self.parse(x)
        return ModP(int(x), self.p)

    def parse(self, s: str) -> ModP:
        return self(Fraction(s.strip()))

    def raw(self, x):
        return self(x).v

    def wrap(self, raw) -> ModP:
        return ModP(int(raw), self.p)

    def reduce(self, arr):
        return arr % self.p

    def inv_raw(self, raw):
        return pow(int(raw), -1, self.p)

    def zeros(self, shape):
        if self.dtype is object:
            out = np.empty(shape, dtype=object)
            out.fill(0)
            return out
        return np.zeros(shape, dtype=np.int64)

    def primitive_root_of_unity(self, a: int) -> ModP:
        if a < 1:
            raise ValueError("order must be positive")
        if (self.p - 1) % a:
            raise NoPrimitiveRoot(f"{a} does not divide {self.p - 1}")
        e = (self.p - 1) // a
        for g in range(1, self.p):
            r = pow(g, e, self.p)
            if _has_exact_order(r, a, self.p):
                return ModP(r, self.p)
        raise NoPrimitiveRoot(f"no primitive {a}-th root in F_{self.p}")  # unreachable

    def sample(self, rng: random.Random) -> ModP:
        return ModP(rng.randrange(self.p), self.p)

    def __str__(self):
        return f"F_{self.p}"


def _has_exact_order(r: int, a: int, p: int) -> bool:
    if pow(r, a, p) != 1:
        return False
    return all(pow(r, a // f, p) != 1 for f in sympy.primefactors(a))


@dataclass(frozen=True)
class Cyclotomic(FieldSpec):
    a: int
    box: int = field(default=3, compare=False)

    def __post_init__(self):
        if self.a < 2:
            raise ValueError("cyclotomic order must be >= 2")

    characteristic = 0
    dtype = object

    @property
    def spec_string(self) -> str:
        return f"cyclo:{self.a}"

    @cached_property
    def degree(self) -> int:
        return len(_cyclotomic_poly(self.a)) - 1

    @cached_property
    def generator(self) -> Cyclo:
        d = self.degree
        if d == 1:
            # Phi_2 = x + 1, so zeta_2 = -1
            return Cyclo([-_cyclotomic_poly(self.a)[0]], 1, self.a)
        num = [0] * d
        num[1] = 1
        return Cyclo(num, 1, self.a, _canonical=True)

    def __call__(self, x) -> Cyclo:
        if isinstance(x, Cyclo):
            if x.a != self.a:
                raise FieldMismatch(f"Q(zeta_{x.a}) element used in Q(zeta_{self.a})")
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, (list, tuple)):
            if len(x) != self.degree:
                raise ValueError(f"expected {self.degree} coefficients, got {len(x)}")
            return Cyclo.from_fractions(x, self.a)
        x = Fraction(x)
        num = [0] * self.degree
        num[0] = x.numerator
        return Cyclo(num, x.denominator, self.a, _canonical=True)

    def parse(self, s: str) -> Cyclo:
        s = s.strip()
        if s.startswith("("):
            parts = [t for t in re.split(r"[,\s]+", s.strip("()")) if t]
            return self([Fraction(t) for t in parts])
        return self(Fraction(s))

    def zeros(self, shape):
        out = np.empty(shape, dtype=object)
        z = self(0)
        out.fill(z)
        return out

    def primitive_root_of_unity(self, b: int) -> Cyclo:
        if b < 1:
            raise ValueError("order must be positive")
        zeta = self.generator
        # zeta_a has order a; -zeta_a has order 2a when a is odd
        order = self.a if self.a % 2 == 0 else 2 * self.a
        base = zeta if order == self.a else -zeta
        if order % b:
            raise NoPrimitiveRoot(f"Q(zeta_{self.a}) has no primitive {b}-th root of unity")
        if b == self.a:
            return zeta
        return base ** (order // b)

    def sample(self, rng: random.Random) -> Cyclo:
        return Cyclo([rng.randint(-self.box, self.box) for _ in range(self.degree)], 1, self.a)

    def __str__(self):
        return f"Q(zeta_{self.a})"


def parse_field(text: str) -> FieldSpec:
    """Parse ``p:<prime>`` or ``cyclo:<a>``."""
    kind, _, value = text.partition(":")
    try:
        n = int(value)
    except ValueError:
        raise ValueError(f"bad field spec {text!r}; expected p:<prime> or cyclo:<a>") from None
    if kind == "p":
        return PrimeField(n)
    if kind == "cyclo":
        return Cyclotomic(n)
    raise ValueError(f"bad field spec {text!r}; expected p:<prime> or cyclo:<a>")


def primitive_root_of_unity(spec: FieldSpec, a: int):
    if a < 2:
        raise ValueError("a must be >= 2")
    return spec.primitive_root_of_unity(a)


def sample_scalar(spec: FieldSpec, rng: random.Random):
    return spec.sample(rng)
