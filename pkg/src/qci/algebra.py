"""Quantum complete intersections and their PBW normal form.

The algebra is k<X_1..X_n> / (X_u^{a_u}, X_i X_j - q_ij X_j X_i  for i < j).
Its elements are stored on the PBW basis x_1^{e_1} ... x_n^{e_n} with
0 <= e_i < a_i, i.e. with variables sorted by ascending index.  Moving x_j
past x_i (j > i) to the right costs a factor q_ij^{-1}, so

    x^e * x^f = prod_{i<j} q_ij^{-e_j f_i} * x^{e+f}

and the product vanishes as soon as some e_i + f_i >= a_i.

Generator indices in the public API are 1-based (``gen(p, 1)`` is x_1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import FieldMismatch, PresentationMismatch, ZeroLeadingCoordinate
from .scalars import FieldSpec, parse_field

__all__ = [
    "AlgebraElement",
    "QciPresentation",
    "gen",
    "graded_component_basis",
    "homogeneous",
    "n_part_power_formula_check",
    "nr_decompose",
    "power",
    "sigma",
    "substitute",
    "twist_factor",
    "twisted_structure_constants",
    "twisted_tensor",
    "verify_twisted_isomorphism",
]

Monomial = tuple  # exponent vector


@dataclass(frozen=True, eq=False)
class QciPresentation:
    """Exponents ``(a_1..a_n)`` and commutators ``q_ij`` (i < j, row-major)."""

    exponents: tuple
    commutators: tuple
    field: FieldSpec
    _mult_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        exps = tuple(int(a) for a in self.exponents)
        if not exps:
            raise ValueError("codimension must be at least 1")
        if any(a < 2 for a in exps):
            raise ValueError("all exponents must be >= 2")
        n = len(exps)
        qs = tuple(self.field(q) for q in self.commutators)
        if len(qs) != n * (n - 1) // 2:
            raise ValueError(f"expected {n * (n - 1) // 2} commutators, got {len(qs)}")
        if any(not q for q in qs):
            raise ValueError("commutators must be nonzero")
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "commutators", qs)

    # -- identity ---------------------------------------------------------

    @cached_property
    def key(self):
        return (self.exponents, tuple(str(q) for q in self.commutators), self.field)

    def __eq__(self, other):
        if not isinstance(other, QciPresentation):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"QciPresentation(exponents={self.exponents}, commutators={[str(q) for q in self.commutators]}, field={self.field})"

    # -- shape ------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.exponents)

    @cached_property
    def dim(self) -> int:
        return int(np.prod(self.exponents))

    @cached_property
    def top_degree(self) -> int:
        return sum(a - 1 for a in self.exponents)

    def q(self, i: int, j: int):
        """Commutator q_ij for 1-based ``i < j``."""
        if not 1 <= i < j <= self.n:
            raise IndexError(f"need 1 <= i < j <= {self.n}, got ({i}, {j})")
        n = self.n
        k = (i - 1) * n - (i - 1) * i // 2 + (j - i - 1)
        return self.commutators[k]

    def commutator_matrix(self):
        """Full table Q with Q[i][j] = q_ij, Q[j][i] = q_ij^{-1}, 0-based."""
        n = self.n
        one = self.field.one
        Q = [[one] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                Q[i][j] = self.q(i + 1, j + 1)
                Q[j][i] = Q[i][j].inverse()
        return Q

    def is_homogeneous(self, a: int | None = None, q=None) -> bool:
        a = self.exponents[0] if a is None else a
        if any(e != a for e in self.exponents):
            return False
        if self.n == 1:
            return True
        q = self.commutators[0] if q is None else self.field(q)
        if any(c != q for c in self.commutators):
            return False
        if q ** a != self.field.one:
            return False
        return all(q ** j != self.field.one for j in range(1, a))

    # -- basis ------------------------------------------------------------

    @cached_property
    def basis(self) -> list:
        return [tuple(e) for e in itertools.product(*(range(a) for a in self.exponents))]

    @cached_property
    def index(self) -> dict:
        return {m: i for i, m in enumerate(self.basis)}

    @cached_property
    def _inv_q_powers(self):
        # _inv_q_powers[i][j][k] = q_ij^{-k} for 0-based i < j
        n = self.n
        table = {}
        for i in range(n):
            for j in range(i + 1, n):
                qi = self.q(i + 1, j + 1).inverse()
                top = (self.exponents[i] - 1) * (self.exponents[j] - 1)
                pw = [self.field.one]
                for _ in range(top):
                    pw.append(pw[-1] * qi)
                table[i, j] = pw
        return table

    def monomial_product(self, e: Monomial, f: Monomial):
        """``(g, c)`` with x^e x^f = c x^g, or ``None`` when the product is 0."""
        key = (e, f)
        cache = self._mult_cache
        if key in cache:
            return cache[key]
        res = None
        g = tuple(x + y for x, y in zip(e, f))
        if all(x < a for x, a in zip(g, self.exponents)):
            c = self.field.one
            pw = self._inv_q_powers
            n = self.n
            for i in range(n):
                fi = f[i]
                if not fi:
                    continue
                for j in range(i + 1, n):
                    if e[j]:
                        c = c * pw[i, j][e[j] * fi]
            res = (g, c)
        cache[key] = res
        return res

    # -- elements ---------------------------------------------------------

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, {(0,) * self.n: self.field.one})

    def monomial(self, e, coeff=1) -> AlgebraElement:
        e = tuple(e)
        if len(e) != self.n or any(not 0 <= x < a for x, a in zip(e, self.exponents)):
            raise ValueError(f"{e} is not a PBW exponent vector")
        c = self.field(coeff)
        return AlgebraElement(self, {e: c} if c else {})

    def element(self, terms) -> AlgebraElement:
        """Build an element from ``{exponent vector: scalar}`` (or pairs)."""
        items = terms.items() if isinstance(terms, dict) else terms
        out = {}
        for e, c in items:
            e = tuple(e)
            if len(e) != self.n or any(not 0 <= x < a for x, a in zip(e, self.exponents)):
                raise ValueError(f"{e} is not a PBW exponent vector")
            c = self.field(c)
            s = out.get(e)
            out[e] = c if s is None else s + c
        return AlgebraElement(self, {e: c for e, c in out.items() if c})

    def from_vector(self, v) -> AlgebraElement:
        F = self.field
        return AlgebraElement(self, {m: F.wrap(x) for m, x in zip(self.basis, v) if x})

    def sigma(self, alpha) -> AlgebraElement:
        return sigma(self, alpha)

    # -- serialisation ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "exponents": list(self.exponents),
            "commutators": [str(q) for q in self.commutators],
            "field": self.field.spec_string,
        }

    @classmethod
    def from_dict(cls, d: dict) -> QciPresentation:
        F = parse_field(d["field"])
        if len(d["exponents"]) != d["n"]:
            raise ValueError("n does not match the exponent list")
        return cls(tuple(d["exponents"]), tuple(F.parse(s) for s in d["commutators"]), F)


def homogeneous(n: int, a: int, field: FieldSpec, q=None) -> QciPresentation:
    """The homogeneous algebra with all exponents ``a`` and all commutators ``q``.

    ``q`` defaults to the field's canonical primitive a-th root of unity.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    q = field.primitive_root_of_unity(a) if q is None else field(q)
    return QciPresentation((a,) * n, (q,) * (n * (n - 1) // 2), field)


class AlgebraElement:
    """Sparse linear combination of PBW monomials; never stores zeros."""

    __slots__ = ("parent", "terms")

    def __init__(self, parent: QciPresentation, terms: dict):
        self.parent = parent
        self.terms = terms

    # -- arithmetic -------------------------------------------------------

    def _check(self, other):
        if other.parent is not self.parent and other.parent != self.parent:
            raise PresentationMismatch("elements live in different algebras")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            if other == 0:
                return self
            other = self.parent.one() * other
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return AlgebraElement(self.parent, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.parent, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> AlgebraElement:
        s = self.parent.field(s)
        if not s:
            return self.parent.zero()
        return AlgebraElement(self.parent, {m: c * s for m, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return self.scale(other)
        self._check(other)
        return mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, m: int):
        return power(self, m)

    # -- inspection -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.parent == other.parent and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def coefficient(self, e):
        return self.terms.get(tuple(e), self.parent.field.zero)

    def degrees(self) -> set:
        return {sum(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int | None:
        """Total degree of a homogeneous element (``None`` for zero)."""
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError("element is not homogeneous")
        return next(iter(ds)) if ds else None

    def involves(self, var: int) -> bool:
        """Whether x_var (1-based) occurs in some monomial."""
        return any(m[var - 1] for m in self.terms)

    def vector(self) -> np.ndarray:
        F = self.parent.field
        v = F.zeros((self.parent.dim,))
        idx = self.parent.index
        for m, c in self.terms.items():
            v[idx[m]] = F.raw(c)
        return v

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self:
            word = "*".join(f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e) or "1"
            parts.append(f"{c}*{word}")
        return " + ".join(parts)

    def to_list(self) -> list:
        return [[list(m), str(c)] for m, c in self]

    @classmethod
    def from_list(cls, parent: QciPresentation, data) -> AlgebraElement:
        return parent.element((tuple(e), parent.field.parse(s)) for e, s in data)


def gen(p: QciPresentation, i: int) -> AlgebraElement:
    """The generator x_i (1-based)."""
    e = [0] * p.n
    e[i - 1] = 1
    return p.monomial(e)


def mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    if x.parent is not y.parent and x.parent != y.parent:
        raise PresentationMismatch("elements live in different algebras")
    p = x.parent
    out: dict = {}
    prod = p.monomial_product
    for e, c in x.terms.items():
        for f, d in y.terms.items():
            r = prod(e, f)
            if r is None:
                continue
            g, s = r
            v = c * d * s
            t = out.get(g)
            out[g] = v if t is None else t + v
    return AlgebraElement(p, {g: c for g, c in out.items() if c})


def sigma(p: QciPresentation, alpha) -> AlgebraElement:
    """The linear form alpha_1 x_1 + ... + alpha_n x_n."""
    alpha = list(alpha)
    if len(alpha) != p.n:
        raise ValueError(f"tuple of length {len(alpha)} for codimension {p.n}")
    terms = {}
    for i, a in enumerate(alpha):
        a = p.field(a)
        if a:
            e = [0] * p.n
            e[i] = 1
            terms[tuple(e)] = a
    return AlgebraElement(p, terms)


def power(x: AlgebraElement, m: int) -> AlgebraElement:
    if m < 0:
        raise ValueError("negative power")
    result = x.parent.one()
    for _ in range(m):
        if not result:
            break
        result = mul(result, x)
    return result


def graded_component_basis(p: QciPresentation, d: int) -> list:
    """Monomials of total degree ``d``, x_1-heavy first (descending lex)."""
    if not 0 <= d <= p.top_degree:
        return []
    return sorted((m for m in p.basis if sum(m) == d), reverse=True)


def substitute(x: AlgebraElement, images, target: QciPresentation) -> AlgebraElement:
    """Apply the algebra map sending x_i to ``images[i-1]`` (an element of ``target``).

    The caller is responsible for the images satisfying the relations.
    """
    out = target.zero()
    cache = {}
    for m, c in x.terms.items():
        word = target.one()
        for i, e in enumerate(m):
            if e:
                key = (i, e)
                if key not in cache:
                    cache[key] = power(images[i], e)
                word = mul(word, cache[key])
        out = out + word.scale(c)
    return out


def left_mult_matrix(x: AlgebraElement) -> np.ndarray:
    """Matrix of lambda -> x * lambda on the PBW basis."""
    p = x.parent
    F = p.field
    M = F.zeros((p.dim, p.dim))
    idx = p.index
    for v, b in enumerate(p.basis):
        for e, c in x.terms.items():
            r = p.monomial_product(e, b)
            if r is not None:
                g, s = r
                M[idx[g], v] = M[idx[g], v] + F.raw(c * s)
    return F.reduce(M)


def right_mult_matrix(x: AlgebraElement) -> np.ndarray:
    """Matrix of lambda -> lambda * x on the PBW basis."""
    p = x.parent
    F = p.field
    M = F.zeros((p.dim, p.dim))
    idx = p.index
    for v, b in enumerate(p.basis):
        for e, c in x.terms.items():
            r = p.monomial_product(b, e)
            if r is not None:
                g, s = r
                M[idx[g], v] = M[idx[g], v] + F.raw(c * s)
    return F.reduce(M)


# --------------------------------------------------------------------------
# N/R decomposition with respect to sigma_alpha
# --------------------------------------------------------------------------


def nr_decompose(lam: AlgebraElement, alpha) -> tuple[AlgebraElement, AlgebraElement]:
    """Split ``lam = N + sigma_alpha * R`` with x_1 absent from every monomial of N.

    Terms containing x_1 are peeled off in order of decreasing x_1-degree
    using x_1^e m = a1^{-1} sigma x_1^{e-1} m - a1^{-1} sigma' x_1^{e-1} m,
    where sigma' = sigma - a1 x_1.
    """
    p = lam.parent
    F = p.field
    alpha = [F(a) for a in alpha]
    if not alpha[0]:
        raise ZeroLeadingCoordinate("alpha_1 must be nonzero")
    inv = alpha[0].inverse()
    sig_rest = sigma(p, [F.zero] + alpha[1:])
    rest = dict(lam.terms)
    R = {}
    while True:
        top = max((m[0] for m in rest), default=0)
        if top == 0:
            break
        layer = [(m, c) for m, c in rest.items() if m[0] == top]
        lowered = {}
        for m, c in layer:
            del rest[m]
            low = (m[0] - 1,) + m[1:]
            coeff = c * inv
            s = R.get(low)
            R[low] = coeff if s is None else s + coeff
            lowered[low] = -coeff
        correction = mul(sig_rest, AlgebraElement(p, lowered))
        for m, c in correction.terms.items():
            s = rest.get(m)
            if s is None:
                rest[m] = c
            else:
                s = s + c
                if s:
                    rest[m] = s
                else:
                    del rest[m]
    N = AlgebraElement(p, {m: c for m, c in rest.items() if c})
    return N, AlgebraElement(p, {m: c for m, c in R.items() if c})


def n_part_power_formula_check(p: QciPresentation, alpha1, i: int) -> bool:
    """Check N((q^-1 a1 x_1 + q^-1 x_3 + ... + q^-1 x_{n-3} + x_{n-1})^i) = prod_j (1 - q^-j) x_{n-1}^i.

    The decomposition is taken relative to sigma = a1 x_1 + x_3 + ... + x_{n-1}.
    """
    n = p.n
    if n % 2 or n < 4:
        raise ValueError("needs even n >= 4")
    if not p.is_homogeneous():
        raise ValueError("needs a homogeneous presentation")
    a = p.exponents[0]
    if not 0 <= i <= a - 1:
        raise ValueError(f"i must lie in [0, {a - 1}]")
    F = p.field
    alpha1 = F(alpha1)
    if not alpha1:
        raise ZeroLeadingCoordinate("alpha_1 must be nonzero")
    q = p.commutators[0]
    qi = q.inverse()
    alpha = [F.zero] * n
    alpha[0] = alpha1
    for k in range(3, n, 2):
        alpha[k - 1] = F.one
    tau_coeffs = [F.zero] * n
    tau_coeffs[0] = qi * alpha1
    for k in range(3, n - 1, 2):
        tau_coeffs[k - 1] = qi
    tau_coeffs[n - 2] = F.one
    tau = sigma(p, tau_coeffs)
    lhs, _ = nr_decompose(power(tau, i), alpha)
    c = F.one
    for j in range(1, i + 1):
        c = c * (F.one - qi ** j)
    rhs = power(gen(p, n - 1), i).scale(c)
    return lhs == rhs


# --------------------------------------------------------------------------
# twisted tensor products
# --------------------------------------------------------------------------


def twist_factor(qs, z_vec, z: int):
    """g((z_1..z_n), z) = prod_i q_{i,n+1}^{-z z_i}."""
    out = None
    for q, zi in zip(qs, z_vec):
        t = q ** (-z * zi)
        out = t if out is None else out * t
    return out


def _check_tensor_inputs(p1: QciPresentation, p2: QciPresentation, last_commutators):
    if p1.field != p2.field:
        raise FieldMismatch("tensor factors over different fields")
    if p2.n != 1:
        raise ValueError("the second factor must have codimension 1")
    qs = [p1.field(q) for q in last_commutators]
    if len(qs) != p1.n:
        raise ValueError(f"need {p1.n} commutators q_(i,n+1)")
    return qs


def twisted_tensor(p1: QciPresentation, p2: QciPresentation, last_commutators) -> QciPresentation:
    """Presentation of p1 (x) p2 with the twist built from q_{i,n+1}."""
    qs = _check_tensor_inputs(p1, p2, last_commutators)
    n = p1.n
    comms = []
    for i in range(1, n + 2):
        for j in range(i + 1, n + 2):
            comms.append(qs[i - 1] if j == n + 1 else p1.q(i, j))
    return QciPresentation(p1.exponents + p2.exponents, tuple(comms), p1.field)


def twisted_structure_constants(p1: QciPresentation, p2: QciPresentation, last_commutators) -> dict:
    """Products of basis tensors under (l1 (x) g1)(l2 (x) g2) = g(|l2|, |g1|) l1 l2 (x) g1 g2.

    Keys and values use concatenated exponent vectors ``e + (c,)``; a
    product that vanishes maps to ``None``.
    """
    qs = _check_tensor_inputs(p1, p2, last_commutators)
    out = {}
    for e1, c1 in itertools.product(p1.basis, p2.basis):
        for e2, c2 in itertools.product(p1.basis, p2.basis):
            r1 = p1.monomial_product(e1, e2)
            r2 = p2.monomial_product(c1, c2)
            if r1 is None or r2 is None:
                out[e1 + c1, e2 + c2] = None
                continue
            g = twist_factor(qs, e2, c1[0])
            out[e1 + c1, e2 + c2] = (r1[0] + r2[0], g * r1[1] * r2[1])
    return out


def verify_twisted_isomorphism(p1: QciPresentation, p2: QciPresentation, last_commutators) -> bool:
    """Whether the twisted product matches the direct codimension-(n+1) presentation."""
    big = twisted_tensor(p1, p2, last_commutators)
    table = twisted_structure_constants(p1, p2, last_commutators)
    return all(big.monomial_product(e, f) == v for (e, f), v in table.items())
