"""Finite-dimensional algebras by structure constants, and their global dimension.

``C[i, j, :]`` holds the coordinates of e_i * e_j.  Global dimension is
computed only in characteristic 0, where the Jacobson radical is the kernel
of the trace form (x, y) -> Tr(L_{xy}).  Simples are required to be
one-dimensional (A/rad A split commutative); other algebras are refused.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from . import linalg as la
from .errors import DimensionMismatch, NonBasicAlgebra, NonUnitalInput, PositiveCharacteristic
from .scalars import Cyclo, Cyclotomic, FieldSpec

__all__ = [
    "AtLeast",
    "FdAlgebra",
    "global_dimension",
    "primitive_idempotents",
    "projective_dimensions",
    "radical_basis",
    "simples_one_dimensional",
    "tensor_algebras",
]


@dataclass(frozen=True)
class AtLeast:
    """A lower bound reported when a resolution did not stop in time."""

    bound: int

    def __str__(self):
        return f">={self.bound}"


class FdAlgebra:
    def __init__(self, field: FieldSpec, constants: np.ndarray, unit=None, degrees=None, check: bool = True):
        C = np.asarray(constants, dtype=field.dtype)
        d = C.shape[0]
        if C.shape != (d, d, d):
            raise DimensionMismatch(f"structure constants must be (d, d, d), got {C.shape}")
        self.field = field
        self.C = C
        self.dim = d
        self.degrees = None if degrees is None else [tuple(g) for g in degrees]
        self.unit = self._find_unit() if unit is None else field.vector(unit) if not isinstance(unit, np.ndarray) else unit
        if self.unit is None:
            raise NonUnitalInput("algebra has no two-sided unit")
        if check:
            if not self.is_associative(sample=None if d <= 64 else 200):
                raise ValueError("structure constants are not associative")
            if not self.unit_holds():
                raise NonUnitalInput("given unit is not a two-sided unit")

    # -- products ---------------------------------------------------------

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        F = self.field
        d = self.dim
        ix = np.flatnonzero(la._nonzero_mask(x))
        iy = np.flatnonzero(la._nonzero_mask(y))
        if not ix.size or not iy.size:
            return F.zeros((d,))
        xy = F.reduce(np.outer(x[ix], y[iy])).reshape(1, -1)
        return la.matmul(F, xy, self.C[np.ix_(ix, iy)].reshape(-1, d))[0]

    def left_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> x y."""
        F, d = self.field, self.dim
        T = la.matmul(F, x.reshape(1, d), self.C.reshape(d, d * d)).reshape(d, d)
        return np.ascontiguousarray(T.T)

    def right_matrix(self, y: np.ndarray) -> np.ndarray:
        """Matrix of x -> x y."""
        F, d = self.field, self.dim
        T = la.matmul(F, np.ascontiguousarray(self.C.transpose(0, 2, 1)).reshape(d * d, d), y.reshape(d, 1))
        return np.ascontiguousarray(T.reshape(d, d).T)

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros((self.dim,))
        v[i] = self.field.raw(1)
        return v

    def _find_unit(self):
        F, d = self.field, self.dim
        # u with u e_j = e_j and e_j u = e_j for all j
        A = np.concatenate(
            [np.ascontiguousarray(self.C[:, j, :].T) for j in range(d)]
            + [np.ascontiguousarray(self.C[j, :, :].T) for j in range(d)],
            axis=0,
        )
        b = np.concatenate([self.basis_vector(j) for j in range(d)] * 2)
        return la.solve(F, A, b)

    def unit_holds(self) -> bool:
        u = self.unit
        return la.is_zero(self.field.reduce(self.left_matrix(u) - self.field.eye(self.dim))) and la.is_zero(
            self.field.reduce(self.right_matrix(u) - self.field.eye(self.dim))
        )

    def is_associative(self, sample: int | None = None, rng: random.Random | None = None) -> bool:
        F, d = self.field, self.dim
        triples = [(i, j, k) for i in range(d) for j in range(d) for k in range(d)]
        if sample is not None:
            rng = rng or random.Random(0)
            triples = rng.sample(triples, min(sample, len(triples)))
        for i, j, k in triples:
            # (e_i e_j) e_k against e_i (e_j e_k)
            lhs = la.matmul(F, self.C[i, j].reshape(1, d), np.ascontiguousarray(self.C[:, k, :]))[0]
            rhs = la.matmul(F, self.C[j, k].reshape(1, d), np.ascontiguousarray(self.C[i, :, :]))[0]
            if not la.is_zero(F.reduce(lhs - rhs)):
                return False
        return True

    def opposite(self) -> FdAlgebra:
        return FdAlgebra(self.field, np.ascontiguousarray(self.C.transpose(1, 0, 2)), self.unit, self.degrees, check=False)

    def same_constants(self, other: FdAlgebra) -> bool:
        return self.dim == other.dim and bool(np.all(self.C == other.C))

    @classmethod
    def from_matrices(cls, field: FieldSpec, mats, degrees=None) -> FdAlgebra:
        """Algebra spanned by the given (independent, product-closed) square matrices.

        The basis element e_i is ``mats[i]`` and e_i e_j is the matrix product.
        """
        mats = list(mats)
        D = len(mats)
        if D == 0:
            raise DimensionMismatch("empty basis")
        s = mats[0].shape[0]
        B = np.stack([m.reshape(-1) for m in mats], axis=1)  # s^2 x D
        _, piv = la.rref(field, np.ascontiguousarray(B.T))
        if len(piv) != D:
            raise DimensionMismatch("matrices are linearly dependent")
        Bsub = B[piv, :]
        inv = la.solve(field, Bsub, field.eye(D))
        rows = [divmod(c, s) for c in piv]
        C = field.zeros((D, D, D))
        for i in range(D):
            Ri = np.stack([mats[i][r] for r, _ in rows])  # needed rows of mats[i]
            for j in range(D):
                Cj = np.stack([mats[j][:, c] for _, c in rows], axis=1)
                vals = _paired_dots(field, Ri, Cj)
                C[i, j] = la.matmul(field, inv, vals.reshape(D, 1))[:, 0]
        ident = field.eye(s).reshape(-1)
        unit = la.solve(field, B, ident)
        if unit is None:
            raise NonUnitalInput("identity matrix is not in the span")
        return cls(field, C, unit, degrees, check=D <= 16)

    def __repr__(self):
        return f"FdAlgebra(dim={self.dim}, field={self.field})"


def _paired_dots(F: FieldSpec, R: np.ndarray, C: np.ndarray) -> np.ndarray:
    """out[k] = R[k] . C[:, k]."""
    if R.dtype != object:
        return F.reduce((R * C.T).sum(axis=1) % F.characteristic)
    out = F.zeros((R.shape[0],))
    for k in range(R.shape[0]):
        acc = None
        for x, y in zip(R[k], C[:, k]):
            if x and y:
                acc = x * y if acc is None else acc + x * y
        if acc is not None:
            out[k] = acc
    return out


def tensor_algebras(A: FdAlgebra, B: FdAlgebra, factor=None) -> FdAlgebra:
    """A (x) B with (a1 (x) b1)(a2 (x) b2) = factor(i1, j1, i2, j2) a1 a2 (x) b1 b2.

    Basis index of e_i (x) f_j is i * dim B + j; ``factor`` receives basis
    indices and defaults to 1.
    """
    F = A.field
    dA, dB = A.dim, B.dim
    d = dA * dB
    C = F.zeros((d, d, d))
    for i1 in range(dA):
        for j1 in range(dB):
            for i2 in range(dA):
                ca = A.C[i1, i2]
                if la.is_zero(ca):
                    continue
                for j2 in range(dB):
                    cb = B.C[j1, j2]
                    if la.is_zero(cb):
                        continue
                    v = F.reduce(np.outer(ca, cb)).reshape(-1)
                    if factor is not None:
                        v = la.scalar_matrix(F, factor(i1, j1, i2, j2), v)
                    C[i1 * dB + j1, i2 * dB + j2] = v
    unit = F.reduce(np.outer(A.unit, B.unit)).reshape(-1)
    degrees = None
    if A.degrees is not None and B.degrees is not None:
        degrees = [ga + gb for ga in A.degrees for gb in B.degrees]
    return FdAlgebra(F, C, unit, degrees, check=False)


# --------------------------------------------------------------------------
# radical and idempotents
# --------------------------------------------------------------------------


def _require_char0(A: FdAlgebra):
    if A.field.characteristic != 0:
        raise PositiveCharacteristic("radical via the trace form needs characteristic 0")


def radical_basis(A: FdAlgebra) -> np.ndarray:
    """Columns spanning rad A, the kernel of the trace form."""
    _require_char0(A)
    F, d = A.field, A.dim
    traces = F.vector([F.wrap(x) for x in [_trace(A, k) for k in range(d)]])
    G = la.matmul(F, A.C.reshape(d * d, d), traces.reshape(d, 1)).reshape(d, d)
    return la.kernel_matrix(F, G)


def _trace(A: FdAlgebra, k: int):
    F = A.field
    acc = F.zero
    for m in range(A.dim):
        acc = acc + F.wrap(A.C[k, m, m])
    return F.raw(acc)


@dataclass
class _Semisimple:
    P: np.ndarray  # A -> B
    s: np.ndarray  # B -> A (linear section)
    C: np.ndarray  # structure constants of B
    radical: np.ndarray


def _semisimple_quotient(A: FdAlgebra) -> _Semisimple:
    F = A.field
    R = radical_basis(A)
    P, s = la.complement_projection(F, A.dim, R)
    m = P.shape[0]
    C = F.zeros((m, m, m))
    for i in range(m):
        for j in range(m):
            C[i, j] = la.matmul(F, P, A.mul(s[:, i], s[:, j]).reshape(-1, 1))[:, 0]
    return _Semisimple(P, s, C, R)


def _is_commutative(F, C) -> bool:
    return la.is_zero(F.reduce(C - C.transpose(1, 0, 2)))


def _b_mul(F, C, x, y):
    m = C.shape[0]
    return la.matmul(F, F.reduce(np.outer(x, y)).reshape(1, m * m), C.reshape(m * m, m))[0]


def _rational_coords(F, v) -> list:
    if isinstance(F, Cyclotomic):
        return [c for x in v for c in x.coefficients()]
    raise PositiveCharacteristic("needs characteristic 0")


def _split_commutative(F: Cyclotomic, C: np.ndarray, unit: np.ndarray, rng: random.Random, tries: int = 12):
    """Primitive idempotents of a commutative semisimple B, if B is split (k^m).

    A random z is read as an element of a Q-algebra; its minimal polynomial
    over Q is factored and the CRT idempotents are formed.  Success means
    every resulting component is one-dimensional over the base field.
    Returns None when no trial succeeds.
    """
    m = C.shape[0]
    t = sympy.Symbol("t")
    for _ in range(tries):
        # coefficients outside Q keep Galois-conjugate components apart
        z = F.vector([F([rng.randint(-9, 9) for _ in range(F.degree)]) for _ in range(m)])
        powers = [unit]
        # Q-linear dependency among 1, z, z^2, ...
        Q = Cyclotomic(2)
        while True:
            cols = np.stack([Q.vector(_rational_coords(F, v)) for v in powers], axis=1)
            ker = la.kernel_basis(Q, cols)
            if ker:
                coeffs = [x.coefficients()[0] for x in ker[0]]
                break
            powers.append(_b_mul(F, C, powers[-1], z))
        mu = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in coeffs])), t, domain="QQ")
        _, factors = mu.factor_list()
        if any(mult > 1 for _, mult in factors):
            continue  # not semisimple along z; try another element
        idems = []
        ok = True
        for f, _ in factors:
            rest = sympy.quo(mu, f)
            u = sympy.invert(rest.as_expr(), f.as_expr(), t)
            poly = sympy.Poly(sympy.rem(sympy.expand(u * rest.as_expr()), f.as_expr() * rest.as_expr(), t), t, domain="QQ")
            e = _eval_poly(F, C, unit, z, poly)
            if la.rank(F, _b_left(F, C, e)) != 1:
                ok = False
                break
            idems.append(e)
        if ok and len(idems) == m:
            return idems
    return None


def _b_left(F, C, x):
    m = C.shape[0]
    T = la.matmul(F, x.reshape(1, m), C.reshape(m, m * m)).reshape(m, m)
    return np.ascontiguousarray(T.T)


def _eval_poly(F, C, unit, z, poly) -> np.ndarray:
    out = F.zeros(unit.shape)
    pw = unit
    coeffs = list(reversed(poly.all_coeffs()))
    for k, c in enumerate(coeffs):
        if k:
            pw = _b_mul(F, C, pw, z)
        if c:
            out = F.reduce(out + pw * F.raw(F(Fraction(int(c.p), int(c.q)))))
    return out


def simples_one_dimensional(A: FdAlgebra, rng: random.Random | None = None) -> bool:
    """Whether A/rad A is split commutative, i.e. all simples are one-dimensional."""
    try:
        primitive_idempotents(A, rng)
    except NonBasicAlgebra:
        return False
    return True


def primitive_idempotents(A: FdAlgebra, rng: random.Random | None = None) -> list[np.ndarray]:
    """Complete set of orthogonal primitive idempotents (all simples one-dimensional).

    Raises NonBasicAlgebra when A/rad A is not split commutative.
    """
    _require_char0(A)
    cache = A.__dict__.get("_idempotents")
    if cache is not None:
        return cache
    F = A.field
    rng = rng or random.Random(0)
    ss = _semisimple_quotient(A)
    m = ss.C.shape[0]
    if not _is_commutative(F, ss.C):
        raise NonBasicAlgebra("A/rad A is not commutative")
    unit_b = la.matmul(F, ss.P, A.unit.reshape(-1, 1))[:, 0]
    if m == 1:
        bars = [unit_b]
    else:
        bars = _split_commutative(F, ss.C, unit_b, rng)
        if bars is None:
            raise NonBasicAlgebra("A/rad A does not split into copies of the base field")
    bars.sort(key=lambda v: next(i for i, x in enumerate(v) if x))
    idems = []
    total = F.zeros((A.dim,))
    one = A.unit
    for k, eb in enumerate(bars):
        if k == len(bars) - 1:
            e = F.reduce(one - total)
        else:
            y = la.matmul(F, ss.s, eb.reshape(-1, 1))[:, 0]
            c = F.reduce(one - total)
            e = A.mul(A.mul(c, y), c)
            e = _newton_idempotent(A, e)
        idems.append(e)
        total = F.reduce(total + e)
    A._idempotents = idems
    return idems


def _newton_idempotent(A: FdAlgebra, e: np.ndarray) -> np.ndarray:
    F = A.field
    while True:
        e2 = A.mul(e, e)
        if np.all(e2 == e):
            return e
        e3 = A.mul(e2, e)
        e = F.reduce(e2 * F.raw(3) - e3 * F.raw(2))


# --------------------------------------------------------------------------
# minimal resolutions
# --------------------------------------------------------------------------


def _arrow_elements(A: FdAlgebra, R: np.ndarray) -> list[np.ndarray]:
    """Elements of rad A whose classes span rad/rad^2 (they generate rad as a right ideal)."""
    F = A.field
    if R.shape[1] == 0:
        return []
    prods = [A.mul(R[:, i], R[:, j]) for i in range(R.shape[1]) for j in range(R.shape[1])]
    R2 = np.stack(prods, axis=1) if prods else F.zeros((A.dim, 0))
    cur = la.column_space_basis(F, R2).T if R2.shape[1] else F.zeros((A.dim, 0))
    out = []
    for i in range(R.shape[1]):
        v = R[:, i : i + 1]
        trial = np.concatenate([cur, v], axis=1)
        if la.rank(F, trial) > cur.shape[1]:
            cur = trial
            out.append(R[:, i])
    return out


def _act_blocks(F, L: np.ndarray, V: np.ndarray, t: int) -> np.ndarray:
    """Apply L to each of the t stacked blocks of the columns of V."""
    d = L.shape[0]
    return np.concatenate([la.matmul(F, L, V[k * d : (k + 1) * d]) for k in range(t)], axis=0)


def _independent_columns(F, V: np.ndarray) -> np.ndarray:
    if V.shape[1] == 0:
        return V
    return np.ascontiguousarray(la.column_space_basis(F, V).T)


def projective_dimensions(A: FdAlgebra, max_steps: int, idempotents=None) -> list:
    """pd of each simple (ordered like the idempotents); AtLeast(max_steps) when unresolved."""
    _require_char0(A)
    F = A.field
    idems = primitive_idempotents(A) if idempotents is None else idempotents
    R = radical_basis(A)
    arrows = _arrow_elements(A, R)
    L_arrows = [A.left_matrix(u) for u in arrows]
    L_idem = [A.left_matrix(e) for e in idems]
    proj_basis = [_independent_columns(F, A.right_matrix(e)) for e in idems]  # A e
    out = []
    for r, e in enumerate(idems):
        # Omega^1 S_r = rad(A e_r) = (arrows) A e_r
        W = _independent_columns(F, np.concatenate([la.matmul(F, L, proj_basis[r]) for L in L_arrows], axis=1)) if L_arrows else F.zeros((A.dim, 0))
        t = 1
        step = 1
        while W.shape[1] and step < max_steps:
            W, t = _next_syzygy(A, W, t, L_arrows, L_idem, idems, proj_basis)
            step += 1
        out.append(AtLeast(max_steps) if W.shape[1] else step - 1)
    return out


def _next_syzygy(A, W, t, L_arrows, L_idem, idems, proj_basis):
    F = A.field
    d = A.dim
    rad = np.concatenate([_act_blocks(F, L, W, t) for L in L_arrows], axis=1) if L_arrows else F.zeros((t * d, 0))
    cur = _independent_columns(F, rad)
    gens = []  # (idempotent index, vector in A^t)
    for s, Le in enumerate(L_idem):
        cand = _act_blocks(F, Le, W, t)
        for k in range(cand.shape[1]):
            v = cand[:, k : k + 1]
            if la.is_zero(v):
                continue
            trial = np.concatenate([cur, v], axis=1)
            if la.rank(F, trial) > cur.shape[1]:
                cur = trial
                gens.append((s, v[:, 0]))
    # cover P' = sum_g A e_{s_g} -> A^t, a e_s -> a g
    blocks, embed = [], []
    for s, g in gens:
        Bs = proj_basis[s]
        Rg = np.concatenate([A.right_matrix(g[k * d : (k + 1) * d]) for k in range(t)], axis=0)
        blocks.append(la.matmul(F, Rg, Bs))
        embed.append(Bs)
    phi = np.concatenate(blocks, axis=1)
    K = la.kernel_matrix(F, phi)
    t2 = len(gens)
    # kernel coordinates -> vectors in A^{t2}
    rows = []
    off = 0
    for Bs in embed:
        k = Bs.shape[1]
        rows.append(la.matmul(F, Bs, K[off : off + k]))
        off += k
    W2 = np.concatenate(rows, axis=0) if rows else F.zeros((0, 0))
    return _independent_columns(F, W2), t2


def global_dimension(A: FdAlgebra, max_steps: int | None = None):
    """Maximum projective dimension of the simples, or AtLeast(max_steps)."""
    _require_char0(A)
    if max_steps is None:
        max_steps = 8
    pds = projective_dimensions(A, max_steps)
    bounded = [x for x in pds if isinstance(x, AtLeast)]
    if bounded:
        return AtLeast(max_steps)
    return max(pds)
