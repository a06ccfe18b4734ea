"""Dense exact linear algebra over a :class:`~qci.scalars.FieldSpec`.

Matrices are numpy arrays holding raw field data: ``int64`` residues for
F_p (reduced after every step) and ``object`` arrays of
:class:`~qci.scalars.Cyclo` for cyclotomic fields.  Pivoting always takes
the first nonzero entry in column order, so every routine is deterministic.

Over cyclotomic fields :func:`rank` uses fraction-free elimination on
integer coefficient vectors (entries of Z[zeta] with content removal);
:func:`rref`, :func:`kernel_basis` and :func:`solve` use ordinary
Gauss-Jordan elimination with field inverses.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import DimensionMismatch
from .scalars import Cyclotomic, FieldSpec, _cyclotomic_poly, _reduce_poly

__all__ = [
    "ExactMatrix",
    "in_column_space",
    "kernel_basis",
    "matmul",
    "rank",
    "rref",
    "solve",
]


def _nonzero_mask(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        return np.fromiter((bool(x) for x in arr.flat), dtype=bool, count=arr.size).reshape(arr.shape)
    return arr != 0


def matmul(F: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    if A.dtype == object or B.dtype == object:
        if A.shape[1] == 0:
            return F.zeros((A.shape[0], B.shape[1]))
        if isinstance(F, Cyclotomic):
            return _cyclo_matmul(F, A, B)
        return F.reduce(A.dot(B))
    # int64: guard against overflow of long dot products
    p = F.characteristic
    if A.shape[1] * (p - 1) ** 2 < 2**62:
        return A.dot(B) % p
    return (A.astype(object).dot(B.astype(object)) % p).astype(np.int64)


def _cyclo_matmul(F: Cyclotomic, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    out = F.zeros((A.shape[0], B.shape[1]))
    Bnz = [[(k, B[k, j]) for k in range(B.shape[0]) if B[k, j]] for j in range(B.shape[1])]
    for i in range(A.shape[0]):
        row = A[i]
        for j, col in enumerate(Bnz):
            acc = None
            for k, b in col:
                x = row[k]
                if x:
                    acc = x * b if acc is None else acc + x * b
            if acc is not None:
                out[i, j] = acc
    return out


def rref(F: FieldSpec, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    A = np.array(A, dtype=F.dtype, copy=True)
    if A.ndim != 2:
        raise DimensionMismatch("rref expects a matrix")
    m, n = A.shape
    pivots: list[int] = []
    r = 0
    obj = A.dtype == object
    for c in range(n):
        if r == m:
            break
        col = A[r:, c]
        nz = np.flatnonzero(_nonzero_mask(col))
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = F.inv_raw(A[r, c])
        A[r] = F.reduce(A[r] * inv)
        colv = A[:, c].copy()
        colv[r] = 0
        rows = np.flatnonzero(_nonzero_mask(colv))
        if rows.size:
            if obj:
                pr = A[r]
                for i in rows:
                    A[i] = F.reduce(A[i] - pr * colv[i])
            else:
                A[rows] = F.reduce(A[rows] - np.outer(colv[rows], A[r]))
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(F: FieldSpec, A: np.ndarray) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    if isinstance(F, Cyclotomic):
        return _fraction_free_rank(F, A)
    return len(rref(F, A)[1])


# -- fraction-free elimination over Z[zeta] ---------------------------------


def _zz_mul(x: tuple, y: tuple, phi: tuple) -> list[int]:
    d = len(x)
    prod = [0] * (2 * d - 1)
    for i, u in enumerate(x):
        if u:
            for j, v in enumerate(y):
                if v:
                    prod[i + j] += u * v
    return _reduce_poly(prod, phi)


def _fraction_free_rank(F: Cyclotomic, A: np.ndarray) -> int:
    phi = _cyclotomic_poly(F.a)
    d = F.degree
    rows = []
    for i in range(A.shape[0]):
        entries = [A[i, j] for j in range(A.shape[1])]
        den = 1
        for e in entries:
            den = den * e.den // gcd(den, e.den)
        # scale row into Z[zeta]
        rows.append([tuple(c * (den // e.den) for c in e.num) for e in entries])
    zero = (0,) * d
    m, n = len(rows), A.shape[1]
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((k for k in range(r, m) if any(rows[k][c])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for k in range(r + 1, m):
            f = rows[k][c]
            if not any(f):
                continue
            new = []
            g = 0
            for pe, ke in zip(rows[r], rows[k]):
                a1 = _zz_mul(p, ke, phi) if any(ke) else list(zero)
                a2 = _zz_mul(f, pe, phi) if any(pe) else list(zero)
                v = tuple(s - t for s, t in zip(a1, a2))
                for x in v:
                    g = gcd(g, x)
                new.append(v)
            if g > 1:
                new = [tuple(x // g for x in v) for v in new]
            rows[k] = new
        r += 1
    return r


def kernel_basis(F: FieldSpec, A: np.ndarray) -> list[np.ndarray]:
    """Basis of the right null space ``{v : A v = 0}``."""
    A = np.asarray(A)
    n = A.shape[1]
    if A.shape[0] == 0:
        R, pivots = F.zeros((0, n)), []
    else:
        R, pivots = rref(F, A)
    pivset = set(pivots)
    basis = []
    for free in range(n):
        if free in pivset:
            continue
        v = F.zeros((n,))
        v[free] = F.raw(1)
        for row, pc in enumerate(pivots):
            if R[row, free]:
                v[pc] = F.reduce(-R[row, free : free + 1])[0]
        basis.append(v)
    return basis


def kernel_matrix(F: FieldSpec, A: np.ndarray) -> np.ndarray:
    """Kernel basis as the columns of a matrix (possibly with zero columns)."""
    basis = kernel_basis(F, A)
    if not basis:
        return F.zeros((A.shape[1], 0))
    return np.stack(basis, axis=1)


def solve(F: FieldSpec, A: np.ndarray, b: np.ndarray):
    """Some solution of ``A x = b`` or ``None`` when the system is inconsistent.

    ``b`` may be a vector or a matrix of right-hand sides (then all columns
    must be solvable).
    """
    A = np.asarray(A)
    b = np.asarray(b)
    vec = b.ndim == 1
    B = b.reshape(-1, 1) if vec else b
    if B.shape[0] != A.shape[0]:
        raise DimensionMismatch(f"matrix has {A.shape[0]} rows, rhs has {B.shape[0]}")
    n = A.shape[1]
    aug = np.concatenate([np.asarray(A, dtype=F.dtype), np.asarray(B, dtype=F.dtype)], axis=1)
    if aug.shape[0] == 0:
        X = F.zeros((n, B.shape[1]))
        return X[:, 0] if vec else X
    R, pivots = rref(F, aug)
    if pivots and pivots[-1] >= n:
        return None
    X = F.zeros((n, B.shape[1]))
    for row, pc in enumerate(pivots):
        X[pc] = R[row, n:]
    return X[:, 0] if vec else X


def in_column_space(F: FieldSpec, A: np.ndarray, v: np.ndarray) -> bool:
    A = np.asarray(A)
    v = np.asarray(v)
    if v.shape[0] != A.shape[0]:
        raise DimensionMismatch(f"matrix has {A.shape[0]} rows, vector has {v.shape[0]}")
    V = v.reshape(-1, 1) if v.ndim == 1 else v
    if A.shape[1] == 0:
        return not _nonzero_mask(V).any()
    return rank(F, np.concatenate([A, V], axis=1)) == rank(F, A)


def column_space_basis(F: FieldSpec, A: np.ndarray) -> np.ndarray:
    """Rows of the RREF of ``A.T``: a canonical basis of the column space."""
    if A.shape[1] == 0:
        return F.zeros((0, A.shape[0]))
    return rref(F, np.ascontiguousarray(A.T))[0]


def complement_projection(F, dim: int, B: np.ndarray):
    """Projection V -> V/col(B) and a section, both on the non-pivot coordinates."""
    if B.shape[1] == 0:
        S, piv = F.zeros((0, dim)), []
    else:
        S, piv = rref(F, np.ascontiguousarray(B.T))
    pivset = set(piv)
    keep = [c for c in range(dim) if c not in pivset]
    eye = F.eye(dim)
    P = eye[keep, :].copy()
    for r, c in enumerate(piv):
        # v -> v - v[c] * S[r] on the kept coordinates
        P[:, c] = F.reduce(P[:, c] - S[r, keep])
    section = eye[:, keep].copy()
    return P, section


@dataclass(frozen=True, eq=False)
class ExactMatrix:
    """Thin immutable wrapper pairing raw matrix data with its field."""

    field: FieldSpec
    data: np.ndarray

    @classmethod
    def from_rows(cls, field: FieldSpec, rows) -> ExactMatrix:
        rows = list(rows)
        if not rows:
            return cls(field, field.zeros((0, 0)))
        return cls(field, field.array(rows))

    @classmethod
    def zero(cls, field: FieldSpec, rows: int, cols: int) -> ExactMatrix:
        return cls(field, field.zeros((rows, cols)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> ExactMatrix:
        return cls(field, field.eye(n))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    def __getitem__(self, idx):
        return self.field.wrap(self.data[idx])

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and bool(np.all(self.data == other.data))

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        return ExactMatrix(self.field, matmul(self.field, self.data, other.data))

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(self.field, np.ascontiguousarray(self.data.T))

    T = property(transpose)

    def rank(self) -> int:
        return rank(self.field, self.data)

    def kernel_basis(self) -> list[list]:
        return [[self.field.wrap(x) for x in v] for v in kernel_basis(self.field, self.data)]

    def solve(self, b):
        x = solve(self.field, self.data, self.field.vector(b))
        return None if x is None else [self.field.wrap(t) for t in x]

    def in_column_space(self, v) -> bool:
        return in_column_space(self.field, self.data, self.field.vector(v))

    def to_rows(self) -> list[list]:
        return [[self.field.wrap(x) for x in row] for row in self.data]

    def dump_csv(self, path) -> None:
        """Debug dump; only active when ``QCI_DUMP_MATRICES`` is set."""
        if not os.environ.get("QCI_DUMP_MATRICES"):
            return
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            for row in self.data:
                w.writerow([str(self.field.wrap(x)) for x in row])


def scalar_matrix(F: FieldSpec, scalar, A: np.ndarray) -> np.ndarray:
    return F.reduce(A * F.raw(scalar))


def is_zero(A: np.ndarray) -> bool:
    return not _nonzero_mask(np.asarray(A)).any()
