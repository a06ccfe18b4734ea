"""Subalgebra towers, graded generators and endomorphism algebras.

The generator for the upper bound is built inductively: over k[x]/(x^a)
it is the sum of all k[x]/(x^i), each generated in degree 0; in
codimension n+1 it is the twisted tensor product of the codimension-n
generator with the one for the last variable.  Endomorphism algebras are
taken either in degree 0 (graded) or in all degrees with the induced
grading (full).

Composition convention: e_i e_j is the composite phi_i o phi_j, so
End(Lambda) is the opposite of Lambda (endomorphisms are right
multiplications).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from . import modules as md
from .algebra import QciPresentation, gen, homogeneous, twist_factor, twisted_tensor
from .errors import FieldMismatch, InvalidChainStep, ZeroModule
from .fdalgebra import (
    AtLeast,
    FdAlgebra,
    global_dimension,
    primitive_idempotents,
    projective_dimensions,
    simples_one_dimensional,
    tensor_algebras,
)
from .scalars import FieldSpec

__all__ = [
    "GradedModule",
    "SubalgebraInclusion",
    "auslander_generator_n1",
    "chain_steps",
    "endomorphism_algebra",
    "endomorphism_tensor_check",
    "graded_hom_space",
    "restrict",
    "summand_witness",
    "tensor_module",
    "tensor_pd_check",
    "upper_bound_report",
    "upper_generator",
    "verify_freeness",
]


# --------------------------------------------------------------------------
# subalgebras
# --------------------------------------------------------------------------


class SubalgebraInclusion:
    """Lambda_{i_1..i_t} inside Lambda, with the retraction killing the other generators."""

    def __init__(self, ambient: QciPresentation, indices):
        idx = tuple(int(i) for i in indices)
        if not idx or len(set(idx)) != len(idx) or any(not 1 <= i <= ambient.n for i in idx):
            raise InvalidChainStep(f"bad index set {idx} for codimension {ambient.n}")
        self.ambient = ambient
        self.indices = idx
        comms = []
        for u in range(len(idx)):
            for v in range(u + 1, len(idx)):
                i, j = idx[u], idx[v]
                comms.append(ambient.q(i, j) if i < j else ambient.q(j, i).inverse())
        self.sub = QciPresentation(tuple(ambient.exponents[i - 1] for i in idx), tuple(comms), ambient.field)

    def include(self, x):
        out = self.ambient.zero()
        for m, c in x.terms.items():
            word = self.ambient.one()
            for k, e in enumerate(m):
                for _ in range(e):
                    word = word * gen(self.ambient, self.indices[k])
            out = out + word.scale(c)
        return out

    def retract(self, y):
        pos = {i: k for k, i in enumerate(self.indices)}
        out = self.sub.zero()
        for m, c in y.terms.items():
            if any(e and (i + 1) not in pos for i, e in enumerate(m)):
                continue
            # ambient PBW order is ascending index; rebuild the word in sub
            word = self.sub.one()
            for i, e in enumerate(m):
                for _ in range(e):
                    word = word * gen(self.sub, pos[i + 1] + 1)
            out = out + word.scale(c)
        return out

    def composition_is_identity(self) -> bool:
        return all(self.retract(self.include(self.sub.monomial(m))) == self.sub.monomial(m) for m in self.sub.basis)


def restrict(M: md.FdModule, inc: SubalgebraInclusion) -> md.FdModule:
    if M.presentation != inc.ambient:
        raise md.PresentationMismatch("module is not over the ambient algebra")
    return md.FdModule(inc.sub, [M.actions[i - 1] for i in inc.indices])


@dataclass
class ChainStep:
    small: tuple
    big: tuple
    free: bool
    rank: int
    expected_rank: int
    retraction_ok: bool

    @property
    def ok(self) -> bool:
        return self.free and self.rank == self.expected_rank and self.retraction_ok

    def to_dict(self) -> dict:
        return {
            "small": list(self.small),
            "big": list(self.big),
            "free": self.free,
            "rank": self.rank,
            "expected_rank": self.expected_rank,
            "retraction_ok": self.retraction_ok,
        }


def verify_freeness(p: QciPresentation, small, big) -> ChainStep:
    """Lambda_big = sum_{j < a_new} Lambda_small x_new^j as a free left Lambda_small-module.

    The step must add exactly one index.  An empty ``small`` stands for k.
    """
    small, big = tuple(small), tuple(big)
    extra = [i for i in big if i not in small]
    if len(big) != len(small) + 1 or len(extra) != 1 or any(i not in big for i in small):
        raise InvalidChainStep(f"{small} -> {big} does not add exactly one index")
    new = extra[0]
    inc_big = SubalgebraInclusion(p, big)
    pb = inc_big.sub
    a_new = p.exponents[new - 1]
    # the subalgebra on ``small`` viewed inside Lambda_big
    pos = {i: k + 1 for k, i in enumerate(big)}
    small_words = [pb.one()]
    for i in small:
        a = p.exponents[i - 1]
        small_words = [w * gen(pb, pos[i]) ** k for w in small_words for k in range(a)]
    cols = []
    xnew = gen(pb, pos[new])
    for j in range(a_new):
        for w in small_words:
            cols.append((w * xnew**j).vector())
    A = np.stack(cols, axis=1)
    r = la.rank(pb.field, A)
    free = r == pb.dim == len(cols)
    retraction_ok = inc_big.composition_is_identity()
    if small:
        retraction_ok = retraction_ok and SubalgebraInclusion(p, small).composition_is_identity()
    return ChainStep(small, big, free, a_new if free else 0, a_new, retraction_ok)


def chain_steps(p: QciPresentation) -> list[ChainStep]:
    """Every step of every chain Lambda_{i_1} < Lambda_{i_1,i_2} < ... < Lambda."""
    seen = {}
    for order in itertools.permutations(range(1, p.n + 1)):
        for t in range(1, p.n + 1):
            small, big = order[: t - 1], order[:t]
            key = (small, big)
            if key not in seen:
                seen[key] = verify_freeness(p, small, big)
    return [seen[k] for k in sorted(seen)]


# --------------------------------------------------------------------------
# graded modules and the generator
# --------------------------------------------------------------------------


@dataclass(eq=False)
class GradedModule:
    module: md.FdModule
    degrees: list  # Z^n degree of each basis vector
    summand_inclusion: np.ndarray | None = field(default=None, repr=False)  # Lambda -> M
    summand_projection: np.ndarray | None = field(default=None, repr=False)  # M -> Lambda

    def __post_init__(self):
        self.degrees = [tuple(int(x) for x in g) for g in self.degrees]
        if len(self.degrees) != self.module.dim:
            raise md.InvalidModule("one degree per basis vector required")

    @property
    def presentation(self) -> QciPresentation:
        return self.module.presentation

    @property
    def dim(self) -> int:
        return self.module.dim

    def is_graded(self) -> bool:
        """x_i raises degrees by the i-th unit vector."""
        n = self.presentation.n
        for i, A in enumerate(self.module.actions):
            for r, c in zip(*np.nonzero(la._nonzero_mask(A))):
                want = tuple(g + (1 if k == i else 0) for k, g in enumerate(self.degrees[c]))
                if self.degrees[r] != want:
                    return False
        return True


def auslander_generator_n1(a: int, field: FieldSpec) -> GradedModule:
    """sum_{i=1}^a k[x]/(x^i) over k[x]/(x^a), every summand generated in degree 0."""
    if a < 2:
        raise ValueError("a must be at least 2")
    p = QciPresentation((a,), (), field)
    dim = a * (a + 1) // 2
    A = field.zeros((dim, dim))
    degrees = []
    off = 0
    for i in range(1, a + 1):
        for k in range(i):
            degrees.append((k,))
            if k + 1 < i:
                A[off + k + 1, off + k] = field.raw(1)
        off += i
    M = md.FdModule(p, [A])
    start = dim - a  # the i = a summand is Lambda
    inc = field.zeros((dim, a))
    proj = field.zeros((a, dim))
    for k in range(a):
        inc[start + k, k] = field.raw(1)
        proj[k, start + k] = field.raw(1)
    return GradedModule(M, degrees, inc, proj)


def _g(qs, z_vec, z):
    return twist_factor(qs, z_vec, z)


def tensor_module(M1: GradedModule, M2: GradedModule, last_commutators) -> GradedModule:
    """M1 (x)^g M2 over the twisted tensor algebra; basis m1 (x) m2 in Kronecker order."""
    p1, p2 = M1.presentation, M2.presentation
    if p1.field != p2.field:
        raise FieldMismatch("tensor factors over different fields")
    F = p1.field
    big = twisted_tensor(p1, p2, last_commutators)
    qs = [F(q) for q in last_commutators]
    I2 = F.eye(M2.dim)
    acts = [_kron(F, A, I2) for A in M1.module.actions]
    D = F.zeros((M1.dim, M1.dim))
    for k, z in enumerate(M1.degrees):
        D[k, k] = F.raw(_g(qs, z, 1))
    acts.append(_kron(F, D, M2.module.actions[0]))
    M = md.FdModule(big, acts)
    degrees = [z1 + z2 for z1 in M1.degrees for z2 in M2.degrees]
    inc = proj = None
    if M1.summand_inclusion is not None and M2.summand_inclusion is not None:
        inc = _kron(F, M1.summand_inclusion, M2.summand_inclusion)
        proj = _kron(F, M1.summand_projection, M2.summand_projection)
    return GradedModule(M, degrees, inc, proj)


def _kron(F, A, B):
    return F.reduce(np.kron(A, B))


def upper_generator(p: QciPresentation) -> GradedModule:
    """The inductive generator over Lambda_1, Lambda_{1,2}, ..., Lambda."""
    F = p.field
    M = auslander_generator_n1(p.exponents[0], F)
    for j in range(2, p.n + 1):
        qs = [p.q(i, j) for i in range(1, j)]
        M = tensor_module(M, auslander_generator_n1(p.exponents[j - 1], F), qs)
    assert M.presentation == p
    return M


def summand_witness(M: GradedModule) -> dict:
    """Lambda is a direct summand of M, via explicit degree-0 split maps."""
    p = M.presentation
    F = p.field
    L = md.regular_module(p)
    inc = md.ModuleHom(L, M.module, M.summand_inclusion)
    proj = md.ModuleHom(M.module, L, M.summand_projection)
    return {
        "inclusion_equivariant": inc.is_equivariant(),
        "projection_equivariant": proj.is_equivariant(),
        "split": bool(np.all(la.matmul(F, proj.matrix, inc.matrix) == F.eye(p.dim))),
    }


# --------------------------------------------------------------------------
# endomorphism algebras
# --------------------------------------------------------------------------


def _degree_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def graded_hom_space(M: GradedModule, N: GradedModule, d) -> list[md.ModuleHom]:
    """Homs of degree ``d``: M_z -> N_{z+d}."""
    d = tuple(d)
    gens = md.cover_generators(M.module)
    allowed = []
    for c in gens:
        want = tuple(x + y for x, y in zip(M.degrees[c], d))
        allowed.append([k for k, g in enumerate(N.degrees) if g == want])
    return md.homs_with_images(M.module, N.module, allowed)


def _hom_degrees(M: GradedModule, N: GradedModule) -> list:
    return sorted({_degree_sub(b, a) for a in M.degrees for b in N.degrees})


def endomorphism_algebra(M, graded: bool = False) -> FdAlgebra:
    """End(M) by structure constants, e_i e_j = phi_i o phi_j.

    For a GradedModule, ``graded=True`` keeps degree 0 only; otherwise the
    basis is homogeneous and the algebra records each element's degree.
    A plain FdModule gives the full End without degrees.
    """
    module = M.module if isinstance(M, GradedModule) else M
    if module.dim == 0:
        raise ZeroModule("End of the zero module")
    F = module.field
    if not isinstance(M, GradedModule):
        homs = md.hom_space(module, module)
        return FdAlgebra.from_matrices(F, [h.matrix for h in homs])
    degs = [(0,) * len(M.degrees[0])] if graded else _hom_degrees(M, M)
    mats, degrees = [], []
    for d in degs:
        for h in graded_hom_space(M, M, d):
            mats.append(h.matrix)
            degrees.append(d)
    return FdAlgebra.from_matrices(F, mats, degrees)


def _end_basis(M: GradedModule, graded: bool):
    degs = [(0,) * len(M.degrees[0])] if graded else _hom_degrees(M, M)
    out = []
    for d in degs:
        out.extend((h.matrix, d) for h in graded_hom_space(M, M, d))
    return out


def endomorphism_tensor_check(M1: GradedModule, M2: GradedModule, last_commutators, graded: bool = False) -> dict:
    """End(M1 (x)^g M2) against End(M1) (x) End(M2) with the induced twist.

    phi1 (x) phi2 acts by m1 (x) m2 -> g(|phi1|, |m2|) phi1 m1 (x) phi2 m2;
    these matrices multiply by (phi1 (x) phi2)(psi1 (x) psi2) =
    g(|phi1|, |psi2|) phi1 psi1 (x) phi2 psi2.
    """
    F = M1.presentation.field
    qs = [F(q) for q in last_commutators]
    T = tensor_module(M1, M2, qs)
    B1, B2 = _end_basis(M1, graded), _end_basis(M2, graded)
    mats, degs = [], []
    for phi1, d1 in B1:
        for phi2, d2 in B2:
            D = F.zeros((M2.dim, M2.dim))
            for k, z in enumerate(M2.degrees):
                D[k, k] = F.raw(_g(qs, d1, z[0]))
            mats.append(_kron(F, phi1, la.matmul(F, phi2, D)))
            degs.append(d1 + d2)
    equivariant = all(md.ModuleHom(T.module, T.module, X).is_equivariant() for X in mats)
    if graded:
        target_dim = len(graded_hom_space(T, T, (0,) * len(T.degrees[0])))
    else:
        target_dim = len(md.hom_space(T.module, T.module))
    out = {"equivariant": equivariant, "dim_end": target_dim, "dim_product": len(mats)}
    gamma = FdAlgebra.from_matrices(F, mats, degs) if equivariant else None
    G1 = FdAlgebra.from_matrices(F, [m for m, _ in B1], [d for _, d in B1])
    G2 = FdAlgebra.from_matrices(F, [m for m, _ in B2], [d for _, d in B2])
    n2 = len(B2)

    def factor(i1, j1, i2, j2):
        return _g(qs, B1[i1][1], B2[j2][1][0])

    twisted = tensor_algebras(G1, G2, factor)
    out["basis"] = target_dim == len(mats)
    out["structure_constants_match"] = gamma is not None and gamma.same_constants(twisted)
    out["ok"] = equivariant and out["basis"] and out["structure_constants_match"]
    return out


def tensor_pd_check(M1: GradedModule, M2: GradedModule, last_commutators, max_steps: int = 10) -> dict:
    """pd(S1 (x) S2) <= pd(S1) + pd(S2) for the degree-0 End algebras."""
    F = M1.presentation.field
    G1 = endomorphism_algebra(M1, graded=True)
    G2 = endomorphism_algebra(M2, graded=True)
    e1, e2 = primitive_idempotents(G1), primitive_idempotents(G2)
    pd1 = projective_dimensions(G1, max_steps, e1)
    pd2 = projective_dimensions(G2, max_steps, e2)
    T = tensor_module(M1, M2, last_commutators)
    G = endomorphism_algebra(T, graded=True)
    # identify G with G1 (x) G2 through the Kronecker basis
    prod = tensor_algebras(G1, G2)
    idems = [F.reduce(np.outer(a, b)).reshape(-1) for a in e1 for b in e2]
    pds = projective_dimensions(prod, max_steps, idems)
    rows = []
    ok = G.dim == prod.dim
    for k, pd in enumerate(pds):
        a, b = pd1[k // len(e2)], pd2[k % len(e2)]
        bound_ok = not isinstance(pd, AtLeast) and not isinstance(a, AtLeast) and not isinstance(b, AtLeast) and pd <= a + b
        ok = ok and bound_ok
        rows.append({"pd": str(pd), "pd1": str(a), "pd2": str(b), "ok": bound_ok})
    return {"rows": rows, "dims_match": G.dim == prod.dim, "ok": ok}


def _gldim_entry(A: FdAlgebra, max_steps: int) -> dict:
    one_dim = simples_one_dimensional(A)
    gd = global_dimension(A, max_steps) if one_dim else None
    return {
        "dim_End": A.dim,
        "simples_one_dimensional": one_dim,
        "gldim": None if gd is None else str(gd) if isinstance(gd, AtLeast) else gd,
    }


def upper_bound_report(n: int, a: int, field: FieldSpec, q=None, full_end_limit: int = 64) -> dict:
    """gldim of the graded End of the generator, with the full End alongside when small."""
    p = homogeneous(n, a, field, q) if n > 1 else QciPresentation((a,), (), field)
    M = upper_generator(p)
    max_steps = 2 * n + 4
    graded = endomorphism_algebra(M, graded=True)
    entry = _gldim_entry(graded, max_steps)
    gd = entry["gldim"]
    satisfied = isinstance(gd, int) and gd <= 2 * n and entry["simples_one_dimensional"]
    report = {
        "n": n,
        "a": a,
        "field": str(field),
        "dim_M": M.dim,
        "dim_End": graded.dim,
        "graded": True,
        "simples_one_dimensional": entry["simples_one_dimensional"],
        "gldim": gd,
        "bound_2n": 2 * n,
        "satisfied": bool(satisfied),
        "summand": summand_witness(M),
    }
    full_dim = _full_end_dim(M)
    if full_dim <= full_end_limit:
        full = _gldim_entry(endomorphism_algebra(M, graded=False), max_steps)
        full["skipped"] = False
    else:
        full = {"dim_End": full_dim, "skipped": True}
    report["full_end"] = full
    return report


def _full_end_dim(M: GradedModule) -> int:
    return sum(len(graded_hom_space(M, M, d)) for d in _hom_degrees(M, M))
