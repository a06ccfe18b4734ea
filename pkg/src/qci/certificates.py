"""Non-membership certificates for the words w_alpha.

For even n the word

    w_alpha = x_{n-1} S(x_n) x_{n-3} S(x_{n-2}) ... x_3 S(x_4) x_2,
    S(x) = sum_{i=0}^{a-2} sigma^i x sigma^{a-2-i},

is homogeneous of degree (n/2 - 1)a + 1.  The set V collects the alpha with
w_alpha outside sigma*Lambda + Lambda*sigma.  Membership is decided by exact
linear algebra; the lambda-coefficient of N(w_alpha) is a one-sided
certificate (nonzero implies non-membership).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .algebra import (
    AlgebraElement,
    QciPresentation,
    gen,
    graded_component_basis,
    homogeneous,
    left_mult_matrix,
    nr_decompose,
    power,
    right_mult_matrix,
    sigma,
    substitute,
)
from .errors import (
    InhomogeneousElement,
    InvalidModule,
    OddCodimension,
    ZeroLeadingCoordinate,
)

__all__ = [
    "MembershipReport",
    "OpenSetSample",
    "build_w",
    "build_w_tilde",
    "lambda_coefficient_certificate",
    "lambda_monomial",
    "lincomb_containment",
    "membership_full",
    "membership_two_sided",
    "sample_alpha",
    "sample_open_sets",
    "substitution_consistency",
    "tilde_membership",
    "v_membership",
]


def _require_homogeneous(p: QciPresentation):
    if not p.is_homogeneous():
        raise ValueError("needs a homogeneous presentation (equal exponents, primitive root q)")


def _sigma_sum(p: QciPresentation, s: AlgebraElement, var: int) -> AlgebraElement:
    a = p.exponents[0]
    x = gen(p, var)
    pw = [p.one()]
    for _ in range(a - 2):
        pw.append(pw[-1] * s)
    out = p.zero()
    for i in range(a - 1):
        out = out + pw[i] * x * pw[a - 2 - i]
    return out


def _word(p: QciPresentation, s: AlgebraElement, top: int, trailing: bool) -> AlgebraElement:
    """x_{top-1} S(x_top) x_{top-3} S(x_{top-2}) ... x_3 S(x_4) [x_2] in ``p``'s numbering."""
    out = p.one()
    for v in range(top, 3, -2):
        out = out * gen(p, v - 1) * _sigma_sum(p, s, v)
    if trailing:
        out = out * gen(p, 2)
    return out


def build_w(p: QciPresentation, alpha) -> AlgebraElement:
    n = p.n
    if n % 2:
        raise OddCodimension(f"w_alpha needs even codimension, got n={n}")
    _require_homogeneous(p)
    a = p.exponents[0]
    w = _word(p, sigma(p, alpha), n, trailing=True)
    if w:
        assert w.degree() == (n // 2 - 1) * a + 1
    return w


def build_w_tilde(p: QciPresentation, alpha_tilde) -> tuple[QciPresentation, AlgebraElement, AlgebraElement]:
    """``(sub, w~, sigma~)`` in the codimension n-1 algebra on x_2..x_n.

    Variable y_k of ``sub`` stands for x_{k+1}.
    """
    n = p.n
    if n % 2:
        raise OddCodimension(f"the tilde word needs even n, got n={n}")
    _require_homogeneous(p)
    if len(alpha_tilde) != n - 1:
        raise ValueError(f"alpha~ must have length {n - 1}")
    a = p.exponents[0]
    sub = homogeneous(n - 1, a, p.field, p.commutators[0]) if n > 2 else homogeneous(1, a, p.field)
    s = sigma(sub, alpha_tilde)
    out = sub.one()
    for v in range(n, 3, -2):
        # x_{v-1} -> y_{v-2}, x_v -> y_{v-1}
        out = out * gen(sub, v - 2) * _sigma_sum(sub, s, v - 1)
    return sub, out, s


def lambda_monomial(p: QciPresentation) -> tuple:
    """Exponents of x_2 x_3^{a-1} x_4 x_5^{a-1} ... x_{n-1}^{a-1} x_n."""
    n, a = p.n, p.exponents[0]
    e = [0] * n
    for v in range(2, n + 1):
        e[v - 1] = a - 1 if v % 2 else 1
    return tuple(e)


@dataclass
class MembershipReport:
    alpha: list
    member: bool
    lambda_coefficient: object = None  # None when the certificate does not apply
    degree: int | None = None
    matrix_dims: tuple = (0, 0)

    def to_dict(self) -> dict:
        return {
            "alpha": [str(x) for x in self.alpha],
            "member": self.member,
            "lambda_coefficient": None if self.lambda_coefficient is None else str(self.lambda_coefficient),
            "degree": self.degree,
            "matrix_dims": list(self.matrix_dims),
        }


def _degree_span(p: QciPresentation, left: list, right: list, d: int) -> np.ndarray:
    """Columns x*m (x in ``left``) and m*y (y in ``right``) landing in degree d.

    Each entry of ``left``/``right`` is a homogeneous element; m ranges over
    monomials of the complementary degree.  Rows are the degree-d monomials.
    """
    F = p.field
    rows = graded_component_basis(p, d)
    ridx = {m: i for i, m in enumerate(rows)}
    cols = []
    for x, side in [(x, "l") for x in left] + [(y, "r") for y in right]:
        if not x:
            continue
        for m in graded_component_basis(p, d - x.degree()):
            mon = p.monomial(m)
            prod = x * mon if side == "l" else mon * x
            v = F.zeros((len(rows),))
            for e, c in prod.terms.items():
                v[ridx[e]] = F.raw(c)
            cols.append(v)
    if not cols:
        return F.zeros((len(rows), 0))
    return np.stack(cols, axis=1)


def _coords(p: QciPresentation, w: AlgebraElement, d: int) -> np.ndarray:
    F = p.field
    rows = graded_component_basis(p, d)
    return F.vector([w.coefficient(m) for m in rows])


def membership_two_sided(p: QciPresentation, alpha, w: AlgebraElement) -> MembershipReport:
    """Whether ``w`` lies in sigma*Lambda + Lambda*sigma, decided in w's degree."""
    alpha = [p.field(x) for x in alpha]
    if not w:
        return MembershipReport(alpha, True, degree=None)
    if not w.is_homogeneous():
        raise InhomogeneousElement("membership test needs a homogeneous element")
    d = w.degree()
    s = sigma(p, alpha)
    A = _degree_span(p, [s], [s], d)
    member = la.in_column_space(p.field, A, _coords(p, w, d))
    return MembershipReport(alpha, bool(member), degree=d, matrix_dims=A.shape)


def membership_full(p: QciPresentation, alpha, w: AlgebraElement) -> bool:
    """Same question on the full 2*dim(Lambda)-column matrix (no degree restriction)."""
    s = sigma(p, alpha)
    A = np.concatenate([left_mult_matrix(s), right_mult_matrix(s)], axis=1)
    return la.in_column_space(p.field, A, w.vector())


def lambda_coefficient_certificate(p: QciPresentation, alpha):
    """Coefficient of the lambda monomial in N(w_alpha)."""
    if p.n % 2:
        raise OddCodimension(f"needs even n, got {p.n}")
    if p.n < 4:
        raise ValueError("the lambda certificate needs n >= 4")
    F = p.field
    if not F(alpha[0]):
        raise ZeroLeadingCoordinate("alpha_1 must be nonzero")
    N, _ = nr_decompose(build_w(p, alpha), alpha)
    return N.coefficient(lambda_monomial(p))


def v_membership(p: QciPresentation, alpha) -> MembershipReport:
    """Membership report for w_alpha, with the certificate filled in when it applies."""
    rep = membership_two_sided(p, alpha, build_w(p, alpha))
    if p.n >= 4 and p.field(alpha[0]):
        rep.lambda_coefficient = lambda_coefficient_certificate(p, alpha)
    return rep


def tilde_membership(p: QciPresentation, alpha_tilde) -> bool:
    """True iff w~ lies outside sigma~ L~ + L~ sigma~^{a-1}.

    A zero sigma~ gives zero spans, so any nonzero w~ counts as outside.
    """
    sub, wt, st = build_w_tilde(p, alpha_tilde)
    if not wt:
        return False
    a = p.exponents[0]
    d = wt.degree()
    A = _degree_span(sub, [st], [power(st, a - 1)], d)
    return not la.in_column_space(sub.field, A, _coords(sub, wt, d))


def _f_images(p: QciPresentation) -> list:
    """Images of y_1..y_{n-1} under y_1 -> x_1 + x_2, y_k -> x_{k+1}."""
    return [gen(p, 1) + gen(p, 2)] + [gen(p, k + 1) for k in range(2, p.n)]


def substitution_consistency(p: QciPresentation, alpha_tilde) -> dict:
    """Checks tying the tilde word to w_alpha for alpha = (a_2, a_2, a_3, ..., a_n)."""
    F = p.field
    alpha_tilde = [F(x) for x in alpha_tilde]
    alpha = [alpha_tilde[0]] + alpha_tilde
    sub, wt, st = build_w_tilde(p, alpha_tilde)
    imgs = _f_images(p)
    s = sigma(p, alpha)
    w = build_w(p, alpha)
    tilde_outside = tilde_membership(p, alpha_tilde)
    w_member = membership_two_sided(p, alpha, w).member
    return {
        "f_sigma": substitute(st, imgs, p) == s,
        "f_w_times_x2": substitute(wt, imgs, p) * gen(p, 2) == w,
        # inside for the tilde word forces w_alpha inside
        "implication": tilde_outside or w_member,
        "tilde_outside": tilde_outside,
        "w_member": w_member,
    }


def lincomb_containment(p: QciPresentation, alpha) -> bool:
    """sigma*Lambda + Lambda*sigma^{a-1}*x_2 is contained in sigma*Lambda + Lambda*sigma."""
    F = p.field
    a = p.exponents[0]
    s = sigma(p, alpha)
    big = np.concatenate([left_mult_matrix(s), right_mult_matrix(s)], axis=1)
    small = np.concatenate([left_mult_matrix(s), right_mult_matrix(power(s, a - 1) * gen(p, 2))], axis=1)
    return la.in_column_space(F, big, small)


# --------------------------------------------------------------------------
# sampling
# --------------------------------------------------------------------------


def sample_alpha(p: QciPresentation, rng: random.Random, leading_nonzero: bool = False) -> list:
    F = p.field
    while True:
        alpha = [F.sample(rng) for _ in range(p.n)]
        if leading_nonzero and not alpha[0]:
            continue
        return alpha


@dataclass
class OpenSetSample:
    samples: list = field(default_factory=list)  # dicts, one per trial
    generic_rank_sigma: int = 0
    generic_rank_sigma_pow: int = 0

    def density(self, flag: str) -> float | None:
        vals = [s[flag] for s in self.samples if s.get(flag) is not None]
        if not vals:
            return None
        return sum(bool(v) for v in vals) / len(vals)

    @property
    def implications_ok(self) -> bool:
        return all(s["implications_ok"] is not False for s in self.samples)

    def to_dict(self) -> dict:
        return {
            "generic_rank_sigma": self.generic_rank_sigma,
            "generic_rank_sigma_pow": self.generic_rank_sigma_pow,
            "samples": self.samples,
        }


def _implication_checks(p: QciPresentation, M, alpha, check1: bool, check2: bool) -> bool:
    """Both implications of the open-set lemma, for all m and all beta.

    Both sides are linear in beta, so unit vectors beta suffice.
    """
    F = p.field
    a = p.exponents[0]
    s = sigma(p, alpha)
    S = M.act(s)
    ok = True
    units = [sigma(p, [1 if k == j else 0 for k in range(p.n)]) for j in range(p.n)]
    if check1:
        K = la.kernel_matrix(F, S)
        for xb in units:
            if K.shape[1] and not la.in_column_space(F, S, la.matmul(F, M.act(xb), K)):
                ok = False
    if check2:
        spow = [p.one()]
        for _ in range(a - 1):
            spow.append(spow[-1] * s)
        Stop = M.act(spow[a - 1])
        K2 = la.kernel_matrix(F, Stop)
        for xb in units:
            T = p.zero()
            for i in range(a - 1):
                T = T + spow[i] * xb * spow[a - 2 - i]
            if K2.shape[1] and not la.in_column_space(F, Stop, la.matmul(F, M.act(T), K2)):
                ok = False
    return ok


def _rank_probes(p: QciPresentation, rng: random.Random, limit: int = 1024, extra: int = 64):
    """Points used to find the maximal ranks: all of k^n when small, else extra draws."""
    F = p.field
    q = F.characteristic
    if q and q**p.n <= limit:
        return itertools.product([F(x) for x in range(q)], repeat=p.n)
    return [sample_alpha(p, rng) for _ in range(extra)]


def sample_open_sets(p: QciPresentation, M, trials: int, rng: random.Random) -> OpenSetSample:
    """Sample alpha, record ranks of sigma and sigma^{a-1} on M and membership in V.

    "Maximal rank" is the maximum over the sample together with every point
    of k^n (small prime fields) or 64 further draws; implications are
    checked on every sampled alpha attaining it.
    """
    if not M.relations_hold():
        raise InvalidModule("module violates the defining relations")
    _require_homogeneous(p)
    F = p.field
    a = p.exponents[0]
    rows = []
    for _ in range(trials):
        alpha = sample_alpha(p, rng)
        s = sigma(p, alpha)
        r1 = la.rank(F, M.act(s)) if M.dim else 0
        r2 = la.rank(F, M.act(power(s, a - 1))) if M.dim else 0
        rows.append((alpha, r1, r2))
    g1 = max((r[1] for r in rows), default=0)
    g2 = max((r[2] for r in rows), default=0)
    if M.dim and trials:
        for alpha in _rank_probes(p, random.Random(rng.random())):
            s = sigma(p, alpha)
            g1 = max(g1, la.rank(F, M.act(s)))
            g2 = max(g2, la.rank(F, M.act(power(s, a - 1))))
    out = OpenSetSample(generic_rank_sigma=g1, generic_rank_sigma_pow=g2)
    for alpha, r1, r2 in rows:
        u1, u2 = r1 == g1, r2 == g2
        in_v = None
        if p.n % 2 == 0:
            in_v = not membership_two_sided(p, alpha, build_w(p, alpha)).member
        impl = _implication_checks(p, M, alpha, u1, u2) if (u1 or u2) and M.dim else None
        out.samples.append(
            {
                "alpha": [str(x) for x in alpha],
                "rank_sigma": r1,
                "rank_sigma_pow": r2,
                "in_U1": u1,
                "in_U2": u2,
                "in_V": in_v,
                "implications_ok": impl,
            }
        )
    return out
