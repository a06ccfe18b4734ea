"""Independent reference implementations used only by the tests.

Nothing here imports the PBW product or the module machinery from ``qci``;
the oracles work on raw words and dense Kronecker systems.
"""

from __future__ import annotations

import itertools

import sympy


def rewrite_word(word, exponents, commutator, one, zero):
    """Reduce a word in the free algebra to ``(coeff, exponent vector)``.

    Rules: x_j x_i -> q_ij^{-1} x_i x_j for i < j, and x_u^{a_u} -> 0.
    ``commutator(i, j)`` returns q_ij for 0-based ``i < j``.  The system is
    terminating (each swap removes one inversion) and confluent on this
    presentation, so any reduction order gives the normal form.
    """
    word = list(word)
    coeff = one
    changed = True
    while changed:
        changed = False
        for k in range(len(word) - 1):
            i, j = word[k + 1], word[k]
            if j > i:
                coeff = coeff * commutator(i, j).inverse()
                word[k], word[k + 1] = i, j
                changed = True
        run = 1
        for k in range(1, len(word) + 1):
            if k < len(word) and word[k] == word[k - 1]:
                run += 1
                continue
            if k and run >= exponents[word[k - 1]]:
                return zero, None
            run = 1
    e = [0] * len(exponents)
    for v in word:
        e[v] += 1
    return coeff, tuple(e)


def monomial_word(e):
    return [i for i, k in enumerate(e) for _ in range(k)]


def oracle_product(p, e, f):
    """x^e x^f via rewriting the concatenated word."""
    F = p.field
    word = monomial_word(e) + monomial_word(f)
    return rewrite_word(word, p.exponents, lambda i, j: p.q(i + 1, j + 1), F.one, F.zero)


def oracle_element_product(p, x, y):
    """Product of two ``{exponent: scalar}`` dicts through the rewriting oracle."""
    out = {}
    for e, c in x.items():
        for f, d in y.items():
            c2, g = oracle_product(p, e, f)
            if g is None:
                continue
            out[g] = out.get(g, p.field.zero) + c * d * c2
    return {g: c for g, c in out.items() if c}


def ordered_factorizations(limit):
    """All exponent tuples (a_1..a_n), a_i >= 2, with product <= limit."""
    out = []

    def rec(prefix, prod):
        if prefix:
            out.append(tuple(prefix))
        for a in range(2, limit // prod + 1):
            rec(prefix + [a], prod * a)

    rec([], 1)
    return out


def graded_monomials_brute(exponents, d):
    """Exponent vectors of total degree d, by filtering the full box."""
    return sorted(
        (e for e in itertools.product(*(range(a) for a in exponents)) if sum(e) == d),
        reverse=True,
    )


# -- dense linear algebra over Q via sympy, independent of qci.linalg -----


def sympy_rank(rows):
    return sympy.Matrix(rows).rank()


def modp_rank(rows, p):
    """Rank over F_p by plain Gaussian elimination on Python ints."""
    A = [[x % p for x in r] for r in rows]
    rk = 0
    cols = len(A[0]) if A else 0
    for c in range(cols):
        piv = next((r for r in range(rk, len(A)) if A[r][c]), None)
        if piv is None:
            continue
        A[rk], A[piv] = A[piv], A[rk]
        inv = pow(A[rk][c], -1, p)
        A[rk] = [x * inv % p for x in A[rk]]
        for r in range(len(A)):
            if r != rk and A[r][c]:
                m = A[r][c]
                A[r] = [(x - m * y) % p for x, y in zip(A[r], A[rk])]
        rk += 1
    return rk


def kron_hom_dimension(actions_m, actions_n, p):
    """dim Hom(M, N) over F_p from the Kronecker system B_i H = H A_i.

    Maps act on column vectors, so H is a dim N x dim M matrix.
    """
    dm = len(actions_m[0])
    dn = len(actions_n[0])
    rows = []
    for A, B in zip(actions_m, actions_n):
        # (B H - H A)[r][c] as a linear form in the entries H[s][t] (index s*dm + t)
        for r in range(dn):
            for c in range(dm):
                row = [0] * (dn * dm)
                for s in range(dn):
                    if B[r][s]:
                        row[s * dm + c] += int(B[r][s])
                for t in range(dm):
                    if A[t][c]:
                        row[r * dm + t] -= int(A[t][c])
                rows.append(row)
    if not rows:
        return dm * dn
    return dm * dn - modp_rank(rows, p)


def membership_oracle(p, alpha, w_terms):
    """w in sigma*L + L*sigma over F_p, by spanning all products with monomials.

    Products go through the rewriting oracle; rank through ``modp_rank``.
    """
    F = p.field
    P = F.characteristic
    s = {}
    for i, c in enumerate(alpha):
        if F(c):
            e = [0] * p.n
            e[i] = 1
            s[tuple(e)] = F(c)
    basis = list(itertools.product(*(range(a) for a in p.exponents)))
    pos = {m: k for k, m in enumerate(basis)}

    def column(terms):
        v = [0] * len(basis)
        for m, c in terms.items():
            v[pos[m]] = int(c)
        return v

    cols = []
    for m in basis:
        mono = {m: F.one}
        cols.append(column(oracle_element_product(p, s, mono)))
        cols.append(column(oracle_element_product(p, mono, s)))
    rows = [list(r) for r in zip(*cols)]
    target = column(w_terms)
    aug = [r + [t] for r, t in zip(rows, target)]
    return modp_rank(rows, P) == modp_rank(aug, P)
