"""Exact Gaussian moment oracles.

Ground truth for every other module: E[tr X^{2p}] (self-adjoint kinds) and
E[tr (XX*)^p] (rectangular) computed as exact rationals by summing entry
products over closed index paths, with per-entry Gaussian moment factors.
A slower per-pairing view materializes the full contribution matrix of each
pairing for the domination and isotropy checks.

Entry conventions (matching the model definitions):

* hermitian:   off-diagonal N_C(0, b_ij^2), diagonal real N(0, b_ii^2)
* symmetric:   off-diagonal b_ij * xi, diagonal sqrt(2) * b_ii * xi
* rectangular: independent real b_ij * xi
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterator, List, Tuple

from .errors import CapExceeded, InvalidProfile
from .pairing import Pairing, double_factorial, enumerate_pairings
from .profile import Kind, VarianceProfile

# Path sums cost (n*m)^p; the cap keeps accidental big calls from hanging.
DEFAULT_P_MAX = 6


def _check_cap(p: int, p_max: int):
    if p < 0:
        raise CapExceeded("order p must be nonnegative")
    if p > p_max:
        raise CapExceeded(f"p={p} above oracle cap {p_max}; pass p_max to override")


def _int_squares(profile: VarianceProfile):
    """Squared entries scaled to integers: returns (B2int, denom) with
    b_ij^2 = B2int[i][j] / denom."""
    sq = profile.exact_squares()
    denom = 1
    for row in sq:
        for x in row:
            denom = denom * x.denominator // math.gcd(denom, x.denominator)
    b2 = [[int(x * denom) for x in row] for row in sq]
    return b2, denom


def moment_hermitian(profile: VarianceProfile, p: int, p_max: int = DEFAULT_P_MAX) -> Fraction:
    """E[tr X^{2p}] for the complex Hermitian model, exact."""
    if profile.kind is not Kind.HERMITIAN:
        raise InvalidProfile("moment_hermitian needs a hermitian profile")
    _check_cap(p, p_max)
    if p == 0:
        return Fraction(1)
    d = profile.n
    b2, denom = _int_squares(profile)
    L = 2 * p
    total = 0
    cnt: dict = {}

    def leaf() -> int:
        prod = 1
        for (a, b), r in cnt.items():
            if a == b:
                if r & 1:
                    return 0
                prod *= double_factorial(r - 1) * b2[a][a] ** (r // 2)
            elif a < b:
                if r != cnt.get((b, a), 0):
                    return 0
                prod *= math.factorial(r) * b2[a][b] ** r
        return prod

    def rec(t: int, v0: int, v: int):
        nonlocal total
        if t == L - 1:
            if b2[v][v0]:
                e = (v, v0)
                cnt[e] = cnt.get(e, 0) + 1
                total += leaf()
                cnt[e] -= 1
                if not cnt[e]:
                    del cnt[e]
            return
        for w in range(d):
            if b2[v][w]:
                e = (v, w)
                cnt[e] = cnt.get(e, 0) + 1
                rec(t + 1, v0, w)
                cnt[e] -= 1
                if not cnt[e]:
                    del cnt[e]

    for v0 in range(d):
        rec(0, v0, v0)
    return Fraction(total, denom ** p * d)


def moment_symmetric(profile: VarianceProfile, p: int, p_max: int = DEFAULT_P_MAX) -> Fraction:
    """E[tr X^{2p}] for the real symmetric model, exact."""
    if profile.kind is not Kind.SYMMETRIC:
        raise InvalidProfile("moment_symmetric needs a symmetric profile")
    _check_cap(p, p_max)
    if p == 0:
        return Fraction(1)
    d = profile.n
    b2, denom = _int_squares(profile)
    L = 2 * p
    total = 0
    cnt: dict = {}

    def leaf() -> int:
        prod = 1
        for (a, b), r in cnt.items():
            if r & 1:
                return 0
            var = 2 * b2[a][a] if a == b else b2[a][b]
            prod *= double_factorial(r - 1) * var ** (r // 2)
        return prod

    def rec(t: int, v0: int, v: int):
        nonlocal total
        if t == L - 1:
            if b2[v][v0]:
                e = (v, v0) if v <= v0 else (v0, v)
                cnt[e] = cnt.get(e, 0) + 1
                total += leaf()
                cnt[e] -= 1
                if not cnt[e]:
                    del cnt[e]
            return
        for w in range(d):
            if b2[v][w]:
                e = (v, w) if v <= w else (w, v)
                cnt[e] = cnt.get(e, 0) + 1
                rec(t + 1, v0, w)
                cnt[e] -= 1
                if not cnt[e]:
                    del cnt[e]

    for v0 in range(d):
        rec(0, v0, v0)
    return Fraction(total, denom ** p * d)


def moment_rect_real(profile: VarianceProfile, p: int, p_max: int = DEFAULT_P_MAX) -> Fraction:
    """E[tr (XX*)^p] for the rectangular real model, exact."""
    if profile.kind is not Kind.RECTANGULAR:
        raise InvalidProfile("moment_rect_real needs a rectangular profile")
    _check_cap(p, p_max)
    if p == 0:
        return Fraction(1)
    n, m = profile.n, profile.m
    b2, denom = _int_squares(profile)
    total = 0
    cnt: dict = {}

    def bump(e, delta):
        cnt[e] = cnt.get(e, 0) + delta
        if not cnt[e]:
            del cnt[e]

    def leaf() -> int:
        prod = 1
        for (i, j), r in cnt.items():
            if r & 1:
                return 0
            prod *= double_factorial(r - 1) * b2[i][j] ** (r // 2)
        return prod

    def rec(t: int, u0: int, u: int):
        # t counts the X / X* steps taken; row u is current
        nonlocal total
        for w in range(m):
            if not b2[u][w]:
                continue
            bump((u, w), 1)
            if t == p - 1:
                if b2[u0][w]:
                    bump((u0, w), 1)
                    total += leaf()
                    bump((u0, w), -1)
            else:
                for u2 in range(n):
                    if b2[u2][w]:
                        bump((u2, w), 1)
                        rec(t + 1, u0, u2)
                        bump((u2, w), -1)
            bump((u, w), -1)

    for u0 in range(n):
        rec(0, u0, u0)
    return Fraction(total, denom ** p * n)


def moment_rect_complex(n: int, m: int, p: int, p_max: int = DEFAULT_P_MAX) -> Fraction:
    """E[tr (ZZ*)^p] for the i.i.d. N_C(0,1) rectangular model, exact."""
    _check_cap(p, p_max)
    if n < 1 or m < 1:
        raise InvalidProfile("dimensions must be positive")
    if p == 0:
        return Fraction(1)
    total = 0
    cnt: dict = {}

    def bump(e, delta):
        cnt[e] = cnt.get(e, 0) + delta
        if not cnt[e]:
            del cnt[e]

    def leaf() -> int:
        prod = 1
        for (i, j, conj), r in cnt.items():
            if conj:
                continue
            if r != cnt.get((i, j, 1), 0):
                return 0
            prod *= math.factorial(r)
        # conjugate-only entries are unbalanced
        for (i, j, conj), r in cnt.items():
            if conj and (i, j, 0) not in cnt:
                return 0
        return prod

    def rec(t: int, u0: int, u: int):
        nonlocal total
        for w in range(m):
            bump((u, w, 0), 1)
            if t == p - 1:
                bump((u0, w, 1), 1)
                total += leaf()
                bump((u0, w, 1), -1)
            else:
                for u2 in range(n):
                    bump((u2, w, 1), 1)
                    rec(t + 1, u0, u2)
                    bump((u2, w, 1), -1)
            bump((u, w, 0), -1)

    for u0 in range(n):
        rec(0, u0, u0)
    return Fraction(total, n)


# -- per-pairing contribution matrices ------------------------------------


@dataclass(frozen=True)
class PairingContribution:
    """One pairing's contribution matrix with its normalized trace and
    maximal diagonal entry (the quantity the crossing reductions bound)."""

    pairing: Pairing
    matrix: Tuple[Tuple[Fraction, ...], ...]
    trace: Fraction
    max_diag: Fraction


def _zeros(n: int) -> List[List[Fraction]]:
    return [[Fraction(0)] * n for _ in range(n)]


def _matmul(A, B):
    rows, inner, cols = len(A), len(B), len(B[0])
    out = [[Fraction(0)] * cols for _ in range(rows)]
    for i in range(rows):
        Ai = A[i]
        for k in range(inner):
            a = Ai[k]
            if a:
                Bk = B[k]
                oi = out[i]
                for j in range(cols):
                    if Bk[j]:
                        oi[j] += a * Bk[j]
    return out


def _word_product(letters):
    return reduce(_matmul, letters)


def _finish(pairing: Pairing, acc, n: int) -> PairingContribution:
    mat = tuple(tuple(row) for row in acc)
    diag = [mat[r][r] for r in range(n)]
    return PairingContribution(pairing, mat, sum(diag, Fraction(0)) / n, max(diag))


def symmetric_contributions(profile: VarianceProfile, p: int,
                            p_max: int = 4) -> Iterator[PairingContribution]:
    """Stream of H(pi) matrices over all pairings; exact but small-scale only
    (cost is (d(d+1)/2)^p per pairing)."""
    if profile.kind is not Kind.SYMMETRIC:
        raise InvalidProfile("symmetric_contributions needs a symmetric profile")
    _check_cap(p, p_max)
    d = profile.n
    bex = profile.exact_entries()
    edges = [(i, j) for i in range(d) for j in range(i + 1)]
    letters = {}
    for i, j in edges:
        M = _zeros(d)
        M[i][j] = bex[i][j]
        M[j][i] = bex[i][j]
        letters[(i, j)] = M

    for pi in enumerate_pairings(p):
        acc = _zeros(d)
        word_pairs = pi.pairs()

        def assign(idx: int, chosen):
            if idx == len(word_pairs):
                word = [None] * (2 * p)
                scale = 1
                for (k, l), e in zip(word_pairs, chosen):
                    word[k - 1] = letters[e]
                    word[l - 1] = letters[e]
                    if e[0] == e[1]:
                        scale *= 2  # sqrt(2) diagonal scaling, squared per pair
                M = _word_product(word)
                for r in range(d):
                    row = acc[r]
                    Mr = M[r]
                    for s in range(d):
                        row[s] += scale * Mr[s]
                return
            for e in edges:
                assign(idx + 1, chosen + (e,))

        assign(0, ())
        yield _finish(pi, acc, d)


def rectangular_contributions(profile: VarianceProfile, p: int,
                              p_max: int = 4) -> Iterator[PairingContribution]:
    """Stream of E(pi) matrices (n x n) over all pairings; cost (n m)^p per pairing."""
    if profile.kind is not Kind.RECTANGULAR:
        raise InvalidProfile("rectangular_contributions needs a rectangular profile")
    _check_cap(p, p_max)
    n, m = profile.n, profile.m
    bex = profile.exact_entries()
    cells = [(i, j) for i in range(n) for j in range(m)]
    plain = {}
    starred = {}
    for i, j in cells:
        E = [[Fraction(0)] * m for _ in range(n)]
        E[i][j] = bex[i][j]
        plain[(i, j)] = E
        Es = [[Fraction(0)] * n for _ in range(m)]
        Es[j][i] = bex[i][j]
        starred[(i, j)] = Es

    for pi in enumerate_pairings(p):
        acc = _zeros(n)
        word_pairs = pi.pairs()

        def assign(idx: int, chosen):
            if idx == len(word_pairs):
                word = [None] * (2 * p)
                for (k, l), e in zip(word_pairs, chosen):
                    word[k - 1] = plain[e] if (k - 1) % 2 == 0 else starred[e]
                    word[l - 1] = plain[e] if (l - 1) % 2 == 0 else starred[e]
                M = _word_product(word)
                for r in range(n):
                    row = acc[r]
                    Mr = M[r]
                    for s in range(n):
                        row[s] += Mr[s]
                return
            for e in cells:
                assign(idx + 1, chosen + (e,))

        assign(0, ())
        yield _finish(pi, acc, n)


def hermitian_pairing_terms(profile: VarianceProfile, p: int,
                            p_max: int = 4) -> Iterator[Tuple[Pairing, Fraction]]:
    """Per-pairing scalar contribution to E[tr X^{2p}] in the Hermitian model.

    Each pair contributes both sign orders of its (U, U*) letters; the 1/sqrt(2)
    diagonal scaling enters squared per pair.
    """
    if profile.kind is not Kind.HERMITIAN:
        raise InvalidProfile("hermitian_pairing_terms needs a hermitian profile")
    _check_cap(p, p_max)
    d = profile.n
    bex = profile.exact_entries()
    edges = [(i, j) for i in range(d) for j in range(i + 1)]
    lower = {}
    upper = {}
    for i, j in edges:
        M = _zeros(d)
        M[i][j] = bex[i][j]
        lower[(i, j)] = M  # U_ij, entry at (i, j) with i >= j
        Mu = _zeros(d)
        Mu[j][i] = bex[i][j]
        upper[(i, j)] = Mu  # U_ij^*

    for pi in enumerate_pairings(p):
        total = Fraction(0)
        word_pairs = pi.pairs()

        def assign(idx: int, chosen):
            nonlocal total
            if idx == len(word_pairs):
                word = [None] * (2 * p)
                scale = Fraction(1)
                for (k, l), (e, flip) in zip(word_pairs, chosen):
                    first, second = (upper, lower) if flip else (lower, upper)
                    word[k - 1] = first[e]
                    word[l - 1] = second[e]
                    if e[0] == e[1]:
                        scale /= 2
                M = _word_product(word)
                total += scale * sum(M[r][r] for r in range(d))
                return
            for e in edges:
                for flip in (False, True):
                    assign(idx + 1, chosen + ((e, flip),))

        assign(0, ())
        yield pi, total / d
