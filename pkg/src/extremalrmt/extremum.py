"""Crossing-reduction engines and extremal coefficient tables.

Every pairing's contribution is reduced step by step: the lexicographically
smallest crossing is removed, trading two (or three) pairs for explicit
powers of the size parameters, until only noncrossing pairings remain.  The
bookkeeping yields coefficient tables that evaluate to exact trace moments
for unit-variance i.i.d. profiles (every reduction step is an equality
there) and to upper bounds for arbitrary profiles.

Three taxonomies:

* hermitian   -- each step removes one crossing and costs sigma_*^4; only
  the removal count ell(pi) matters.
* symmetric   -- crossings fan out into up to five reduced terms carrying
  sigma_*^4 / sigma_*^6 / sigma^2 sigma_*^2 weights.
* rectangular -- single-child or product splits with sigma_1 / sigma_2
  exponents tracked through letter transposes.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple

from .errors import CapExceeded, DegenerateProfile, InvalidProfile
from .pairing import Pairing, crossings0, enumerate_pairings
from .profile import Kind, MatrixParams, VarianceProfile, compute_params

# Fan-out is at most 5 per removed crossing; the work-list stays tractable
# only for small orders.
DEFAULT_P_MAX_REDUCE = 5

ReduceTable = Tuple[Tuple[int, int, int], ...]  # ((k, l, multiplicity), ...)


def _relabel(partner: Tuple[int, ...], word) -> Tuple[int, ...]:
    pos = {old: new for new, old in enumerate(word)}
    return tuple(pos[partner[old]] for old in word)


def _smallest_straddler(partner: Tuple[int, ...], a: int, b: int, c: int, d: int):
    """Lexicographically smallest pair with exactly one element strictly
    inside (a,b) u (c,d); returned as (inside_element, outside_element)."""
    inside = lambda x: a < x < b or c < x < d
    prs = sorted((i, partner[i]) for i in range(len(partner)) if i < partner[i])
    for e, f in prs:
        if e in (a, b, c, d):
            continue
        ein, fin = inside(e), inside(f)
        if ein != fin:
            return (e, f) if ein else (f, e)
    return None


# -- hermitian: crossing-removal count ------------------------------------


def genus_exponent(pi: Pairing) -> int:
    """Number of crossing removals until the pairing becomes noncrossing.

    Each step: rotate so the lex-smallest crossing starts at the first
    position, drop its two pairs, and reorder the survivors segment-wise
    (third, second, first, tail).
    """
    partner = list(pi.partner)
    ell = 0
    while True:
        cr = crossings0(tuple(partner))
        if not cr:
            return ell
        a, b, c, d = cr[0]
        L = len(partner)
        rotated = [0] * L
        for i in range(L):
            rotated[(i - a) % L] = (partner[i] - a) % L
        k0, l0, m0 = b - a, c - a, d - a
        order = (list(range(l0 + 1, m0)) + list(range(k0 + 1, l0))
                 + list(range(1, k0)) + list(range(m0 + 1, L)))
        partner = list(_relabel(tuple(rotated), order))
        ell += 1


@lru_cache(maxsize=None)
def genus_histogram(p: int) -> Tuple[Tuple[int, int], ...]:
    """(ell, count) pairs over all pairings of 2p points."""
    hist: Counter = Counter()
    for pi in enumerate_pairings(p):
        hist[genus_exponent(pi)] += 1
    return tuple(sorted(hist.items()))


# -- symmetric reduction ---------------------------------------------------


@lru_cache(maxsize=None)
def _reduce_sym(partner: Tuple[int, ...]) -> ReduceTable:
    """Monomial table of one pairing: (k, l, mult) means mult copies of
    sigma~^{2k} sigma^{2l} sigma_*^{2(q-k-l)} where q is the pair count."""
    L = len(partner)
    if L == 0:
        return ((0, 0, 1),)
    cr = crossings0(partner)
    if not cr:
        return ((L // 2, 0, 1),)
    a, b, c, d = cr[0]
    s0 = list(range(0, a))
    s1 = list(range(a + 1, b))
    s2 = list(range(b + 1, c))
    s3 = list(range(c + 1, d))
    s4 = list(range(d + 1, L))

    out: Counter = Counter()
    # sigma_*^4 terms: the three plain products of the crossing identity
    for word in (s0 + s3 + s2 + s1 + s4,
                 s0 + s3 + s1[::-1] + s2[::-1] + s4,
                 s0 + s2[::-1] + s3[::-1] + s1 + s4):
        for k, l, m in _reduce_sym(_relabel(partner, word)):
            out[(k, l)] += m

    straddle = _smallest_straddler(partner, a, b, c, d)
    trace_word = s1[::-1] + s3
    diag_word = s0 + s2[::-1] + s4
    if straddle is None:
        # the two sides are independent; their tables multiply, one
        # sigma^2 sigma_*^2 factor is consumed by the split
        ti = _reduce_sym(_relabel(partner, trace_word))
        tj = _reduce_sym(_relabel(partner, diag_word))
        for k1, l1, m1 in ti:
            for k2, l2, m2 in tj:
                out[(k1 + k2, l1 + l2 + 1)] += m1 * m2
    else:
        # sigma_*^6 terms: splice the cyclically opened trace word into the
        # diagonal word at the straddling pair, in both orientations
        e, f = straddle
        s = trace_word.index(e)
        opened = trace_word[s + 1:] + trace_word[:s]
        u = diag_word.index(f)
        for body in (opened, opened[::-1]):
            word = diag_word[:u] + body + diag_word[u + 1:]
            for k, l, m in _reduce_sym(_relabel(partner, word)):
                out[(k, l)] += m
    return tuple((k, l, m) for (k, l), m in sorted(out.items()))


# -- rectangular reduction -------------------------------------------------


@lru_cache(maxsize=None)
def _reduce_rect(partner: Tuple[int, ...], eps: Tuple[int, ...]) -> ReduceTable:
    """Monomial table with (k, l, mult) meaning sigma_1^{2k} sigma_2^{2l}
    sigma_*^{2(q-k-l)}.

    ``eps[i]`` is 0 for a plain letter and 1 for a starred letter; letters
    keep their flag through reorderings and flip when a segment is
    transposed.  Words always alternate flags (products would otherwise be
    dimensionally inconsistent).
    """
    L = len(partner)
    if L == 0:
        return ((0, 0, 1),)
    assert all(eps[i] != eps[i - 1] for i in range(L)), "non-alternating word"
    cr = crossings0(partner)
    if not cr:
        k = sum(1 for i in range(L) if i < partner[i] and eps[i] == 1)
        return ((k, L // 2 - k, 1),)
    a, b, c, d = cr[0]

    def seg(lo, hi):
        return [(x, 0) for x in range(lo, hi)]

    def rev(w):
        return [(x, fl ^ 1) for x, fl in reversed(w)]

    s0 = seg(0, a)
    s1 = seg(a + 1, b)
    s2 = seg(b + 1, c)
    s3 = seg(c + 1, d)
    s4 = seg(d + 1, L)

    def child(word):
        old = [x for x, _ in word]
        pos = {o: i for i, o in enumerate(old)}
        new_partner = tuple(pos[partner[o]] for o in old)
        new_eps = tuple(eps[x] ^ fl for x, fl in word)
        return new_partner, new_eps

    same_ac = eps[a] == eps[c]
    same_bd = eps[b] == eps[d]
    out: Counter = Counter()
    if not (same_ac and same_bd):
        # mixed-flag crossing collapses to a single sigma_*^4 child
        if same_ac:
            word = s0 + rev(s2) + rev(s3) + s1 + s4
        elif same_bd:
            word = s0 + s3 + rev(s1) + rev(s2) + s4
        else:
            word = s0 + s3 + s2 + s1 + s4
        for k, l, m in _reduce_rect(*child(word)):
            out[(k, l)] += m
    else:
        trace_word = rev(s1) + s3
        diag_word = s0 + rev(s2) + s4
        straddle = _smallest_straddler(partner, a, b, c, d)
        if straddle is not None:
            # sigma_*^6: splice the opened trace word into the diagonal word;
            # orientation fixed by the two letters' flags
            e, f = straddle
            s = next(i for i, (x, _) in enumerate(trace_word) if x == e)
            eps_e = eps[trace_word[s][0]] ^ trace_word[s][1]
            opened = trace_word[s + 1:] + trace_word[:s]
            u = next(i for i, (x, _) in enumerate(diag_word) if x == f)
            eps_f = eps[diag_word[u][0]] ^ diag_word[u][1]
            body = opened if eps_e != eps_f else rev(opened)
            word = diag_word[:u] + body + diag_word[u + 1:]
            for k, l, m in _reduce_rect(*child(word)):
                out[(k, l)] += m
        else:
            # independent split; the kept pair's flag decides which column/row
            # sum is extracted alongside one sigma_*^2 (plain letter: column)
            kadd, ladd = (1, 0) if eps[b] == 0 else (0, 1)
            ti = _reduce_rect(*child(trace_word))
            tj = _reduce_rect(*child(diag_word))
            for k1, l1, m1 in ti:
                for k2, l2, m2 in tj:
                    out[(k1 + k2 + kadd, l1 + l2 + ladd)] += m1 * m2
    return tuple((k, l, m) for (k, l), m in sorted(out.items()))


# -- coefficient tables ----------------------------------------------------


@dataclass(frozen=True)
class MomentPolynomial:
    """Extremal coefficient table of one taxonomy and order.

    Monomial semantics of ``coeffs[(k, l)]``:

    * hermitian:    sigma^{2p-4k} sigma_*^{4k}      (k = removal count, l = 0)
    * symmetric:    sigma~^{2k} sigma^{2l} sigma_*^{2(p-k-l)}
    * rectangular:  sigma_1^{2k} sigma_2^{2l} sigma_*^{2(p-k-l)}
    """

    p: int
    taxonomy: Kind
    coeffs: Dict[Tuple[int, int], int]

    def total_mass(self) -> int:
        return sum(self.coeffs.values())

    def evaluate(self, *, sigma_sq=None, sigma_tilde_sq=None,
                 sigma1_sq=None, sigma2_sq=None, sigma_star_sq=1):
        """Exact evaluation at the given squared parameters."""
        s = sigma_star_sq
        if self.taxonomy is Kind.HERMITIAN:
            return sum(m * sigma_sq ** (self.p - 2 * k) * s ** (2 * k)
                       for (k, _), m in self.coeffs.items())
        if self.taxonomy is Kind.SYMMETRIC:
            return sum(m * sigma_tilde_sq ** k * sigma_sq ** l * s ** (self.p - k - l)
                       for (k, l), m in self.coeffs.items())
        return sum(m * sigma1_sq ** k * sigma2_sq ** l * s ** (self.p - k - l)
                   for (k, l), m in self.coeffs.items())


@lru_cache(maxsize=None)
def hermitian_polynomial(p: int, p_max: int = DEFAULT_P_MAX_REDUCE) -> MomentPolynomial:
    if p > p_max:
        raise CapExceeded(f"p={p} above reduction cap {p_max}")
    coeffs = {(ell, 0): cnt for ell, cnt in genus_histogram(p)}
    return MomentPolynomial(p, Kind.HERMITIAN, coeffs)


@lru_cache(maxsize=None)
def kappa_table_symmetric(p: int, p_max: int = DEFAULT_P_MAX_REDUCE) -> MomentPolynomial:
    if p > p_max:
        raise CapExceeded(f"p={p} above reduction cap {p_max}")
    total: Counter = Counter()
    for pi in enumerate_pairings(p):
        for k, l, m in _reduce_sym(pi.partner):
            total[(k, l)] += m
    return MomentPolynomial(p, Kind.SYMMETRIC, dict(sorted(total.items())))


@lru_cache(maxsize=None)
def kappa_table_rectangular(p: int, p_max: int = DEFAULT_P_MAX_REDUCE) -> MomentPolynomial:
    if p > p_max:
        raise CapExceeded(f"p={p} above reduction cap {p_max}")
    eps0 = tuple(i % 2 for i in range(2 * p))
    total: Counter = Counter()
    for pi in enumerate_pairings(p):
        for k, l, m in _reduce_rect(pi.partner, eps0):
            total[(k, l)] += m
    return MomentPolynomial(p, Kind.RECTANGULAR, dict(sorted(total.items())))


def table_for(taxonomy: Kind, p: int, p_max: int = DEFAULT_P_MAX_REDUCE) -> MomentPolynomial:
    if taxonomy is Kind.HERMITIAN:
        return hermitian_polynomial(p, p_max)
    if taxonomy is Kind.SYMMETRIC:
        return kappa_table_symmetric(p, p_max)
    return kappa_table_rectangular(p, p_max)


# -- extremal bounds -------------------------------------------------------


@dataclass(frozen=True)
class ExtremalBound:
    """Evaluated moment bound for one profile and order.

    ``value`` is the table at the profile's own parameters; ``ceiled_value``
    evaluates at the integer-ceiling parameters of the comparison matrix
    (the i.i.d. moment that dominates), both scaled back by sigma_*^{2p}.
    """

    taxonomy: Kind
    p: int
    value: Fraction
    ceiled_value: Fraction
    params: MatrixParams
    ceil_dims: Tuple[int, ...]


def extremal_bound(profile: VarianceProfile, p: int,
                   p_max: int = DEFAULT_P_MAX_REDUCE) -> ExtremalBound:
    """Evaluate the extremal moment bound for a profile with exact entries."""
    params = compute_params(profile)
    sstar = Fraction(params.sigma_star_sq)
    if sstar == 0:
        raise DegenerateProfile("sigma_* = 0")
    table = table_for(profile.kind, p, p_max)
    scale = sstar ** p
    if profile.kind is Kind.RECTANGULAR:
        s1n = Fraction(params.sigma1_sq) / sstar
        s2n = Fraction(params.sigma2_sq) / sstar
        d1, d2 = math.ceil(s1n), math.ceil(s2n)
        value = table.evaluate(sigma1_sq=s1n, sigma2_sq=s2n) * scale
        ceiled = table.evaluate(sigma1_sq=Fraction(d1), sigma2_sq=Fraction(d2)) * scale
        return ExtremalBound(profile.kind, p, value, ceiled, params, (d1, d2))
    s2n = Fraction(params.sigma_sq) / sstar
    d = math.ceil(s2n)
    if profile.kind is Kind.HERMITIAN:
        value = table.evaluate(sigma_sq=s2n) * scale
        ceiled = table.evaluate(sigma_sq=Fraction(d)) * scale
    else:
        stn = Fraction(params.sigma_tilde_sq) / sstar
        value = table.evaluate(sigma_tilde_sq=stn, sigma_sq=s2n) * scale
        ceiled = table.evaluate(sigma_tilde_sq=Fraction(d + 1), sigma_sq=Fraction(d)) * scale
    return ExtremalBound(profile.kind, p, value, ceiled, params, (d,))
