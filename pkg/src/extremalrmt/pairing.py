"""Pairings of {1, ..., 2p}: enumeration, crossings, crossing taxonomy, Catalan data."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, List, NamedTuple, Tuple

from .errors import CapExceeded, InvalidProfile, NotACrossing

# (2p-1)!! grows fast; enumeration beyond this cap must be requested explicitly.
DEFAULT_P_MAX = 8


class Crossing(NamedTuple):
    """Indices i < j < k < l (1-based) with {i,k} and {j,l} both pairs."""
    i: int
    j: int
    k: int
    l: int


class CrossingClass(Enum):
    SYM_TYPE_1 = "sym-type-1"    # a straddling pair exists
    SYM_TYPE_2 = "sym-type-2"
    RECT_TYPE_1 = "rect-type-1"  # one of the two pairs mixes parities
    RECT_TYPE_2 = "rect-type-2"  # pure parities, straddling pair exists
    RECT_TYPE_3 = "rect-type-3"


class Taxonomy(Enum):
    SELF_ADJOINT = "self_adjoint"
    RECTANGULAR = "rectangular"


@dataclass(frozen=True)
class Pairing:
    """Fixed-point-free involution on 2p points.

    ``partner`` is 0-based internally: partner[i] is the partner of point i.
    The public pair/crossing views are 1-based.
    """

    p: int
    partner: Tuple[int, ...]

    def __post_init__(self):
        pt = tuple(self.partner)
        if len(pt) != 2 * self.p:
            raise InvalidProfile(f"partner array must have length {2 * self.p}")
        for i, j in enumerate(pt):
            if not 0 <= j < 2 * self.p or j == i or pt[j] != i:
                raise InvalidProfile("partner array is not a fixed-point-free involution")
        object.__setattr__(self, "partner", pt)

    @classmethod
    def from_pairs(cls, pairs) -> "Pairing":
        """Build from 1-based two-element blocks, e.g. [(1,3),(2,4)]."""
        flat = [x for pr in pairs for x in pr]
        L = len(flat)
        if sorted(flat) != list(range(1, L + 1)):
            raise InvalidProfile(f"pairs must partition 1..{L}")
        partner = [0] * L
        for a, b in pairs:
            partner[a - 1] = b - 1
            partner[b - 1] = a - 1
        return cls(L // 2, tuple(partner))

    def pairs(self) -> List[Tuple[int, int]]:
        """1-based blocks, sorted by smaller element."""
        return [(i + 1, self.partner[i] + 1)
                for i in range(2 * self.p) if i < self.partner[i]]

    def crossings(self) -> List[Crossing]:
        """All crossings, lexicographic by (i, j, k, l)."""
        return [Crossing(a + 1, b + 1, c + 1, d + 1)
                for a, b, c, d in crossings0(self.partner)]

    @property
    def noncrossing(self) -> bool:
        return not crossings0(self.partner)


def crossings0(partner: Tuple[int, ...]) -> List[Tuple[int, int, int, int]]:
    """0-based crossing quadruples (a,b,c,d), pairs {a,c},{b,d}, sorted lex."""
    prs = sorted((i, partner[i]) for i in range(len(partner)) if i < partner[i])
    out = []
    for x in range(len(prs)):
        a, c = prs[x]
        for y in range(x + 1, len(prs)):
            b, d = prs[y]
            if b < c < d:
                out.append((a, b, c, d))
    out.sort()
    return out


def enumerate_pairings(p: int, p_max: int = DEFAULT_P_MAX) -> Iterator[Pairing]:
    """Stream all (2p-1)!! pairings of 2p points in canonical order.

    Canonical order: always pair the smallest unpaired point first and
    iterate its partner in ascending order.
    """
    if p > p_max:
        raise CapExceeded(f"p={p} above cap {p_max}; pass p_max explicitly to override")
    if p == 0:
        yield Pairing(0, ())
        return

    partner = [-1] * (2 * p)

    def rec(avail: Tuple[int, ...]) -> Iterator[Pairing]:
        if not avail:
            yield Pairing(p, tuple(partner))
            return
        first = avail[0]
        for idx in range(1, len(avail)):
            j = avail[idx]
            partner[first], partner[j] = j, first
            yield from rec(avail[1:idx] + avail[idx + 1:])
        partner[first] = -1

    yield from rec(tuple(range(2 * p)))


def classify_crossing(pi: Pairing, x: Crossing, taxonomy: Taxonomy) -> CrossingClass:
    """Assign the crossing its class under the requested taxonomy.

    Self-adjoint: type 1 iff some pair has exactly one element strictly
    inside (i,j) u (k,l).  Rectangular: type 1 iff i,k or j,l have opposite
    parity; otherwise type 2 iff such a straddling pair exists, else type 3.
    """
    i, j, k, l = x
    if not (1 <= i < j < k < l <= 2 * pi.p):
        raise NotACrossing(f"{x} is not ordered within 1..{2 * pi.p}")
    pt = pi.partner
    if pt[i - 1] != k - 1 or pt[j - 1] != l - 1:
        raise NotACrossing(f"{x}: {{{i},{k}}} and {{{j},{l}}} are not both pairs")

    def has_straddler() -> bool:
        inside = lambda a: i < a < j or k < a < l
        for a in range(1, 2 * pi.p + 1):
            b = pt[a - 1] + 1
            if a < b and {a, b}.isdisjoint({i, j, k, l}) and inside(a) != inside(b):
                return True
        return False

    if taxonomy is Taxonomy.SELF_ADJOINT:
        return CrossingClass.SYM_TYPE_1 if has_straddler() else CrossingClass.SYM_TYPE_2
    if (i - k) % 2 == 1 or (j - l) % 2 == 1:
        return CrossingClass.RECT_TYPE_1
    return CrossingClass.RECT_TYPE_2 if has_straddler() else CrossingClass.RECT_TYPE_3


def double_factorial(m: int) -> int:
    """(m)!! with the convention (-1)!! = 0!! = 1."""
    r = 1
    while m > 1:
        r *= m
        m -= 2
    return r


def catalan_number(p: int) -> int:
    return math.comb(2 * p, p) // (p + 1)


def catalan_chi(p: int) -> Fraction:
    """chi_p = 4^{-p} C_p via the ratio recursion chi_{p+1} = (2p+1)/(2p+4) chi_p."""
    chi = Fraction(1)
    for q in range(p):
        chi *= Fraction(2 * q + 1, 2 * q + 4)
    return chi


def chi_sequence(pmax: int) -> Iterator[Fraction]:
    """Yields chi_0, chi_1, ..., chi_pmax without recomputation."""
    chi = Fraction(1)
    yield chi
    for q in range(pmax):
        chi *= Fraction(2 * q + 1, 2 * q + 4)
        yield chi
