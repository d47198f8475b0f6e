"""Exact Wishart trace-moment recursions and sharp-bound verification.

Normalized moments of an n x m Gaussian matrix (n <= m, c = m/n >= 1):

* A_p  = E[Tr (ZZ*)^p] / n^{p+1}   (complex entries)
* A'_p = same for the (n-1) x (m-1) submatrix, still normalized by n
* B_p  = E[Tr (YY*)^p] / n^{p+1}   (real entries)
* D_p  = B_p - A'_p  (>= 0)

All sequences are filled by exact rational three-term recursions; B is
produced both by its own recursion and as D + A', and both paths must agree
exactly.  Bound verification compares the exact values against the explicit
moment-bound formulas (evaluated in log space, since the correction factor
overflows doubles for p >> n) and checks the ratio lemmas for the
K_p = (A_{p+1}/A_p)(chi_p/chi_{p+1}) sequence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import CapExceeded, DimensionError
from .pairing import chi_sequence

EXACT_PMAX_CAP = 500


def _log_fraction(x: Fraction) -> float:
    """Natural log of a positive rational, safe for huge numerators."""
    if x <= 0:
        raise ValueError("log of nonpositive rational")
    return math.log(x.numerator) - math.log(x.denominator)


@dataclass(frozen=True)
class WishartTable:
    n: int
    m: int
    c: Fraction
    pmax: int
    A: Tuple[Fraction, ...]
    Aprime: Tuple[Fraction, ...]
    B: Tuple[Fraction, ...]
    D: Tuple[Fraction, ...]
    chi: Tuple[Fraction, ...]

    def trace_moment_complex(self, p: int) -> Fraction:
        """E[tr (ZZ*)^p] = n^p A_p."""
        return Fraction(self.n) ** p * self.A[p]

    def trace_moment_real(self, p: int) -> Fraction:
        """E[tr (YY*)^p] = n^p B_p."""
        return Fraction(self.n) ** p * self.B[p]

    def k_ratios(self) -> List[Fraction]:
        """K_p = (A_{p+1}/A_p)(chi_p/chi_{p+1}) for p = 1..pmax-1 (K[0] unused)."""
        out: List[Optional[Fraction]] = [None]
        for p in range(1, self.pmax):
            out.append(self.A[p + 1] / self.A[p] * self.chi[p] / self.chi[p + 1])
        return out


@dataclass(frozen=True)
class WishartProofParams:
    """Derived quantities at a fixed order p: the two factorization pairs
    lambda/lambda_bar and mu/mu_bar, the regime, and N_p = A_p / chi_p."""

    n: int
    c: float
    p: int
    lam: float
    lam_bar: float
    mu: float
    mu_bar: float
    regime: str           # "small" when p < (c-1) n, else "large"
    N_p: float


def build_table(n: int, m: int, pmax: int, exact_cap: int = EXACT_PMAX_CAP) -> WishartTable:
    """Fill A, A', B, D, chi up to pmax by exact rational recursion."""
    if n < 1 or m < n:
        raise DimensionError(f"need 1 <= n <= m, got n={n}, m={m}")
    if pmax < 0:
        raise DimensionError("pmax must be nonnegative")
    if pmax > exact_cap:
        raise CapExceeded(f"pmax={pmax} above exact cap {exact_cap}; "
                          "use float_moment_path for sweeps beyond it")
    c = Fraction(m, n)
    one_n = Fraction(1, n)

    A = [Fraction(1), c]
    for p in range(1, pmax):
        A.append(2 * (c + 1) * Fraction(2 * p + 1, 2 * p + 4) * A[p]
                 - ((c - 1) ** 2 - Fraction(p * p, n * n)) * Fraction(p - 1, p + 2) * A[p - 1])
    A = A[:pmax + 1]

    # A' needs one extra index for the B recursion
    Ap = [Fraction(n - 1, n), Fraction(n - 1, n) * (c - one_n)]
    for p in range(1, pmax + 1):
        Ap.append(2 * (c + 1 - 2 * one_n) * Fraction(2 * p + 1, 2 * p + 4) * Ap[p]
                  - ((c - 1) ** 2 - Fraction(p * p, n * n)) * Fraction(p - 1, p + 2) * Ap[p - 1])

    B = [Fraction(1), c, (c + 1 + one_n) * c]
    for p in range(2, pmax):
        B.append(2 * (c + 1 - one_n) * B[p]
                 - ((c - 1) ** 2 - Fraction(4 * p * (p - 1) + 1, n * n)) * B[p - 1]
                 + Fraction(3, p - 1) * ((c + 1 - Fraction(p + 1, n)) * Ap[p] - Ap[p + 1]))
    B = B[:pmax + 1]

    D = [one_n, one_n * (c + 1 - one_n)]
    for p in range(1, pmax):
        D.append(2 * (c + 1 - one_n) * D[p]
                 - ((c - 1) ** 2 - Fraction(4 * p * (p - 1) + 1, n * n)) * D[p - 1]
                 - one_n * Ap[p] + Fraction((3 * p - 1) * (p - 1), n * n) * Ap[p - 1])
    D = D[:pmax + 1]

    for p in range(min(len(B), len(D))):
        if B[p] != D[p] + Ap[p]:
            raise ArithmeticError(f"recursion mismatch at p={p}: B_p != D_p + A'_p")

    chi = tuple(chi_sequence(pmax))
    return WishartTable(n, m, c, pmax, tuple(A), tuple(Ap[:pmax + 1]), tuple(B), tuple(D), chi)


def proof_params(table: WishartTable, p: int) -> WishartProofParams:
    if not 0 <= p <= table.pmax:
        raise DimensionError(f"p={p} outside the tabulated range 0..{table.pmax}")
    n, c = table.n, float(table.c)
    ratio2 = (p / n) ** 2
    lam = c + 1 + math.sqrt(4 * c + ratio2)
    lam_bar = c + 1 - math.sqrt(4 * c + ratio2)
    mu = c + 1 + 2 * math.sqrt(c + ratio2)
    mu_bar = c + 1 - 2 * math.sqrt(c + ratio2)
    regime = "small" if p < (float(table.c) - 1) * n else "large"
    N_p = float(table.A[p] / table.chi[p])
    return WishartProofParams(n, c, p, lam, lam_bar, mu, mu_bar, regime, N_p)


# -- bound formulas (log space) --------------------------------------------


def log_bound_complex(n: int, c: float, p: int) -> float:
    """log of (sqrt(c)+1)^{2p} (1 + 2p^2/(c^{3/2} n^2))^p c^{3/4} / p^{3/2}."""
    return (2 * p * math.log(math.sqrt(c) + 1)
            + p * math.log1p(2 * p * p / (c ** 1.5 * n * n))
            + 0.75 * math.log(c) - 1.5 * math.log(p))


def log_bound_real(n: int, c: float, p: int) -> float:
    """log of (sqrt(c)+1)^{2p} (1 + 8p^2/(c^{3/2} n^2))^p (c^{3/4}/p^{3/2} + 1/n)."""
    return (2 * p * math.log(math.sqrt(c) + 1)
            + p * math.log1p(8 * p * p / (c ** 1.5 * n * n))
            + math.log(c ** 0.75 / p ** 1.5 + 1.0 / n))


def log_mp_asymptote(c: float, p: int) -> float:
    """log of the limiting-moment asymptote
    (sqrt(c)+1)^{2p} c^{1/4} (sqrt(c)+1) / (2 sqrt(pi) p^{3/2})."""
    r = math.sqrt(c) + 1
    return (2 * p * math.log(r) + 0.25 * math.log(c) + math.log(r)
            - math.log(2 * math.sqrt(math.pi)) - 1.5 * math.log(p))


def log_bound_d_small(n: int, c: float, p: int) -> float:
    """log of n^{-1} (sqrt(c)+1)^{2p} (1 + p^2/(c^{3/2} n^2))^p."""
    return (2 * p * math.log(math.sqrt(c) + 1)
            + p * math.log1p(p * p / (c ** 1.5 * n * n)) - math.log(n))


def log_bound_d_large(n: int, c: float, p: int) -> float:
    """log of n^{-1} (sqrt(c)+1)^{2p} (1 + 8p^2/(c^{3/2} n^2))^p."""
    return (2 * p * math.log(math.sqrt(c) + 1)
            + p * math.log1p(8 * p * p / (c ** 1.5 * n * n)) - math.log(n))


@dataclass
class BoundCheckReport:
    """Ratios of exact values to the constant-free bound formulas.

    Log-ratios are exact-minus-formula in natural log; the max ratios are the
    exponentials (0.0 when they underflow).  ``mp_ratios``, indexed by p,
    compares against the limiting-moment asymptote and is meaningful in the
    p << n regime where the bound's correction factor is near 1.
    """

    n: int
    m: int
    c: float
    pmax: int
    log_ratio_complex: Dict[int, float] = field(default_factory=dict)
    log_ratio_real: Dict[int, float] = field(default_factory=dict)
    log_ratio_d: Dict[int, float] = field(default_factory=dict)
    mp_log_ratio_complex: Dict[int, float] = field(default_factory=dict)
    mp_log_ratio_real: Dict[int, float] = field(default_factory=dict)
    k_lemma_checked: int = 0
    k_lemma_violations: int = 0
    k_lemma_max_excess: float = 0.0

    @property
    def max_ratio_complex(self) -> float:
        return math.exp(max(self.log_ratio_complex.values()))

    @property
    def max_ratio_real(self) -> float:
        return math.exp(max(self.log_ratio_real.values()))

    @property
    def max_ratio_d(self) -> float:
        return math.exp(max(self.log_ratio_d.values())) if self.log_ratio_d else 0.0


def verify_bounds(table: WishartTable, rel_slack: float = 1e-12) -> BoundCheckReport:
    """Compare exact moments to the bound formulas and check the K lemmas."""
    n, c = table.n, float(table.c)
    rep = BoundCheckReport(n=table.n, m=table.m, c=c, pmax=table.pmax)
    half_cn = 0.5 * (c - 1) * n
    for p in range(1, table.pmax + 1):
        la = _log_fraction(table.A[p])
        lb = _log_fraction(table.B[p])
        rep.log_ratio_complex[p] = la - log_bound_complex(n, c, p)
        rep.log_ratio_real[p] = lb - log_bound_real(n, c, p)
        rep.mp_log_ratio_complex[p] = la - log_mp_asymptote(c, p)
        rep.mp_log_ratio_real[p] = lb - log_mp_asymptote(c, p)
        if table.D[p] > 0:
            ld = _log_fraction(table.D[p])
            bound = log_bound_d_small(n, c, p) if p < half_cn else log_bound_d_large(n, c, p)
            rep.log_ratio_d[p] = ld - bound

    # K-ratio lemmas on the small regime: for each p < (c-1) n both
    # K_k <= (1 + 2 sqrt(c)/k^2) lambda and K_k <= (1 + 3/(2k)) lambda, k <= p
    K = table.k_ratios()
    p_small_max = min(table.pmax - 1, math.ceil((c - 1) * n) - 1)
    for p in range(1, p_small_max + 1):
        lam = c + 1 + math.sqrt(4 * c + (p / n) ** 2)
        for k in range(1, p + 1):
            kk = float(K[k])
            for rhs in ((1 + 2 * math.sqrt(c) / (k * k)) * lam,
                        (1 + 3 / (2 * k)) * lam):
                rep.k_lemma_checked += 1
                if kk > rhs * (1 + rel_slack):
                    rep.k_lemma_violations += 1
                    rep.k_lemma_max_excess = max(rep.k_lemma_max_excess, kk / rhs - 1)
    return rep


# -- float fast path and limiting moments ----------------------------------


def float_moment_path(n: int, m: int, pmax: int, dps: int = 36):
    """Extended-precision A_p/B_p/D_p sweep for orders beyond the exact cap."""
    import mpmath

    if n < 1 or m < n:
        raise DimensionError(f"need 1 <= n <= m, got n={n}, m={m}")
    with mpmath.workdps(dps):
        c = mpmath.mpf(m) / n
        one_n = mpmath.mpf(1) / n
        A = [mpmath.mpf(1), c]
        for p in range(1, pmax):
            A.append(2 * (c + 1) * mpmath.mpf(2 * p + 1) / (2 * p + 4) * A[p]
                     - ((c - 1) ** 2 - (mpmath.mpf(p) / n) ** 2)
                     * mpmath.mpf(p - 1) / (p + 2) * A[p - 1])
        Ap = [(n - 1) * one_n, (n - 1) * one_n * (c - one_n)]
        for p in range(1, pmax + 1):
            Ap.append(2 * (c + 1 - 2 * one_n) * mpmath.mpf(2 * p + 1) / (2 * p + 4) * Ap[p]
                      - ((c - 1) ** 2 - (mpmath.mpf(p) / n) ** 2)
                      * mpmath.mpf(p - 1) / (p + 2) * Ap[p - 1])
        B = [mpmath.mpf(1), c, (c + 1 + one_n) * c]
        for p in range(2, pmax):
            B.append(2 * (c + 1 - one_n) * B[p]
                     - ((c - 1) ** 2 - mpmath.mpf(4 * p * (p - 1) + 1) / (n * n)) * B[p - 1]
                     + mpmath.mpf(3) / (p - 1) * ((c + 1 - mpmath.mpf(p + 1) / n) * Ap[p] - Ap[p + 1]))
        D = [B[p] - Ap[p] for p in range(min(len(B), pmax + 1))]
        return A[:pmax + 1], B[:pmax + 1], D


def mp_moment(c, p: int, big_n: int = 10 ** 6, p_cap: int = 50) -> float:
    """Limiting normalized moment (n -> infinity at fixed aspect ratio c),
    realized as the exact recursion at a very large n, then rounded.

    Sanity comparator only; c must make c * big_n an integer.
    """
    cf = Fraction(c)
    if cf < 1:
        raise DimensionError("aspect ratio c must be >= 1")
    if p > p_cap:
        raise CapExceeded(f"p={p} above mp_moment cap {p_cap}")
    n = big_n * cf.denominator
    table = build_table(n, int(cf * n), p)
    return float(table.A[p])
