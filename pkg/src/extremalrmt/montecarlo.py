"""Seeded sampling of the three models, spectral norms, and empirical statistics.

Reproducibility contract
------------------------
Sample ``index`` under ``master_seed`` is a pure function of the two:
the per-sample key is ``splitmix64(splitmix64(master_seed) + index)`` and
seeds a counter-based Philox generator.  Entry draw order is fixed:

* rectangular: one row-major (n, m) block of standard entries;
* symmetric:   row-major upper triangle including the diagonal;
* hermitian:   row-major upper triangle; diagonal entries draw one standard
  normal, off-diagonal entries draw (real, imag) scaled by 1/sqrt(2).

The power-iteration start vector is drawn from the same stream after the
entries.  Aggregation is in sample-index order, so results do not depend on
the worker count.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidProfile, NoConvergence
from .profile import Kind, VarianceProfile

MASK64 = (1 << 64) - 1
GOLDEN64 = 0x9E3779B97F4A7C15

ENV_THREADS = "EXTREMALRMT_THREADS"


def splitmix64(x: int) -> int:
    """One splitmix64 step: advance by the golden-ratio increment and mix."""
    x = (x + GOLDEN64) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def sample_key(master_seed: int, index: int) -> int:
    """64-bit Philox key for one sample."""
    return splitmix64((splitmix64(master_seed & MASK64) + index) & MASK64)


def sample_rng(master_seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=sample_key(master_seed, index)))


@dataclass(frozen=True)
class SimulationConfig:
    profile: VarianceProfile
    samples: int
    master_seed: int
    entry_dist: str = "gaussian"          # gaussian | rademacher
    norm_tol: float = 1e-10
    norm_maxiter: int = 10_000

    def __post_init__(self):
        if self.samples < 1:
            raise InvalidProfile("samples must be >= 1")
        if self.norm_tol <= 0:
            raise InvalidProfile("norm_tol must be positive")
        if self.entry_dist not in ("gaussian", "rademacher"):
            raise InvalidProfile(f"unknown entry distribution {self.entry_dist!r}")
        if self.entry_dist == "rademacher" and self.profile.kind is Kind.HERMITIAN:
            raise InvalidProfile("rademacher entries apply to the real models only")


def _draw(rng: np.random.Generator, dist: str, size) -> np.ndarray:
    if dist == "gaussian":
        return rng.standard_normal(size)
    return rng.integers(0, 2, size=size).astype(float) * 2.0 - 1.0


def sample_matrix(config: SimulationConfig, index: int,
                  rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Deterministic realization of sample ``index``."""
    if rng is None:
        rng = sample_rng(config.master_seed, index)
    prof = config.profile
    n, m, b = prof.n, prof.m, prof.b
    if prof.kind is Kind.RECTANGULAR:
        return b * _draw(rng, config.entry_dist, (n, m))
    if prof.kind is Kind.SYMMETRIC:
        X = np.zeros((n, n))
        for i in range(n):
            row = _draw(rng, config.entry_dist, n - i)
            X[i, i] = math.sqrt(2.0) * b[i, i] * row[0]
            X[i, i + 1:] = b[i, i + 1:] * row[1:]
            X[i + 1:, i] = X[i, i + 1:]
        return X
    # hermitian: complex Gaussian off-diagonal, real diagonal
    X = np.zeros((n, n), dtype=complex)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for i in range(n):
        X[i, i] = b[i, i] * rng.standard_normal()
        for j in range(i + 1, n):
            re, im = rng.standard_normal(2)
            z = b[i, j] * complex(re, im) * inv_sqrt2
            X[i, j] = z
            X[j, i] = z.conjugate()
    return X


def spectral_norm(mat: np.ndarray, tol: float = 1e-10, maxiter: int = 10_000,
                  start: Optional[np.ndarray] = None,
                  rng: Optional[np.random.Generator] = None) -> float:
    """Largest singular value by block power iteration on mat @ mat^H.

    A two-column subspace with a Rayleigh-Ritz step per iteration is used
    instead of a single vector: self-adjoint samples routinely have nearly
    degenerate +/- extreme eigenvalues, which stall the plain iteration.
    Deterministic when ``start`` (or a seeded ``rng``) is supplied; every
    200 stalled iterations a fresh random direction is blended in.
    """
    mat = np.asarray(mat)
    if not np.all(np.isfinite(mat)):
        raise InvalidProfile("matrix has non-finite entries")
    n = mat.shape[0]
    math_h = mat.conj().T
    gen = rng or np.random.default_rng(0)
    if start is None:
        start = gen.standard_normal(n)
    start = np.asarray(start, dtype=complex if np.iscomplexobj(mat) else float)
    if start.ndim == 1:
        second = gen.standard_normal(n)
        block = np.column_stack([start, second.astype(start.dtype)])
    else:
        block = start
    if not np.linalg.norm(block):
        block = np.eye(n, 2, dtype=block.dtype)
    V, _ = np.linalg.qr(block)
    lam_prev = None
    for it in range(1, maxiter + 1):
        W = mat @ (math_h @ V)
        ritz = np.linalg.eigvalsh(V.conj().T @ W)
        lam = float(np.real(ritz[-1]))
        norms = np.linalg.norm(W, axis=0)
        if norms.max() == 0.0:
            return 0.0
        if norms.min() == 0.0:
            W[:, norms == 0.0] = gen.standard_normal((n, int((norms == 0).sum())))
        V, _ = np.linalg.qr(W)
        if lam_prev is not None and abs(lam - lam_prev) <= tol * max(abs(lam), 1e-300):
            return math.sqrt(max(lam, 0.0))
        lam_prev = lam
        if it % 200 == 0 and rng is not None:
            fresh = rng.standard_normal((n, 2))
            V, _ = np.linalg.qr(V + 0.1 * fresh / np.linalg.norm(fresh))
            lam_prev = None
    raise NoConvergence(f"power iteration did not converge in {maxiter} iterations")


def wilson_halfwidth(successes: int, nsamp: int, z: float = 1.0) -> float:
    """Half-width of the Wilson score interval at ``z`` standard normal units."""
    if nsamp <= 0:
        raise InvalidProfile("need at least one sample")
    ph = successes / nsamp
    z2n = z * z / nsamp
    return z * math.sqrt(ph * (1 - ph) / nsamp + z2n / (4 * nsamp)) / (1 + z2n)


@dataclass
class SimulationResult:
    config: SimulationConfig
    norms: Optional[np.ndarray] = None            # sorted ascending
    norms_by_index: Optional[np.ndarray] = None
    moment_means: Dict[int, float] = field(default_factory=dict)
    moment_ses: Dict[int, float] = field(default_factory=dict)
    mgf_means: Dict[float, float] = field(default_factory=dict)
    mgf_ses: Dict[float, float] = field(default_factory=dict)
    nonconverged: int = 0

    def tail(self, x: float, z: float = 1.0) -> Tuple[float, float]:
        """Empirical survival frequency P[norm > x] with Wilson half-width."""
        if self.norms is None:
            raise InvalidProfile("norms were not collected")
        k = int(np.sum(self.norms > x))
        return k / len(self.norms), wilson_halfwidth(k, len(self.norms), z)

    def empirical_moment(self, p: int) -> float:
        """Mean of tr X^{2p} (self-adjoint) or tr (XX*)^p (rectangular)."""
        return self.moment_means[p]

    def mgf(self, t: float) -> float:
        """Mean of tr e^{tX} (self-adjoint) or tr e^{t (XX*)^{1/2}}."""
        return self.mgf_means[t]


def _resolve_threads(threads: Optional[int]) -> int:
    if threads is None:
        threads = int(os.environ.get(ENV_THREADS, "1") or 1)
    return max(1, threads)


def estimate(config: SimulationConfig, *, norms: bool = True,
             moment_powers: Sequence[int] = (), mgf_ts: Sequence[float] = (),
             threads: Optional[int] = None) -> SimulationResult:
    """Run the simulation and aggregate the requested statistics.

    Trace powers and exponential traces need the full spectrum, so those
    targets use a dense eigen/singular decomposition per sample; norms use
    the seeded power iteration.  Results are identical for any thread count.
    """
    prof = config.profile
    moment_powers = tuple(moment_powers)
    mgf_ts = tuple(mgf_ts)
    need_spectrum = bool(moment_powers or mgf_ts)
    nsamp = config.samples

    norm_arr = np.full(nsamp, np.nan) if norms else None
    mom_arr = {p: np.empty(nsamp) for p in moment_powers}
    mgf_arr = {t: np.empty(nsamp) for t in mgf_ts}
    failures = np.zeros(nsamp, dtype=bool)

    def work(index: int) -> None:
        rng = sample_rng(config.master_seed, index)
        X = sample_matrix(config, index, rng)
        if need_spectrum:
            if prof.kind is Kind.RECTANGULAR:
                s = np.linalg.svd(X, compute_uv=False)
                sq = s * s
                denom = prof.n
                for p in moment_powers:
                    mom_arr[p][index] = float(np.sum(sq ** p)) / denom
                for t in mgf_ts:
                    mgf_arr[t][index] = float(np.sum(np.exp(t * s))) / denom
            else:
                ev = np.linalg.eigvalsh(X)
                denom = prof.n
                for p in moment_powers:
                    mom_arr[p][index] = float(np.sum(ev ** (2 * p))) / denom
                for t in mgf_ts:
                    mgf_arr[t][index] = float(np.sum(np.exp(t * ev))) / denom
        if norms:
            start = rng.standard_normal(prof.n)
            try:
                nj = spectral_norm(X, config.norm_tol, config.norm_maxiter,
                                   start=start, rng=rng)
            except NoConvergence:
                failures[index] = True
                return
            if prof.kind is Kind.RECTANGULAR:
                entry_max = float(np.max(np.abs(X)))
                if nj < entry_max * (1 - 1e-8):
                    raise AssertionError(
                        f"norm {nj} below largest entry {entry_max} at sample {index}")
            norm_arr[index] = nj

    nthreads = _resolve_threads(threads)
    if nthreads == 1:
        for i in range(nsamp):
            work(i)
    else:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            list(pool.map(work, range(nsamp)))

    res = SimulationResult(config)
    res.nonconverged = int(np.sum(failures))
    if norms:
        ok = ~failures
        res.norms_by_index = norm_arr
        res.norms = np.sort(norm_arr[ok])
    for p in moment_powers:
        vals = mom_arr[p]
        res.moment_means[p] = float(np.mean(vals))
        res.moment_ses[p] = float(np.std(vals, ddof=1) / math.sqrt(nsamp)) if nsamp > 1 else 0.0
    for t in mgf_ts:
        vals = mgf_arr[t]
        res.mgf_means[t] = float(np.mean(vals))
        res.mgf_ses[t] = float(np.std(vals, ddof=1) / math.sqrt(nsamp)) if nsamp > 1 else 0.0
    return res
