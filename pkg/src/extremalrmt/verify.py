"""Acceptance suite: every check the library must pass, one result per criterion.

Used by the ``verify`` CLI subcommand and mirrored by the pytest acceptance
module.  All grids default to their full (contract) sizes; the ``Scale``
knobs exist for smoke runs and reproducibility probes and are recorded in
the emitted results.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import montecarlo, tails, wick, wishart
from .extremum import (extremal_bound, genus_histogram, kappa_table_rectangular,
                       kappa_table_symmetric)
from .pairing import (catalan_number, chi_sequence, double_factorial,
                      enumerate_pairings)
from .profile import Kind, VarianceProfile, iid_profile
from .wishart import build_table, log_bound_complex, log_bound_real, log_mp_asymptote

WISHART_CS: Tuple[Fraction, ...] = (Fraction(1), Fraction(3, 2), Fraction(2),
                                    Fraction(4), Fraction(10))


@dataclass
class Scale:
    """Grid sizes; defaults are the acceptance-contract values."""

    genus_pmax: int = 5
    table_pmax: int = 4
    sweep_profiles: int = 100
    wishart_nmax: int = 50
    wishart_pmax: int = 200
    mc_dim: int = 200
    mc_samples: int = 2000
    mgf_samples: int = 100_000
    count_pmax: int = 6
    chi_lo: int = 1000
    chi_hi: int = 10_000


@dataclass
class CriterionResult:
    cid: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[criterion {self.cid:2d}] {status}: {self.name} -- {self.detail}"


@dataclass
class VerifyContext:
    seed: int = 42
    threads: int = 1
    scale: Scale = field(default_factory=Scale)
    _wishart_tables: Optional[List[wishart.WishartTable]] = None
    _wishart_reports: Optional[List[wishart.BoundCheckReport]] = None
    _mc_cache: Dict[str, montecarlo.SimulationResult] = field(default_factory=dict)

    def wishart_grid(self) -> List[wishart.WishartTable]:
        if self._wishart_tables is None:
            tables = []
            for c in WISHART_CS:
                for n in range(1, self.scale.wishart_nmax + 1):
                    if (c * n).denominator != 1:
                        continue
                    tables.append(build_table(n, int(c * n), self.scale.wishart_pmax))
            self._wishart_tables = tables
        return self._wishart_tables

    def wishart_reports(self) -> List[wishart.BoundCheckReport]:
        if self._wishart_reports is None:
            self._wishart_reports = [wishart.verify_bounds(t) for t in self.wishart_grid()]
        return self._wishart_reports

    def mc_result(self, key: str, config: montecarlo.SimulationConfig,
                  **targets) -> montecarlo.SimulationResult:
        if key not in self._mc_cache:
            self._mc_cache[key] = montecarlo.estimate(config, threads=self.threads, **targets)
        return self._mc_cache[key]


# -- criteria ---------------------------------------------------------------


def criterion_1_genus_identity(ctx: VerifyContext) -> CriterionResult:
    """Sum of d^{p-2 ell(pi)} over pairings equals the Hermitian oracle."""
    bad = []
    for p in range(1, ctx.scale.genus_pmax + 1):
        hist = dict(genus_histogram(p))
        for d in (1, 2, 3):
            lhs = sum(cnt * Fraction(d) ** (p - 2 * ell) for ell, cnt in hist.items())
            rhs = wick.moment_hermitian(iid_profile(Kind.HERMITIAN, d), p)
            if lhs != rhs:
                bad.append((d, p))
    detail = f"d in 1..3, p in 1..{ctx.scale.genus_pmax}, exact equality"
    if bad:
        detail += f"; mismatches at {bad}"
    return CriterionResult(1, "genus-expansion identity", not bad, detail)


def criterion_2_symmetric_equality(ctx: VerifyContext) -> CriterionResult:
    bad = []
    for p in range(1, ctx.scale.table_pmax + 1):
        tab = kappa_table_symmetric(p)
        for d in (1, 2, 3):
            lhs = tab.evaluate(sigma_tilde_sq=Fraction(d + 1), sigma_sq=Fraction(d))
            rhs = wick.moment_symmetric(iid_profile(Kind.SYMMETRIC, d), p)
            if lhs != rhs:
                bad.append((d, p))
    detail = f"d in 1..3, p in 1..{ctx.scale.table_pmax}, exact equality"
    if bad:
        detail += f"; mismatches at {bad}"
    return CriterionResult(2, "symmetric extremum equality", not bad, detail)


def criterion_3_rectangular_triple(ctx: VerifyContext) -> CriterionResult:
    """kappa table == Wick oracle == Wishart recursion, all exact.

    The recursion sequence is defined for n <= m; the wide case goes through
    the transposed table via E[Tr (XX*)^p] = E[Tr (X*X)^p].
    """
    bad = []
    for p in range(1, ctx.scale.table_pmax + 1):
        tab = kappa_table_rectangular(p)
        for d1 in (1, 2, 3):
            for d2 in (1, 2, 3):
                poly = tab.evaluate(sigma1_sq=Fraction(d1), sigma2_sq=Fraction(d2))
                oracle = wick.moment_rect_real(iid_profile(Kind.RECTANGULAR, d1, d2), p)
                if d1 <= d2:
                    rec = build_table(d1, d2, p).trace_moment_real(p)
                else:
                    rec = build_table(d2, d1, p).trace_moment_real(p) * Fraction(d2, d1)
                if not (poly == oracle == rec):
                    bad.append((d1, d2, p))
    detail = f"d1,d2 in 1..3, p in 1..{ctx.scale.table_pmax}, triple exact agreement"
    if bad:
        detail += f"; mismatches at {bad}"
    return CriterionResult(3, "rectangular extremum equality + triple agreement", not bad, detail)


def _random_profile(rng: random.Random, kind: Kind) -> VarianceProfile:
    """Random rational profile with sigma_* normalized to exactly 1."""
    while True:
        if kind is Kind.RECTANGULAR:
            n, m = rng.randint(1, 4), rng.randint(1, 4)
            rows = [[Fraction(rng.randint(0, 8), 8) for _ in range(m)] for _ in range(n)]
        else:
            n = rng.randint(1, 4)
            rows = [[Fraction(0)] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    rows[i][j] = rows[j][i] = Fraction(rng.randint(0, 8), 8)
        mx = max(max(r) for r in rows)
        if mx == 0:
            continue
        rows = [[x / mx for x in row] for row in rows]
        return VarianceProfile.from_entries(kind, rows)


def criterion_4_inequality_sweep(ctx: VerifyContext) -> CriterionResult:
    """Random rational profiles: exact Wick moment <= ceiled extremal bound."""
    rng = random.Random(ctx.seed * 1_000_003 + 4)
    oracles = {Kind.HERMITIAN: wick.moment_hermitian,
               Kind.SYMMETRIC: wick.moment_symmetric,
               Kind.RECTANGULAR: wick.moment_rect_real}
    violations = 0
    checked = 0
    for kind in (Kind.HERMITIAN, Kind.SYMMETRIC, Kind.RECTANGULAR):
        for _ in range(ctx.scale.sweep_profiles):
            prof = _random_profile(rng, kind)
            for p in range(1, ctx.scale.table_pmax + 1):
                mom = oracles[kind](prof, p)
                bound = extremal_bound(prof, p).ceiled_value
                checked += 1
                if mom > bound:
                    violations += 1
    detail = (f"{ctx.scale.sweep_profiles} profiles per taxonomy, p <= "
              f"{ctx.scale.table_pmax}, {checked} comparisons, {violations} violations")
    return CriterionResult(4, "extremum inequality sweep", violations == 0, detail)


def criterion_5_wishart_vs_oracle(ctx: VerifyContext) -> CriterionResult:
    bad = []
    for n in (1, 2, 3):
        for m in range(n, 4):
            tab = build_table(n, m, 4)
            for p in range(1, 5):
                if tab.trace_moment_complex(p) != wick.moment_rect_complex(n, m, p):
                    bad.append(("complex", n, m, p))
                ones = iid_profile(Kind.RECTANGULAR, n, m)
                if tab.trace_moment_real(p) != wick.moment_rect_real(ones, p):
                    bad.append(("real", n, m, p))
    neg = 0
    for tab in ctx.wishart_grid():
        for p in range(tab.pmax + 1):
            if tab.D[p] < 0 or tab.Aprime[p] > tab.A[p]:
                neg += 1
    ntab = len(ctx.wishart_grid())
    detail = (f"oracle identities n,m <= 3 p <= 4; D_p >= 0 and A'_p <= A_p over "
              f"{ntab} tables (n <= {ctx.scale.wishart_nmax}, "
              f"p <= {ctx.scale.wishart_pmax}), {neg} violations")
    return CriterionResult(5, "wishart recursions vs oracle", not bad and neg == 0, detail)


def criterion_6_wishart_envelope(ctx: VerifyContext) -> CriterionResult:
    """Exact/bound ratios within (0, 40]; limiting-moment tightness >= 1/40.

    The tightness clause compares against the limiting-moment asymptote (the
    bound's correction factor is vacuously large for p >> n, so the
    theorem-form ratio is not bounded below there).
    """
    log40 = math.log(40.0)
    worst = -math.inf
    ok = True
    for rep in ctx.wishart_reports():
        hi = max(max(rep.log_ratio_complex.values()), max(rep.log_ratio_real.values()))
        worst = max(worst, hi)
        if hi > log40:
            ok = False
    lo_p = min(20, ctx.scale.wishart_pmax)
    tight_tab = build_table(min(50, ctx.scale.wishart_nmax), min(50, ctx.scale.wishart_nmax),
                            ctx.scale.wishart_pmax)
    rep = wishart.verify_bounds(tight_tab)
    min_mp = min(rep.mp_log_ratio_complex[p]
                 for p in range(lo_p, ctx.scale.wishart_pmax + 1))
    tight_ok = min_mp >= -log40
    detail = (f"max log-ratio {worst:.6g} (cap log40={log40:.6g}); tightness: "
              f"min limiting-moment log-ratio {min_mp:.6g} >= -log40 on c=1 "
              f"n={tight_tab.n} p in [{lo_p},{ctx.scale.wishart_pmax}]")
    return CriterionResult(6, "wishart moment-bound envelope", ok and tight_ok, detail)


def criterion_7_k_ratio_lemmas(ctx: VerifyContext) -> CriterionResult:
    checked = 0
    violations = 0
    for rep in ctx.wishart_reports():
        checked += rep.k_lemma_checked
        violations += rep.k_lemma_violations
    detail = f"{checked} inequality checks in the p < (c-1)n regime, {violations} violations"
    return CriterionResult(7, "K-ratio lemmas", violations == 0, detail)


def criterion_8_mc_tails(ctx: VerifyContext) -> CriterionResult:
    """Empirical tails never exceed the evaluated bounds (3 Wilson half-widths)."""
    dim = ctx.scale.mc_dim
    nsamp = ctx.scale.mc_samples
    fails = []

    rect = iid_profile(Kind.RECTANGULAR, dim, dim)
    cfg = montecarlo.SimulationConfig(rect, nsamp, ctx.seed)
    res = ctx.mc_result("rect_norms", cfg, norms=True)
    from .profile import compute_params
    prm = compute_params(rect)
    for t in (1.0, 2.0, 3.0):
        tb = tails.small_dev_bound(Kind.RECTANGULAR, prm, dim, t)
        freq, hw = res.tail(tb.threshold)
        if freq > tb.prob + 3 * hw:
            fails.append(("rect-small", t, freq, tb.prob))
    nonconv = res.nonconverged

    sym = iid_profile(Kind.SYMMETRIC, dim)
    cfgs = montecarlo.SimulationConfig(sym, nsamp, ctx.seed + 1)
    ress = ctx.mc_result("sym_norms", cfgs, norms=True)
    prms = compute_params(sym)
    for t in (2.0, 4.0):
        tb = tails.large_dev_bound(Kind.SYMMETRIC, prms, dim, t)
        freq, hw = ress.tail(tb.threshold)
        if freq > tb.prob + 3 * hw:
            fails.append(("sym-large", t, freq, tb.prob))
    nonconv += ress.nonconverged

    detail = (f"n=m={dim}, {nsamp} samples per model, {nonconv} non-converged; "
              f"{len(fails)} bound violations")
    if fails:
        detail += f" {fails}"
    return CriterionResult(8, "Monte Carlo tail soundness", not fails and nonconv == 0, detail)


def criterion_9_mgf_bounds(ctx: VerifyContext) -> CriterionResult:
    nsamp = ctx.scale.mgf_samples
    ts = (0.5, 1.0)
    fails = []
    setups = [(Kind.HERMITIAN, 2), (Kind.HERMITIAN, 5),
              (Kind.SYMMETRIC, 2), (Kind.SYMMETRIC, 5),
              (Kind.RECTANGULAR, (2, 4))]
    for kind, dims in setups:
        if kind is Kind.RECTANGULAR:
            prof = iid_profile(kind, dims[0], dims[1])
        else:
            prof = iid_profile(kind, dims)
        cfg = montecarlo.SimulationConfig(prof, nsamp, ctx.seed + 9)
        res = ctx.mc_result(f"mgf_{kind.value}_{dims}", cfg, norms=False, mgf_ts=ts)
        for t in ts:
            mean, se = res.mgf_means[t], res.mgf_ses[t]
            bound = tails.mgf_bound(kind, dims, t)
            if mean > bound * (1 + 5 * se / mean):
                fails.append((kind.value, dims, t, mean, bound))
    detail = f"{len(setups)} ensembles x t in {ts}, {nsamp} samples; {len(fails)} violations"
    if fails:
        detail += f" {fails}"
    return CriterionResult(9, "MGF bounds", not fails, detail)


def criterion_10_combinatorial_counts(ctx: VerifyContext) -> CriterionResult:
    bad = []
    for p in range(0, ctx.scale.count_pmax + 1):
        total = 0
        noncross = 0
        for pi in enumerate_pairings(p):
            total += 1
            noncross += pi.noncrossing
        if total != double_factorial(2 * p - 1) or noncross != catalan_number(p):
            bad.append(p)
    lo, hi = ctx.scale.chi_lo, ctx.scale.chi_hi
    vmin, vmax = math.inf, -math.inf
    for p, chi in enumerate(chi_sequence(hi)):
        if p >= lo:
            v = float(chi) * p ** 1.5 * math.sqrt(math.pi)
            vmin, vmax = min(vmin, v), max(vmax, v)
    chi_ok = 0.9 < vmin and vmax < 1.1
    detail = (f"counts exact for p <= {ctx.scale.count_pmax}; "
              f"chi_p p^1.5 sqrt(pi) in [{vmin:.6f}, {vmax:.6f}] on [{lo}, {hi}]")
    return CriterionResult(10, "combinatorial counts", not bad and chi_ok, detail)


def criterion_11_thread_determinism(ctx: VerifyContext) -> CriterionResult:
    """Seeded Monte Carlo results are bitwise identical across thread counts.

    Byte-identity of the CLI manifests and CSV files is exercised end to end
    by the test suite, which invokes ``verify`` twice per thread count.
    """
    prof = iid_profile(Kind.RECTANGULAR, 40, 40)
    cfg = montecarlo.SimulationConfig(prof, 200, ctx.seed + 11)
    base = montecarlo.estimate(cfg, norms=True, moment_powers=(1, 2), threads=1)
    same = True
    for threads in (2, 4):
        rep = montecarlo.estimate(cfg, norms=True, moment_powers=(1, 2), threads=threads)
        same &= bool(np.array_equal(base.norms_by_index, rep.norms_by_index))
        same &= base.moment_means == rep.moment_means
    detail = "norms and moments bitwise equal for threads in {1,2,4} (n=40, 200 samples)"
    return CriterionResult(11, "reproducibility across thread counts", same, detail)


EXACT_CRITERIA = (criterion_1_genus_identity, criterion_2_symmetric_equality,
                  criterion_3_rectangular_triple, criterion_4_inequality_sweep,
                  criterion_5_wishart_vs_oracle, criterion_6_wishart_envelope,
                  criterion_7_k_ratio_lemmas, criterion_10_combinatorial_counts)
MC_CRITERIA = (criterion_8_mc_tails, criterion_9_mgf_bounds,
               criterion_11_thread_determinism)


def run_suite(suite: str = "all", seed: int = 42, threads: int = 1,
              scale: Optional[Scale] = None, echo=None) -> List[CriterionResult]:
    ctx = VerifyContext(seed=seed, threads=threads, scale=scale or Scale())
    if suite == "exact":
        funcs = EXACT_CRITERIA
    elif suite == "montecarlo":
        funcs = MC_CRITERIA
    elif suite == "all":
        funcs = (criterion_1_genus_identity, criterion_2_symmetric_equality,
                 criterion_3_rectangular_triple, criterion_4_inequality_sweep,
                 criterion_5_wishart_vs_oracle, criterion_6_wishart_envelope,
                 criterion_7_k_ratio_lemmas, criterion_8_mc_tails,
                 criterion_9_mgf_bounds, criterion_10_combinatorial_counts,
                 criterion_11_thread_determinism)
    else:
        raise ValueError(f"unknown suite {suite!r}")
    results = []
    for fn in funcs:
        res = fn(ctx)
        results.append(res)
        if echo:
            echo(res.line())
    return results
