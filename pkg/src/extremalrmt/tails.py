"""Closed-form tail-bound and exponential-moment evaluators.

Every bound is evaluated literally, the probability is capped at 1 (with a
``capped`` flag), and requests outside a bound's validity window raise
instead of extrapolating.

The Hermitian small-deviation bound is fully explicit.  The symmetric and
rectangular versions contain a universal constant that the proofs only show
to exist; the defaults used here are

* exponent constant 1/64 (the explicit constant surfaced by the proof chain),
* prefactor multiplier 40 * e, combining the moment-lemma envelope constant
  40 (validated by the Wishart sweep in :mod:`extremalrmt.wishart`) with the
  explicit factor e.

Both are configuration-overridable and recorded in every returned bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Tuple

from .errors import DimensionError, OutOfWindow, TransposeRequired
from .profile import Kind, MatrixParams

DEFAULT_CONSTANTS = {
    "small_dev_exponent": 1.0 / 64.0,
    "small_dev_prefactor": 40.0 * math.e,
    "moment_envelope": 40.0,
}


class Flavor(Enum):
    SMALL_DEV = "small"
    LARGE_DEV = "large"
    PROP_FORM = "prop"


@dataclass(frozen=True)
class TailBound:
    model: Kind
    flavor: Flavor
    threshold: float
    prob: float
    t_or_eps: float
    window: Tuple[float, float]
    constants: Dict[str, float]
    capped: bool


def _cap(raw: float) -> Tuple[float, bool]:
    return (1.0, True) if raw >= 1.0 else (max(raw, 0.0), False)


def _floats(params: MatrixParams):
    return params.as_floats()


def small_dev_bound(model: Kind, params: MatrixParams, n: int, t: float,
                    constants: Optional[Dict[str, float]] = None) -> TailBound:
    """Deviation bound at the fluctuation scale sigma_*^{4/3} sigma^{-1/3}.

    hermitian:   P[|X| > 2 sigma + 4 sigma_*^{4/3} sigma^{-1/3} t]
                   <= (e n sigma_*^2 / sigma^2) exp(-t^{3/2})
    symmetric:   P[|X| > 2 sigma + sigma_*^{4/3} sigma^{-1/3} t]
                   <= pref (n sigma_*^2 / sigma^2) exp(-c_exp t^{3/2})
    rectangular: P[|X| > sigma_1 + sigma_2 + sigma_*^{4/3} sigma_1^{-1/3} t]
                   <= pref (n sigma_*^2 / sigma_1^2) exp(-c_exp t^{3/2}),
                 valid for sigma_1 <= sigma_2 (transpose otherwise).
    """
    cfg = dict(DEFAULT_CONSTANTS)
    if constants:
        cfg.update(constants)
    prm = _floats(params)
    star = math.sqrt(prm.sigma_star_sq)

    if model is Kind.RECTANGULAR:
        s1 = math.sqrt(prm.sigma1_sq)
        s2 = math.sqrt(prm.sigma2_sq)
        if s1 > s2:
            raise TransposeRequired("sigma1 > sigma2; evaluate the transposed profile")
        hi = s1 ** (1 / 3) * s2 / star ** (4 / 3)
        if not 0 <= t <= hi:
            raise OutOfWindow(f"t={t} outside [0, {hi}]")
        threshold = s1 + s2 + star ** (4 / 3) * s1 ** (-1 / 3) * t
        raw = cfg["small_dev_prefactor"] * n * prm.sigma_star_sq / prm.sigma1_sq \
            * math.exp(-cfg["small_dev_exponent"] * t ** 1.5)
        used = {"small_dev_exponent": cfg["small_dev_exponent"],
                "small_dev_prefactor": cfg["small_dev_prefactor"]}
    else:
        sig = math.sqrt(prm.sigma_sq)
        hi = (sig / star) ** (4 / 3)
        if not 0 <= t <= hi:
            raise OutOfWindow(f"t={t} outside [0, {hi}]")
        if model is Kind.HERMITIAN:
            threshold = 2 * sig + 4 * star ** (4 / 3) * sig ** (-1 / 3) * t
            raw = math.e * n * prm.sigma_star_sq / prm.sigma_sq * math.exp(-t ** 1.5)
            used = {"exponent": 1.0, "prefactor": math.e, "fluctuation_coeff": 4.0}
        else:
            threshold = 2 * sig + star ** (4 / 3) * sig ** (-1 / 3) * t
            raw = cfg["small_dev_prefactor"] * n * prm.sigma_star_sq / prm.sigma_sq \
                * math.exp(-cfg["small_dev_exponent"] * t ** 1.5)
            used = {"small_dev_exponent": cfg["small_dev_exponent"],
                    "small_dev_prefactor": cfg["small_dev_prefactor"]}
    prob, capped = _cap(raw)
    return TailBound(model, Flavor.SMALL_DEV, threshold, prob, t, (0.0, hi), used, capped)


def large_dev_bound(model: Kind, params: MatrixParams, n: int, t: float,
                    m: Optional[int] = None) -> TailBound:
    """Gaussian-tail bound at scale sigma_*; fully explicit, no tunables.

    hermitian:   P[|X| > 2 sigma + sigma_* (1+t)] <= 2n exp(-t^2/2)
    symmetric:   same threshold, exp(-t^2/4)
    rectangular: P[|X| > sigma_1 + sigma_2 + sigma_* (1+t)] <= 2n exp(-t^2/2),
                 requires n <= m.
    """
    if t < 0:
        raise OutOfWindow("t must be nonnegative")
    prm = _floats(params)
    star = math.sqrt(prm.sigma_star_sq)
    if model is Kind.RECTANGULAR:
        if m is not None and n > m:
            raise DimensionError(f"large-deviation bound needs n <= m, got {n} > {m}")
        threshold = math.sqrt(prm.sigma1_sq) + math.sqrt(prm.sigma2_sq) + star * (1 + t)
        raw = 2 * n * math.exp(-t * t / 2)
        used = {"exponent_denom": 2.0}
    else:
        threshold = 2 * math.sqrt(prm.sigma_sq) + star * (1 + t)
        denom = 2.0 if model is Kind.HERMITIAN else 4.0
        raw = 2 * n * math.exp(-t * t / denom)
        used = {"exponent_denom": denom}
    prob, capped = _cap(raw)
    return TailBound(model, Flavor.LARGE_DEV, threshold, prob, t, (0.0, math.inf), used, capped)


def prop_bound(model: Kind, params: MatrixParams, n: int, eps: float,
               constants: Optional[Dict[str, float]] = None) -> TailBound:
    """Intermediate proposition-form bound at relative deviation eps in [0, 1].

    hermitian:   P[|X| > 2 sqrt(sigma^2 + sigma_*^2) (1+eps)]
                   <= (e n sigma_*^2/sigma^2) exp(-(sigma^2/sigma_*^2) eps^{3/2})
    symmetric:   same threshold, exponent (1/4)(sigma^2/sigma_*^2) eps^{3/2}
    rectangular: P[|X| > (sqrt(sigma_1^2+sigma_*^2)+sqrt(sigma_2^2+sigma_*^2))(1+eps)]
                   <= pref (n sigma_*^2/sigma_1^2)
                      exp(-(1/8)(sigma_1^{1/2} sigma_2^{3/2}/sigma_*^2) eps^{3/2})
    """
    if not 0 <= eps <= 1:
        raise OutOfWindow(f"eps={eps} outside [0, 1]")
    cfg = dict(DEFAULT_CONSTANTS)
    if constants:
        cfg.update(constants)
    prm = _floats(params)
    star2 = prm.sigma_star_sq
    if model is Kind.RECTANGULAR:
        s1 = math.sqrt(prm.sigma1_sq)
        s2 = math.sqrt(prm.sigma2_sq)
        if s1 > s2:
            raise TransposeRequired("sigma1 > sigma2; evaluate the transposed profile")
        threshold = (math.sqrt(prm.sigma1_sq + star2) + math.sqrt(prm.sigma2_sq + star2)) * (1 + eps)
        expo = (math.sqrt(s1) * s2 ** 1.5 / star2) * eps ** 1.5 / 8
        raw = cfg["small_dev_prefactor"] * n * star2 / prm.sigma1_sq * math.exp(-expo)
        used = {"exponent_coeff": 1 / 8, "small_dev_prefactor": cfg["small_dev_prefactor"]}
    else:
        threshold = 2 * math.sqrt(prm.sigma_sq + star2) * (1 + eps)
        if model is Kind.HERMITIAN:
            expo = prm.sigma_sq / star2 * eps ** 1.5
            raw = math.e * n * star2 / prm.sigma_sq * math.exp(-expo)
            used = {"exponent_coeff": 1.0, "prefactor": math.e}
        else:
            expo = prm.sigma_sq / star2 * eps ** 1.5 / 4
            raw = cfg["small_dev_prefactor"] * n * star2 / prm.sigma_sq * math.exp(-expo)
            used = {"exponent_coeff": 1 / 4, "small_dev_prefactor": cfg["small_dev_prefactor"]}
    prob, capped = _cap(raw)
    return TailBound(model, Flavor.PROP_FORM, threshold, prob, eps, (0.0, 1.0), used, capped)


def mgf_bound(model: Kind, dims, t: float) -> float:
    """Trace exponential-moment bound for the unit-variance i.i.d. comparison matrix.

    hermitian d:          E[tr e^{tY}]            <= exp(2 sqrt(d) t + t^2/2)
    symmetric d:          E[tr e^{tY}]            <= exp(2 sqrt(d) t + t^2)
    rectangular (d1,d2):  E[tr e^{t (YY*)^{1/2}}] <= exp((sqrt(d1)+sqrt(d2)) t + t^2/2)
    """
    if t < 0:
        raise OutOfWindow("t must be nonnegative")
    if model is Kind.RECTANGULAR:
        d1, d2 = dims
        return math.exp((math.sqrt(d1) + math.sqrt(d2)) * t + t * t / 2)
    d = int(dims)
    if model is Kind.HERMITIAN:
        return math.exp(2 * math.sqrt(d) * t + t * t / 2)
    return math.exp(2 * math.sqrt(d) * t + t * t)
