"""Variance profiles for the three matrix models and their size parameters.

A profile is the deterministic nonnegative coefficient matrix (b_ij) that
scales independent standard entries.  Three model kinds are supported:

* ``rectangular``     -- n x m, independent real entries b_ij * xi_ij
* ``hermitian``       -- n x n, complex Gaussian off-diagonal, real diagonal
* ``symmetric``       -- n x n real symmetric, diagonal scaled by sqrt(2)

The size parameters are

* sigma1^2 = max_j sum_i b_ij^2   (largest column sum of squares)
* sigma2^2 = max_i sum_j b_ij^2   (largest row sum of squares)
* sigma^2  = max_i sum_j b_ij^2   (self-adjoint kinds)
* sigma~^2 = max_i (sum_j b_ij^2 + b_ii^2)
* sigma*^2 = max_ij b_ij^2
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionError, ExactnessError, InvalidProfile

# Exact entries are kept alongside the float matrix up to this many cells.
EXACT_CELL_LIMIT = 1_000_000

ExactMatrix = tuple  # tuple of tuples of Fraction


class Kind(str, Enum):
    RECTANGULAR = "rectangular"
    HERMITIAN = "hermitian"
    SYMMETRIC = "symmetric"

    @property
    def self_adjoint(self) -> bool:
        return self is not Kind.RECTANGULAR


def _as_kind(kind) -> Kind:
    if isinstance(kind, Kind):
        return kind
    try:
        return Kind(str(kind).lower())
    except ValueError:
        raise InvalidProfile(f"unknown model kind {kind!r}") from None


@dataclass(frozen=True)
class VarianceProfile:
    """Immutable coefficient matrix plus model kind.

    ``b`` is the dense row-major float view used for simulation and large
    parameter computations.  ``b_exact`` carries the same entries as exact
    rationals whenever the profile was built from exact inputs and is small
    enough; the Wick oracles require it.
    """

    kind: Kind
    n: int
    m: int
    b: np.ndarray
    b_exact: Optional[ExactMatrix] = field(default=None, repr=False)

    def __post_init__(self):
        kind = _as_kind(self.kind)
        object.__setattr__(self, "kind", kind)
        b = np.ascontiguousarray(np.asarray(self.b, dtype=float))
        if b.shape != (self.n, self.m):
            raise InvalidProfile(f"b has shape {b.shape}, expected {(self.n, self.m)}")
        if self.n < 1 or self.m < 1:
            raise InvalidProfile("dimensions must be positive")
        if not np.all(np.isfinite(b)):
            raise InvalidProfile("b contains NaN or infinite entries")
        if np.any(b < 0):
            raise InvalidProfile("b contains negative entries")
        if not np.any(b > 0):
            raise InvalidProfile("profile must have at least one positive entry")
        if kind.self_adjoint:
            if self.n != self.m:
                raise InvalidProfile(f"{kind.value} profile must be square")
            if not np.array_equal(b, b.T):
                raise InvalidProfile(f"{kind.value} profile must satisfy b_ij = b_ji")
        b.setflags(write=False)
        object.__setattr__(self, "b", b)
        if self.b_exact is not None:
            ex = tuple(tuple(Fraction(x) for x in row) for row in self.b_exact)
            if len(ex) != self.n or any(len(r) != self.m for r in ex):
                raise InvalidProfile("b_exact shape mismatch")
            object.__setattr__(self, "b_exact", ex)

    @classmethod
    def from_entries(cls, kind, entries: Sequence[Sequence], exact: bool = True) -> "VarianceProfile":
        """Build from nested ints/Fractions/decimal strings/floats.

        With ``exact=True`` (default) the exact rational values are retained;
        float inputs are converted via their exact binary value.
        """
        rows = [[Fraction(x) for x in row] for row in entries]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        b = np.array([[float(x) for x in row] for row in rows], dtype=float)
        keep = exact and n * m <= EXACT_CELL_LIMIT
        return cls(_as_kind(kind), n, m, b, tuple(map(tuple, rows)) if keep else None)

    # -- views ---------------------------------------------------------

    def exact_entries(self) -> ExactMatrix:
        """Exact rational entry matrix; raises if only floats are stored."""
        if self.b_exact is None:
            raise ExactnessError(
                "profile has no exact entries (float-only source, e.g. spiked); "
                "rebuild via from_entries or load_profile for oracle use")
        return self.b_exact

    def exact_squares(self) -> ExactMatrix:
        return tuple(tuple(x * x for x in row) for row in self.exact_entries())

    def transpose(self) -> "VarianceProfile":
        if self.kind.self_adjoint:
            return self
        ex = None
        if self.b_exact is not None:
            ex = tuple(zip(*self.b_exact))
        return VarianceProfile(self.kind, self.m, self.n, self.b.T.copy(), ex)

    def scaled(self, s) -> "VarianceProfile":
        """Profile with every coefficient multiplied by s > 0."""
        if s <= 0:
            raise InvalidProfile("scale factor must be positive")
        ex = None
        if self.b_exact is not None:
            sf = Fraction(s)
            ex = tuple(tuple(sf * x for x in row) for row in self.b_exact)
        return VarianceProfile(self.kind, self.n, self.m, self.b * float(s), ex)

    # -- serialization -------------------------------------------------

    def to_json(self) -> str:
        flat = [float(x) for x in self.b.reshape(-1)]
        return json.dumps({"kind": self.kind.value, "n": self.n, "m": self.m, "b": flat})


@dataclass(frozen=True)
class MatrixParams:
    """Size parameters of a profile; values are exact Fractions when the
    profile carries exact entries, floats otherwise."""

    kind: Kind
    sigma_star_sq: object
    sigma1_sq: object = None       # rectangular
    sigma2_sq: object = None       # rectangular
    sigma_sq: object = None        # self-adjoint
    sigma_tilde_sq: object = None  # self-adjoint

    def as_floats(self) -> "MatrixParams":
        conv = lambda v: None if v is None else float(v)
        return MatrixParams(self.kind, conv(self.sigma_star_sq), conv(self.sigma1_sq),
                            conv(self.sigma2_sq), conv(self.sigma_sq), conv(self.sigma_tilde_sq))


def compute_params(profile: VarianceProfile) -> MatrixParams:
    """Column/row max square sums and the largest squared entry.

    Exact rational arithmetic when exact entries are stored; otherwise
    ``math.fsum`` over float squares (error at most one ulp per summand).
    """
    if profile.b_exact is not None:
        sq = profile.exact_squares()
        row = [sum(r) for r in sq]
        col = [sum(sq[i][j] for i in range(profile.n)) for j in range(profile.m)]
        star = max(max(r) for r in sq)
        if profile.kind.self_adjoint:
            tilde = max(row[i] + sq[i][i] for i in range(profile.n))
            return MatrixParams(profile.kind, star, sigma_sq=max(row), sigma_tilde_sq=tilde)
        return MatrixParams(profile.kind, star, sigma1_sq=max(col), sigma2_sq=max(row))

    b = profile.b
    row = [math.fsum(x * x for x in b[i, :]) for i in range(profile.n)]
    star = float(np.max(b)) ** 2
    if profile.kind.self_adjoint:
        tilde = max(row[i] + float(b[i, i]) ** 2 for i in range(profile.n))
        return MatrixParams(profile.kind, star, sigma_sq=max(row), sigma_tilde_sq=tilde)
    col = [math.fsum(x * x for x in b[:, j]) for j in range(profile.m)]
    return MatrixParams(profile.kind, star, sigma1_sq=max(col), sigma2_sq=max(row))


# -- generators ----------------------------------------------------------


def iid_profile(kind, n: int, m: Optional[int] = None) -> VarianceProfile:
    """All-ones profile (unit-variance i.i.d. pattern)."""
    kind = _as_kind(kind)
    m = n if m is None else m
    if kind.self_adjoint and m != n:
        raise DimensionError("self-adjoint iid profile must be square")
    return VarianceProfile.from_entries(kind, [[1] * m for _ in range(n)])


def band_profile(kind, n: int, k: int) -> VarianceProfile:
    """Band pattern b_ij = 1_{|i-j| <= k} (bandwidth 2k+1) on an n x n grid."""
    if k < 0:
        raise DimensionError("band half-width must be nonnegative")
    rows = [[1 if abs(i - j) <= k else 0 for j in range(n)] for i in range(n)]
    return VarianceProfile.from_entries(_as_kind(kind), rows)


def block_diagonal_profile(kind, n: int, m: int, d1: int, d2: int) -> VarianceProfile:
    """n/d1 all-ones blocks of size d1 x d2 along the diagonal, zeros elsewhere.

    Requires n/d1 to be an integer and m/d2 >= n/d1.
    """
    kind = _as_kind(kind)
    if d1 < 1 or d2 < 1 or n % d1 != 0:
        raise DimensionError(f"n={n} not divisible by block height d1={d1}")
    blocks = n // d1
    if m < blocks * d2:
        raise DimensionError(f"m={m} too small for {blocks} blocks of width d2={d2}")
    if kind.self_adjoint and (n != m or d1 != d2):
        raise DimensionError("self-adjoint block profile needs n = m and d1 = d2")
    rows = [[0] * m for _ in range(n)]
    for blk in range(blocks):
        for i in range(blk * d1, (blk + 1) * d1):
            for j in range(blk * d2, (blk + 1) * d2):
                rows[i][j] = 1
    return VarianceProfile.from_entries(kind, rows)


def spiked_profile(n: int, delta: float) -> VarianceProfile:
    """Spiked covariance pattern: b_ij^2 = (1 + delta^2 * 1_{i=1}) / n.

    Entries involve square roots, so only the float view is stored.
    """
    if delta < 0:
        raise InvalidProfile("delta must be nonnegative")
    b = np.full((n, n), math.sqrt(1.0 / n))
    b[0, :] = math.sqrt((1.0 + delta * delta) / n)
    return VarianceProfile(Kind.RECTANGULAR, n, n, b, None)


def make_profile(kind, spec: dict) -> VarianceProfile:
    """Dispatch on spec["pattern"]: iid | band | block_diagonal | spiked."""
    pattern = spec.get("pattern")
    if pattern == "iid":
        return iid_profile(kind, spec["n"], spec.get("m"))
    if pattern == "band":
        return band_profile(kind, spec["n"], spec["k"])
    if pattern == "block_diagonal":
        return block_diagonal_profile(kind, spec["n"], spec["m"], spec["d1"], spec["d2"])
    if pattern == "spiked":
        return spiked_profile(spec["n"], spec["delta"])
    raise InvalidProfile(f"unknown pattern {pattern!r}")


# -- JSON profile files --------------------------------------------------


def _reject_constant(token):
    raise InvalidProfile(f"non-finite JSON value {token!r} in profile")


def loads_profile(text: str) -> VarianceProfile:
    """Parse a profile JSON document.

    Decimal literals are read as exact rationals (``"0.1"`` becomes 1/10) so
    that oracle runs on loaded profiles stay exact; the float view is derived
    from them.  NaN/Infinity tokens and negative entries are rejected.
    """
    try:
        doc = json.loads(text, parse_float=Fraction, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise InvalidProfile(f"malformed profile JSON: {exc}") from None
    for key in ("kind", "n", "m", "b"):
        if key not in doc:
            raise InvalidProfile(f"profile JSON missing field {key!r}")
    n, m = int(doc["n"]), int(doc["m"])
    flat = [Fraction(x) for x in doc["b"]]
    if len(flat) != n * m:
        raise InvalidProfile(f"b has {len(flat)} entries, expected n*m = {n * m}")
    rows = [flat[i * m:(i + 1) * m] for i in range(n)]
    return VarianceProfile.from_entries(doc["kind"], rows)


def load_profile(path) -> VarianceProfile:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_profile(fh.read())


def save_profile(profile: VarianceProfile, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(profile.to_json())
        fh.write("\n")
