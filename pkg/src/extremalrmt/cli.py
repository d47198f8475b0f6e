"""Command-line front end: profiles in, reproducible CSV/JSON reports out.

Subcommands: params, bound, moments, kappa, wishart, simulate, verify.
Every file-producing run writes a JSON manifest next to its outputs.  Floats
are printed with a fixed 17-significant-digit round-trip format and exact
rationals as both a decimal string and num/den, so reruns with identical
arguments produce byte-identical files.  Exit codes: 0 success, 1 usage
error, 2 validation failure.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import __version__, tails, verify, wick, wishart
from .errors import ExtremalRMTError
from .extremum import table_for
from .montecarlo import ENV_THREADS, SimulationConfig, estimate, wilson_halfwidth
from .profile import Kind, compute_params, load_profile
from .wishart import build_table


def fmt_float(x: float) -> str:
    return f"{float(x):.17g}"


def fmt_fraction(x: Fraction) -> tuple:
    x = Fraction(x)
    return fmt_float(float(x)), f"{x.numerator}/{x.denominator}"


def write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_manifest(out_path: Path, subcommand: str, args_map: Dict, seed,
                   constants: Dict, outputs: List[Path], wall: Optional[float]) -> Path:
    blob = json.dumps({"subcommand": subcommand, "args": args_map}, sort_keys=True)
    digest = hashlib.sha256(blob.encode()).hexdigest()
    manifest = {
        "subcommand": subcommand,
        "config_hash": digest,
        "seed": seed,
        "version": __version__,
        "constants": constants,
        "outputs": [p.name for p in outputs],
        "wall_time_s": None if wall is None else round(wall, 3),
    }
    path = out_path.with_suffix(out_path.suffix + ".manifest.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def parse_range(spec: str) -> List[float]:
    """Parse "lo:hi:step", a comma list, or a single float."""
    if ":" in spec:
        lo, hi, step = (float(x) for x in spec.split(":"))
        if step <= 0:
            raise ValueError("range step must be positive")
        out = []
        v = lo
        while v <= hi + 1e-12:
            out.append(round(v, 12))
            v += step
        return out
    if "," in spec:
        return [float(x) for x in spec.split(",")]
    return [float(spec)]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class UsageError(Exception):
    pass


def _resolve_threads(value: Optional[int]) -> int:
    if value is not None:
        return max(1, value)
    return max(1, int(os.environ.get(ENV_THREADS, "1") or 1))


def build_parser() -> _Parser:
    parser = _Parser(prog="extremalrmt", description=__doc__)
    parser.add_argument("--threads", type=int, default=None,
                        help=f"worker cap (default: ${ENV_THREADS} or 1)")
    parser.add_argument("--record-timing", action="store_true",
                        help="write wall time into the manifest (breaks byte-identity)")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("params", help="profile size parameters")
    p.add_argument("--profile", required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("bound", help="tail-bound curve")
    p.add_argument("--profile", required=True)
    p.add_argument("--model", choices=["rect", "herm", "sym"], default=None,
                   help="default: the profile's kind")
    p.add_argument("--flavor", choices=["small", "large", "prop"], default="small")
    p.add_argument("--t", required=True, help="lo:hi:step, comma list, or single value")
    p.add_argument("--out", required=True)

    p = sub.add_parser("moments", help="exact Wick oracle moments")
    p.add_argument("--profile", required=True)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--pmax", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("kappa", help="extremal coefficient table")
    p.add_argument("--taxonomy", choices=["sym", "rect", "herm"], required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("wishart", help="exact moment recursion table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("simulate", help="sample norms of a profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--dist", choices=["gaussian", "rademacher"], default="gaussian")
    p.add_argument("--summary", action="store_true",
                   help="also write quantiles and a tail table")
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--suite", choices=["exact", "montecarlo", "all"], default="all")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out-dir", default="verify-out")
    p.add_argument("--mc-samples", type=int, default=None, help="smoke-run override")
    p.add_argument("--mgf-samples", type=int, default=None, help="smoke-run override")
    p.add_argument("--mc-dim", type=int, default=None, help="smoke-run override")
    p.add_argument("--wishart-nmax", type=int, default=None, help="smoke-run override")
    p.add_argument("--wishart-pmax", type=int, default=None, help="smoke-run override")
    p.add_argument("--profile-count", type=int, default=None, help="smoke-run override")
    return parser


KIND_BY_FLAG = {"rect": Kind.RECTANGULAR, "herm": Kind.HERMITIAN, "sym": Kind.SYMMETRIC}


def cmd_params(args, threads) -> List[Path]:
    prof = load_profile(args.profile)
    prm = compute_params(prof).as_floats()
    if prof.kind is Kind.RECTANGULAR:
        fields = [("sigma1_sq", prm.sigma1_sq), ("sigma2_sq", prm.sigma2_sq),
                  ("sigma_star_sq", prm.sigma_star_sq)]
    else:
        fields = [("sigma_sq", prm.sigma_sq), ("sigma_tilde_sq", prm.sigma_tilde_sq),
                  ("sigma_star_sq", prm.sigma_star_sq)]
    for name, val in fields:
        print(f"{name} = {fmt_float(val)}")
    if args.out:
        out = Path(args.out)
        write_csv(out, ["parameter", "value"], [(n, fmt_float(v)) for n, v in fields])
        return [out]
    return []


def cmd_bound(args, threads) -> List[Path]:
    prof = load_profile(args.profile)
    kind = KIND_BY_FLAG[args.model] if args.model else prof.kind
    prm = compute_params(prof)
    n = prof.n
    rows = []
    skipped = 0
    for t in parse_range(args.t):
        try:
            if args.flavor == "small":
                tb = tails.small_dev_bound(kind, prm, n, t)
            elif args.flavor == "large":
                tb = tails.large_dev_bound(kind, prm, n, t, m=prof.m)
            else:
                tb = tails.prop_bound(kind, prm, n, t)
        except ExtremalRMTError:
            skipped += 1
            continue
        rows.append((fmt_float(t), fmt_float(tb.threshold), fmt_float(tb.prob),
                     int(tb.capped)))
    if skipped:
        print(f"note: {skipped} grid points outside the validity window were skipped",
              file=sys.stderr)
    out = Path(args.out)
    write_csv(out, ["t", "threshold", "prob", "capped"], rows)
    return [out]


def cmd_moments(args, threads) -> List[Path]:
    if args.p is None and args.pmax is None:
        raise UsageError("moments needs --p or --pmax")
    prof = load_profile(args.profile)
    ps = [args.p] if args.p is not None else list(range(1, args.pmax + 1))
    oracle = {Kind.HERMITIAN: wick.moment_hermitian,
              Kind.SYMMETRIC: wick.moment_symmetric,
              Kind.RECTANGULAR: wick.moment_rect_real}[prof.kind]
    rows = []
    for p in ps:
        val = oracle(prof, p)
        dec, frac = fmt_fraction(val)
        rows.append((p, dec, frac))
        print(f"p={p}: {dec} ({frac})")
    if args.out:
        out = Path(args.out)
        write_csv(out, ["p", "moment", "moment_num_den"], rows)
        return [out]
    return []


def cmd_kappa(args, threads) -> List[Path]:
    table = table_for(KIND_BY_FLAG[args.taxonomy], args.p)
    rows = [(k, l, m) for (k, l), m in sorted(table.coeffs.items())]
    out = Path(args.out)
    write_csv(out, ["k", "l", "coefficient"], rows)
    print(f"{len(rows)} monomials, total mass {table.total_mass()}")
    return [out]


def cmd_wishart(args, threads) -> List[Path]:
    table = build_table(args.n, args.m, args.pmax)
    rows = []
    for p in range(args.pmax + 1):
        cells = [p]
        for seq in (table.A, table.Aprime, table.B, table.D):
            dec, frac = fmt_fraction(seq[p])
            cells.extend((dec, frac))
        rows.append(tuple(cells))
    out = Path(args.out)
    write_csv(out, ["p", "A", "A_num_den", "Aprime", "Aprime_num_den",
                    "B", "B_num_den", "D", "D_num_den"], rows)
    print(f"wrote {args.pmax + 1} rows for n={args.n} m={args.m}")
    return [out]


def cmd_simulate(args, threads) -> List[Path]:
    prof = load_profile(args.profile)
    cfg = SimulationConfig(prof, args.samples, args.seed, entry_dist=args.dist)
    res = estimate(cfg, norms=True, threads=threads)
    out = Path(args.out)
    write_csv(out, ["index", "norm"],
              [(i, fmt_float(v)) for i, v in enumerate(res.norms_by_index)])
    outputs = [out]
    if res.nonconverged:
        print(f"warning: {res.nonconverged} samples did not converge", file=sys.stderr)
    if args.summary:
        qs = [0.0, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0]
        import numpy as np
        quant = np.quantile(res.norms, qs)
        lo, hi = res.norms[0], res.norms[-1]
        levels = [lo + (hi - lo) * i / 10 for i in range(11)]
        rows = [("quantile", fmt_float(q), fmt_float(v), "") for q, v in zip(qs, quant)]
        for x in levels:
            freq, hw = res.tail(x)
            rows.append(("tail", fmt_float(x), fmt_float(freq), fmt_float(hw)))
        spath = out.with_suffix(out.suffix + ".summary.csv")
        write_csv(spath, ["kind", "level", "value", "wilson_halfwidth"], rows)
        outputs.append(spath)
    return outputs


def cmd_verify(args, threads) -> tuple:
    scale = verify.Scale()
    for attr, value in (("mc_samples", args.mc_samples), ("mgf_samples", args.mgf_samples),
                        ("mc_dim", args.mc_dim), ("wishart_nmax", args.wishart_nmax),
                        ("wishart_pmax", args.wishart_pmax),
                        ("sweep_profiles", args.profile_count)):
        if value is not None:
            setattr(scale, attr, value)
    results = verify.run_suite(args.suite, seed=args.seed, threads=threads,
                               scale=scale, echo=print)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    out = out_dir / "results.csv"
    write_csv(out, ["criterion", "name", "status", "detail"],
              [(r.cid, r.name, "PASS" if r.passed else "FAIL", r.detail) for r in results])
    ok = all(r.passed for r in results)
    return [out], ok


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    threads = _resolve_threads(args.threads)
    start = time.monotonic()
    ok = True
    try:
        if args.subcommand == "verify":
            outputs, ok = cmd_verify(args, threads)
            out_anchor = Path(args.out_dir) / "results.csv"
            seed = args.seed
        else:
            handler = {"params": cmd_params, "bound": cmd_bound, "moments": cmd_moments,
                       "kappa": cmd_kappa, "wishart": cmd_wishart,
                       "simulate": cmd_simulate}[args.subcommand]
            outputs = handler(args, threads)
            out_anchor = outputs[0] if outputs else None
            seed = getattr(args, "seed", None)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ExtremalRMTError, OSError) as exc:
        print(f"validation failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    wall = time.monotonic() - start
    if out_anchor is not None:
        # the hash covers what is computed, not where it goes or how many
        # workers ran: output paths and thread counts are excluded
        skip = ("record_timing", "out", "out_dir", "threads")
        args_map = {k: v for k, v in vars(args).items()
                    if k not in skip and v is not None}
        if "profile" in args_map:
            content = Path(args_map["profile"]).read_bytes()
            args_map["profile"] = hashlib.sha256(content).hexdigest()
        write_manifest(out_anchor, args.subcommand, args_map, seed,
                       tails.DEFAULT_CONSTANTS, outputs,
                       wall if args.record_timing else None)
    if not ok:
        print("verification failed", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
