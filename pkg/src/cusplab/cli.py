"""Batch verification driver.

    verify SUITE [--q Q ...] [--n N ...] [--r0 R ...] [--mode {chain,top,auto}]
                 [--budget N] [--seed N] [--format {json-lines,tsv}] [--out PATH]
                 [--strict] [--extended] [--config PATH] [--timings]

SUITE is one of fields, ring, geometry, reps, local, infra, all.  Exit code 0
when every executed check passes (skipped rows are allowed unless --strict),
1 on any failure, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys

from .report import emit, summarize
from .suites import (DEFAULT_GRID, DEFAULT_R0, EXTENDED_GRID, THETA_SAMPLE,
                     _factor_prime_power, run_suites)

USAGE_ERROR = 2
DEFAULT_BUDGET = 2**20

SUITE_NAMES = ("fields", "ring", "geometry", "reps", "local", "infra", "all")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="verify",
        description="Exact brute-force verification of the twisted-ring, "
                    "Lang-hypersurface and truncated local-field lemmas.")
    ap.add_argument("suite", choices=SUITE_NAMES)
    ap.add_argument("--q", type=int, action="append",
                    help="prime power q (repeatable; forms a grid with --n)")
    ap.add_argument("--n", type=int, action="append", help="extension degree n >= 2")
    ap.add_argument("--r0", type=int, action="append", help="character level r0 >= 2")
    ap.add_argument("--mode", choices=("chain", "top", "auto"), default="auto")
    ap.add_argument("--budget", type=int, default=None,
                    help=f"evaluation-point budget (default {DEFAULT_BUDGET})")
    ap.add_argument("--seed", type=int, default=None, help="seed for sampled scans")
    ap.add_argument("--format", choices=("json-lines", "tsv"), default="json-lines")
    ap.add_argument("--out", default=None, help="report path (default: stdout)")
    ap.add_argument("--strict", action="store_true",
                    help="treat skipped rows as failures")
    ap.add_argument("--extended", action="store_true",
                    help="add the extended grid points (3,3) and (5,2)")
    ap.add_argument("--config", default=None, help="key=value config file")
    ap.add_argument("--timings", action="store_true",
                    help="emit measured millis (breaks byte-reproducibility)")
    ap.add_argument("--theta-sample", type=int, default=None,
                    help=f"primitive characters sampled per grid point (default {THETA_SAMPLE})")
    return ap


def _read_config(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out


def _parse_int_list(raw: str) -> list[int]:
    return [int(x) for x in raw.replace(",", " ").split()]


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0

    cfg = {}
    if args.config:
        try:
            cfg = _read_config(args.config)
        except OSError as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return USAGE_ERROR

    qs = args.q if args.q else (_parse_int_list(cfg["q"]) if "q" in cfg else None)
    ns = args.n if args.n else (_parse_int_list(cfg["n"]) if "n" in cfg else None)
    r0s = args.r0 if args.r0 else (_parse_int_list(cfg["r0"]) if "r0" in cfg else None)
    budget = args.budget if args.budget is not None else int(cfg.get("budget", DEFAULT_BUDGET))
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    theta_sample = args.theta_sample if args.theta_sample is not None else \
        int(cfg.get("theta_sample", THETA_SAMPLE))
    mode = args.mode if args.mode != "auto" else cfg.get("mode", "auto")

    if qs or ns:
        if not (qs and ns):
            print("error: --q and --n must be given together", file=sys.stderr)
            return USAGE_ERROR
        grid = [(q, n) for q in qs for n in ns]
    else:
        grid = list(DEFAULT_GRID) + (EXTENDED_GRID if args.extended else [])
    if r0s is None:
        r0s = list(DEFAULT_R0)

    for (q, n) in grid:
        if _factor_prime_power(q) is None:
            print(f"error: q = {q} is not a prime power", file=sys.stderr)
            return USAGE_ERROR
        if n < 2:
            print(f"error: n = {n} must be >= 2", file=sys.stderr)
            return USAGE_ERROR
    for r0 in r0s:
        if r0 < 2:
            print(f"error: r0 = {r0} must be >= 2", file=sys.stderr)
            return USAGE_ERROR
    if budget < 1 or seed < 0:
        print("error: invalid budget or seed", file=sys.stderr)
        return USAGE_ERROR

    rows = run_suites(args.suite, grid, r0s, budget, seed, mode, theta_sample)
    text = emit(rows, args.format, args.out, zero_millis=not args.timings)
    if args.out is None:
        sys.stdout.write(text)
    npass, nfail, nskip = summarize(rows)
    print(f"# {npass} pass, {nfail} fail, {nskip} skipped", file=sys.stderr)
    if nfail:
        return 1
    if args.strict and nskip:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
