"""Command-line entry point: ``epsverify verify | suite | sweep``."""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from ..errors import EpsVerifyError, InvalidParameters
from ..euler.assembly import VERDICT_NOT_UNIT, VERDICT_PRECISION, VERIFIED, run_pipeline
from ..euler.matrices import StarFillPolicy
from ..params import TowerParams, UnitSpec
from .config import load_config
from .report import build_report, render_text, to_json
from .suites import SUITES, run_suite

EXIT_CODES = {VERIFIED: 0, VERDICT_NOT_UNIT: 1, VERDICT_PRECISION: 3}
EXIT_ERROR = 4

# flag name -> (config key, converter, default)
VERIFY_OPTIONS = {
    "p": ("p", int, None),
    "m": ("m", int, None),
    "d": ("d", int, None),
    "u": ("u", str, None),
    "precision": ("precision", int, 24),
    "tower_degree": ("tower_degree", int, None),
    "seed": ("seed", int, 0),
    "json": ("json", str, None),
    "figures": ("figures", str, None),
    "stars": ("stars", str, "zeros"),
    "omit_timing": ("omit_timing", lambda s: str(s).lower() in ("1", "true", "yes", "on"), False),
}


def _merge(args: argparse.Namespace, options: dict) -> argparse.Namespace:
    """Fill unset flags from the config file, then from defaults; flags always win."""
    config = load_config(args.config) if getattr(args, "config", None) else {}
    unknown = set(config) - {key for key, _, _ in options.values()}
    if unknown:
        raise InvalidParameters(f"unknown config keys: {', '.join(sorted(unknown))}")
    for name, (key, convert, default) in options.items():
        if getattr(args, name, None) is not None:
            continue
        setattr(args, name, convert(config[key]) if key in config else default)
    missing = [f"--{n}" for n in ("p", "m", "d", "u") if n in options and getattr(args, n) is None]
    if missing:
        raise InvalidParameters(f"missing required parameters: {', '.join(missing)}")
    return args


def _params(args: argparse.Namespace) -> TowerParams:
    return TowerParams(args.p, args.m, args.d, UnitSpec.parse(args.u), N=args.precision, f=args.tower_degree, seed=args.seed)


def cmd_verify(args: argparse.Namespace) -> int:
    args = _merge(args, VERIFY_OPTIONS)
    params = _params(args)
    if args.stars not in ("zeros", "random_integral"):
        raise InvalidParameters(f"unknown star fill {args.stars!r}")
    result = run_pipeline(params, StarFillPolicy(args.stars, args.seed))
    report = build_report(result, include_timing=not args.omit_timing)
    if args.json == "-":
        sys.stdout.write(to_json(report))
    else:
        sys.stdout.write(render_text(report))
        if args.json:
            Path(args.json).write_text(to_json(report))
    if args.figures:
        from .figures import render_figures

        for path in render_figures(report, args.figures):
            print(f"figure\t{path}", file=sys.stderr)
    return EXIT_CODES.get(result.verdict, EXIT_ERROR)


def cmd_suite(args: argparse.Namespace) -> int:
    results = run_suite(args.name, args.seed)
    print(f"=== suite {args.name} (seed={args.seed}) ===")
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        detail = f"\t{r.detail}" if r.detail else ""
        print(f"{status}\t{r.suite}\t{r.name}\t{r.seconds:.2f}s{detail}")
    failed = sum(not r.ok for r in results)
    print(f"=== {len(results) - failed} passed, {failed} failed ===")
    return 0 if failed == 0 else 1


def parse_u_range(text: str | None, p: int) -> list[str]:
    """Expand ``teich`` to every Teichmueller lift and ``a-b`` to the integer units in range; else split on commas."""
    if text is None or text == "teich":
        return [f"teich:{r}" for r in range(2, p)]
    if "-" in text and "," not in text and not text.startswith("-"):
        lo, hi = (int(x) for x in text.split("-", 1))
        return [str(r) for r in range(lo, hi + 1) if r % p]
    return [s.strip() for s in text.split(",") if s.strip()]


def _sweep_point(task: tuple[int, int, int, str, int, int]) -> tuple[str, str, str, str]:
    p, m, d, u, N, seed = task
    try:
        params = TowerParams(p, m, d, u, N=N, seed=seed)
        if params.branch == "twist_trivial":
            return u, params.branch, "-", "SKIPPED_TWIST_TRIVIAL"
        result = run_pipeline(params)
        return u, result.branch, str(result.omega), result.verdict
    except EpsVerifyError as exc:
        return u, "-", "-", f"ERROR {type(exc).__name__}: {exc}"


def cmd_sweep(args: argparse.Namespace) -> int:
    units = parse_u_range(args.u_range, args.p)
    tasks = [(args.p, args.m, args.d, u, args.precision, args.seed) for u in units]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    print(f"=== sweep (p={args.p}, m={args.m}, d={args.d}) ===")
    print("u\tbranch\tomega\tverdict")
    for row in rows:
        print("\t".join(row))
    bad = [r for r in rows if r[3] not in (VERIFIED, "SKIPPED_TWIST_TRIVIAL")]
    print(f"=== {len(rows) - len(bad)} ok, {len(bad)} not verified ===")
    return 0 if not bad else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="epsverify", description="Character-wise unit checks for epsilon-constant identities.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the full pipeline at one parameter tuple")
    v.add_argument("--p", type=int)
    v.add_argument("--m", type=int)
    v.add_argument("--d", type=int)
    v.add_argument("--u", type=str, help="integer unit or teich:<r> for a Teichmueller lift")
    v.add_argument("--precision", type=int, help="p-adic precision N (default 24)")
    v.add_argument("--tower-degree", dest="tower_degree", type=int, help="unramified degree f")
    v.add_argument("--seed", type=int)
    v.add_argument("--json", help="write the JSON report to PATH, or to stdout with '-'")
    v.add_argument("--figures", help="directory for PNG figures (needs matplotlib)")
    v.add_argument("--stars", choices=("zeros", "random_integral"), help="fill for unconstrained matrix entries")
    v.add_argument("--omit-timing", dest="omit_timing", action="store_const", const=True, help="null runtime_ms for byte-stable JSON")
    v.add_argument("--config", help="key = value file mirroring these flags")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("suite", help="run a seeded property suite")
    s.add_argument("name", choices=SUITES)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_suite)

    w = sub.add_parser("sweep", help="verify over a range of units u")
    w.add_argument("--p", type=int, required=True)
    w.add_argument("--m", type=int, required=True)
    w.add_argument("--d", type=int, required=True)
    w.add_argument("--u-range", dest="u_range", help="Teichmueller lifts by default; accepts a-b ranges and comma lists")
    w.add_argument("--precision", type=int, default=24)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--jobs", type=int, default=1)
    w.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EpsVerifyError, OSError, ValueError) as exc:
        print(f"error\t{type(exc).__name__}\t{exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
