"""Command-line interface.

Exit codes: 0 success, 2 config error, 3 unfactorable input, 4 undecided
verdict, 5 oracle disagreement or failed bound verification.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path
from typing import Optional

from . import __version__
from .config import PrimeClassConfig, load_config
from .enumeration import (
    compute_X,
    enumerate_exceptions,
    kbound_constants,
)
from .errors import ConfigError, UndecidedError, UnfactoredError
from .factored import (
    DECIMAL_BIT_THRESHOLD,
    f_ratio,
    in_S,
    in_Y,
    is_sum_two_squares,
    nicolas_threshold,
    nicolas_verdict,
    parse_number,
    robin_verdict,
    sigma_ratio,
)
from .intervals import egamma
from .oracle import (
    brute_force_exceptions,
    cross_validate,
    limsup_witness,
    verify_mertens_bound,
    verify_theta_bounds,
    witness_exponent,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNFACTORED = 3
EXIT_UNDECIDED = 4
EXIT_DISAGREEMENT = 5


@dataclasses.dataclass
class RunManifest:
    """Provenance emitted with every enumeration output."""

    config: dict
    tool_version: str
    precision_schedule: list
    bounds: dict
    wall_time_s: float
    record_count: int
    digest: str

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True, indent=2)


def _load(args) -> PrimeClassConfig:
    return load_config(args.config)


def _interval_json(iv) -> Optional[dict]:
    if iv is None:
        return None
    return {"lo": str(iv.lo), "hi": str(iv.hi), "precision_bits": iv.precision_bits}


def cmd_check(args) -> int:
    config = _load(args)
    try:
        n = parse_number(args.n)
    except (UnfactoredError, ValueError) as exc:
        print(f"cannot factor input: {exc}", file=sys.stderr)
        return EXIT_UNFACTORED
    nic = nicolas_verdict(n, config.precision)
    rob = robin_verdict(n, config.precision)
    if nic.is_undecided or rob.is_undecided:
        print(f"undecided verdict for n = {n}", file=sys.stderr)
        return EXIT_UNDECIDED
    thr = nicolas_threshold(n, config.precision.schedule[0])
    fr = f_ratio(n)
    sr = sigma_ratio(n)
    payload = {
        "n": n.decimal(None),
        "factorization": [[p, e] for p, e in n.factors],
        "nicolas": str(nic),
        "robin": str(rob),
        "nicolas_violator": nic.is_above_or_equal,
        "robin_violator": rob.is_above_or_equal,
        "in_s": in_S(n, config),
        "in_y": in_Y(n, config),
        "sum_of_two_squares": is_sum_two_squares(n),
        "f_ratio": f"{fr.numerator}/{fr.denominator}",
        "sigma_ratio": f"{sr.numerator}/{sr.denominator}",
        "threshold": _interval_json(thr),
        "config": config.name,
    }
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        if n.bit_length_estimate <= DECIMAL_BIT_THRESHOLD:
            shown = f"{n.value} = {n}" if not n.is_one else "1"
        else:
            shown = f"{n} ~ {n.scientific()}"
        print(f"n = {shown}")
        print(f"  nicolas inequality: {'violated' if nic.is_above_or_equal else 'satisfied'} ({nic})")
        print(f"  robin inequality:   {'violated' if rob.is_above_or_equal else 'satisfied'} ({rob})")
        print(f"  in S({config.name}): {payload['in_s']}   in Y: {payload['in_y']}")
        print(f"  sum of two squares: {payload['sum_of_two_squares']}")
        print(f"  n/phi(n)   = {payload['f_ratio']} = {float(fr):.6f}")
        print(f"  sigma(n)/n = {payload['sigma_ratio']} = {float(sr):.6f}")
        if thr is None:
            print("  threshold e^gamma log log n: undefined (n = 1)")
        else:
            print(f"  threshold e^gamma log log n in [{thr.lo}, {thr.hi}]")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    config = _load(args)
    t0 = time.time()
    exceptions = enumerate_exceptions(config, workers=args.workers)
    wall = time.time() - t0
    selected = exceptions.filtered(
        robin_only=args.robin_only, representable_only=args.two_squares_only
    )
    lines = "".join(r.to_json() + "\n" for r in selected)
    manifest = RunManifest(
        config=exceptions.config_snapshot,
        tool_version=__version__,
        precision_schedule=list(config.precision.schedule),
        bounds=dict(exceptions.provenance),
        wall_time_s=round(wall, 3),
        record_count=len(selected),
        digest=exceptions.digest(),
    )
    if args.output:
        out = Path(args.output)
        out.write_text(lines)
        out.with_suffix(out.suffix + ".manifest.json").write_text(manifest.to_json() + "\n")
    else:
        sys.stdout.write(lines)
    largest = selected[-1].value if selected else None
    summary = {
        "records": len(selected),
        "total_records": len(exceptions),
        "largest": str(largest) if largest is not None else None,
        "digest": manifest.digest,
        "completeness": exceptions.provenance["complete"],
        "wall_time_s": manifest.wall_time_s,
    }
    if args.json:
        print(json.dumps(summary, sort_keys=True))
    else:
        print(
            f"{summary['records']} records ({summary['total_records']} before filters), "
            f"largest = {summary['largest']}",
            file=sys.stderr if not args.output else sys.stdout,
        )
        print(f"digest {manifest.digest}", file=sys.stderr if not args.output else sys.stdout)
    return EXIT_OK


def cmd_xset(args) -> int:
    config = _load(args)
    pairs = compute_X(config, max_k=args.max_k)
    listing = pairs.sorted_pairs()
    if args.json:
        print(
            json.dumps(
                {
                    "pairs": [list(p) for p in listing],
                    "count": len(listing),
                    "max_k": pairs.max_k,
                    "max_r_plus_2s": pairs.max_r_plus_2s,
                    "max_omega": pairs.max_omega,
                }
            )
        )
    else:
        print(f"{len(listing)} admissible (r, s) pairs with r + 2s <= {pairs.max_k}:")
        print(" ".join(f"({r},{s})" for r, s in listing))
    return EXIT_OK


def cmd_brute(args) -> int:
    config = _load(args)
    values = brute_force_exceptions(args.max, config)
    if args.json:
        print(json.dumps({"bound": args.max, "count": len(values), "values": values}))
    else:
        print(f"{len(values)} violators in [1, {args.max}]:")
        print(" ".join(str(v) for v in values))
    return EXIT_OK


def cmd_crossvalidate(args) -> int:
    config = _load(args)
    report = cross_validate(args.max, config)
    payload = {
        "bound": report.bound,
        "count": len(report.exceptions),
        "agreement": report.agreement,
        "missing_from_enumerator": list(report.missing_from_enumerator),
        "extra_in_enumerator": list(report.extra_in_enumerator),
        "brute_seconds": report.brute_seconds,
        "enumerate_seconds": report.enumerate_seconds,
    }
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(
            f"[1, {report.bound}]: {len(report.exceptions)} violators, "
            f"agreement = {report.agreement} "
            f"(brute {report.brute_seconds}s, enumerate {report.enumerate_seconds}s)"
        )
        if not report.agreement:
            print(f"  missing from enumerator: {payload['missing_from_enumerator']}")
            print(f"  extra in enumerator:     {payload['extra_in_enumerator']}")
    return EXIT_OK if report.agreement else EXIT_DISAGREEMENT


def cmd_bounds(args) -> int:
    config = _load(args)
    if not (args.theta or args.mertens or args.kbounds):
        print("nothing to do: pass --theta, --mertens and/or --kbounds", file=sys.stderr)
        return EXIT_CONFIG
    all_ok = True
    payload = {}
    if args.theta:
        res = verify_theta_bounds(args.x_from, args.x_to, args.step, config)
        failures = [x for x, ok in res if not ok]
        all_ok &= not failures
        payload["theta"] = {"samples": len(res), "failures": failures}
        if not args.json:
            print(f"theta bounds: {len(res)} samples, failures: {failures or 'none'}")
    if args.mertens:
        res = verify_mertens_bound(args.max, args.step)
        failures = [x for x, ok in res if not ok]
        all_ok &= not failures
        payload["mertens"] = {"samples": len(res), "failures": failures}
        if not args.json:
            print(f"mertens product bound: {len(res)} samples, failures: {failures or 'none'}")
    if args.kbounds:
        a, b = kbound_constants(config)
        payload["kbounds"] = {"bound_a": a, "bound_b": b, "max_k": config.search.max_k}
        ok = max(a, b) < config.search.max_k
        all_ok &= ok
        if not args.json:
            print(
                f"signature ceilings: {a} and {b}; "
                f"max({a}, {b}) < max_k = {config.search.max_k}: {ok}"
            )
    if args.json:
        payload["pass"] = bool(all_ok)
        print(json.dumps(payload, sort_keys=True))
    return EXIT_OK if all_ok else EXIT_DISAGREEMENT


def cmd_limsup(args) -> int:
    points = args.n or [1000, 10000, 100000]
    eg = egamma(96)
    rows = []
    for n in points:
        ratio_sigma, ratio_phi = limsup_witness(n)
        dist = eg.sub(ratio_phi)
        rows.append(
            {
                "n": n,
                "witness_exponent": witness_exponent(n),
                "ratio_sigma": [str(ratio_sigma.lo), str(ratio_sigma.hi)],
                "ratio_phi": [str(ratio_phi.lo), str(ratio_phi.hi)],
                "distance_to_egamma": [str(dist.lo), str(dist.hi)],
            }
        )
    if args.json:
        print(json.dumps({"egamma": [str(eg.lo), str(eg.hi)], "points": rows}))
    else:
        for row in rows:
            print(
                f"n = {row['n']:>8}  d = {row['witness_exponent']:>3}  "
                f"phi-ratio ~ {float(row['ratio_phi'][0]):.9f}  "
                f"sigma-ratio ~ {float(row['ratio_sigma'][0]):.9f}  "
                f"|e^gamma - ratio| ~ {float(row['distance_to_egamma'][0]):.9f}"
            )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nicrobin",
        description=(
            "Decide the Nicolas and Robin inequalities with certified precision "
            "and enumerate the finite exception sets of prime-class partitions."
        ),
    )
    parser.add_argument("--version", action="version", version=f"nicrobin {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument(
            "--config",
            default="mod4",
            help="built-in config name (mod4, a2plus3b2) or a JSON config path",
        )
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("check", help="verdicts and invariants for one number")
    p.add_argument("n", help="decimal value or factored expression like 2^3*3^2")
    add_config(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("enumerate", help="enumerate the full exception set")
    add_config(p)
    p.add_argument("--output", help="write JSON-lines records (+ manifest) here")
    p.add_argument("--robin-only", action="store_true", help="keep Robin violators only")
    p.add_argument(
        "--two-squares-only",
        action="store_true",
        help="keep records representable by the config's quadratic form",
    )
    p.add_argument(
        "--workers",
        type=int,
        default=None,
        help="parallel workers (default: NICROBIN_THREADS or 1)",
    )
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("xset", help="admissible (r, s) signatures")
    add_config(p)
    p.add_argument("--max-k", type=int, default=None, help="override the r + 2s bound")
    p.set_defaults(fn=cmd_xset)

    p = sub.add_parser("brute", help="brute-force scan of [1, max]")
    add_config(p)
    p.add_argument("--max", type=int, required=True)
    p.set_defaults(fn=cmd_brute)

    p = sub.add_parser("crossvalidate", help="diff the enumerator against brute force")
    add_config(p)
    p.add_argument("--max", type=int, required=True)
    p.set_defaults(fn=cmd_crossvalidate)

    p = sub.add_parser("bounds", help="verify analytic bounds by certified sampling")
    add_config(p)
    p.add_argument("--theta", action="store_true", help="class theta within (0.49x, 0.51x)")
    p.add_argument("--mertens", action="store_true", help="totient product vs e^gamma(log x + 1/log x)")
    p.add_argument("--kbounds", action="store_true", help="recompute the signature-size ceilings")
    p.add_argument("--from", dest="x_from", type=int, default=45000)
    p.add_argument("--to", dest="x_to", type=int, default=1_000_000)
    p.add_argument("--step", type=int, default=5000)
    p.add_argument("--max", type=int, default=1_000_000, help="mertens sweep end")
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("limsup", help="witness ratios approaching e^gamma")
    add_config(p)
    p.add_argument("-n", dest="n", type=int, action="append", help="witness index (repeatable)")
    p.set_defaults(fn=cmd_limsup)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnfactoredError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNFACTORED
    except UndecidedError as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
