"""Command-line front end: dp, run, montecarlo, gadget, substream-test.

Machine-readable results go to stdout (JSON for single-run reports, CSV
for factor sweeps); the fully resolved configuration and all diagnostics
go to stderr.  Identical subcommand, flags and seed produce byte-identical
stdout.  Seeds are never read from the environment: give --seed or accept
an auto-generated one, which is printed with the configuration.

Exit status: 0 on success, 1 when a verification or data check fails,
2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import gadget as gadget_mod
from . import harness, recurrence, windows
from .geometry import ParseError, alpha, format_intervals, parse_intervals
from .restricted import (
    Domain,
    DomainError,
    eager_instance_estimate,
    run_on_stream,
)
from .rng import SplitMix64, fisher_yates

MAX_UNGUARDED_DOMAIN_LENGTH = 10  # delta 8 under the [-1, delta+1) wrapper
SIGNIFICANT_DIGITS = 12


class UsageError(ValueError):
    pass


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        value = float(value)
    if isinstance(value, float):
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def _jsonable(value):
    if isinstance(value, Fraction):
        value = float(value)
    if isinstance(value, float):
        return float(f"{value:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _emit_json(payload: dict) -> None:
    print(json.dumps(_jsonable(payload), sort_keys=True))


def _echo_config(config: dict) -> None:
    print("config:", json.dumps(_jsonable(config), sort_keys=True), file=sys.stderr)


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    return int.from_bytes(os.urandom(8), "big") >> 1


def _read_intervals(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_intervals(text)


# --- dp ---------------------------------------------------------------------


def _add_dp(sub) -> None:
    p = sub.add_parser("dp", help="factor table for one delta or a sweep")
    p.add_argument("--delta", type=int, help="window width to evaluate")
    p.add_argument("--sweep", metavar="MIN..MAX", help="evaluate a range of deltas")
    p.add_argument("--exact-until", type=int, default=recurrence.DEFAULT_EXACT_UNTIL)
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _cmd_dp(args) -> int:
    if args.sweep:
        try:
            lo, hi = (int(part) for part in args.sweep.split("..", 1))
        except ValueError:
            raise UsageError(f"bad sweep range {args.sweep!r}; expected MIN..MAX")
    elif args.delta is not None:
        lo = hi = args.delta
    else:
        raise UsageError("dp needs --delta or --sweep")
    if lo < 2:
        raise UsageError("delta must be at least 2")

    _echo_config(
        {
            "subcommand": "dp",
            "delta_min": lo,
            "delta_max": hi,
            "exact_until": args.exact_until,
            "format": args.format,
        }
    )
    curve = recurrence.sweep(lo, hi, exact_until=args.exact_until)
    for note in curve.notes:
        print("note:", note, file=sys.stderr)
    if not curve.overall_monotone:
        print(
            "warning: overall factor decreased at deltas",
            list(curve.monotone_violations),
            file=sys.stderr,
        )
    print(
        f"reference barriers: adversarial-order {_fmt(curve.barrier_adversarial)}, "
        f"space lower bound {_fmt(curve.barrier_space)}",
        file=sys.stderr,
    )

    if args.format == "csv":
        print("delta,restricted_factor,overall_factor,binding_alpha")
        for row in curve.rows:
            print(
                f"{row.delta},{_fmt(row.restricted)},{_fmt(row.overall)},{row.binding_alpha}"
            )
    else:
        _emit_json(
            {
                "rows": [
                    {
                        "delta": row.delta,
                        "restricted_factor": row.restricted,
                        "overall_factor": row.overall,
                        "binding_alpha": row.binding_alpha,
                    }
                    for row in curve.rows
                ],
                "notes": list(curve.notes),
                "overall_monotone": curve.overall_monotone,
                "barrier_adversarial": curve.barrier_adversarial,
                "barrier_space": curve.barrier_space,
            }
        )
    return 0


# --- run --------------------------------------------------------------------


def _add_run(sub) -> None:
    p = sub.add_parser("run", help="one streamed run over an input file")
    p.add_argument("--domain", metavar="A,B", help="explicit integer domain [A,B)")
    p.add_argument("--unrestricted", action="store_true", help="shifting-window lift")
    p.add_argument("--delta", type=int, help="window width for --unrestricted")
    p.add_argument("--input", required=True, help="interval file ('-' for stdin)")
    p.add_argument("--order", choices=("given", "shuffle"), default="given")
    p.add_argument("--seed", type=int)
    p.add_argument(
        "--allow-large",
        action="store_true",
        help="permit domains longer than 10 despite exponential memory",
    )


def _cmd_run(args) -> int:
    if args.unrestricted == bool(args.domain):
        raise UsageError("give exactly one of --domain A,B or --unrestricted")
    if args.unrestricted and args.delta is None:
        raise UsageError("--unrestricted needs --delta")

    seed = _resolve_seed(args.seed) if args.order == "shuffle" else args.seed
    stream = _read_intervals(args.input)
    if args.order == "shuffle":
        stream = fisher_yates(stream, SplitMix64(seed))

    config = {
        "subcommand": "run",
        "input": args.input,
        "order": args.order,
        "seed": seed,
        "intervals": len(stream),
        "allow_large": args.allow_large,
    }

    if args.unrestricted:
        config.update({"mode": "unrestricted", "delta": args.delta})
        _echo_config(config)
        wm = windows.WindowMap(args.delta)
        for iv in stream:
            wm.feed(iv)
        merged = wm.merge_output()
        window_payload = []
        for rep in wm.window_reports():
            entry = rep.report.to_dict()
            entry["origin"] = rep.origin
            entry["output_intervals"] = [
                str(iv.translate(rep.origin).left) for iv in rep.report.output
            ]
            window_payload.append(entry)
        _emit_json(
            {
                "output_size": len(merged),
                "output_intervals": [str(iv.left) for iv in merged],
                "alpha": alpha(stream),
                "active_windows": wm.active_count,
                "windows": window_payload,
            }
        )
        return 0

    try:
        a, b = (int(part) for part in args.domain.split(",", 1))
        domain = Domain(a, b)
    except ValueError as exc:
        raise UsageError(f"bad domain {args.domain!r}: {exc}")
    if domain.length > MAX_UNGUARDED_DOMAIN_LENGTH:
        estimate = eager_instance_estimate(domain.length)
        print(
            f"eager recursion tree for domain length {domain.length}: "
            f"about {estimate} instances",
            file=sys.stderr,
        )
        if not args.allow_large:
            raise UsageError(
                f"domain length {domain.length} > {MAX_UNGUARDED_DOMAIN_LENGTH}; "
                "memory is exponential in the length, pass --allow-large to proceed"
            )
    config.update({"mode": "restricted", "domain": [domain.a, domain.b]})
    _echo_config(config)
    report = run_on_stream(domain, stream)
    payload = report.to_dict()
    payload["alpha"] = alpha(stream)
    payload["chosen_text"] = format_intervals(report.output)
    _emit_json(payload)
    return 0


# --- montecarlo ---------------------------------------------------------------


def _add_montecarlo(sub) -> None:
    p = sub.add_parser("montecarlo", help="seeded trials over random orders")
    p.add_argument(
        "--kind",
        choices=("independent", "clique", "gadget", "custom-file"),
        default="independent",
    )
    p.add_argument("--alpha", type=int, help="independent-set size (kind=independent)")
    p.add_argument("--size", type=int, help="clique size (kind=clique)")
    p.add_argument("--t", type=int, help="clique items (kind=gadget)")
    p.add_argument("--input", help="interval file (kind=custom-file)")
    p.add_argument("--aligned", action="store_true", help="integer left endpoints")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--algorithm", choices=("restricted", "windowed"), default="restricted")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--format", choices=("json", "csv"), default="json")


def _cmd_montecarlo(args) -> int:
    seed = _resolve_seed(args.seed)
    spec = harness.InstanceSpec(
        kind=args.kind,
        delta=args.delta,
        seed=seed,
        alpha=args.alpha,
        size=args.size,
        t=args.t,
        path=args.input,
        aligned=args.aligned,
    )
    config = {
        "subcommand": "montecarlo",
        "kind": args.kind,
        "delta": args.delta,
        "trials": args.trials,
        "seed": seed,
        "algorithm": args.algorithm,
        "threads": args.threads,
        "format": args.format,
        "aligned": args.aligned,
    }
    for key in ("alpha", "size", "t", "input"):
        value = getattr(args, key)
        if value is not None:
            config[key] = value
    _echo_config(config)
    try:
        summary = harness.monte_carlo(
            spec, args.trials, algorithm=args.algorithm, threads=args.threads
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.format == "csv":
        fields = summary.to_dict()
        print(",".join(fields))
        print(",".join(_fmt(v) for v in fields.values()))
    else:
        _emit_json(summary.to_dict())
    return 0


# --- gadget -------------------------------------------------------------------


def _add_gadget(sub) -> None:
    p = sub.add_parser("gadget", help="hard-instance construction and protocol")
    p.add_argument("--t", type=int, required=True, help="clique size (>= 3)")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--simulate", action="store_true")
    p.add_argument("--index", type=int, help="target index (default: random)")
    p.add_argument("--xbits", help="private bits as hex, bit i = (v >> i) & 1")
    p.add_argument("--ybits", help="public bits as hex")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument(
        "--algorithm",
        default="oracle",
        help="oracle | first | windowed:DELTA (simulation only)",
    )
    p.add_argument("--exhaustive", action="store_true", help="enumerate all triples")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)


def _parse_bits(hex_text: str | None, t: int, rng) -> tuple[int, ...]:
    if hex_text is None:
        return rng.bits(t)
    try:
        value = int(hex_text, 16)
    except ValueError:
        raise UsageError(f"bad hex bit vector {hex_text!r}")
    if value < 0 or value >= 1 << t:
        raise UsageError(f"bit vector {hex_text!r} does not fit in {t} bits")
    return tuple((value >> i) & 1 for i in range(t))


def _cmd_gadget(args) -> int:
    if args.verify == args.simulate:
        raise UsageError("give exactly one of --verify or --simulate")
    if args.t < gadget_mod.MIN_T:
        raise UsageError(f"--t must be at least {gadget_mod.MIN_T}")
    seed = _resolve_seed(args.seed)

    if args.verify:
        rng = SplitMix64(seed)
        xbits = _parse_bits(args.xbits, args.t, rng)
        index = args.index if args.index is not None else rng.below(args.t)
        if not 0 <= index < args.t:
            raise UsageError(f"--index must lie in [0, {args.t})")
        ybits = _parse_bits(args.ybits, args.t, rng)
        sigma = gadget_mod.sample_sigma(args.t, rng)
        _echo_config(
            {
                "subcommand": "gadget",
                "mode": "verify",
                "t": args.t,
                "index": index,
                "seed": seed,
                "exhaustive": args.exhaustive,
            }
        )
        instance = gadget_mod.build(args.t, index, xbits, ybits, sigma)
        report = gadget_mod.verify(instance, exhaustive=args.exhaustive)
        payload = report.to_dict()
        payload["target_built_privately"] = instance.alice_built_target
        payload["first_wing_position"] = instance.first_wing_position
        _emit_json(payload)
        return 0

    _echo_config(
        {
            "subcommand": "gadget",
            "mode": "simulate",
            "t": args.t,
            "samples": args.samples,
            "algorithm": args.algorithm,
            "seed": seed,
            "threads": args.threads,
        }
    )
    try:
        gadget_mod.resolve_algorithm(args.algorithm)
    except ValueError as exc:
        raise UsageError(str(exc))
    stats = gadget_mod.simulate_protocol(
        args.t, args.samples, args.algorithm, seed, threads=args.threads
    )
    _emit_json(stats.to_dict())
    return 0


# --- substream-test -------------------------------------------------------------


def _add_substream(sub) -> None:
    p = sub.add_parser(
        "substream-test", help="check that deleting intervals never grows the output"
    )
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int)


def _cmd_substream(args) -> int:
    seed = _resolve_seed(args.seed)
    _echo_config({"subcommand": "substream-test", "trials": args.trials, "seed": seed})
    report = harness.substream_monotonicity_test(args.trials, seed)
    _emit_json(report.to_dict())
    return 0 if report.violation_count == 0 else 1


# --- dispatch --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intervalsel",
        description="Random-order streaming selection of unit intervals",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    _add_dp(sub)
    _add_run(sub)
    _add_montecarlo(sub)
    _add_gadget(sub)
    _add_substream(sub)
    return parser


_COMMANDS = {
    "dp": _cmd_dp,
    "run": _cmd_run,
    "montecarlo": _cmd_montecarlo,
    "gadget": _cmd_gadget,
    "substream-test": _cmd_substream,
}


def _join_domain_values(argv) -> list:
    """Fold ``--domain -1,5`` into ``--domain=-1,5`` so argparse does not
    mistake the negative bound for an option."""
    out = []
    skip = False
    for i, arg in enumerate(argv):
        if skip:
            skip = False
            continue
        if arg == "--domain" and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"--domain={argv[i + 1]}")
            skip = True
        else:
            out.append(arg)
    return out


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(_join_domain_values(list(argv)))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.subcommand](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (
        ParseError,
        DomainError,
        FileNotFoundError,
        harness.ValidationError,
        gadget_mod.GadgetInvariantError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # remaining ValueErrors are rejected parameter combinations
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
