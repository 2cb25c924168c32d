"""Command-line interface: synthesize, verify, count, sweep losses, apply.

Exit codes: 0 on success, 1 when a verification ran and failed, 2 for
anything wrong with the invocation or its input files.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

import numpy as np

from .analysis import loss_sweep, verify_netlist
from .errors import SchemeParameterError, TwistFFTError
from .modespace import PureState, state_from_json, state_to_json
from .netlist import Netlist, netlist_from_json, netlist_to_json, operator_of
from .synthesis import (
    VARIANTS,
    CountReport,
    SchemeConfig,
    build_scheme,
    count_closed_form,
    structural_counts,
)


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _parse_int_list(text: str, what: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise SchemeParameterError(f"bad {what} list {text!r}: {exc}") from exc
    if not values:
        raise SchemeParameterError(f"empty {what} list")
    return values


def _parse_variant_list(text: str) -> list[str]:
    variants = [part.strip() for part in text.split(",") if part.strip()]
    for v in variants:
        if v not in VARIANTS:
            raise SchemeParameterError(
                f"unknown variant {v!r}; expected one of {', '.join(VARIANTS)}"
            )
    if not variants:
        raise SchemeParameterError("empty variant list")
    return variants


def _load_or_build(args: argparse.Namespace) -> Netlist:
    if getattr(args, "netlist", None):
        return netlist_from_json(_read_text(args.netlist))
    if getattr(args, "dim", None):
        return build_scheme(args.dim, args.variant)
    raise SchemeParameterError("give either --netlist FILE or --dim (with --variant)")


def cmd_synth(args: argparse.Namespace) -> int:
    netlist = build_scheme(args.dim, args.variant)
    text = netlist_to_json(netlist, stamp=args.stamp)
    if args.out:
        _write_text(args.out, text)
        print(
            f"wrote {args.out}: dim={netlist.dim} variant={netlist.variant} "
            f"stages={netlist.depth} beam_splitters={netlist.beam_splitter_total()}"
        )
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    netlist = _load_or_build(args)
    offsets: tuple[int, ...] = ()
    if netlist.variant == "basic":
        offsets = (0, 1, netlist.d_major)
    report = verify_netlist(
        netlist,
        tolerance=args.tolerance,
        closure_cap=args.closure_cap,
        subspace_offsets=offsets,
    )
    for line in report.summary_lines():
        print(line)
    return 0 if report.passed else 1


def cmd_count(args: argparse.Namespace) -> int:
    dims = _parse_int_list(args.dims, "dimension")
    variants = _parse_variant_list(args.variants)
    report = CountReport(())
    for dim in dims:
        for variant in variants:
            try:
                config = SchemeConfig.create(dim, variant)
            except SchemeParameterError as exc:
                print(f"skipping d={dim} {variant}: {exc}", file=sys.stderr)
                continue
            report = report.merged(count_closed_form(config))
            report = report.merged(structural_counts(build_scheme(dim, variant)))
    if not len(report):
        raise SchemeParameterError("no valid dimension/variant combination")
    if args.csv:
        _write_text(args.csv, report.to_csv())
        print(f"wrote {args.csv}: {len(report)} rows")
    else:
        widths = [6, 20, 26, 8]
        print(f"{'d':>{widths[0]}} {'variant':<{widths[1]}} {'element_kind':<{widths[2]}} "
              f"{'count':>{widths[3]}} source")
        for row in report:
            print(
                f"{row.dim:>{widths[0]}} {row.variant:<{widths[1]}} "
                f"{row.element_kind:<{widths[2]}} {row.count:>{widths[3]}} {row.source}"
            )
    return 0


def cmd_losses(args: argparse.Namespace) -> int:
    if args.steps < 1:
        raise SchemeParameterError(f"--steps must be at least 1, got {args.steps}")
    if not (0.0 < args.t_min <= args.t_max <= 1.0):
        raise SchemeParameterError(
            f"need 0 < t-min ≤ t-max ≤ 1, got {args.t_min}..{args.t_max}"
        )
    grid = np.linspace(args.t_min, args.t_max, args.steps)
    curve = loss_sweep(
        args.dim,
        grid,
        hologram_transmission=args.hologram_t,
        variant=args.variant,
    )
    print(
        f"normalized fidelity, dim={curve.dim} variant={curve.variant} "
        f"hologram_transmission={curve.hologram_transmission}"
    )
    for t, f in zip(curve.transmissions, curve.fidelities):
        print(f"  T={t:.6f}  F={f:.9f}")
    if args.csv:
        _write_text(args.csv, curve.to_csv())
        print(f"wrote {args.csv}")
    if args.json:
        import json as _json

        _write_text(args.json, _json.dumps(curve.to_document(), indent=2) + "\n")
        print(f"wrote {args.json}")
    return 0


def cmd_apply(args: argparse.Namespace) -> int:
    netlist = netlist_from_json(_read_text(args.netlist))
    # Loose norm gate plus renormalization: measured inputs are rarely exact.
    state = state_from_json(_read_text(args.state_in), norm_tolerance=1e-9, renormalize=True)
    declared = set(netlist.inputs)
    for mode in state.basis:
        if mode not in declared:
            raise SchemeParameterError(
                f"state mode {mode} is not among the netlist's declared inputs"
            )
    op = operator_of(netlist)
    vec = np.array([state.amplitude(m) for m in op.basis_in], dtype=complex)
    out = PureState(op.basis_out, op.matrix @ vec)
    _write_text(args.state_out, state_to_json(out))
    if args.state_out != "-":
        print(
            f"applied dim={netlist.dim} {netlist.variant} transform: "
            f"{len(state.basis)} input modes → {len(out.basis)} output modes "
            f"→ {args.state_out}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistfft",
        description=(
            "Synthesize, simulate and verify interferometric Fourier-transform "
            "circuits on twisted-light modes."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="synthesize a circuit and emit its netlist JSON")
    p_synth.add_argument("--dim", type=int, required=True, help="transform size (power of two)")
    p_synth.add_argument("--variant", choices=VARIANTS, default="basic")
    p_synth.add_argument("--out", help="output file (default: stdout, '-' for stdout)")
    p_synth.add_argument(
        "--stamp", action="store_true",
        help="embed a generation timestamp (off by default so output is reproducible)",
    )
    p_synth.set_defaults(func=cmd_synth)

    p_verify = sub.add_parser("verify", help="simulate a circuit and check it against the transform")
    p_verify.add_argument("--netlist", help="netlist JSON file ('-' for stdin)")
    p_verify.add_argument("--dim", type=int, help="synthesize this size instead of loading a file")
    p_verify.add_argument("--variant", choices=VARIANTS, default="basic")
    p_verify.add_argument("--tolerance", type=float, default=1e-9)
    p_verify.add_argument("--closure-cap", type=int, default=10**6,
                          help="abort if the reachable mode set exceeds this")
    p_verify.set_defaults(func=cmd_verify)

    p_count = sub.add_parser("count", help="element-count table across sizes and variants")
    p_count.add_argument("--dims", required=True, help="comma-separated sizes, e.g. 4,16,64")
    p_count.add_argument("--variants", default="basic", help="comma-separated variant names")
    p_count.add_argument("--csv", help="write CSV here instead of printing a table")
    p_count.set_defaults(func=cmd_count)

    p_losses = sub.add_parser("losses", help="normalized-fidelity sweep over element transmission")
    p_losses.add_argument("--dim", type=int, required=True)
    p_losses.add_argument("--variant", choices=VARIANTS, default="basic")
    p_losses.add_argument("--t-min", type=float, default=0.9, dest="t_min")
    p_losses.add_argument("--t-max", type=float, default=1.0, dest="t_max")
    p_losses.add_argument("--steps", type=int, default=11)
    p_losses.add_argument("--hologram-t", type=float, default=0.90, dest="hologram_t",
                          help="intensity transmission of each hologram pass")
    p_losses.add_argument("--csv", help="also write the curve as CSV")
    p_losses.add_argument("--json", help="also write the curve as JSON")
    p_losses.set_defaults(func=cmd_losses)

    p_apply = sub.add_parser("apply", help="propagate a pure state file through a netlist")
    p_apply.add_argument("--netlist", required=True)
    p_apply.add_argument("--state-in", required=True, dest="state_in")
    p_apply.add_argument("--state-out", required=True, dest="state_out")
    p_apply.set_defaults(func=cmd_apply)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TwistFFTError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
