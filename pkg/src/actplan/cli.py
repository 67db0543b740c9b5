"""Command line surface.

Subcommands:

* ``plan <file>``    compute the arena plan and savings report for a network
* ``verify <file>``  check each layer's closed-form offset against the
                     brute-force lifetime minimum
* ``sweep``          exhaustive layer sweep plus randomized in-arena
                     execution of seeded networks
* ``exec <file>``    run a network in-arena against the two-buffer reference
                     on seeded random data
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import ActplanError, ClobberError, SizeLimitError
from .netfile import parse_network_file
from .oracle import (
    DEFAULT_CYCLE_CAP,
    DEFAULT_EXEC_CAP,
    execute_network_in_arena,
    execute_network_reference,
    seeded_test_vectors,
    verify_layer,
)
from .planner import packed_layers, plan_with_offsets, savings_report
from .report import plan_to_json, render_plan_text
from .sweep import SweepBounds, run_exec_sweep, run_layer_sweep

__all__ = ["main"]


def _cmd_plan(args) -> int:
    net = parse_network_file(args.file)
    plan = savings_report(net)
    if args.format == "json":
        print(plan_to_json(plan))
    else:
        print(render_plan_text(plan, memory_map=args.ascii_map), end="")
    return 0


def _cmd_verify(args) -> int:
    net = parse_network_file(args.file)
    rows = []
    any_unsafe = False
    for i, layer in enumerate(packed_layers(net)):
        try:
            rep = verify_layer(layer, cycle_cap=args.cycle_cap)
        except SizeLimitError as exc:
            rows.append({"layer": i + 1, "verdict": "skipped", "detail": str(exc)})
            continue
        row = {
            "layer": i + 1,
            "verdict": rep.verdict,
            "d_closed_form": rep.d_closed_form,
            "d_oracle": rep.d_oracle,
        }
        if rep.verdict == "closed_form_conservative":
            row["gap"] = rep.gap
        any_unsafe = any_unsafe or rep.verdict == "UNSAFE"
        rows.append(row)
    if args.format == "json":
        print(json.dumps({"name": net.name, "layers": rows}, indent=2))
    else:
        for row in rows:
            if row["verdict"] == "skipped":
                print(f"layer {row['layer']:>3}: skipped ({row['detail']})")
            elif row["verdict"] == "match":
                print(f"layer {row['layer']:>3}: match (d={row['d_closed_form']})")
            elif row["verdict"] == "closed_form_conservative":
                print(
                    f"layer {row['layer']:>3}: conservative "
                    f"(closed {row['d_closed_form']}, minimum {row['d_oracle']}, "
                    f"gap {row['gap']})"
                )
            else:
                print(
                    f"layer {row['layer']:>3}: UNSAFE "
                    f"(closed {row['d_closed_form']} < minimum {row['d_oracle']})"
                )
    return 1 if any_unsafe else 0


def _cmd_sweep(args) -> int:
    bounds = SweepBounds(
        max_dim=args.max_dim,
        max_kernel=args.max_kernel,
        max_stride=args.max_stride,
        max_pad=args.max_pad,
        max_channels=args.max_channels,
    )
    summary = run_layer_sweep(bounds)
    lines = [
        f"layer sweep: {summary.total} configurations",
        f"  match         {summary.match}",
        f"  conservative  {summary.conservative} (max gap {summary.max_gap} words)",
        f"  UNSAFE        {summary.unsafe}",
    ]
    if summary.first_unsafe is not None:
        lines.append(f"  first unsafe config: {summary.first_unsafe}")
    elif summary.first_conservative is not None:
        lines.append(f"  first conservative config: {summary.first_conservative}")
    if args.networks > 0:
        ex = run_exec_sweep(seed=args.seed, count=args.networks)
        lines += [
            f"execution sweep: {ex.networks} seeded networks (seed {args.seed})",
            f"  bit-exact in-arena           {ex.bit_exact}/{ex.networks}",
            f"  bit-exact at oracle offsets  {ex.oracle_plan_bit_exact}/{ex.networks}",
            f"  clobber when tightest planned offset lowered by 1: "
            f"{ex.plan_decrement_clobbers}/{ex.networks}",
            f"  clobber when lowered below the lifetime minimum:   "
            f"{ex.tight_probe_clobbers}/{ex.tight_probes}",
        ]
        if ex.mismatches:
            lines.append(f"  first mismatching network: {ex.mismatches[0]}")
    print("\n".join(lines))
    bad = summary.unsafe > 0 or (args.networks > 0 and ex.bit_exact < ex.networks)
    return 1 if bad else 0


def _cmd_exec(args) -> int:
    net = parse_network_file(args.file)
    plan = savings_report(net)
    if args.corrupt_offset:
        offsets = [lp.d for lp in plan.layer_plans]
        tightest = max(plan.layer_plans, key=lambda lp: (lp.m_min_layer, -lp.index)).index
        offsets[tightest] = max(0, offsets[tightest] - args.corrupt_offset)
        print(f"corrupting layer {tightest + 1}: offset {plan.layer_plans[tightest].d} "
              f"-> {offsets[tightest]}")
        plan = plan_with_offsets(net, offsets, arena_size=plan.arena_size)
    x, weights = seeded_test_vectors(net, seed=args.seed)
    ref = execute_network_reference(net, x, weights, cycle_cap=args.cycle_cap)
    try:
        got = execute_network_in_arena(net, plan, x, weights, checked=args.checked,
                                       cycle_cap=args.cycle_cap)
    except ClobberError as exc:
        print(f"CLOBBER: {exc}")
        return 1
    if np.array_equal(ref, got):
        print(f"bit-exact: in-arena output matches reference "
              f"({ref.size} words, seed {args.seed})")
        return 0
    print("MISMATCH: in-arena output differs from reference")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="actplan",
        description="Plan and verify overlapped activation buffers for layer-wise CNN inference.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="arena plan and savings report for a network file")
    p.add_argument("file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--ascii-map", action="store_true", help="append a per-layer memory map")
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("verify", help="closed form vs. brute-force minimum, per layer")
    p.add_argument("file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--cycle-cap", type=int, default=DEFAULT_CYCLE_CAP,
                   help="skip layers needing more MAC cycles than this")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sweep", help="exhaustive layer sweep and randomized execution")
    p.add_argument("--max-dim", type=int, default=6)
    p.add_argument("--max-kernel", type=int, default=3)
    p.add_argument("--max-stride", type=int, default=2)
    p.add_argument("--max-pad", type=int, default=1)
    p.add_argument("--max-channels", type=int, default=3)
    p.add_argument("--networks", type=int, default=100,
                   help="number of seeded random networks to execute (0 disables)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("exec", help="in-arena vs. reference execution on seeded data")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--checked", action="store_true",
                   help="track per-word liveness and report the first clobber")
    p.add_argument("--cycle-cap", type=int, default=DEFAULT_EXEC_CAP,
                   help="refuse networks needing more MAC cycles than this")
    p.add_argument("--corrupt-offset", type=int, default=0, metavar="N",
                   help="lower the tightest layer's offset by N before executing")
    p.set_defaults(func=_cmd_exec)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ActplanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
