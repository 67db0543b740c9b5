"""Plan reports: JSON round-trip, human-readable tables and memory maps."""

from __future__ import annotations

import json

from .errors import NetworkFileError
from .planner import LayerPlan, MemoryPlan

__all__ = [
    "plan_to_dict",
    "plan_from_dict",
    "plan_to_json",
    "plan_from_json",
    "render_plan_text",
    "render_memory_map",
    "humanize_words",
]


def plan_to_dict(plan: MemoryPlan) -> dict:
    return {
        "name": plan.name,
        "packing": plan.packing,
        "arena_size": plan.arena_size,
        "pingpong_size": plan.pingpong_size,
        "parameter_words": plan.parameter_words,
        "savings_activations_pct": plan.savings_activations_pct,
        "savings_total_pct": plan.savings_total_pct,
        "layers": [
            {
                "index": lp.index,
                "m_in": lp.m_in,
                "m_out": lp.m_out,
                "d": lp.d,
                "m_min_layer": lp.m_min_layer,
                "input_base": lp.input_base,
                "output_base": lp.output_base,
            }
            for lp in plan.layer_plans
        ],
    }


def plan_from_dict(doc: dict) -> MemoryPlan:
    try:
        layers = tuple(
            LayerPlan(
                index=row["index"],
                m_in=row["m_in"],
                m_out=row["m_out"],
                d=row["d"],
                m_min_layer=row["m_min_layer"],
                input_base=row["input_base"],
                output_base=row["output_base"],
            )
            for row in doc["layers"]
        )
        return MemoryPlan(
            name=doc["name"],
            packing=doc["packing"],
            arena_size=doc["arena_size"],
            layer_plans=layers,
            pingpong_size=doc["pingpong_size"],
            parameter_words=doc["parameter_words"],
            savings_activations_pct=doc["savings_activations_pct"],
            savings_total_pct=doc["savings_total_pct"],
        )
    except KeyError as exc:
        raise NetworkFileError(f"plan report missing key {exc}") from exc


def plan_to_json(plan: MemoryPlan) -> str:
    return json.dumps(plan_to_dict(plan), indent=2)


def plan_from_json(text: str) -> MemoryPlan:
    try:
        return plan_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise NetworkFileError(exc.msg, location=f"line {exc.lineno}") from exc


def humanize_words(words: int) -> str:
    """Short k/M form with one decimal, as used in result tables."""
    if words >= 10**6:
        return f"{words / 10**6:.1f}M"
    if words >= 10**3:
        return f"{words / 10**3:.1f}k"
    return str(words)


def render_plan_text(plan: MemoryPlan, memory_map: bool = False, width: int = 64) -> str:
    lines = [
        f"network          {plan.name}" + (f"   (packing {plan.packing}/word)" if plan.packing != 1 else ""),
        f"arena            {plan.arena_size:,} words ({humanize_words(plan.arena_size)})",
        f"ping-pong        {plan.pingpong_size:,} words ({humanize_words(plan.pingpong_size)})",
        f"parameters       {plan.parameter_words:,} words ({humanize_words(plan.parameter_words)})",
        f"savings          {plan.savings_activations_pct:.1f}% activations, "
        f"{plan.savings_total_pct:.1f}% total",
        "",
        f"{'layer':>5} {'m_in':>12} {'m_out':>12} {'d':>10} {'m_min':>12} "
        f"{'in_base':>10} {'out_base':>10}",
    ]
    for lp in plan.layer_plans:
        lines.append(
            f"{lp.index + 1:>5} {lp.m_in:>12,} {lp.m_out:>12,} {lp.d:>10,} "
            f"{lp.m_min_layer:>12,} {lp.input_base:>10,} {lp.output_base:>10,}"
        )
    if memory_map:
        lines.append("")
        lines.extend(render_memory_map(plan, width=width).splitlines())
    return "\n".join(lines) + "\n"


def _covers(cell_lo: int, cell_hi: int, start: int, length: int, size: int) -> bool:
    """Does the circular interval [start, start+length) touch [cell_lo, cell_hi)?"""
    if length <= 0:
        return False
    if length >= size:
        return True
    end = (start + length) % size
    if start < end:
        return cell_lo < end and cell_hi > start
    return cell_lo < end or cell_hi > start


def render_memory_map(plan: MemoryPlan, width: int = 64) -> str:
    """One bar per layer: i = input, o = output, x = both in that arena slice."""
    size = plan.arena_size
    width = min(width, size)
    out = [f"memory map ({size:,} words, {width} cells of ~{size / width:.0f} words)"]
    for lp in plan.layer_plans:
        cells = []
        for j in range(width):
            lo = j * size // width
            hi = (j + 1) * size // width
            has_in = _covers(lo, hi, lp.input_base, lp.m_in, size)
            has_out = _covers(lo, hi, lp.output_base, lp.m_out, size)
            cells.append("x" if has_in and has_out else "i" if has_in else "o" if has_out else ".")
        out.append(f"layer {lp.index + 1:>3} |{''.join(cells)}|")
    return "\n".join(out)
