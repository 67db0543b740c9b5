"""Exhaustive and randomized verification harnesses.

The layer sweep enumerates every square layer shape inside configurable
bounds (image edge, kernel, stride, padding, channels, grouped and packed
variants) and checks the closed-form offset of each against the brute-force
lifetime minimum.  The network sweep draws seeded random layer chains,
executes them bit-exactly in a planned arena against the two-buffer
reference, and probes plan tightness by decrementing offsets.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .errors import ClobberError
from .model import LayerSpec, apply_packing, derive_dims
from .oracle import (
    _raw_min_safe_offset,
    execute_network_in_arena,
    execute_network_reference,
    min_safe_offset_bruteforce,
    seeded_test_vectors,
    verify_layer,
)
from .planner import NetworkSpec, plan_network, plan_with_offsets

__all__ = [
    "SweepBounds",
    "SweepSummary",
    "ExecSummary",
    "sweep_layer_configs",
    "run_layer_sweep",
    "random_network",
    "run_exec_sweep",
]


@dataclass(frozen=True)
class SweepBounds:
    """Inclusive bounds of the exhaustive layer sweep.

    Image width and height vary independently; kernel, stride and padding
    are square (the hypothesis suite covers fully asymmetric shapes).
    """

    max_dim: int = 6
    max_kernel: int = 3
    max_stride: int = 2
    max_pad: int = 1
    max_channels: int = 3
    grouped: bool = True
    packed: bool = True


@dataclass
class SweepSummary:
    """Aggregated verdicts of one sweep run."""

    total: int = 0
    match: int = 0
    conservative: int = 0
    unsafe: int = 0
    max_gap: int = 0
    first_unsafe: LayerSpec | None = None
    first_conservative: LayerSpec | None = None

    def record(self, layer: LayerSpec, report) -> None:
        self.total += 1
        if report.verdict == "match":
            self.match += 1
        elif report.verdict == "closed_form_conservative":
            self.conservative += 1
            self.max_gap = max(self.max_gap, report.gap)
            if self.first_conservative is None:
                self.first_conservative = layer
        else:
            self.unsafe += 1
            if self.first_unsafe is None:
                self.first_unsafe = layer


def sweep_layer_configs(bounds: SweepBounds = SweepBounds()):
    """Yield every distinct layer in the sweep domain.

    Grouped variants use ``groups == c_in`` (depthwise) where it divides
    ``c_out``; packed variants rescale by ``q == c_in`` where that divides
    both channel counts.  Packed layers are yielded in rescaled form, so the
    whole domain is verified through one code path.
    """
    seen = set()
    for x_in in range(1, bounds.max_dim + 1):
        for y_in in range(1, bounds.max_dim + 1):
            for k in range(1, bounds.max_kernel + 1):
                for s in range(1, bounds.max_stride + 1):
                    for p in range(0, bounds.max_pad + 1):
                        if k > x_in + 2 * p or k > y_in + 2 * p:
                            continue
                        for c_in in range(1, bounds.max_channels + 1):
                            for c_out in range(1, bounds.max_channels + 1):
                                groups_opts = [1]
                                if bounds.grouped and c_in > 1 and c_out % c_in == 0:
                                    groups_opts.append(c_in)
                                pack_opts = [1]
                                if bounds.packed and c_in > 1 and c_out % c_in == 0:
                                    pack_opts.append(c_in)
                                for g in groups_opts:
                                    for q in pack_opts:
                                        base = LayerSpec(
                                            x_in=x_in, y_in=y_in, c_in=c_in,
                                            k_x=k, k_y=k, s_x=s, s_y=s,
                                            p_x=p, p_y=p, c_out=c_out, groups=g,
                                        )
                                        layer = apply_packing(base, q)
                                        if layer not in seen:
                                            seen.add(layer)
                                            yield layer


def run_layer_sweep(bounds: SweepBounds = SweepBounds(), cycle_cap: int | None = None) -> SweepSummary:
    """Verify the closed form against the oracle over the whole domain."""
    summary = SweepSummary()
    for layer in sweep_layer_configs(bounds):
        if cycle_cap is None:
            report = verify_layer(layer)
        else:
            report = verify_layer(layer, cycle_cap=cycle_cap)
        summary.record(layer, report)
    return summary


def random_network(rng: random.Random, n_layers: int | None = None,
                   max_dim: int = 6, max_channels: int = 3) -> NetworkSpec:
    """A seeded random chain of 3..6 sweep-domain layers."""
    if n_layers is None:
        n_layers = rng.randint(3, 6)
    x = rng.randint(2, max_dim)
    y = rng.randint(2, max_dim)
    c = rng.randint(1, max_channels)
    layers = []
    for _ in range(n_layers):
        while True:
            k = rng.randint(1, 3)
            s = rng.randint(1, 2)
            p = rng.randint(0, 1)
            if k <= x + 2 * p and k <= y + 2 * p:
                break
        c_out = rng.randint(1, max_channels)
        groups = 1
        if c > 1 and c_out % c == 0 and rng.random() < 0.25:
            groups = c
        layer = LayerSpec(
            x_in=x, y_in=y, c_in=c, k_x=k, k_y=k, s_x=s, s_y=s,
            p_x=p, p_y=p, c_out=c_out, groups=groups,
        )
        layers.append(layer)
        dd = derive_dims(layer)
        x, y, c = dd.x_out, dd.y_out, layer.c_out
    return NetworkSpec(name=f"random-{n_layers}", layers=tuple(layers))


@dataclass
class ExecSummary:
    """Results of the randomized execution sweep."""

    networks: int = 0
    bit_exact: int = 0
    oracle_plan_bit_exact: int = 0
    plan_decrement_clobbers: int = 0
    tight_probes: int = 0
    tight_probe_clobbers: int = 0
    mismatches: list = field(default_factory=list)


def _tightest_index(plan) -> int:
    return max(plan.layer_plans, key=lambda lp: (lp.m_min_layer, -lp.index)).index


def run_exec_sweep(seed: int = 0, count: int = 100) -> ExecSummary:
    """Execute ``count`` seeded random networks in-arena vs. the reference.

    Three probes per network besides plain bit-exactness of the plan:

    * a plan built from the brute-force offsets must also run bit-exact,
    * lowering the tightest layer's planned offset by one word counts how
      often the plan sits exactly at the safety edge,
    * for every layer whose brute-force offset is constraint-bound (not the
      one-word floor), lowering it below that offset must clobber; this is
      the minimality witness for the oracle itself.
    """
    summary = ExecSummary()
    for i in range(count):
        rng = random.Random(seed + i)
        net = random_network(rng)
        plan = plan_network(net)
        x, weights = seeded_test_vectors(net, seed=seed + i)
        ref = execute_network_reference(net, x, weights)
        got = execute_network_in_arena(net, plan, x, weights, checked=True)
        summary.networks += 1
        if np.array_equal(ref, got):
            summary.bit_exact += 1
        else:
            summary.mismatches.append(net)
            continue

        oracle_offsets = [min_safe_offset_bruteforce(layer) for layer in net.layers]
        oracle_plan = plan_with_offsets(net, oracle_offsets)
        if np.array_equal(ref, execute_network_in_arena(net, oracle_plan, x, weights, checked=True)):
            summary.oracle_plan_bit_exact += 1

        offsets = [lp.d for lp in plan.layer_plans]
        ti = _tightest_index(plan)
        lowered = list(offsets)
        lowered[ti] = offsets[ti] - 1
        if _clobbers(net, plan, lowered, x, weights):
            summary.plan_decrement_clobbers += 1

        for li, layer in enumerate(net.layers):
            raw = _raw_min_safe_offset(layer)
            if raw is None or raw < 1:
                continue  # floor-bound: even a zero offset never collides
            summary.tight_probes += 1
            below = list(offsets)
            below[li] = raw - 1
            if _clobbers(net, plan, below, x, weights):
                summary.tight_probe_clobbers += 1
    return summary


def _clobbers(net, plan, offsets, x, weights) -> bool:
    corrupted = plan_with_offsets(net, offsets, arena_size=plan.arena_size)
    try:
        execute_network_in_arena(net, corrupted, x, weights, checked=True)
    except ClobberError:
        return True
    return False
