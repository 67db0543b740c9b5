"""Whole-network planning: arena size, placements, baseline and savings.

Only two activation regions are ever live at once in layer-wise inference,
so a single circular arena sized for the worst layer pair can host the whole
network: each layer's output base sits ``d`` words below its input base
(modulo the arena), and the next layer inherits that output region as its
input.  The traditional baseline keeps the two regions disjoint, which costs
the worst-case sum of adjacent layer sizes instead.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ChainMismatchError, InvalidLayerError
from .model import LayerSpec, apply_packing, derive_dims, min_offset

__all__ = [
    "NetworkSpec",
    "LayerPlan",
    "MemoryPlan",
    "packed_layers",
    "plan_network",
    "plan_with_offsets",
    "pingpong_network",
    "count_parameters",
    "savings_report",
]


@dataclass(frozen=True)
class NetworkSpec:
    """An ordered chain of layers plus an optional packing factor.

    Consecutive layers must chain exactly: the output geometry of layer ``i``
    is the input geometry of layer ``i + 1``.
    """

    name: str
    layers: tuple
    packing: int = 1

    def __post_init__(self):
        if not self.layers:
            raise InvalidLayerError("a network needs at least one layer")
        object.__setattr__(self, "layers", tuple(self.layers))
        if not isinstance(self.packing, int) or isinstance(self.packing, bool) or self.packing < 1:
            raise InvalidLayerError(f"packing must be an integer >= 1, got {self.packing!r}")
        for i in range(len(self.layers) - 1):
            cur, nxt = self.layers[i], self.layers[i + 1]
            dd = derive_dims(cur)
            for field, got, want in (
                ("x_in", nxt.x_in, dd.x_out),
                ("y_in", nxt.y_in, dd.y_out),
                ("c_in", nxt.c_in, cur.c_out),
            ):
                if got != want:
                    raise ChainMismatchError(
                        f"layers {i + 1} -> {i + 2}: {field}={got} does not match "
                        f"previous layer's output ({want})"
                    )


@dataclass(frozen=True)
class LayerPlan:
    """Placement of one layer's activations inside the arena (packed words)."""

    index: int
    m_in: int
    m_out: int
    d: int
    m_min_layer: int
    input_base: int
    output_base: int


@dataclass(frozen=True)
class MemoryPlan:
    """Arena plan for a whole network, with baseline and savings figures."""

    name: str
    packing: int
    arena_size: int
    layer_plans: tuple
    pingpong_size: int
    parameter_words: int
    savings_activations_pct: float
    savings_total_pct: float


def packed_layers(net: NetworkSpec) -> tuple:
    """The network's layers rescaled to its packing factor."""
    return tuple(apply_packing(layer, net.packing) for layer in net.layers)


def _build_plan(net: NetworkSpec, offsets, arena_size=None) -> MemoryPlan:
    layers = packed_layers(net)
    dims = [derive_dims(layer) for layer in layers]
    m_mins = [dd.m_in + d for dd, d in zip(dims, offsets)]
    # A degenerate layer whose windows fall partly in padding can emit more
    # words than m_in + d spans; the arena must still hold its full output.
    needed = max(max(m_mins), max(dd.m_out for dd in dims))
    size = needed if arena_size is None else arena_size

    plans = []
    base = 0
    for i, (dd, d, mm) in enumerate(zip(dims, offsets, m_mins)):
        out_base = (base - d) % size
        plans.append(
            LayerPlan(
                index=i,
                m_in=dd.m_in,
                m_out=dd.m_out,
                d=d,
                m_min_layer=mm,
                input_base=base,
                output_base=out_base,
            )
        )
        base = out_base

    pingpong = pingpong_network(net)
    params = count_parameters(net)
    savings_act = (pingpong - size) / pingpong * 100.0
    savings_total = ((params + pingpong) - (params + size)) / (params + pingpong) * 100.0
    return MemoryPlan(
        name=net.name,
        packing=net.packing,
        arena_size=size,
        layer_plans=tuple(plans),
        pingpong_size=pingpong,
        parameter_words=params,
        savings_activations_pct=savings_act,
        savings_total_pct=savings_total,
    )


def plan_network(net: NetworkSpec) -> MemoryPlan:
    """Minimal arena and per-layer placements for a network.

    The arena is the maximum over layers of the per-layer joint footprint
    (and of the raw output size, which only wins for degenerate padded
    layers).  Output bases descend by each layer's offset modulo the arena;
    because the arena is at least ``m_in + d`` for every layer, the linear
    safety argument for a layer pair embeds unchanged in the circle.
    """
    offsets = [min_offset(layer) for layer in packed_layers(net)]
    return _build_plan(net, offsets)


def plan_with_offsets(net: NetworkSpec, offsets, arena_size=None) -> MemoryPlan:
    """Plan with explicit per-layer offsets (validation and experiments).

    Keeps the given ``arena_size`` if provided, so a deliberately corrupted
    offset can be replayed inside the original arena.
    """
    offsets = list(offsets)
    if len(offsets) != len(net.layers):
        raise InvalidLayerError(
            f"{len(offsets)} offsets for {len(net.layers)} layers"
        )
    if any(d < 0 for d in offsets):
        raise InvalidLayerError("offsets must be >= 0")
    return _build_plan(net, offsets, arena_size=arena_size)


def pingpong_network(net: NetworkSpec) -> int:
    """Worst adjacent live pair under disjoint buffering (packed words).

    Every layer keeps its input (with residual carries) and its output live
    at once, so the baseline is the maximum of ``m_in + m_out`` over layers.
    """
    return max(derive_dims(layer).m_in + derive_dims(layer).m_out for layer in packed_layers(net))


def count_parameters(net: NetworkSpec) -> int:
    """Weight and bias words of the network, one word per parameter."""
    total = 0
    for layer in net.layers:
        total += layer.k_x * layer.k_y * (layer.c_in // layer.groups) * layer.c_out + layer.c_out
    return total


def savings_report(net: NetworkSpec) -> MemoryPlan:
    """Fully populated plan including baseline and savings percentages."""
    return plan_network(net)
