"""Layer geometry and the closed-form pointer model for overlapping buffers.

A convolution layer whose activations are stored depth-first (all channels of
a pixel, then pixels along x, then rows along y) reads its input through a
sliding window that only moves forward in memory.  Addresses behind the
window are dead and can be recycled for output words, so the output region of
a layer may start *below* the input region and chase it upward.  This module
models the two addresses that matter as exact integer functions of the MAC
cycle counter ``t`` (one multiply-accumulate per cycle):

* write pointer  -- address of the output word currently being accumulated;
  it advances one word per ``block_cycles`` cycles.
* read frontier  -- lowest input address that any upcoming window still
  needs; it advances ``s_x * c_in`` words per window step, skips rows
  according to ``s_y``, starts below zero when the top rows are padding and
  is pulled back when the window run-out at the right edge exceeds the image.

Everything is computed with integer floor/ceil arithmetic (velocities are
exact rationals), so results are bit-stable for arbitrarily large layers.

``min_offset`` searches for the smallest initial distance between the two
pointers such that the write pointer stays strictly below the read frontier
at the start of every output block; ``min_layer_memory`` turns that distance
into the joint memory footprint of the layer's input/output pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import InvalidLayerError, PackingError

__all__ = [
    "LayerSpec",
    "DerivedDims",
    "PointerParams",
    "derive_dims",
    "pointer_params",
    "write_pointer_at",
    "read_pointer_at",
    "min_offset",
    "min_layer_memory",
    "ping_pong_pair_memory",
    "apply_packing",
]


@dataclass(frozen=True)
class LayerSpec:
    """Geometry of one convolution layer.

    ``groups`` models grouped/depthwise convolution (``groups == c_in`` is
    depthwise): it divides the per-output MAC count but leaves address
    strides untouched, because all ``c_in`` channels of a pixel still occupy
    consecutive words.  ``residual_carry_words`` reserves extra live words
    (identity/skip data) that must survive this layer; they sit directly
    above the convolution input and enlarge its footprint only.
    """

    x_in: int
    y_in: int
    c_in: int
    k_x: int
    k_y: int
    s_x: int
    s_y: int
    p_x: int
    p_y: int
    c_out: int
    groups: int = 1
    residual_carry_words: int = 0

    def __post_init__(self):
        for name in ("x_in", "y_in", "c_in", "k_x", "k_y", "s_x", "s_y", "c_out", "groups"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise InvalidLayerError(f"{name} must be an integer >= 1, got {v!r}")
        for name in ("p_x", "p_y", "residual_carry_words"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise InvalidLayerError(f"{name} must be an integer >= 0, got {v!r}")
        if self.k_x > self.x_in + 2 * self.p_x:
            raise InvalidLayerError(
                f"kernel k_x={self.k_x} exceeds padded width {self.x_in + 2 * self.p_x}"
            )
        if self.k_y > self.y_in + 2 * self.p_y:
            raise InvalidLayerError(
                f"kernel k_y={self.k_y} exceeds padded height {self.y_in + 2 * self.p_y}"
            )
        if self.c_in % self.groups or self.c_out % self.groups:
            raise InvalidLayerError(
                f"groups={self.groups} must divide c_in={self.c_in} and c_out={self.c_out}"
            )


@dataclass(frozen=True)
class DerivedDims:
    """Sizes derived from a :class:`LayerSpec`.

    ``m_in`` counts the words live on the input side (convolution input plus
    any residual carry); ``m_out`` and ``t_len`` both equal the number of
    output elements, the latter naming the block index range.
    """

    x_out: int
    y_out: int
    m_in: int
    m_out: int
    block_cycles: int
    t_len: int


def derive_dims(layer: LayerSpec) -> DerivedDims:
    """Output geometry, word counts and per-block cycle count for a layer."""
    x_out = (2 * layer.p_x + layer.x_in - layer.k_x) // layer.s_x + 1
    y_out = (2 * layer.p_y + layer.y_in - layer.k_y) // layer.s_y + 1
    m_out = x_out * y_out * layer.c_out
    return DerivedDims(
        x_out=x_out,
        y_out=y_out,
        m_in=layer.x_in * layer.y_in * layer.c_in + layer.residual_carry_words,
        m_out=m_out,
        block_cycles=(layer.c_in // layer.groups) * layer.k_x * layer.k_y,
        t_len=m_out,
    )


@dataclass(frozen=True)
class PointerParams:
    """Average pointer velocities (exact rationals) and start addresses."""

    v_pw: Fraction
    v_pr: Fraction
    p_w0: int
    p_r0: int


def pointer_params(layer: LayerSpec, p_w0: int = 0, p_r0: int = 0) -> PointerParams:
    """Average velocities of both pointers in words per MAC cycle."""
    dd = derive_dims(layer)
    b = dd.block_cycles
    v_pw = Fraction(1, b)
    v_pr = Fraction(layer.s_x * layer.c_in, layer.c_out * b) + Fraction(
        (layer.s_y - 1) * layer.c_in * layer.x_in, dd.x_out * layer.c_out * b
    )
    return PointerParams(v_pw=v_pw, v_pr=v_pr, p_w0=p_w0, p_r0=p_r0)


def _ceildiv(a: int, b: int) -> int:
    return -(-a // b)


def write_pointer_at(t: int, layer: LayerSpec, p_w0: int = 0) -> int:
    """Address of the pending output word at cycle ``t``.

    Constant within a block; steps up by one word each time a full kernel
    accumulation completes.
    """
    if t < 0:
        raise ValueError("cycle index must be >= 0")
    return t // derive_dims(layer).block_cycles + p_w0


def read_pointer_at(t: int, layer: LayerSpec, p_r0: int = 0) -> int:
    """Lowest input address still needed by upcoming windows, at cycle ``t``.

    Built from four integer terms: the x advance of the window (one
    ``s_x * c_in`` step per window), the extra row skip for ``s_y > 1``, a
    constant credit for the top padding rows that hold no data, and a pullback
    for windows that run out over the right edge.  The whole expression is
    clamped at zero: while the window still covers top padding the frontier
    sits at the start of the input.

    Note the pullback term applies from the first cycle after a row starts
    (ceil semantics), so for layers whose window run-out is nonzero the value
    can dip briefly at row boundaries before the x advance catches up; the
    dip only ever makes the frontier more cautious.
    """
    if t < 0:
        raise ValueError("cycle index must be >= 0")
    dd = derive_dims(layer)
    window = layer.c_out * dd.block_cycles
    row = dd.x_out * window
    x_term = (t // window) * (layer.s_x * layer.c_in)
    y_term = (t // row) * ((layer.s_y - 1) * layer.c_in * layer.x_in)
    top_pad = layer.p_y * layer.c_in * layer.x_in
    overshoot = dd.x_out * layer.s_x - layer.x_in
    side = _ceildiv(t, row) * max(0, overshoot * layer.s_x * layer.c_in)
    return max(0, x_term + y_term - top_pad - side) + p_r0


def _block_gap(layer: LayerSpec, dd: DerivedDims, k: int) -> int:
    """write - read gap at the start cycle of block ``k`` (both starting at 0)."""
    t = k * dd.block_cycles
    return k - read_pointer_at(t, layer)


def _max_block_gap(layer: LayerSpec) -> int:
    """Maximum of ``_block_gap`` over all blocks, by candidate scan.

    Within one window the frontier is constant (except for the pullback tick
    right after a row start), so per window only the first and last block can
    be extremal.  Along a row the frontier is affine in the window column
    with a single clamp release, so the extrema sit at the row ends and next
    to the release point.  That reduces the scan to a handful of blocks per
    output row, which keeps multi-megapixel layers instant.
    """
    dd = derive_dims(layer)
    cout = layer.c_out
    adv = layer.s_x * layer.c_in
    row_adv = (layer.s_y - 1) * layer.c_in * layer.x_in
    top_pad = layer.p_y * layer.c_in * layer.x_in
    overshoot = dd.x_out * layer.s_x - layer.x_in
    side = max(0, overshoot * layer.s_x * layer.c_in)

    best = 0
    for y in range(dd.y_out):
        first = y * dd.x_out * cout
        cand = {first, first + cout - 1}
        if dd.x_out > 1:
            cand.add(first + 2 * cout - 1)
            cand.add(first + dd.x_out * cout - 1)
            # window column where the zero clamp releases on this row
            xc = _ceildiv(top_pad + side * (y + 1) - row_adv * y, adv) - y * dd.x_out
            for x in (xc - 1, xc, xc + 1):
                if 1 <= x < dd.x_out:
                    cand.add(first + (x + 1) * cout - 1)
        for k in cand:
            g = _block_gap(layer, dd, k)
            if g > best:
                best = g
    return best


def min_offset(layer: LayerSpec) -> int:
    """Smallest safe distance (words) from output base up to input base.

    Returns the least ``d >= 1`` such that, with the output region starting
    ``d`` words below the input region, the write pointer stays strictly
    below the read frontier at the start of every output block.  Strict
    inequality keeps the two regions apart even when they move in lockstep,
    hence the floor of one word.
    """
    return _max_block_gap(layer) + 1


def min_layer_memory(layer: LayerSpec) -> int:
    """Joint footprint (words) of the layer's input and output regions.

    Equal to ``m_in + min_offset``.  The write pointer finishes strictly
    below the read frontier, and the frontier never points past the input
    end by more than the window's own x extent, so the output region ends at
    or below the input region's end and the pair fits in this many words.
    The single exception is a degenerate layer whose output element count
    exceeds ``m_in + d`` because whole window rows/columns fall in padding
    (possible only when the kernel is smaller than the padding run-out); the
    network planner widens the arena to ``m_out`` for such layers.
    """
    return derive_dims(layer).m_in + min_offset(layer)


def ping_pong_pair_memory(layer: LayerSpec) -> int:
    """Footprint of the same pair under disjoint (ping-pong) buffering."""
    dd = derive_dims(layer)
    return dd.m_in + dd.m_out


def apply_packing(layer: LayerSpec, q: int) -> LayerSpec:
    """Rescale a layer so all addresses count packed words of ``q`` entries.

    ``q`` must divide both channel counts so that packed words never straddle
    pixel boundaries on either side of the layer; channel counts and group
    count shrink accordingly and every address-valued result of this module
    is then expressed in packed words (pointer velocities scale by ``1/q``).
    Residual carry words are rounded up to whole packed words.
    """
    if not isinstance(q, int) or isinstance(q, bool) or q < 1:
        raise PackingError(f"packing factor must be an integer >= 1, got {q!r}")
    if q == 1:
        return layer
    if layer.c_in % q:
        raise PackingError(f"packing factor {q} does not divide c_in={layer.c_in}")
    if layer.c_out % q:
        raise PackingError(f"packing factor {q} does not divide c_out={layer.c_out}")
    groups = layer.groups // math.gcd(layer.groups, q)
    try:
        return replace(
            layer,
            c_in=layer.c_in // q,
            c_out=layer.c_out // q,
            groups=groups,
            residual_carry_words=_ceildiv(layer.residual_carry_words, q),
        )
    except InvalidLayerError as exc:
        raise PackingError(f"packing factor {q} incompatible with layer: {exc}") from exc
