"""actplan: arena planning for layer-wise CNN inference with overlapping buffers.

Compute the smallest on-chip activation buffer that can host every
input/output pair of a convolution chain by letting consecutive layers'
regions overlap, verify the closed-form result against a brute-force
lifetime oracle, and prove plans by bit-exact execution inside a single
flat arena.
"""

from .errors import (
    ActplanError,
    ChainMismatchError,
    ClobberError,
    DimensionMismatchError,
    InvalidLayerError,
    NetworkFileError,
    PackingError,
    SizeLimitError,
)
from .model import (
    DerivedDims,
    LayerSpec,
    PointerParams,
    apply_packing,
    derive_dims,
    min_layer_memory,
    min_offset,
    ping_pong_pair_memory,
    pointer_params,
    read_pointer_at,
    write_pointer_at,
)
from .netfile import bundled_network_path, bundled_networks, parse_network_file, parse_network_text
from .oracle import (
    AccessTrace,
    OracleReport,
    execute_network_in_arena,
    execute_network_reference,
    min_safe_offset_bruteforce,
    seeded_test_vectors,
    trace_layer,
    verify_layer,
)
from .planner import (
    LayerPlan,
    MemoryPlan,
    NetworkSpec,
    count_parameters,
    packed_layers,
    pingpong_network,
    plan_network,
    plan_with_offsets,
    savings_report,
)
from .report import (
    humanize_words,
    plan_from_dict,
    plan_from_json,
    plan_to_dict,
    plan_to_json,
    render_memory_map,
    render_plan_text,
)
from .sweep import (
    ExecSummary,
    SweepBounds,
    SweepSummary,
    random_network,
    run_exec_sweep,
    run_layer_sweep,
    sweep_layer_configs,
)

__version__ = "0.1.0"

__all__ = [
    "ActplanError", "ChainMismatchError", "ClobberError", "DimensionMismatchError",
    "InvalidLayerError", "NetworkFileError", "PackingError", "SizeLimitError",
    "LayerSpec", "DerivedDims", "PointerParams",
    "derive_dims", "pointer_params", "write_pointer_at", "read_pointer_at",
    "min_offset", "min_layer_memory", "ping_pong_pair_memory", "apply_packing",
    "AccessTrace", "OracleReport", "trace_layer", "min_safe_offset_bruteforce",
    "verify_layer", "execute_network_reference", "execute_network_in_arena",
    "seeded_test_vectors",
    "NetworkSpec", "LayerPlan", "MemoryPlan", "packed_layers", "plan_network",
    "plan_with_offsets", "pingpong_network", "count_parameters", "savings_report",
    "parse_network_file", "parse_network_text", "bundled_network_path", "bundled_networks",
    "plan_to_dict", "plan_from_dict", "plan_to_json", "plan_from_json",
    "render_plan_text", "render_memory_map", "humanize_words",
    "SweepBounds", "SweepSummary", "ExecSummary",
    "sweep_layer_configs", "run_layer_sweep", "random_network", "run_exec_sweep",
    "__version__",
]
