"""Network description files.

A network file is a YAML (or JSON) document:

    name: my-net
    packing: 1            # optional, data entries per memory word
    layers:
      - {x_in: 8, y_in: 8, c_in: 3, k_x: 3, k_y: 3, s_x: 1, s_y: 1,
         p_x: 1, p_y: 1, c_out: 16}
      - {k_x: 3, k_y: 3, s_x: 1, s_y: 1, p_x: 1, p_y: 1, c_out: 16}

Only the first layer states ``x_in``/``y_in``/``c_in``; later layers inherit
them from the previous layer's output and may restate them only if they
agree.  Optional per-layer keys: ``groups``, ``residual_carry_words``.
"""

from __future__ import annotations

import json
from pathlib import Path

import yaml

from .errors import ChainMismatchError, InvalidLayerError, NetworkFileError
from .model import LayerSpec, derive_dims
from .planner import NetworkSpec

__all__ = ["parse_network_file", "parse_network_text", "bundled_network_path", "bundled_networks"]

_REQUIRED = ("k_x", "k_y", "s_x", "s_y", "p_x", "p_y", "c_out")
_FIRST_ONLY = ("x_in", "y_in", "c_in")
_OPTIONAL = ("groups", "residual_carry_words")
_ALLOWED = set(_REQUIRED) | set(_FIRST_ONLY) | set(_OPTIONAL)


def parse_network_file(path) -> NetworkSpec:
    """Load and validate a network file; raises located errors on failure."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise NetworkFileError(str(exc), location=str(path)) from exc
    return parse_network_text(text, source=str(path))


def parse_network_text(text: str, source: str = "<string>") -> NetworkSpec:
    """Parse network file content (YAML; JSON is a YAML subset and accepted)."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise NetworkFileError(exc.msg, location=f"{source}: line {exc.lineno}") from exc
    else:
        try:
            doc = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            loc = f"{source}: line {mark.line + 1}" if mark else source
            raise NetworkFileError(str(getattr(exc, "problem", exc)), location=loc) from exc
    return _build(doc, source)


def _build(doc, source: str) -> NetworkSpec:
    if not isinstance(doc, dict):
        raise NetworkFileError("top level must be a mapping", location=source)
    unknown = set(doc) - {"name", "packing", "layers"}
    if unknown:
        raise NetworkFileError(f"unknown top-level keys {sorted(unknown)}", location=source)
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        raise NetworkFileError("missing or empty 'name'", location=source)
    packing = doc.get("packing", 1)
    if not isinstance(packing, int) or isinstance(packing, bool) or packing < 1:
        raise NetworkFileError(f"'packing' must be an integer >= 1, got {packing!r}",
                               location=f"{source}: packing")
    raw_layers = doc.get("layers")
    if not isinstance(raw_layers, list) or not raw_layers:
        raise NetworkFileError("'layers' must be a non-empty list", location=source)

    layers = []
    prev_out = None  # (x, y, c) inherited by the next layer
    for i, entry in enumerate(raw_layers):
        where = f"{source}: layers[{i}]"
        if not isinstance(entry, dict):
            raise NetworkFileError("layer entry must be a mapping", location=where)
        bad = set(entry) - _ALLOWED
        if bad:
            raise NetworkFileError(f"unknown keys {sorted(bad)}", location=where)
        fields = {}
        for key in _REQUIRED:
            if key not in entry:
                raise NetworkFileError(f"missing required key '{key}'", location=where)
            fields[key] = _int_field(entry, key, where)
        for key in _OPTIONAL:
            if key in entry:
                fields[key] = _int_field(entry, key, where)
        for key in _FIRST_ONLY:
            if key in entry:
                fields[key] = _int_field(entry, key, where)
        if i == 0:
            missing = [k for k in _FIRST_ONLY if k not in fields]
            if missing:
                raise NetworkFileError(f"first layer must state {missing}", location=where)
        else:
            for key, inherited in zip(_FIRST_ONLY, prev_out):
                stated = fields.get(key)
                if stated is None:
                    fields[key] = inherited
                elif stated != inherited:
                    raise ChainMismatchError(
                        f"layers {i} -> {i + 1}: {key}={stated} does not match "
                        f"previous layer's output ({inherited})"
                    )
        try:
            layer = LayerSpec(**fields)
        except InvalidLayerError as exc:
            raise NetworkFileError(str(exc), location=where) from exc
        layers.append(layer)
        dd = derive_dims(layer)
        prev_out = (dd.x_out, dd.y_out, layer.c_out)

    return NetworkSpec(name=name, layers=tuple(layers), packing=packing)


def _int_field(entry, key, where):
    v = entry[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise NetworkFileError(f"'{key}' must be an integer, got {v!r}", location=where)
    return v


def bundled_network_path(name: str) -> Path:
    """Path of a network file shipped with the package (e.g. ``dmcnn_vd``)."""
    p = Path(__file__).parent / "networks" / f"{name}.net"
    if not p.exists():
        raise NetworkFileError(f"no bundled network named {name!r}; "
                               f"available: {[q.stem for q in sorted(p.parent.glob('*.net'))]}")
    return p


def bundled_networks() -> list:
    """Names of all bundled network files."""
    return sorted(p.stem for p in (Path(__file__).parent / "networks").glob("*.net"))
