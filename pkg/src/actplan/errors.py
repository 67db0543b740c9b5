"""Exception types shared by the planner, oracle and I/O layers."""


class ActplanError(Exception):
    """Base class for all errors raised by this package."""


class InvalidLayerError(ActplanError):
    """A layer description violates a structural invariant."""


class ChainMismatchError(ActplanError):
    """Consecutive layers in a network do not chain (out dims != next in dims)."""


class PackingError(ActplanError):
    """A packing factor is incompatible with a layer's channel counts."""


class SizeLimitError(ActplanError):
    """A layer is too large for brute-force verification; use the closed form."""


class DimensionMismatchError(ActplanError):
    """An input tensor or weight set does not match the layer geometry."""


class NetworkFileError(ActplanError):
    """A network file failed to parse or validate.

    ``location`` is a human-readable position such as ``"line 7"`` or
    ``"layers[2].c_in"`` when one is known.
    """

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class ClobberError(ActplanError):
    """Checked in-arena execution wrote over a word that was still live.

    Carries the layer index, the output block whose write collided, and the
    absolute arena address, so the first violating write can be pinpointed.
    """

    def __init__(self, layer_index, block, address):
        self.layer_index = layer_index
        self.block = block
        self.address = address
        super().__init__(
            f"live data clobbered: layer {layer_index + 1}, output block {block}, "
            f"arena address {address}"
        )
