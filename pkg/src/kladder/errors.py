import os


class KLadderError(Exception):
    """Base class for all errors raised by the package."""


class InvalidInput(KLadderError, ValueError):
    pass


class SizeLimitError(KLadderError, ValueError):
    pass


def size_cap(default):
    """Return the vertex cap, honouring the KLADDER_MAX_N override."""
    raw = os.environ.get("KLADDER_MAX_N")
    if raw:
        try:
            return max(default, int(raw))
        except ValueError:
            raise InvalidInput(f"KLADDER_MAX_N must be an integer, got {raw!r}")
    return default


def check_size(n, default, what):
    cap = size_cap(default)
    if n > cap:
        raise SizeLimitError(f"{what}: {n} vertices exceeds the limit of {cap}")
