"""Exception hierarchy shared by the engine and the CLI."""


class GammaLabError(Exception):
    pass


class StructureError(GammaLabError, ValueError):
    """Malformed input: wrong table shapes, out-of-range entries, bad references."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness or {}


class LimitExceeded(GammaLabError):
    """A configured enumeration or size limit would be exceeded."""

    def __init__(self, message, required=None, limit=None):
        super().__init__(message)
        self.required = required
        self.limit = limit


class Obstruction(GammaLabError):
    """A construction is mathematically impossible on this instance.

    Raised e.g. when an induced operation on a quotient is not
    representative-independent. Carries a replayable witness.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness or {}
