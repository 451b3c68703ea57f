"""Exception hierarchy shared across the package."""


class TranscheckError(Exception):
    """Base class for all transcheck errors."""


class FormatError(TranscheckError):
    """Malformed transcript text, or stream metadata that does not match the stream."""


class KindError(TranscheckError):
    """Operation kinds do not match what the target language allows."""


class ParamError(TranscheckError):
    """Invalid or mismatched parameters (fingerprint params, generator requests)."""


class IndexBoundError(TranscheckError):
    """A fingerprint cell index fell outside the declared bound.

    This signals a mis-sized cell-index map, not an invalid transcript.
    """


class CapacityError(TranscheckError):
    """The epoch index exceeded the declared capacity of a checker pipeline."""
