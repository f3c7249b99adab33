"""Exception types shared across the package.

Class names are the error vocabulary of the public API; everything
derives from OtfError so callers can catch broadly.
"""


class OtfError(Exception):
    """Base class for all errors raised by this package."""


class MissingFile(OtfError):
    """A manifest, profile file, or ledger path does not exist."""


class FormatError(OtfError):
    """A binary file does not conform to its wire format."""


class BadMagic(FormatError):
    """Leading magic bytes are wrong for the expected file type."""


class VersionUnsupported(FormatError):
    """File carries a format version this build cannot read."""


class Truncated(FormatError):
    """File is shorter than its header or declared payload requires."""


class LengthMismatch(OtfError):
    """Profile lengths within one store disagree."""


class NonFiniteSample(OtfError):
    """A profile contains NaN or infinite samples."""


class EmptyStore(OtfError):
    """A seed store must contain at least one seed and one noise profile."""


class IndexOutOfRange(OtfError):
    """Generation parameters reference a seed or noise index the store lacks."""


class ReplayExhausted(OtfError):
    """Replay policy ran out of recorded parameters."""


class UnknownBatch(OtfError):
    """Ledger holds no records for the requested batch index."""


class OrderViolation(OtfError):
    """Ledger records must be appended in strictly increasing key order."""


class DigestMismatch(OtfError):
    """Ledger was produced against a different seed store manifest."""


class NonIntegralBatching(OtfError):
    """Dataset size must be an integer multiple of the batch size."""


class NonDivisibleLength(OtfError):
    """Profile length is not divisible into the requested day/hour windows."""


class IoFailure(OtfError):
    """An underlying filesystem operation failed."""


class DiskFull(IoFailure):
    """Write failed because the device is out of space."""
