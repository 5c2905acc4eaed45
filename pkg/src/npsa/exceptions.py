"""Typed errors raised by the npsa package.

Every error derives from :class:`NpsaError` so callers can catch the whole
family.  Validation-style errors additionally derive from ``ValueError`` and
numerical failures from ``RuntimeError``, so generic handlers keep working.
"""


class NpsaError(Exception):
    """Base class for all errors raised by this package."""


# --- validation -----------------------------------------------------------

class ShapeMismatch(NpsaError, ValueError):
    """Operand shapes are incompatible."""


class NotSymmetric(NpsaError, ValueError):
    """A matrix expected to be symmetric is not, beyond tolerance."""


class NotUnit(NpsaError, ValueError):
    """A vector expected to have unit Euclidean norm does not."""


class RankDeficient(NpsaError, ValueError):
    """A matrix expected to have full column rank is (numerically) rank
    deficient; its Gram matrix cannot be inverted reliably."""


class DegenerateData(NpsaError, ValueError):
    """Input data carries no usable variance (e.g. constant pixels)."""


class EmptyData(NpsaError, ValueError):
    """An operation received zero samples."""


class DegenerateRowOrColumn(NpsaError, ValueError):
    """A matrix row or column is entirely zero where that is not allowed."""


class ZeroVector(NpsaError, ValueError):
    """A vector expected to be nonzero is zero."""


class UnsupportedDimension(NpsaError, ValueError):
    """The requested dimensionality is outside the supported range."""


class DimensionTooLarge(NpsaError, ValueError):
    """The operation would materialize an object above its configured cap."""


# --- numerical failures ---------------------------------------------------

class NoConvergence(NpsaError, RuntimeError):
    """An iterative solver exhausted its budget without converging."""


class ZeroContraction(NpsaError, RuntimeError):
    """The tensor contraction collapsed to the zero vector, so the
    fixed-point step is undefined (degenerate tensor or direction)."""


# --- input / output -------------------------------------------------------

class MalformedHeader(NpsaError, ValueError):
    """A file header is missing, truncated or of an unsupported flavor."""


class TruncatedData(NpsaError, ValueError):
    """A file ended before the payload announced by its header."""


class MissingKey(NpsaError, ValueError):
    """A required header key is absent."""


class UnsupportedDataType(NpsaError, ValueError):
    """The file declares a sample type this reader does not handle."""


class SizeMismatch(NpsaError, ValueError):
    """The payload size disagrees with the dimensions in the header."""


class IoError(NpsaError, OSError):
    """Reading or writing an artifact failed at the OS level."""
