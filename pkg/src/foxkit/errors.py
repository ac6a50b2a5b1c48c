"""Exception types shared across foxkit."""


class FoxkitError(Exception):
    """Base class for all foxkit errors."""

    code = "foxkit-error"


class InputError(FoxkitError, ValueError):
    """Malformed input: bad generator index, unparsable text, wrong shape."""

    code = "input-error"


class ClassMismatchError(FoxkitError, ValueError):
    code = "class-mismatch"


class ShapeError(FoxkitError, ValueError):
    code = "shape-mismatch"


class UndecidableError(FoxkitError):
    """Raised when true group equality is requested in Formal mode."""

    code = "undecidable-in-formal-mode"

    def __init__(self, msg="undecidable-in-formal-mode: the word problem is not solved for this class"):
        super().__init__(msg)


class NotNormalizedError(FoxkitError):
    code = "presentation-not-normalized"


class NotAsphericalError(FoxkitError):
    code = "presentation-not-aspherical"

    def __init__(self, msg="presentation not asserted aspherical"):
        super().__init__(msg)


class NotHermitianError(FoxkitError, ValueError):
    code = "not-hermitean"


class UnsupportedGroupError(FoxkitError):
    """The requested computation needs a hypothesis the group class lacks."""

    code = "unsupported-group"
