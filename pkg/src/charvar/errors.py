"""Exception types raised by charvar."""


class CharvarError(ValueError):
    """Base class for every error raised by this package."""


class NonHermitianInput(CharvarError):
    pass


class ConvergenceFailure(CharvarError):
    pass


class NotPositiveDefinite(CharvarError):
    pass


class SingularInput(CharvarError):
    pass


class SizeMismatch(CharvarError):
    pass


class NotInGroup(CharvarError):
    """A matrix failed the membership test of its descriptor."""


class BadDescriptor(CharvarError):
    pass


class ParameterOutOfRange(CharvarError):
    pass


class NotInCompact(CharvarError):
    pass


class DirectionNotInP(CharvarError):
    """A conjugation direction is not in the Hermitian part of the Lie algebra."""


class IndexOutOfRange(CharvarError):
    pass


class WrongSignature(CharvarError):
    pass


class WordSyntaxError(CharvarError):
    pass


class ParseError(CharvarError):
    pass
