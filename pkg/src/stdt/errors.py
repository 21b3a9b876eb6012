"""Exception hierarchy shared by every module."""


class TreeError(Exception):
    """Base class for all errors raised by stdt."""


class InputError(TreeError):
    """Malformed user input (exit code 2 at the CLI)."""


class UnbalancedInput(InputError):
    pass


class MultipleRoots(InputError):
    pass


class InfeasibleProfile(InputError):
    pass


class NoSuchNode(TreeError):
    """The query has no answer (parent of the root, child index too big, ...)."""


class TreeTooSmall(TreeError):
    pass


class OversizedChild(TreeError):
    pass


class DegreeOutsideSigma(TreeError):
    pass


class TooLarge(TreeError):
    """Exhaustive enumeration requested outside its budget."""


class ShapeMismatch(TreeError):
    pass


class CannotFit(TreeError):
    pass


class CorruptPayload(TreeError):
    pass


class DepthOutOfRange(TreeError):
    pass


class OutOfRange(TreeError):
    pass


class FormatError(InputError):
    """Container file is not a valid STDT image."""
