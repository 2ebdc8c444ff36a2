"""Exception types shared across the package."""


class MziError(Exception):
    """Base class for all errors raised by this package."""


class IncompatiblePmc(MziError):
    """The requested phase-matching condition needs phase degrees of freedom
    the input state does not have."""


class ZeroDerivative(MziError):
    """The mean signal does not respond to the phase; the error-propagation
    sensitivity is undefined at this working point."""


class ZeroDerivativeEverywhere(ZeroDerivative):
    """The signal derivative vanishes identically for all working points."""


class WrongConvention(MziError):
    """Operation requires the external-phase-reference convention."""


class EmptyInput(MziError):
    """The input carries no photons, so the requested ratio is undefined."""


class DegenerateFisher(MziError):
    """Fisher matrix with vanishing sum-sum element but nonzero cross term."""


class FlatObjective(MziError):
    """The objective is numerically constant; there is nothing to optimize."""


class CutoffExceeded(MziError):
    """The requested state cannot be truncated within the dimension budget."""


class NoConvergence(MziError):
    """Alternating optimization failed to settle within the iteration cap."""
