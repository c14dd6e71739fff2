"""Exception types raised across the package."""


class IQDynError(ValueError):
    """Base class for all domain errors."""


class ForbiddenState(IQDynError):
    """A populated basis state has vanishing norm for the given statistics."""

    def __init__(self, label, norm=None, context=None):
        self.label = label
        self.norm = norm
        msg = f"basis state |{label}> is forbidden by particle statistics"
        if norm is not None:
            msg += f" (norm {norm:.3e})"
        if context:
            msg += f" {context}"
        super().__init__(msg)


class ZeroProbability(IQDynError):
    """Post-selection onto one particle in L and one in R is impossible."""


class NegativeRate(IQDynError):
    pass


class StepTooLarge(IQDynError):
    """RK4 step exceeds the stability bound of the generator."""


class Undefined(IQDynError):
    """Indistinguishability degree is undefined (both joint products vanish)."""


class UnknownFigure(IQDynError):
    pass
