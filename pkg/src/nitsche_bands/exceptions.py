class NitscheBandsError(Exception):
    """Base class for all package errors."""


class ConfigurationError(NitscheBandsError, ValueError):
    pass


class DegenerateLatticeError(ConfigurationError):
    pass


class UnsupportedLatticeError(ConfigurationError):
    pass


class DegenerateInterfaceError(NitscheBandsError):
    """The interface coincides with a whole element."""


class InterfaceResolutionError(NitscheBandsError):
    """An element cut could not be resolved (no sign change, bisection failure)."""


class NumericalError(NitscheBandsError):
    pass


class IllConditionedMassError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals
