"""Exception types shared across the package."""


class ReadoutSimError(Exception):
    """Base class for all readoutsim errors."""


class ConfigError(ReadoutSimError):
    """Invalid or contradictory scenario configuration."""


class FockCutoffError(ReadoutSimError):
    """Population leaked into the top Fock levels of the truncated space."""


class EigenLabelError(ReadoutSimError):
    """Eigenvector could not be assigned an unambiguous branch label."""


class IntegrationError(ReadoutSimError):
    """The ODE integrator failed to meet its tolerances."""
