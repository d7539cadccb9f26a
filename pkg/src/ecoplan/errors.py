"""Exception hierarchy shared by every ecoplan module.

Each class carries the process exit code the CLI maps it to.
"""


class EcoplanError(Exception):
    exit_code = 2


class CapacityError(EcoplanError):
    """Problem dimensions exceed the exhaustive-enumeration limit."""


class StateLookupError(EcoplanError, LookupError):
    """A code or index does not name a feasible state."""


class UnsupportedError(EcoplanError):
    pass


class IngestionError(EcoplanError):
    """Malformed or inconsistent observation data."""


class EstimationError(EcoplanError):
    def __init__(self, message, stage=None, state_index=None):
        super().__init__(message)
        self.stage = stage
        self.state_index = state_index


class ModelError(EcoplanError):
    """Transition model does not cover the horizon or is not stochastic."""


class ContractError(EcoplanError, ValueError):
    pass


class ConfigError(EcoplanError):
    pass


class DomainError(EcoplanError, ValueError):
    """Game parameters outside u > 1, v > 1."""


class IntegrationError(EcoplanError, ArithmeticError):
    exit_code = 3
