"""Exception hierarchy shared by the library and the CLI."""


class NucleoError(Exception):
    exit_code = 3


class ValidationError(NucleoError, ValueError):
    """Malformed user input (game files, payoff vectors, arguments)."""

    exit_code = 1


class NoAgentsError(ValidationError):
    pass


class NegativeWeightError(ValidationError):
    pass


class QuotaTooSmallError(ValidationError):
    pass


class GrandCoalitionLosesError(ValidationError):
    pass


class DimensionMismatchError(ValidationError):
    pass


class GuardExceededError(NucleoError):
    """Refusal to run an exponential routine above its size guard."""

    exit_code = 2


class ContractError(NucleoError, RuntimeError):
    """An internal precondition or postcondition failed; indicates a bug."""

    exit_code = 3


class NotFoundError(ContractError, LookupError):
    pass


class InfeasibleError(ContractError):
    pass


class UnboundedError(ContractError):
    pass
