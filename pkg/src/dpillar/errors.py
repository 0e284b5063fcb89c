"""Exception hierarchy shared by every dpillar module."""


class DPillarError(ValueError):
    """Base class for domain errors raised by the library."""

    code = "domain_error"


class InvalidParamsError(DPillarError):
    code = "invalid_params"


class InvalidServerError(DPillarError):
    code = "invalid_server"


class DegenerateMoveError(DPillarError):
    code = "degenerate_move"


class IdenticalEndpointsError(DPillarError):
    code = "identical_endpoints"


class InvalidPlanError(DPillarError):
    code = "invalid_plan"


class BudgetExceededError(DPillarError):
    code = "budget_exceeded"
