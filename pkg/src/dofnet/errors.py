"""Exception hierarchy shared by all modules.

Each class carries a short ``check`` name so that the command line front end
can report which stage failed in a structured way.
"""


class DofError(Exception):
    """Base class for every error raised by this package."""

    check = "error"


class SpecError(DofError, ValueError):
    """A demand specification (or a point / flag) failed validation."""

    check = "validation"


class OutOfRegionError(DofError):
    """A DoF point lies outside the region.

    ``violations`` lists the supports of violated inequalities and
    ``budget_violations`` the receivers whose column budget
    ``sum(dbar[M_j]) + dbar[delta_j] <= kappa*M`` fails.
    """

    check = "region_membership"

    def __init__(self, message, violations=(), budget_violations=()):
        super().__init__(message)
        self.violations = list(violations)
        self.budget_violations = list(budget_violations)


class EnumerationLimitError(DofError):
    check = "enumeration_limit"


class TauCapError(DofError):
    """Time-expansion length of a plan exceeds the configured cap."""

    check = "tau_cap"

    def __init__(self, tau, cap):
        super().__init__(f"time expansion tau={tau} exceeds cap {cap}")
        self.tau = tau
        self.cap = cap


class SingularChannelError(DofError):
    check = "singular_channel"


class PreconditionError(DofError):
    """Matrix shape precondition of a numeric check is not met."""

    check = "precondition"
