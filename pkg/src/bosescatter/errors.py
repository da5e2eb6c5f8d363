"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested function."""


class ConvergenceError(RuntimeError):
    """A numerical procedure did not reach its tolerance within budget.

    ``term`` names the quantity that failed (e.g. ``"thermal_thermal"``),
    so callers such as the command line front end can report it.
    """

    def __init__(self, message, term=None):
        super().__init__(message)
        self.term = term
