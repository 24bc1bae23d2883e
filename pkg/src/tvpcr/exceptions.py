"""Exception hierarchy shared across the package."""


class TvpcrError(Exception):
    """Base class for all package errors."""


class ValidationError(TvpcrError, ValueError):
    """Bad user input: malformed files, invalid parameters, wrong domains."""


class SolverAssertionError(TvpcrError, AssertionError):
    """An internal solver invariant failed; indicates a bug, not bad input."""


class LatticeAssumptionError(SolverAssertionError):
    """The union of minimizers of a ratio problem failed to be a minimizer.

    The enumeration oracle checks this property at runtime instead of
    assuming it; a trip means the maximal-minimizer contract cannot be met
    for the given instance.
    """


class OracleConvergenceError(TvpcrError, RuntimeError):
    """The floating-point verifier could not certify its tolerance."""
