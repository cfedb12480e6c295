"""Exception hierarchy shared by the library and the command line front-end.

Each class carries a short ``category`` string; the CLI prints it on failure
so that scripts can tell a bad config from a solver breakdown.
"""


class SpecSchrodError(Exception):
    category = "error"


class InvalidArgument(SpecSchrodError, ValueError):
    category = "invalid-argument"


class DomainError(SpecSchrodError, ValueError):
    category = "domain-error"


class Unsupported(SpecSchrodError, ValueError):
    category = "unsupported"


class AssemblyError(SpecSchrodError):
    category = "assembly-error"


class ContractViolation(SpecSchrodError, ValueError):
    category = "contract-violation"


class DivisionGuard(SpecSchrodError, ZeroDivisionError):
    category = "division-guard"


class ConvergenceError(SpecSchrodError, ArithmeticError):
    """Raised when the QR/QL iteration stalls on one eigenvalue.

    ``index`` is the position (in the deflation order of the solver) of the
    eigenvalue that failed to converge.
    """

    category = "convergence-error"

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class UsageError(SpecSchrodError):
    category = "usage-error"
