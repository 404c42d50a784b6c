"""
Exception hierarchy for the decoherence app.

Two families matter to callers: ``ParameterError`` means the input was bad
(exit code 2 on the command line), ``SolverError`` means a numerical method
could not deliver (exit code 3, or a failed row inside a sweep).
"""


class DecoherenceError(Exception):
    """Base class for every error raised by the decoherence app"""


class ParameterError(DecoherenceError, ValueError):
    """Invalid or inconsistent user input"""


class MissingParam(ParameterError):
    """A required physical parameter was not supplied"""


class InsideHorizon(ParameterError):
    """A radius lies at or inside the Schwarzschild radius"""


class DomainError(ParameterError):
    """Argument outside the domain of a special function"""


class DivergentOrder(ParameterError):
    """The requested ordering parameter makes the characteristic function non-integrable"""


class SolverError(DecoherenceError, ArithmeticError):
    """A numerical method failed to meet its contract"""


class ConvergenceError(SolverError):
    """Tolerance not reached within the evaluation budget"""


class NoSignChange(SolverError):
    """The root bracket does not enclose a sign change"""


class NoCrossing(SolverError):
    """An indicator never crosses its threshold inside the search range"""


class CutoffError(SolverError):
    """The truncated Fock basis is too small for the evolved state"""
