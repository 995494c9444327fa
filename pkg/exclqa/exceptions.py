"""
Exception hierarchy for the exclqa app.

Management commands turn any ExclqaError into a CommandError (exit status 1).
"""


class ExclqaError(Exception):
    """Base class for domain errors raised by the exclqa app."""


class DimensionError(ExclqaError, ValueError):
    """A vector or matrix does not have the expected length or shape."""


class HamiltonianValidationError(ExclqaError, ValueError):
    """Invalid coefficients, penalty parameters, schedules or times."""


class DependentBasisError(ExclqaError, ValueError):
    """The basis rows are linearly dependent (singular Gram matrix)."""


class ReductionError(ExclqaError):
    """LLL reduction failed to converge after precision escalation."""


class EnumerationTimeout(ExclqaError):
    """Shortest-vector enumeration ran past its wall-clock budget."""


class SearchSpaceTooLarge(ExclqaError, ValueError):
    """An exhaustive search was requested over too many spins/coefficients."""


class NoExcitedStateError(ExclqaError):
    """The spectrum has a single level, so there is no excited state."""


class BracketExhaustedError(ExclqaError):
    """The alpha binary search never left the trivial state, even at alpha_hi."""


class InstanceMismatchError(ExclqaError, ValueError):
    """Experiments being compared were run on different instance sets."""


class ConfigurationError(ExclqaError, ValueError):
    """An experiment configuration is inconsistent (bad ranks, shots, method)."""


class InstanceFormatError(ExclqaError, ValueError):
    """A stored instance is missing fields or disagrees with its index file."""
