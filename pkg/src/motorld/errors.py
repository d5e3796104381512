"""Exception hierarchy.

Input/specification problems and numerical failures are kept apart so the CLI
can map them to distinct exit codes.
"""


class MotorldError(Exception):
    """Base class for all package errors."""


class SpecificationError(MotorldError):
    """Bad user input: malformed files, invalid graphs or laws, bad arguments."""


class GraphSpecError(SpecificationError):
    """Graph description cannot be used (duplicate edges, unknown vertices, ...)."""


class LawSpecError(SpecificationError):
    """Cycle-law description cannot be used."""


class NotMinimal(SpecificationError):
    """Operation requires a minimal cell graph."""


class AsymmetricSupport(SpecificationError):
    """Operation requires edge support closed under orientation reversal."""


class AsymmetricGrid(SpecificationError):
    """Operation requires a grid symmetric about zero."""


class DomainError(SpecificationError):
    """Argument outside the domain where the quantity is defined or guaranteed."""


class OutOfHorizon(SpecificationError):
    """Query time beyond the simulated horizon."""


class InsufficientSamples(SpecificationError):
    """Not enough data to run the requested statistical procedure."""


class NoOverlap(SpecificationError):
    """Curves share no abscissa range."""


class NumericalError(MotorldError):
    """Numerical procedure failed; results would be unreliable."""


class SingularSystem(NumericalError):
    """Linear system singular or too ill-conditioned to trust."""


class BracketFailure(NumericalError):
    """Root bracketing failed."""


class NonConvergence(NumericalError):
    """Iteration did not converge within its budget."""


class RunawaySimulation(NumericalError):
    """Simulation exceeded its step cap."""


class InternalInconsistency(NumericalError):
    """An internal invariant was violated; indicates a bug or broken input."""
