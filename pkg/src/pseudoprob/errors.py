"""Exception hierarchy. Each error carries a short stable code string."""

from __future__ import annotations


class PseudoprobError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "domain-error"

    def __init__(self, message: str = ""):
        super().__init__(f"{self.code}: {message}" if message else self.code)


class DimensionMismatch(PseudoprobError):
    code = "dim-mismatch"


class NonHermitianInput(PseudoprobError):
    code = "non-hermitian-input"


class NonHermitianTrace(PseudoprobError):
    code = "non-hermitian-trace"


class EigenConvergenceError(PseudoprobError):
    code = "eig-no-convergence"


class NotAProjector(PseudoprobError):
    code = "not-a-projector"


class OrderingExplosion(PseudoprobError):
    code = "ordering-explosion"


class InvalidConvexWeights(PseudoprobError):
    code = "invalid-convex-weights"


class InvalidRecipe(PseudoprobError):
    code = "invalid-recipe"


class UnphysicalBloch(PseudoprobError):
    code = "unphysical-bloch"


class InvalidState(PseudoprobError):
    code = "invalid-state"


class PartitionSearchTooLarge(PseudoprobError):
    code = "partition-search-too-large"
