"""Exception types shared across the package.

Every precondition failure maps to a distinct class so callers (and the CLI
exit-code logic) can tell input errors apart from solver bugs.
"""


class MeasureFlowError(Exception):
    """Base class for all package errors."""


class BoundOrderViolation(MeasureFlowError):
    """Lower bound exceeds upper bound on some atom pair."""


class NegativeCapacity(MeasureFlowError):
    """A capacity measure has a negative weight."""


class NegativeMeasure(MeasureFlowError):
    """A measure required to be nonnegative has a negative weight."""


class PartitionInvalid(MeasureFlowError):
    """Ordered partition does not partition the atom set."""


class NonIntegerCost(MeasureFlowError):
    """Value table must be integer-valued for integralization."""


class SameEndpoints(MeasureFlowError):
    """Source and sink coincide."""


class MassMismatch(MeasureFlowError):
    """Total masses that must agree do not."""


class NotProbability(MeasureFlowError):
    """A measure required to have total mass 1 does not."""


class NotAcyclic(MeasureFlowError):
    """Support digraph contains a directed cycle."""


class NotPseudometric(MeasureFlowError):
    """Table is not usable as a pseudometric."""


class NotSymmetric(MeasureFlowError):
    """A measure required to be symmetric is not."""


class NegativeEpsilon(MeasureFlowError):
    """Overload budget must be nonnegative."""


class NotErgodicCirculation(MeasureFlowError):
    """Edge measure is not a nonnegative mass-1 circulation."""


class Decomposable(MeasureFlowError):
    """Markov space is decomposable where indecomposability is required."""


class EmptyTarget(MeasureFlowError):
    """Target set has zero stationary mass."""


class DensityOutOfRange(MeasureFlowError):
    """Graphon density value outside [0, 1]."""


class TooLarge(MeasureFlowError):
    """Instance exceeds the dense-oracle size guard."""


class ExtractFailure(MeasureFlowError):
    """Load tensor violates the marginal identity required for extraction."""


class ParseError(MeasureFlowError):
    """Instance text is malformed; carries line and column."""

    def __init__(self, message, line, col):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class VerificationFailure(MeasureFlowError):
    """A solver output failed independent re-verification."""
