"""Error types shared across the toolkit.

Every mathematically meaningful failure carries a machine-checkable
witness (an index, an edge, a polynomial) so that reports can show why
a check failed, not merely that it did.
"""


class CartanCoverError(Exception):
    """Base class for all toolkit errors."""


class ParseError(CartanCoverError):
    """An instance file is malformed; the message names the offending field."""


class DimensionMismatch(CartanCoverError):
    """Operands live in different ambient dimensions."""


class DegreeVsCharacteristic(CartanCoverError):
    """Squarefreeness test refused: polynomial degree >= field characteristic."""


class SingularMatrix(CartanCoverError):
    """A matrix that must be invertible is not."""


class SingularTransition(CartanCoverError):
    """A bundle transition matrix is singular."""

    def __init__(self, edge, message=None):
        self.edge = edge
        super().__init__(message or f"transition on edge {edge} is singular")


class DisconnectedBase(CartanCoverError):
    """The base graph is not connected."""


class NonSplitError(CartanCoverError):
    """A polynomial does not factor into linear factors over the field.

    ``witness`` is a monic nonconstant factor without roots in the field.
    """

    def __init__(self, witness, message=None):
        self.witness = witness
        super().__init__(message or f"polynomial does not split: {witness}")


class NotSplitCartan(CartanCoverError):
    """Operation requires a split Cartan subspace and the input is not one."""

    def __init__(self, verdict, message=None):
        self.verdict = verdict
        super().__init__(message or f"subspace is not a split Cartan subalgebra: {verdict}")


class NotCartanAtVertex(CartanCoverError):
    """A fiber of a claimed Cartan bundle fails the Cartan test."""

    def __init__(self, vertex, verdict):
        self.vertex = vertex
        self.verdict = verdict
        super().__init__(f"fiber at vertex {vertex} is not a Cartan subalgebra: {verdict}")


class NonSplitAtVertex(CartanCoverError):
    """A fiber is Cartan only after a field extension; carries the witness polynomial."""

    def __init__(self, vertex, witness):
        self.vertex = vertex
        self.witness = witness
        super().__init__(f"fiber at vertex {vertex} is Cartan but not split (witness {witness})")


class IncompatibleEdge(CartanCoverError):
    """Conjugation along an edge does not carry one fiber subspace to the next."""

    def __init__(self, edge, message=None):
        self.edge = edge
        super().__init__(message or f"fiber subspaces incompatible along edge {edge}")


class LineNotMapped(CartanCoverError):
    """A transition fails to map an eigenline onto an eigenline (invalid input)."""


class NotABlockSystem(CartanCoverError):
    """A partition is not preserved by the monodromy generators."""


class DegreeTooLarge(CartanCoverError):
    """Enumeration refused beyond the supported degree bound."""


class NonIntegralGenus(CartanCoverError):
    """Ramification data violates the parity constraint."""


class NegativeGenus(CartanCoverError):
    """Ramification data forces a negative genus."""
