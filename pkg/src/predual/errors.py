"""Exception hierarchy shared by every module of the toolkit."""

from __future__ import annotations


class PredualError(Exception):
    """Base class for all toolkit errors."""


# -- structures ---------------------------------------------------------------


class StructureError(PredualError, ValueError):
    """A structure description failed validation."""

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = tuple(witness)


class NotPartialOrder(StructureError):
    pass


class NoJoin(StructureError):
    pass


class NoBottom(StructureError):
    pass


class JoinMismatch(StructureError):
    pass


class CarrierTooLarge(StructureError):
    pass


class NotDirected(PredualError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = tuple(witness)


# -- spectrum -----------------------------------------------------------------


class BadInput(PredualError, ValueError):
    pass


class NoExtension(PredualError):
    """The greedy maximal ideal did not leave a round prime filter behind."""

    def __init__(self, message: str, ideal=None):
        super().__init__(message)
        self.ideal = ideal


class HypothesesFail(PredualError):
    def __init__(self, message: str, failing: tuple[str, ...] = ()):
        super().__init__(message)
        self.failing = tuple(failing)


class NotPrec(PredualError, ValueError):
    pass


class HypothesisWarning(UserWarning):
    """Issued when an operation runs although its hypotheses fail."""


# -- topology -----------------------------------------------------------------


class NotATopology(PredualError, ValueError):
    pass


class NotABasis(NotATopology):
    pass


class NotOpen(PredualError, ValueError):
    pass


class NotT0(PredualError):
    pass


class NotSober(PredualError):
    pass


# -- morphisms ----------------------------------------------------------------


class DimensionMismatch(PredualError, ValueError):
    pass


class NotAMorphism(PredualError):
    def __init__(self, message: str, axiom: str = "", witness: tuple = ()):
        super().__init__(message)
        self.axiom = axiom
        self.witness = tuple(witness)


class NotContinuous(PredualError):
    pass


class ImageNotPoint(AssertionError):
    """An image filter P^⊏ was not a spectrum point of the target."""


# -- search -------------------------------------------------------------------


class UnknownProperty(PredualError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""
