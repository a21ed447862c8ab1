"""Exception types shared across the package."""


class TransopError(Exception):
    """Base class for all package errors."""


class NotAGroup(TransopError):
    def __init__(self, reason, witness=None):
        self.reason = reason
        self.witness = witness
        msg = f"not a group: {reason}"
        if witness is not None:
            msg += f" (witness {witness})"
        super().__init__(msg)


class UnsupportedSpec(TransopError):
    pass


class NotASubchain(TransopError):
    """Raised when an operation needs K <= H but the containment fails."""


class BadEdge(TransopError):
    """A seed edge (K, H) does not refine inclusion."""


class BoundExceeded(TransopError):
    """An enumeration or carrier size exceeds its configured cap."""


class LatticeMismatch(TransopError):
    """Two transfer systems live on different subgroup lattices."""


class EnumerationTooLarge(TransopError):
    pass


class NotClosed(TransopError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"composition escapes the disjoint suboperad: {witness}")


class PairingInvalid(TransopError):
    pass


class NotSigmaFree(TransopError):
    """The symmetric-group action on an operad level has a nontrivial fixed point."""


class CarrierTooSmall(TransopError):
    pass


class NotFixed(TransopError):
    """An input claimed to be a graph-subgroup fixed point is not."""


class AxiomNotCompatible(TransopError):
    """An externally supplied realizability axiom fails the compatibility check."""
