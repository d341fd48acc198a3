"""Exception types shared across the package."""


class FuzzyTreeError(Exception):
    """Base class for all package errors."""


class LatticeError(FuzzyTreeError):
    pass


class MissingBoundError(LatticeError):
    """The order has no unique least or greatest element."""


class NotALatticeError(LatticeError):
    """Some pair of elements lacks a greatest lower or least upper bound."""


class CycleInOrderError(LatticeError):
    """The declared order relation is not antisymmetric."""


class EmptySequenceError(LatticeError):
    """meet_all/join_all called on an empty sequence."""


class ForeignElementError(LatticeError):
    """An element id does not belong to the lattice at hand."""


class NotMeetMorphismError(LatticeError):
    """A declared lattice map fails to preserve binary meets."""


class NonDistributiveLatticeError(LatticeError):
    """Operation requires a distributive lattice."""


class NotAChainError(LatticeError):
    """Operation requires a totally ordered lattice."""


class TermError(FuzzyTreeError):
    pass


class ArityMismatchError(TermError):
    """A node has the wrong number of children for its symbol."""


class NotAlphabeticError(TermError):
    """Tree homomorphism is not alphabetic where required."""


class NotInjectiveError(TermError):
    """Tree homomorphism is not injective where required."""


class AutomatonError(FuzzyTreeError):
    pass


class AlphabetMismatchError(AutomatonError):
    """Two recognizers do not share the required alphabet."""


class LatticeMismatchError(AutomatonError):
    """Two recognizers do not share the required lattice."""


class ZeroNotIrreducibleError(AutomatonError):
    """Support construction needs two nonzero elements never to meet at 0."""


class NotNormalizedError(AutomatonError):
    """Operation requires a normalized recognizer."""


class TreeTooShortError(AutomatonError):
    """Pumping needs a tree at least as tall as the recognizer's bound."""


class BudgetExceededError(FuzzyTreeError):
    """An enumeration grew past its configured budget."""


class ParseError(FuzzyTreeError):
    """Malformed input text; carries the offending position."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(FuzzyTreeError):
    """A loaded object violates one of its invariants."""


class UnknownCommandError(FuzzyTreeError):
    pass
