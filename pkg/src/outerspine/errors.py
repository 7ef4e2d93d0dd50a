"""Exception hierarchy.

Input errors derive from :class:`OuterSpineError`.  Errors that can only be
raised when the implementation (or the mathematics as implemented) is wrong
derive from :class:`Defect`; the CLI maps them to distinct exit codes.
"""


class OuterSpineError(Exception):
    """Base class for all errors raised by this package."""


class Defect(OuterSpineError):
    """An internal consistency failure; never expected on valid input."""


class WordParseError(OuterSpineError, ValueError):
    def __init__(self, text, position, reason):
        self.text = text
        self.position = position
        super().__init__(f"cannot parse word {text!r} at position {position}: {reason}")


class IdentityWord(OuterSpineError, ValueError):
    pass


class Disconnected(OuterSpineError, ValueError):
    pass


class NotAForest(OuterSpineError, ValueError):
    pass


class NotInvertible(OuterSpineError, ValueError):
    pass


class InvalidWitness(OuterSpineError, ValueError):
    pass


class NotDisjoint(OuterSpineError, ValueError):
    pass


class DegenerateSubset(OuterSpineError, ValueError):
    pass


class IncompatibleEdges(OuterSpineError, ValueError):
    pass


class HypothesesViolated(OuterSpineError, ValueError):
    pass


class NotMonotone(OuterSpineError, ValueError):
    pass


class DirectionViolated(OuterSpineError, ValueError):
    pass


class TooLarge(OuterSpineError, ValueError):
    pass


class NoMatching(Defect):
    pass


class ConclusionFailed(Defect):
    pass


class UndeterminedComparison(Defect):
    """Two lazy vectors agreed on every coordinate up to the cutoff."""


class PipelineDefect(Defect):
    pass
