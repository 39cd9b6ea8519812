"""Exception hierarchy, grouped by CLI exit code."""

from __future__ import annotations


class ZokError(Exception):
    """Base class for all library errors."""


class MathVerdictError(ZokError):
    """A mathematically negative answer (exit code 1): the input class is
    outside the cone or hypothesis the operation requires."""


class NotPseudoEffective(MathVerdictError):
    """The class admits no valid Zariski decomposition relative to the model.

    Indistinguishable by design from "the model's curve list is missing a
    relevant negative curve".
    """


class NotBig(MathVerdictError):
    pass


class NotNef(MathVerdictError):
    pass


class UnsupportedDirection(MathVerdictError):
    """Volume derivative requested for a direction that is neither
    nef-in-model nor a listed curve class."""


class EpsilonTooLarge(MathVerdictError):
    def __init__(self, threshold):
        self.threshold = threshold
        super().__init__(f"epsilon must be strictly below threshold {threshold}")


class FlagInNonKahlerLocus(MathVerdictError):
    pass


class NotOnBoundary(MathVerdictError):
    """Class is not pseudo-effective-of-volume-zero (it is big or not psef)."""


class HypothesisViolated(MathVerdictError):
    pass


class UsageError(ZokError):
    """Bad input data or arguments (exit code 2)."""


class UnknownCurve(UsageError):
    pass


class ModelValidationError(UsageError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class GenerationError(UsageError):
    pass


class InvariantError(ZokError):
    """An internal invariant failed (exit code 3); always a bug or a model
    that breaks the surface-geometry hypotheses the algorithms rely on."""


class MultipleCandidates(InvariantError):
    """Subset search found two valid decompositions; the model violates the
    uniqueness hypotheses."""
