"""Exception hierarchy shared by all modules."""


class SeqProdError(ValueError):
    """Base class for every error raised by this package."""


class DimensionError(SeqProdError):
    pass


class SymmetryError(SeqProdError):
    pass


class NumericalError(SeqProdError):
    pass


class EvaluationError(SeqProdError):
    pass


class RangeError(SeqProdError):
    """An eigenvalue fell outside the admissible interval."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class DefinednessError(SeqProdError):
    """The partial effect-algebra sum is undefined for the given pair."""


class ParameterError(SeqProdError):
    pass


class ZeroProbabilityError(SeqProdError):
    pass


class ConditioningError(SeqProdError):
    pass


class HypothesisError(SeqProdError):
    """Inputs handed to a conditional-axiom checker do not meet its premise."""


class ParseError(SeqProdError):
    pass


class ConditioningWarning(RuntimeWarning):
    pass
