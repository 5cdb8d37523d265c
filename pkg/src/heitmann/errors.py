"""Exception hierarchy shared across the package."""


class InvalidArgument(ValueError):
    """An argument violates a documented precondition."""


class UndefinedValuation(ArithmeticError):
    """p-adic valuation requested for 0; callers must branch on zero."""


class HypothesisViolated(ValueError):
    """A stated hypothesis fails; carries enough context to locate it."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ModelFormatError(ValueError):
    """A model file cannot be parsed into the expected shape."""


class ModelAxiomError(ValueError):
    """A loaded multiplication table violates a ring axiom.

    ``witness`` names the basis triple or axiom that failed.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PrecisionExhausted(ArithmeticError):
    """The statement cannot be decided inside precision p^M."""


class InternalInconsistency(AssertionError):
    """A quantity the theory guarantees failed to hold; indicates a bug
    or a genuinely false input model."""


class ConstructionInvariantViolated(RuntimeError):
    """A per-step verification report came back FAIL."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class StepLimitExceeded(RuntimeError):
    """run_construction hit max_steps before reaching i = p^L."""

    def __init__(self, message, case3_count=0, trace=None):
        super().__init__(message)
        self.case3_count = case3_count
        self.trace = trace
