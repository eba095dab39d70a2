"""Exception hierarchy shared by all modules."""


class SmoothLassoError(Exception):
    """Base class; the CLI maps subclasses to exit code 2."""


class DimensionMismatch(SmoothLassoError, ValueError):
    pass


class ConstantColumn(SmoothLassoError, ValueError):
    def __init__(self, j):
        super().__init__(f"column {j} has zero empirical variance")
        self.j = j


class MaxStepsExceeded(SmoothLassoError, RuntimeError):
    pass


class DegenerateDesign(SmoothLassoError, RuntimeError):
    pass


class SingularSystem(SmoothLassoError, ArithmeticError):
    pass


class IndexInSupport(SmoothLassoError, ValueError):
    pass


class InvalidConstant(SmoothLassoError, ValueError):
    pass


class InvalidPenalty(SmoothLassoError, ValueError):
    pass
