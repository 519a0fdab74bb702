"""Exception hierarchy shared by all modules."""


class BurgersError(Exception):
    """Base class for every error raised by this package."""


class DivisorTooSmall(BurgersError, ZeroDivisionError):
    pass


class OrderExceeded(BurgersError, IndexError):
    pass


class OrderExhausted(BurgersError):
    """A solution pair cannot supply the derivative order requested of it."""


class NonPositiveSeed(BurgersError, ValueError):
    pass


class PhiNonPositive(BurgersError, ValueError):
    pass


class CompatibilityViolated(BurgersError, ValueError):
    pass


class QuadratureNonConvergent(BurgersError, RuntimeError):
    pass


class NonPositiveResult(BurgersError, RuntimeError):
    """Spectral evolution produced phi <= 0; usually the periodic box is too small."""


class KernelTruncationError(BurgersError, RuntimeError):
    pass


class CFLViolation(BurgersError, ValueError):
    pass


class NonFiniteState(BurgersError, FloatingPointError):
    pass


class ConfigInvalid(BurgersError, ValueError):
    """Carries every problem found, not just the first."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
