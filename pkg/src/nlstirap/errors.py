"""Exception hierarchy."""


class NlstirapError(Exception):
    pass


class PulseError(NlstirapError, ValueError):
    """The Stokes envelope vanished, so the mixing ratio is undefined."""


class IntegrationError(NlstirapError, RuntimeError):
    def __init__(self, message, t=None):
        super().__init__(message if t is None else f"{message} (t = {t!r} us)")
        self.t = t


class StiffnessError(IntegrationError):
    """Adaptive step size underflowed."""


class PulsesNotFinishedError(NlstirapError, ValueError):
    pass


class DegenerateSpectrumError(NlstirapError, ArithmeticError):
    """Exceptional point, vanishing frequency, or non-normalizable mode."""


class SingularGoldstoneError(NlstirapError, ArithmeticError):
    """The complementary Goldstone vector diverges (U_aa -> 0 or nu -> 0)."""


class SingularProjectionError(NlstirapError, ArithmeticError):
    def __init__(self, message, condition=None):
        super().__init__(message if condition is None else f"{message} (cond = {condition:.3e})")
        self.condition = condition
