"""Exception hierarchy shared by all lcabs modules."""


class LcabsError(Exception):
    """Base class for every error raised by lcabs."""


class InvalidMachine(LcabsError, ValueError):
    pass


class EmptyAfterTrim(LcabsError):
    """The machine has no infinite path starting in an initial state."""


class AlphabetMismatch(LcabsError, ValueError):
    pass


class DepthBudgetExceeded(LcabsError):
    pass


class UnknownSymbol(LcabsError, KeyError):
    pass


class UnknownState(LcabsError, KeyError):
    pass


class EmptyWindows(LcabsError, ValueError):
    pass


class Blocking(LcabsError):
    """A quantizer specification admits a signal that can never trigger again."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class InternalInconsistency(LcabsError):
    """Two independent decision routes disagreed on the same question."""
