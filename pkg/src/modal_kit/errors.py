"""Exception hierarchy shared by every modal_kit module."""


class ModalKitError(Exception):
    """Base class for all errors raised by modal_kit."""


class InvalidSeries(ModalKitError, ValueError):
    pass


class NonFinite(InvalidSeries):
    pass


class TooShort(InvalidSeries):
    pass


class BadDt(InvalidSeries):
    pass


class BandAboveNyquist(InvalidSeries):
    pass


class OutOfRange(ModalKitError, ValueError):
    pass


class AliasedMode(ModalKitError, ValueError):
    pass


class EmptyBand(ModalKitError):
    """No spectral bins (or voices, scales) fall inside the analysis band."""


class NoModeInBand(ModalKitError):
    pass


class IllConditioned(ModalKitError):
    pass


class OrderTooHigh(ModalKitError, ValueError):
    pass


class BadPencilParameter(ModalKitError, ValueError):
    pass


class RankZero(ModalKitError):
    """Signal is numerically indistinguishable from zero."""


class WindowTooLong(ModalKitError, ValueError):
    pass


class TooFewExtrema(ModalKitError):
    pass


class ParseError(ModalKitError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class NonUniformSampling(ModalKitError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class EmptyFile(ModalKitError):
    pass


class NoMethodsSelected(ModalKitError, ValueError):
    pass


class IoError(ModalKitError, OSError):
    pass
