"""Exception hierarchy for the m-ticketing library."""


class MtktError(Exception):
    """Base class for all library errors."""


class InvalidEncoding(MtktError):
    """Malformed wire bytes: wrong length, off-curve point, non-canonical scalar."""


class ParseError(MtktError):
    """Corrupt persistent file; carries the offending position."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (at {position})")
        self.position = position


class DegenerateExponent(MtktError):
    """y + m (or s + k + 1) hit zero mod p; the signing exponent is undefined."""


class NoSignatureForElement(MtktError):
    """Requested set element is outside the signed set."""


class SessionConsumed(MtktError):
    """A single-use proving session was finalized twice (mask reuse leaks witnesses)."""


class IndexAlreadyUsed(MtktError):
    pass


class IndexOutOfRange(MtktError):
    pass


class QuotaExhausted(MtktError):
    pass


class TokenExpired(MtktError):
    pass


class BadValidatorSignature(MtktError):
    pass


class DuplicateUser(MtktError):
    pass


class BadSignature(MtktError):
    pass


class InsufficientShares(MtktError):
    pass


class ProtocolAbort(MtktError):
    """A multi-step protocol failed a verification; phase names the failing check."""

    def __init__(self, phase, message=""):
        super().__init__(f"[{phase}] {message}" if message else f"[{phase}]")
        self.phase = phase
