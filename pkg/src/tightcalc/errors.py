"""Exception hierarchy shared by every layer."""

from __future__ import annotations


class TightCalcError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(TightCalcError):
    """Malformed polynomial text; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class SignatureMismatch(TightCalcError):
    pass


class ExponentOverflow(TightCalcError):
    pass


class BudgetExceeded(TightCalcError):
    """A Groebner computation hit its pair limit."""


class CertificationError(TightCalcError):
    """A claimed certificate (minimal primes, extension data, ...) failed to verify."""


class AssumptionError(TightCalcError):
    """A declared test-element assumption is inconsistent with certified data."""


class InconsistencyError(TightCalcError):
    """Two sound procedures disagreed; this is a bug or a false assumption."""


class PreconditionError(TightCalcError):
    pass


class InputError(TightCalcError):
    """Invalid scenario or report input; ``pointer`` is a JSON pointer to the offending value."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
        self.reason = message
