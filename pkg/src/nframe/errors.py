"""Exception hierarchy shared by every module."""


class NFrameError(Exception):
    """Base class for all errors raised by nframe."""


class DimensionError(NFrameError, ValueError):
    """Operands have incompatible shapes or dimensions."""


class ContractError(NFrameError, ValueError):
    """An input violates a numerical precondition (e.g. not Hermitian)."""


class InvalidFixingError(NFrameError, ValueError):
    """Conditioning/fixing vectors are linearly dependent."""


class NotAFrameError(NFrameError, ArithmeticError):
    """The frame operator is singular, so the family is not a frame."""


class PreconditionError(NFrameError, ValueError):
    """A theorem-level precondition is not met (non-dual pair, non-unitary map)."""


class InputError(NFrameError, ValueError):
    """Malformed user input; ``field`` names the offending JSON field."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
