"""Exception hierarchy shared by every module."""


class DirectFiniteError(Exception):
    """Base class for all errors raised by this package."""


class ContextMismatch(DirectFiniteError, ValueError):
    """Operands live in different groups or fields."""


class GroupAxiomError(DirectFiniteError, ValueError):
    """A Cayley table failed closure, associativity, identity or inverses."""


class FieldError(DirectFiniteError, ValueError):
    """Invalid field parameters (non-prime characteristic, reducible modulus...)."""


class WrongCharacteristic(DirectFiniteError, ValueError):
    """A finite-field-only operation was applied to a rational element."""


class DivisionByZero(DirectFiniteError, ZeroDivisionError):
    pass


class InfiniteGroup(DirectFiniteError, ValueError):
    """An operation needing a finite group got an infinite one."""


class Undecidable(DirectFiniteError, ValueError):
    """The question has no decision procedure for this backend."""


class TermBlowup(DirectFiniteError, ArithmeticError):
    """Polynomial expansion exceeded the configured term budget."""


class EnumerationBudgetExceeded(DirectFiniteError, ArithmeticError):
    """An exhaustive enumeration would exceed the configured budget."""


class SearchBudgetExceeded(DirectFiniteError, ArithmeticError):
    """A bounded search finished without a conclusive answer."""


class AlphabetMismatch(DirectFiniteError, ValueError):
    pass


class CoefficientFieldTooLarge(DirectFiniteError, ValueError):
    """A rule coefficient does not lie in the requested finite level."""


class SectionFailed(DirectFiniteError, ValueError):
    """sigma o tau is not the identity on the common window."""


class ExprError(DirectFiniteError):
    """Error in user-supplied expression text; carries a source position."""

    def __init__(self, message, pos=None, source=None):
        self.message = message
        self.pos = pos
        self.source = source
        super().__init__(self._render())

    def _render(self):
        if self.pos is None:
            return self.message
        return f"{self.message} (at column {self.pos + 1})"


class ExprSyntaxError(ExprError):
    pass


class UnknownName(ExprError):
    pass


class TypeMismatch(ExprError):
    pass


class NameAlreadyBound(ExprError):
    """A session name was declared twice."""
