"""Exception types shared across the toolkit."""


class QpulbaError(Exception):
    """Base class for all toolkit errors."""


class UnsupportedSpecError(QpulbaError, ValueError):
    """Machine parameters outside the supported model (d != 1, counts < 1, ...)."""


class ProgramRangeError(QpulbaError, ValueError):
    """Description number or table entry outside its valid range."""


class GuardExceededError(QpulbaError):
    """Program space larger than the enumeration guard allows."""


class BranchBudgetError(QpulbaError):
    """Sparse verification would need more branches than the configured budget."""


class PaperCompatUnavailableError(QpulbaError, ValueError):
    """No published flat-index layout exists for the requested machine."""


class GateValidationError(QpulbaError, ValueError):
    """Gate violates arity, range or qubit-distinctness rules."""


class UnknownRegisterError(QpulbaError, KeyError):
    """Register name not present in the circuit or state metadata."""


class DenseCapExceededError(QpulbaError):
    """Dense simulation refused: qubit count above the configured cap."""


class InsufficientAncillaError(QpulbaError):
    """Not enough clean/borrowable qubits to lower a multi-controlled gate."""


class UnloweredGateError(QpulbaError, ValueError):
    """Circuit still contains gates outside the emit target's vocabulary."""
