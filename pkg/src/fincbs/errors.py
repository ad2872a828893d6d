"""Exception types shared across the library."""


class FincbsError(Exception):
    """Base class for all library errors."""


class IndexOutOfRange(FincbsError):
    pass


class CycleDetected(FincbsError):
    pass


class SizeLimitExceeded(FincbsError):
    pass


class PosetMismatch(FincbsError):
    pass


class FormatError(FincbsError):
    """Malformed poset / algebra / morphism text."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class PartitionInvalid(FincbsError):
    def __init__(self, condition, witness, message=None):
        self.condition = condition
        self.witness = witness
        super().__init__(
            message or f"partition violates condition {condition} at {witness}"
        )


class InvalidMorphism(FincbsError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class NotSurjective(FincbsError):
    pass


class NotInjective(FincbsError):
    pass


class CodomainMismatch(FincbsError):
    pass


class InvalidAlgebra(FincbsError):
    def __init__(self, violations):
        self.violations = list(violations)
        head = "; ".join(str(v) for v in self.violations[:5])
        super().__init__(f"{len(self.violations)} law violation(s): {head}")


class NotJoinIrreducible(FincbsError):
    pass


class InvalidSignature(FincbsError):
    pass


class NotPrimitive(FincbsError):
    def __init__(self, reason, witness=None):
        self.reason = reason
        self.witness = witness
        msg = reason if witness is None else f"{reason} (witness: {witness})"
        super().__init__(msg)


class NotMinimal(FincbsError):
    pass


class RoundTripFailure(FincbsError):
    """An internally constructed object failed its mandatory round-trip check.

    This always indicates a defect in the library, never bad user input.
    """


class PreconditionFailed(FincbsError):
    pass


class BadRequest(FincbsError):
    pass


class ParseError(FincbsError):
    def __init__(self, position, expected, found=None):
        self.position = position
        self.expected = expected
        msg = f"at position {position}: expected {expected}"
        if found is not None:
            msg += f", found {found!r}"
        super().__init__(msg)


class UnboundVariable(FincbsError):
    pass


class ArityTooLarge(FincbsError):
    pass
