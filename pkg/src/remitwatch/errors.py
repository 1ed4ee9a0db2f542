"""Exception types shared across the package.

Every operation failure mode has a named class so callers (and the HTTP
layer) can map errors to machine-readable responses without string
matching.
"""


class RemitwatchError(Exception):
    """Base class for all package errors."""


class InvalidConfig(RemitwatchError):
    """A scenario or service config violates one of its invariants."""

    def __init__(self, invariant: str):
        super().__init__(invariant)
        self.invariant = invariant


class UnknownPattern(RemitwatchError):
    pass


class InsufficientCustomers(RemitwatchError):
    pass


class MalformedRecord(RemitwatchError):
    """Raw dataset line could not be parsed at all."""


class InvalidField(RemitwatchError):
    """A parsed record field violates a validation rule."""

    def __init__(self, field: str, rule: str):
        super().__init__(f"{field}: {rule}")
        self.field = field
        self.rule = rule


class TimeOrderViolation(RemitwatchError):
    pass


class TooFewRecords(RemitwatchError):
    pass


class SingleClassInput(RemitwatchError):
    pass


class NonFiniteInput(RemitwatchError):
    pass


class DimensionMismatch(RemitwatchError):
    pass


class KTooLarge(RemitwatchError):
    pass


class SeriesTooShort(RemitwatchError):
    pass


class SingularDesign(RemitwatchError):
    pass


class LengthMismatch(RemitwatchError):
    pass


class SchemaMismatch(RemitwatchError):
    pass


class IllegalTransition(RemitwatchError):
    pass


class UnknownField(RemitwatchError):
    pass


class UnknownId(RemitwatchError):
    """Lookup of a nonexistent entity id (transaction, model, alert, report)."""


class BadOperatorForType(RemitwatchError):
    pass


class UnknownCustomer(RemitwatchError):
    pass


class EmptySeries(RemitwatchError):
    pass


class DegenerateAbscissa(RemitwatchError):
    pass


class InvalidSpec(RemitwatchError):
    """A report spec section failed validation."""

    def __init__(self, section: str, reason: str):
        super().__init__(f"section {section}: {reason}")
        self.section = section
        self.reason = reason


class CorruptLog(RemitwatchError):
    pass
