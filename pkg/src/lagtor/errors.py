"""Exception hierarchy shared by every lagtor module."""


class LagtorError(Exception):
    """Base class for all library errors."""


class InputError(LagtorError, ValueError):
    """Malformed or out-of-contract input."""


class BasisMismatch(InputError):
    pass


class SchemaError(InputError):
    def __init__(self, pointer, message):
        self.pointer = pointer
        super().__init__(f"{pointer or '/'}: {message}")


class RefineNeeded(LagtorError):
    """An enclosure is too wide to certify the sign of a nonzero quantity."""

    def __init__(self, difference, context=""):
        self.difference = difference
        msg = f"cannot certify sign of {difference}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class GroupMismatch(LagtorError):
    pass


class NotMember(InputError):
    pass


class NotPrimitive(InputError):
    pass


class NotUnimodular(InputError):
    pass


class InvalidTorus(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class CapacityTooSmall(LagtorError):
    pass


class NotEquivalent(LagtorError):
    pass


class HypothesisViolation(InputError):
    pass


class NonPositiveResult(LagtorError):
    pass


class IterationLimit(LagtorError):
    pass


class InternalLownessFailure(LagtorError):
    pass


class StateSpaceCap(LagtorError):
    pass


class DomainViolation(LagtorError, ValueError):
    pass


class Cancelled(LagtorError):
    pass


class CheckFailure(LagtorError):
    """Raised by the independent checker; ``kind`` names the failure class."""

    def __init__(self, kind, message, step=None):
        self.kind = kind
        self.step = step
        where = f" at step {step}" if step is not None else ""
        super().__init__(f"{kind}{where}: {message}")
