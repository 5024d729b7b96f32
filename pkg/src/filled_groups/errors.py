"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class FilledGroupsError(Exception):
    """Base class for every error raised by this package."""


class ParseError(FilledGroupsError, ValueError):
    """Malformed group spec text.

    ``offset`` is a byte offset into the UTF-8 encoded input and ``expected``
    lists the tokens that would have been accepted there.
    """

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.offset = offset
        self.expected = tuple(expected)
        hint = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at byte {offset}{hint}")


class SpecDomainError(FilledGroupsError, ValueError):
    """A constructor parameter is outside its domain."""


class OrderCapExceeded(FilledGroupsError):
    """The group described by a spec is larger than the configured cap."""


class GroupMismatch(FilledGroupsError, ValueError):
    """Two element sets bound to different groups were combined."""


class NotSubgroup(FilledGroupsError, ValueError):
    pass


class NotNormal(FilledGroupsError, ValueError):
    pass


class NotDihedral(FilledGroupsError, ValueError):
    pass


class PreconditionViolated(FilledGroupsError, ValueError):
    """An operation was called on a set that is not product-free."""


class ExhaustiveCapExceeded(FilledGroupsError):
    """Exhaustive search was requested for a group above the allowed order."""


class OrderOutOfRange(FilledGroupsError, ValueError):
    pass


class DomainError(FilledGroupsError, ValueError):
    """A witness family was requested outside the parameters it covers."""


class FrameTooSmall(FilledGroupsError, ValueError):
    pass


class NotCentralProductC4(FilledGroupsError, ValueError):
    pass
