"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: DomainError (and CapacityError) -> 3,
ConsistencyError -> 4.
"""


class MetacommError(Exception):
    """Base class for every error raised by this package."""


class DomainError(MetacommError, ValueError):
    """A mathematical precondition of an operation does not hold."""


class CapacityError(DomainError):
    """A configured size or iteration cap was exceeded."""


class ConsistencyError(MetacommError, AssertionError):
    """Two computation paths that must agree did not.

    Raised for things the theory guarantees, e.g. a non-integral cofactor
    or a closed-form cycle count that disagrees with brute force.
    """
