"""Exception taxonomy shared by all modules.

The CLI maps these onto exit codes: DomainError -> 1, usage errors -> 2
(argparse), ResourceError -> 3.
"""


class SkolemSetError(Exception):
    """Base class for all library errors."""


class DomainError(SkolemSetError):
    """Input violates a mathematical precondition (bad range, wrong shape)."""


class ResourceError(SkolemSetError):
    """Operation would exceed a configured cap (memory, scan range, sieve)."""


class ContractViolation(SkolemSetError):
    """Caller broke an API contract (e.g. non-minimal recurrence passed in)."""
