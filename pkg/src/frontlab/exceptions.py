"""Exception types shared across the package.

Every error that callers are expected to catch programmatically gets its own
class here; modules raise these rather than bare ValueError so that the CLI
can map failures onto stable exit codes.
"""


class FrontlabError(Exception):
    """Base class for all frontlab errors."""


class InvalidSpecError(FrontlabError):
    """An environment or experiment specification fails validation."""


class EmptySetError(FrontlabError):
    """A grid set or polytope that must be nonempty is empty."""


class WindowOverflowError(FrontlabError):
    """A computation would escape its lattice window (or need too many cells)."""


class NotInHullError(FrontlabError):
    """A point handed to the convex decomposition lies outside the hull."""


class UnreachableError(FrontlabError):
    """A path extraction target was never reached."""


class NoParentsError(FrontlabError):
    """Path extraction requested on a reach result without parent records."""


class RequiresAutonomousError(FrontlabError):
    """An operation valid only for time-independent media got a time-dependent one."""


class InvalidPathError(FrontlabError):
    """A path object violates its structural contract (ordering, shape)."""


class RealizationFailedError(FrontlabError):
    """The realizing-path construction could not meet its tolerance budget."""


class CflViolationError(FrontlabError):
    """An explicit finite-difference step size violates the stability bound."""


class NumericBlowupError(FrontlabError):
    """A solver produced non-finite or runaway values."""
