"""Exception types shared across the package."""


class BCGroupsError(Exception):
    """Base class for all package errors."""


class DivisionByZero(BCGroupsError, ZeroDivisionError):
    """Inversion or division by the zero element."""


class NoSquareRootInTower(BCGroupsError):
    """The element has no square root inside the configured tower.

    Signals that the caller must reconfigure with a larger tower; roots are
    never adjoined implicitly.
    """


class TowerTooSmall(BCGroupsError):
    """A derived field needs elements the configured tower does not contain."""


class UnknownRoot(BCGroupsError):
    """A coordinate vector that is not a root of the configured system."""


class ConstraintViolation(BCGroupsError):
    """A word atom whose coefficient violates the group's constraint table."""


class NotInBigGroup(BCGroupsError):
    """A matrix that is not even an element of the ambient group Q(E)."""


class NotInGroup(BCGroupsError):
    """A matrix in Q(E) whose normal form leaves the constraint domains."""


class PreconditionNotNormalized(BCGroupsError):
    """An operation that requires normalized data (1 in V' and/or 1 in V'')."""


class NotExpandable(BCGroupsError):
    """A weight with no tau-adic expansion with bits in {0, 1}."""


class RankRequiresExternalLM(BCGroupsError):
    """Levi-factor dimensions at rank >= 3 must be supplied by the caller."""


class ParseError(BCGroupsError):
    """Malformed element string or configuration document."""
