"""Exception types shared across the engine."""


class TagRecError(Exception):
    """Base class for engine errors."""


class EmptyWindowError(TagRecError):
    """A weighting query was made against an empty corpus window."""


class UnknownTermError(TagRecError):
    """IDF requested for a term absent from the corpus stats."""


class NotFoundError(TagRecError):
    """A referenced user, tag or item does not exist where expected."""


class EmptyProfileError(TagRecError):
    """Group assignment requires a non-empty profile (seed from area first)."""


class ColdStartUnresolvable(TagRecError):
    """User has no loans and no area profile to seed from."""


class DataError(TagRecError):
    """Input data is unusable (missing files, empty required sets)."""
