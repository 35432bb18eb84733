"""Exception types shared across the package."""

import os

DEFAULT_NC_CEILING = 16
DEFAULT_PATTERN_CEILING = 20
# star pairings grow like Fuss-Catalan numbers, far slower than NC*(n, m)
DEFAULT_STAR_PAIRING_CEILING = 24
CEILING_ENV = "FREEHAAG_CEILING"


class SizeError(ValueError):
    """An enumeration was requested above its configured ceiling."""


class TruncationError(ValueError):
    """A cumulant was requested beyond the order a sequence was given to."""


class CapabilityError(ValueError):
    """A model lacks data (such as an operator norm) an operation needs."""


def resolve_ceiling(ceiling, default):
    if ceiling is not None:
        return int(ceiling)
    env = os.environ.get(CEILING_ENV)
    if env:
        return int(env)
    return default
