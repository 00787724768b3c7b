"""Enumeration bounds for the exhaustive operations.

The environment variable ``ITL_MAX_ENUM`` overrides both defaults; an
explicit argument overrides the environment.
"""

import os

ENV_VAR = "ITL_MAX_ENUM"

# frame_valid enumerates 2**(points * atoms) valuations; the bound caps the
# exponent.
DEFAULT_VALUATION_BOUND = 20

# p-morphism search enumerates total maps between point sets; the bound caps
# the number of points on either side.
DEFAULT_SEARCH_BOUND = 7


def resolve(explicit: int | None, default: int) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get(ENV_VAR)
    if env is not None:
        return int(env)
    return default
