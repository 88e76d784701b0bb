"""Reputation infection: letter-of-recommendation flow and survey averaging.

Both mechanisms read and communicate trust levels only.  A peer asked for a
letter of recommendation (LOR) refuses when its own level is -1 or 0; other
levels translate into a fixed adjustment of the asker's level.  A third
party survey computes a group's average trust in an agent; members without
recent own observations reinitialize by approximating the average from
below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from .trust import (
    LEVELS,
    AppreciationKey,
    AppreciationKind,
    TrustKeyError,
    clamp_level,
)

__all__ = [
    "LorResponse",
    "LorExchange",
    "SurveyResult",
    "DEFAULT_RECENT_WINDOW",
    "lor_update",
    "survey_reinit",
    "reputation_distribution",
]

DEFAULT_RECENT_WINDOW = 50


class LorResponse(Enum):
    COMMUNICATED = "communicated"
    REFUSED = "refused"


@dataclass(frozen=True)
class LorExchange:
    asker: str
    peer: str
    about: str
    peer_level: int
    response: LorResponse

    def __post_init__(self):
        refused = self.peer_level in (-1, 0)
        if refused != (self.response is LorResponse.REFUSED):
            raise ValueError("peer refuses exactly at levels -1 and 0")


@dataclass(frozen=True)
class SurveyResult:
    surveyor: str
    group: frozenset
    about: str
    average: Fraction

    def __post_init__(self):
        if not self.group:
            raise ValueError("survey group must be non-empty")


def lor_update(asker_level: int, peer_level: int) -> Optional[int]:
    """New asker level after a LOR exchange, or None when the peer refuses.

    Peer -2 drags the asker to at most -1; peer 1 and 2 set the asker one
    step below the peer's level.
    """
    if asker_level not in LEVELS or peer_level not in LEVELS:
        raise TrustKeyError("levels must be on the five-level scale")
    if peer_level == -2:
        return min(-1, asker_level)
    if peer_level in (-1, 0):
        return None
    if peer_level == 1:
        return 0
    return 1


def survey_reinit(
    member_level: int, average, has_recent_observations: bool
) -> int:
    """Reinitialize a member's level from a surveyed average, approximating
    it from below; members with recent own observations keep their level."""
    if not -2 <= average <= 2:
        raise ValueError("average outside the trust scale")
    if has_recent_observations:
        return member_level
    return clamp_level(math.floor(average))


def reputation_distribution(community, stores, about: str) -> dict:
    """Histogram of the community's trust levels toward ``about``.

    ``stores`` maps each member to its TrustStore; counts sum to the size of
    the community.
    """
    if not community:
        raise ValueError("community must be non-empty")
    histogram: dict = {}
    for member in community:
        key = AppreciationKey(AppreciationKind.GENERAL_TRUST, member, about)
        level = stores[member].get(key)
        histogram[level] = histogram.get(level, 0) + 1
    return histogram
