"""Five-level trust and credibility stores with pluggable update policies.

Appreciation (trust, credibility, confidence, dependability) is measured on
the ordinal scale {-2, -1, 0, 1, 2}; 0 is neutral and the default for keys
that were never written.  Two update policies are supported:

* ``incremental`` -- each kept/broken assessment moves the level one step,
  saturating at the scale bounds.
* ``recency-history`` -- the level is a pure function of the ordered
  experience list (most recent outcomes dominate).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

__all__ = [
    "SCALE_MIN",
    "SCALE_MAX",
    "LEVELS",
    "PTRUST",
    "AppreciationKind",
    "TRUST_KINDS",
    "AppreciationKey",
    "Outcome",
    "TramPolicy",
    "TrustStore",
    "TrustKeyError",
    "clamp_level",
    "level_from_history",
    "expectation",
]

SCALE_MIN = -2
SCALE_MAX = 2
LEVELS = (-2, -1, 0, 1, 2)

# Probability-like weight per trust level, symmetric around 0.5 and never
# certain at the extremes.
PTRUST = {
    -2: Fraction(1, 20),
    -1: Fraction(1, 4),
    0: Fraction(1, 2),
    1: Fraction(3, 4),
    2: Fraction(19, 20),
}


class TrustKeyError(ValueError):
    """Malformed appreciation key or wrong kind for the operation."""


class AppreciationKind(Enum):
    GENERAL_TRUST = "general-trust"
    TASK_TRUST = "task-trust"
    PROGRAM_TRUST = "program-trust"
    TASK_CREDIBILITY = "task-credibility"
    PROGRAM_CREDIBILITY = "program-credibility"
    CONFIDENCE = "confidence"
    MATCHING_CREDIBILITY = "matching-credibility"
    DEPENDABILITY = "dependability"


TRUST_KINDS = frozenset(
    {
        AppreciationKind.GENERAL_TRUST,
        AppreciationKind.TASK_TRUST,
        AppreciationKind.PROGRAM_TRUST,
    }
)

# kind -> (task required, program required)
_KIND_FIELDS = {
    AppreciationKind.GENERAL_TRUST: (False, False),
    AppreciationKind.TASK_TRUST: (True, False),
    AppreciationKind.PROGRAM_TRUST: (False, True),
    AppreciationKind.TASK_CREDIBILITY: (True, False),
    AppreciationKind.PROGRAM_CREDIBILITY: (False, True),
    AppreciationKind.CONFIDENCE: (True, True),
    AppreciationKind.MATCHING_CREDIBILITY: (True, True),
    AppreciationKind.DEPENDABILITY: (True, True),
}


@dataclass(frozen=True)
class AppreciationKey:
    kind: AppreciationKind
    subject: str
    target: str
    program: Optional[str] = None
    task: Optional[str] = None

    def __post_init__(self):
        if not self.subject or not self.target:
            raise TrustKeyError("subject and target must be non-empty")
        need_task, need_program = _KIND_FIELDS[self.kind]
        if need_task != (self.task is not None):
            raise TrustKeyError(
                f"{self.kind.value} {'requires' if need_task else 'forbids'} a task"
            )
        if need_program != (self.program is not None):
            raise TrustKeyError(
                f"{self.kind.value} {'requires' if need_program else 'forbids'} a program"
            )


class Outcome(Enum):
    KEPT = "kept"
    BROKEN = "broken"


class TramPolicy(Enum):
    INCREMENTAL = "incremental"
    RECENCY = "recency-history"


def clamp_level(value: int) -> int:
    return max(SCALE_MIN, min(SCALE_MAX, value))


def level_from_history(outcomes) -> int:
    """Level implied by an ordered experience list (oldest first).

    No experience is neutral.  A positive most recent experience gives 1, or
    2 when the one before was also positive.  A negative most recent
    experience gives -1, or -2 when there are at least two negatives and the
    two most recent are both negative.
    """
    outcomes = list(outcomes)
    if not outcomes:
        return 0
    last = outcomes[-1]
    prev = outcomes[-2] if len(outcomes) >= 2 else None
    if last is Outcome.KEPT:
        return 2 if prev is Outcome.KEPT else 1
    negatives = sum(1 for o in outcomes if o is Outcome.BROKEN)
    if negatives >= 2 and prev is Outcome.BROKEN:
        return -2
    return -1


class TrustStore:
    """Appreciation levels plus the per-key experience history of one agent.

    Absent keys read as neutral (0).  Experience lists are kept in tick
    order; under the recency policy the level is re-derived from the list on
    every assessment, so it is replay-independent.
    """

    def __init__(self):
        self._levels: dict = {}
        self._experience: dict = {}

    def get(self, key: AppreciationKey) -> int:
        return self._levels.get(key, 0)

    def set(self, key: AppreciationKey, level: int):
        if level not in LEVELS:
            raise TrustKeyError(f"level {level} outside scale")
        self._levels[key] = level

    def experience(self, key: AppreciationKey):
        return tuple(o for _, o in self._experience.get(key, ()))

    def last_experience_tick(self, key: AppreciationKey) -> Optional[int]:
        history = self._experience.get(key)
        return history[-1][0] if history else None

    def record_assessment(
        self,
        key: AppreciationKey,
        outcome: Outcome,
        tick: int,
        policy: TramPolicy = TramPolicy.INCREMENTAL,
    ) -> int:
        """Append an outcome and return the updated level."""
        if key.kind not in TRUST_KINDS:
            raise TrustKeyError(f"{key.kind.value} is not a trust kind")
        history = self._experience.setdefault(key, [])
        if history and tick < history[-1][0]:
            raise TrustKeyError("experience ticks must be non-decreasing")
        history.append((tick, outcome))
        if policy is TramPolicy.INCREMENTAL:
            delta = 1 if outcome is Outcome.KEPT else -1
            level = clamp_level(self.get(key) + delta)
        else:
            level = level_from_history(o for _, o in history)
        self._levels[key] = level
        return level

    def snapshot(self) -> dict:
        return dict(self._levels)


def expectation(credibility, trust: int):
    """Expected keeping of a directional: credibility weighted by trust."""
    if not 0 <= credibility <= 1:
        raise ValueError("credibility must be in [0,1]")
    if trust not in LEVELS:
        raise TrustKeyError(f"trust level {trust} outside scale")
    return credibility * PTRUST[trust]
