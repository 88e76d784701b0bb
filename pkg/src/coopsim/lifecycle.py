"""Per-fragment life-cycle: active until kept, broken, withdrawn, or faded.

Terminal states are absorbing.  While active, the fragment's vividness
(``fade_level``) decays linearly from 1 toward 0; once it drops below the
fragment's fading threshold the fragment terminates locally as faded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .statements import Statement, equivalent
from .trust import Outcome

__all__ = ["LifecycleState", "TERMINAL_STATES", "LifecycleError", "LifecycleRecord"]


class LifecycleState(Enum):
    ACTIVE = "active"
    KEPT = "kept"
    BROKEN = "broken"
    WITHDRAWN = "withdrawn"
    FADED = "faded"


TERMINAL_STATES = frozenset(
    {
        LifecycleState.KEPT,
        LifecycleState.BROKEN,
        LifecycleState.WITHDRAWN,
        LifecycleState.FADED,
    }
)


class LifecycleError(RuntimeError):
    """Illegal operation on a life-cycle record (e.g. mutating a terminal)."""


@dataclass
class LifecycleRecord:
    fragment: Statement
    last_update: int
    state: LifecycleState = LifecycleState.ACTIVE
    fade_level: Fraction = field(default_factory=lambda: Fraction(1))
    fade_rate_multiplier: Fraction = field(default_factory=lambda: Fraction(1))

    def __post_init__(self):
        if self.fragment.subject is None or self.fragment.fade is None:
            raise LifecycleError("record requires a fragment with subject and fade spec")

    @property
    def terminal(self) -> bool:
        return self.state in TERMINAL_STATES

    @property
    def token(self) -> str:
        return self.fragment.identity.token if self.fragment.identity else ""

    def _require_active(self):
        if self.terminal:
            raise LifecycleError(f"record is terminal ({self.state.value})")

    def step_fade(self, now: int) -> "LifecycleRecord":
        """Advance fading to ``now``; becomes faded below the threshold."""
        self._require_active()
        if now < self.last_update:
            raise LifecycleError("fading cannot run backwards")
        spec = self.fragment.fade
        delta = now - self.last_update
        decay = self.fade_rate_multiplier * Fraction(delta, spec.span)
        self.fade_level = max(Fraction(0), self.fade_level - decay)
        self.last_update = now
        if self.fade_level < spec.threshold:
            self.state = LifecycleState.FADED
        return self

    def assess(self, verdict: Outcome, now: int) -> "LifecycleRecord":
        """Terminal fulfillment assessment: kept or broken."""
        self._require_active()
        self.state = (
            LifecycleState.KEPT if verdict is Outcome.KEPT else LifecycleState.BROKEN
        )
        self.last_update = now
        return self

    def withdraw(self, by: str, now: int = None) -> "LifecycleRecord":
        """Withdrawal, allowed to the promiser only.  No trust update."""
        self._require_active()
        if by != self.fragment.promiser:
            raise LifecycleError(f"only the promiser may withdraw (not {by!r})")
        self.state = LifecycleState.WITHDRAWN
        if now is not None:
            self.last_update = now
        return self

    def refresh_on_repetition(self, reissue: Statement, now: int) -> "LifecycleRecord":
        """An equivalent reissue resets fading; no trust change."""
        self._require_active()
        if not equivalent(self.fragment, reissue):
            raise LifecycleError("reissue is not equivalent to the held fragment")
        self.fade_level = Fraction(1)
        self.last_update = now
        return self
