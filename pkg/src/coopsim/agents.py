"""Per-agent behavior: prepared programs, imposition handling, trust rules.

The reasoning an agent applies when it receives an adequacy promise, a task
imposition, or an outcome observation is driven entirely by its current
trust levels:

* adequacy promise: positive trust prepares the program, non-positive trust
  refuses the install; strong distrust in a sole promiser unloads an already
  prepared program.
* task request: a single prepared program is used at non-negative trust; at
  trust -1 only if it was used before; with several candidates the program
  promised by the most trusted agent wins (ties broken by per-program trust
  sums, then promise recency, then program name).
* imposition: when the impositioner is highly trusted the agent applies
  extra scrutiny to the program promiser, warning or proposing withdrawal
  instead of risking a failure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .lifecycle import LifecycleRecord, LifecycleState
from .statements import DirectionalKind, Statement
from .trust import (
    AppreciationKey,
    AppreciationKind,
    Outcome,
    TramPolicy,
    TrustStore,
)

__all__ = [
    "ActionKind",
    "Action",
    "TrustDelta",
    "AdequacyTagError",
    "PreparedEntry",
    "PendingWarning",
    "AgentState",
    "parse_adequacy_tag",
    "on_adequacy_promise",
    "on_task_request",
    "on_imposition",
    "on_outcome",
    "apply_unload_rule",
    "resolve_reply",
]

_ADEQUACY_RE = re.compile(r"adequacy\(([A-Za-z0-9_-]+),([A-Za-z0-9_-]+)\)")


class AdequacyTagError(ValueError):
    pass


def parse_adequacy_tag(tag: str):
    m = _ADEQUACY_RE.fullmatch(tag)
    if not m:
        raise AdequacyTagError(f"not an adequacy type tag: {tag!r}")
    return m.group(1), m.group(2)


class ActionKind(Enum):
    PREPARE = "prepare"
    REFUSE_INSTALL = "refuse-install"
    UNLOAD = "unload"
    USE = "use"
    FAIL = "fail"
    WARN = "warn"
    PROPOSE_WITHDRAW = "propose-withdraw"


@dataclass(frozen=True)
class Action:
    kind: ActionKind
    program: Optional[str] = None
    task: Optional[str] = None
    target: Optional[str] = None

    def detail(self) -> str:
        parts = []
        if self.program is not None:
            parts.append(f"program={self.program}")
        if self.task is not None:
            parts.append(f"task={self.task}")
        if self.target is not None:
            parts.append(f"target={self.target}")
        return ",".join(parts)


@dataclass(frozen=True)
class TrustDelta:
    target: str
    outcome: Outcome
    level: int


@dataclass
class PreparedEntry:
    since: int
    used_before: bool = False


@dataclass(frozen=True)
class PendingWarning:
    imposer: str
    task: str
    program: str
    promiser: str


@dataclass
class AgentState:
    id: str
    trust: TrustStore = field(default_factory=TrustStore)
    fragments: list = field(default_factory=list)
    portfolio: list = field(default_factory=list)
    prepared: dict = field(default_factory=dict)
    adequacy_index: dict = field(default_factory=dict)
    pending: dict = field(default_factory=dict)

    def trust_in(self, target: str) -> int:
        return self.trust.get(
            AppreciationKey(AppreciationKind.GENERAL_TRUST, self.id, target)
        )

    def promisers_for(self, program: str, task: str):
        """Distinct agents with an indexed adequacy promise for (program, task)."""
        return {p for p, _ in self.adequacy_index.get((program, task), ())}

    def active_adequacy_records(self, program: str, task: str):
        tag = f"adequacy({program},{task})"
        return [
            rec
            for rec in self.fragments
            if rec.state is LifecycleState.ACTIVE
            and rec.fragment.kind is DirectionalKind.PROMISE
            and rec.fragment.type_tag == tag
        ]

    def prune_adequacy_index(self):
        """Drop index entries whose promiser no longer has an active fragment."""
        for (program, task), entries in list(self.adequacy_index.items()):
            active = {
                rec.fragment.promiser
                for rec in self.active_adequacy_records(program, task)
            }
            kept = [e for e in entries if e[0] in active]
            if kept:
                self.adequacy_index[(program, task)] = kept
            else:
                del self.adequacy_index[(program, task)]


def on_adequacy_promise(state: AgentState, promise: Statement, now: int) -> list:
    """React to a received adequacy promise (rules 1, 2, and the unload rule)."""
    program, task = parse_adequacy_tag(promise.type_tag)
    issued = promise.issue_time if promise.issue_time is not None else now
    state.adequacy_index.setdefault((program, task), []).append(
        (promise.promiser, issued)
    )
    level = state.trust_in(promise.promiser)
    if level > 0:
        if (program, task) not in state.prepared:
            state.prepared[(program, task)] = PreparedEntry(since=now)
            return [Action(ActionKind.PREPARE, program=program, task=task)]
        return []
    if (
        level == -2
        and (program, task) in state.prepared
        and state.promisers_for(program, task) == {promise.promiser}
    ):
        del state.prepared[(program, task)]
        return [Action(ActionKind.UNLOAD, program=program, task=task)]
    return [Action(ActionKind.REFUSE_INSTALL, program=program, task=task)]


def apply_unload_rule(state: AgentState) -> list:
    """Unload prepared programs whose sole adequacy promiser hit trust -2."""
    actions = []
    for (program, task) in sorted(state.prepared):
        promisers = state.promisers_for(program, task)
        if len(promisers) == 1 and state.trust_in(next(iter(promisers))) == -2:
            del state.prepared[(program, task)]
            actions.append(Action(ActionKind.UNLOAD, program=program, task=task))
    return actions


def _select_candidate(state: AgentState, candidates: list, task: str) -> str:
    """Rule 6/7 argmax: highest promiser trust, then per-program trust sums,
    then most recent adequacy promise by a maximally trusted promiser, then
    lexicographic program id."""
    stats = {}
    for program in candidates:
        entries = state.adequacy_index.get((program, task), ())
        promisers = sorted({p for p, _ in entries})
        trusts = {p: state.trust_in(p) for p in promisers}
        top = max(trusts.values())
        total = sum(trusts.values())
        recent = max(t for p, t in entries if trusts[p] == top)
        stats[program] = (top, total, recent)
    best_top = max(s[0] for s in stats.values())
    pool = [c for c in candidates if stats[c][0] == best_top]
    best_total = max(stats[c][1] for c in pool)
    pool = [c for c in pool if stats[c][1] == best_total]
    best_recent = max(stats[c][2] for c in pool)
    pool = [c for c in pool if stats[c][2] == best_recent]
    return min(pool)


def on_task_request(state: AgentState, task: str) -> Action:
    """Choose a program for a requested task (rules 3-7); failing is a value,
    not an error."""
    candidates = sorted(
        program
        for (program, t) in state.prepared
        if t == task and state.promisers_for(program, task)
    )
    if not candidates:
        return Action(ActionKind.FAIL, task=task)
    if len(candidates) == 1:
        program = candidates[0]
        promisers = state.promisers_for(program, task)
        if len(promisers) == 1:
            level = state.trust_in(next(iter(promisers)))
            if level >= 0:
                return Action(ActionKind.USE, program=program, task=task)
            if level == -1:
                if state.prepared[(program, task)].used_before:
                    return Action(ActionKind.USE, program=program, task=task)
                return Action(ActionKind.FAIL, task=task)
            return Action(ActionKind.FAIL, task=task)
    program = _select_candidate(state, candidates, task)
    return Action(ActionKind.USE, program=program, task=task)


def on_imposition(state: AgentState, imposer: str, task: str) -> list:
    """Balance impositioner trust against program-promiser trust.

    The balancing rules apply only in their stated precondition: exactly one
    program prepared for the task, promised adequate by exactly one agent,
    and a positively trusted impositioner.  Everything else falls through to
    the plain task-request rules.
    """
    candidates = [
        program
        for (program, t) in sorted(state.prepared)
        if t == task and state.promisers_for(program, task)
    ]
    single = len(candidates) == 1 and len(
        state.promisers_for(candidates[0], task)
    ) == 1
    trust_imposer = state.trust_in(imposer)
    if single and trust_imposer >= 1:
        program = candidates[0]
        promiser = next(iter(state.promisers_for(program, task)))
        trust_promiser = state.trust_in(promiser)
        if trust_imposer == 2:
            if trust_promiser == 2:
                return [Action(ActionKind.USE, program=program, task=task)]
            if trust_promiser == 1:
                state.pending[task] = PendingWarning(
                    imposer=imposer, task=task, program=program, promiser=promiser
                )
                return [Action(ActionKind.WARN, task=task, target=imposer)]
            return [Action(ActionKind.PROPOSE_WITHDRAW, task=task, target=imposer)]
        if trust_promiser >= 1:
            return [Action(ActionKind.USE, program=program, task=task)]
        return [Action(ActionKind.PROPOSE_WITHDRAW, task=task, target=imposer)]
    return [on_task_request(state, task)]


def resolve_reply(state: AgentState, imposer: str, proceed: bool) -> Optional[Action]:
    """Resolve a pending warning reply: proceed uses the held program,
    a withdrawal drops the imposition."""
    for task, pend in sorted(state.pending.items()):
        if pend.imposer == imposer:
            del state.pending[task]
            if proceed:
                return Action(ActionKind.USE, program=pend.program, task=pend.task)
            return None
    return None


def on_outcome(
    state: AgentState,
    program: str,
    task: str,
    result: Outcome,
    now: int,
    policy: TramPolicy = TramPolicy.INCREMENTAL,
) -> list:
    """Assess all active adequacy fragments matching the observed outcome and
    update trust in each promiser.  Returns the applied trust deltas."""
    records = state.active_adequacy_records(program, task)
    deltas = []
    for rec in sorted(records, key=lambda r: r.token):
        rec.assess(result, now)
        key = AppreciationKey(
            AppreciationKind.GENERAL_TRUST, state.id, rec.fragment.promiser
        )
        level = state.trust.record_assessment(key, result, now, policy)
        deltas.append(
            TrustDelta(target=rec.fragment.promiser, outcome=result, level=level)
        )
    if (program, task) in state.prepared:
        state.prepared[(program, task)].used_before = True
    state.prune_adequacy_index()
    return deltas
