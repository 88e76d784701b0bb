"""Deterministic scenario engine.

A scenario is a line-oriented script: a header block (policy, initial trust,
attributes, profiles) followed by tick-ordered event directives.  Running a
scenario produces a line-oriented trace; the same scenario always produces a
byte-identical trace.

Per tick the engine (1) injects the scripted directives, (2) fragments and
delivers issued statements to every agent in effective scope plus the
promisee, (3) lets receiving agents gate on credibility and react by their
trust rules in lexicographic order, (4) applies outcome assessments and
trust updates, (5) advances fading for all active fragments, and (6) detects
globally terminated statements.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

from . import agents as agent_rules
from .agents import (
    Action,
    ActionKind,
    AdequacyTagError,
    AgentState,
    parse_adequacy_tag,
)
from .appraisal import (
    DEFAULT_GATE_FLOOR,
    DISCARD_FAST_MULTIPLIER,
    AttributeVector,
    ConsultantProfile,
    InstallVerdict,
    Route,
    attribute_install_decision,
    credibility_gate,
    credibility_level,
    credibility_score,
)
from .lifecycle import LifecycleError, LifecycleRecord, LifecycleState
from .reputation import (
    DEFAULT_RECENT_WINDOW,
    LorExchange,
    LorResponse,
    lor_update,
    survey_reinit,
)
from .statements import (
    Body,
    DirectionalKind,
    FadeSpec,
    FragmentCounter,
    Statement,
    StatementError,
    equivalent,
    fragment_on_issue,
    parse as parse_statement,
)
from .trust import (
    AppreciationKey,
    AppreciationKind,
    Outcome,
    TramPolicy,
)

__all__ = [
    "ScenarioError",
    "InterleavingStrategy",
    "PolicyHeader",
    "Directive",
    "Scenario",
    "ExpectResult",
    "RunResult",
    "load",
    "load_path",
    "run",
    "expect_check",
]


class ScenarioError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InterleavingStrategy(Enum):
    FILE_ORDER = "file-order"
    ROUND_ROBIN = "round-robin"


_EVENT_NAMES = {
    "issue",
    "impose",
    "outcome",
    "withdraw",
    "lor-request",
    "survey",
    "reply",
    "expect-trust",
    "trust",
}
_INITIAL_NAMES = {"policy", "trust", "attr", "profile", "expect-trust"}


@dataclass
class PolicyHeader:
    tram: TramPolicy = TramPolicy.INCREMENTAL
    gate_floor: Fraction = DEFAULT_GATE_FLOOR
    fade_span: int = 100
    fade_threshold: Fraction = Fraction(1, 20)
    seed: int = 0
    interleave: InterleavingStrategy = InterleavingStrategy.FILE_ORDER
    penalize_incredible: bool = False
    recent_window: int = DEFAULT_RECENT_WINDOW

    @property
    def default_fade(self) -> FadeSpec:
        return FadeSpec(span=self.fade_span, threshold=self.fade_threshold)


@dataclass(frozen=True)
class Directive:
    tick: int
    line: int
    name: str
    args: tuple
    statement: Optional[Statement] = None


@dataclass
class Scenario:
    header: PolicyHeader
    initial: list
    events: list

    @property
    def directives(self):
        return self.initial + self.events


def _parse_bool(value: str, line: int) -> bool:
    if value in ("true", "1", "yes"):
        return True
    if value in ("false", "0", "no"):
        return False
    raise ScenarioError(f"expected boolean, got {value!r}", line)


def _parse_level(value: str, line: int) -> int:
    try:
        level = int(value)
    except ValueError:
        raise ScenarioError(f"expected trust level, got {value!r}", line)
    if not -2 <= level <= 2:
        raise ScenarioError(f"level {level} outside [-2,2]", line)
    return level


def _apply_policy_tokens(header: PolicyHeader, tokens, line: int):
    for token in tokens:
        if "=" not in token:
            raise ScenarioError(f"malformed policy setting {token!r}", line)
        key, value = token.split("=", 1)
        try:
            if key == "tram":
                header.tram = (
                    TramPolicy.RECENCY
                    if value in ("recency", "recency-history")
                    else TramPolicy(value)
                )
            elif key == "gate":
                header.gate_floor = Fraction(value)
            elif key == "fade-span":
                header.fade_span = int(value)
            elif key == "fade-threshold":
                header.fade_threshold = Fraction(value)
            elif key == "seed":
                header.seed = int(value)
            elif key == "interleave":
                header.interleave = InterleavingStrategy(value)
            elif key == "penalize-incredible":
                header.penalize_incredible = _parse_bool(value, line)
            elif key == "recent-window":
                header.recent_window = int(value)
            else:
                raise ScenarioError(f"unknown policy setting {key!r}", line)
        except (ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, ScenarioError):
                raise
            raise ScenarioError(f"bad policy value {token!r}", line)


def load(text: str) -> Scenario:
    """Parse and validate a scenario script."""
    header = PolicyHeader()
    initial: list = []
    events: list = []
    current_tick: Optional[int] = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        tokens = stripped.split()
        name = tokens[0]
        if name == "tick":
            if len(tokens) != 2:
                raise ScenarioError("tick takes one argument", line_no)
            try:
                tick = int(tokens[1])
            except ValueError:
                raise ScenarioError(f"bad tick {tokens[1]!r}", line_no)
            if tick < 0 or (current_tick is not None and tick <= current_tick):
                raise ScenarioError(
                    f"tick {tick} not after previous tick {current_tick}", line_no
                )
            current_tick = tick
            continue
        if current_tick is None:
            if name not in _INITIAL_NAMES:
                raise ScenarioError(
                    f"directive {name!r} not allowed before the first tick", line_no
                )
            if name == "policy":
                _apply_policy_tokens(header, tokens[1:], line_no)
                continue
            initial.append(_parse_directive(name, tokens, stripped, 0, line_no))
            continue
        if name not in _EVENT_NAMES:
            raise ScenarioError(f"unknown directive {name!r}", line_no)
        events.append(
            _parse_directive(name, tokens, stripped, current_tick, line_no)
        )
    return Scenario(header=header, initial=initial, events=events)


def load_path(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as handle:
        return load(handle.read())


def _parse_directive(name, tokens, stripped, tick, line_no) -> Directive:
    statement = None
    if name == "issue":
        text = stripped[len("issue") :].strip()
        try:
            statement = parse_statement(text)
        except StatementError as exc:
            raise ScenarioError(f"bad statement: {exc}", line_no)
        if statement.subject is not None:
            raise ScenarioError("issued statements may not carry a subject", line_no)
        args = (text,)
    elif name in ("trust", "expect-trust"):
        body = tokens[1:]
        if len(body) < 4 or body[-2] != "=":
            raise ScenarioError(f"malformed {name} directive", line_no)
        level = _parse_level(body[-1], line_no)
        subject, target = body[0], body[1]
        extras = dict(
            t.split("=", 1) for t in body[2:-2] if "=" in t
        )
        if len(extras) != len(body) - 4:
            raise ScenarioError(f"malformed {name} directive", line_no)
        args = (subject, target, extras.get("program"), extras.get("task"), level)
    elif name == "attr":
        body = tokens[1:]
        if len(body) != 4 or body[2] != "=" or "=" not in body[1]:
            raise ScenarioError("usage: attr <name> <entity>=<id> = <level>", line_no)
        entity_kind, entity_id = body[1].split("=", 1)
        args = (body[0], entity_kind, entity_id, _parse_level(body[3], line_no))
    elif name == "profile":
        if len(tokens) < 2:
            raise ScenarioError("profile requires an agent", line_no)
        settings = {}
        for token in tokens[2:]:
            if "=" not in token:
                raise ScenarioError(f"malformed profile setting {token!r}", line_no)
            key, value = token.split("=", 1)
            if key not in (
                "independent",
                "experienced",
                "range",
                "reputation",
                "affiliated",
            ):
                raise ScenarioError(f"unknown profile setting {key!r}", line_no)
            settings[key] = value
        args = (tokens[1], tuple(sorted(settings.items())))
    elif name == "impose":
        if len(tokens) < 4 or not tokens[3].startswith("task="):
            raise ScenarioError(
                "usage: impose <from> <to> task=<T> [strength=<1..10>]", line_no
            )
        strength = None
        if len(tokens) == 5 and tokens[4].startswith("strength="):
            strength = int(tokens[4].split("=", 1)[1])
        elif len(tokens) > 4:
            raise ScenarioError("malformed impose directive", line_no)
        args = (tokens[1], tokens[2], tokens[3].split("=", 1)[1], strength)
    elif name == "outcome":
        kv = dict(t.split("=", 1) for t in tokens[2:] if "=" in t)
        if len(tokens) != 5 or set(kv) != {"program", "task", "result"}:
            raise ScenarioError(
                "usage: outcome <agent> program=<P> task=<T> result=success|failure",
                line_no,
            )
        if kv["result"] not in ("success", "failure"):
            raise ScenarioError(f"bad result {kv['result']!r}", line_no)
        args = (tokens[1], kv["program"], kv["task"], kv["result"])
    elif name == "withdraw":
        if len(tokens) != 3 or not tokens[2].startswith("token="):
            raise ScenarioError("usage: withdraw <promiser> token=<id>", line_no)
        args = (tokens[1], tokens[2].split("=", 1)[1])
    elif name == "lor-request":
        if len(tokens) != 4 or not tokens[3].startswith("about="):
            raise ScenarioError(
                "usage: lor-request <asker> <peer> about=<target>", line_no
            )
        args = (tokens[1], tokens[2], tokens[3].split("=", 1)[1])
    elif name == "survey":
        kv = dict(t.split("=", 1) for t in tokens[2:] if "=" in t)
        if len(tokens) < 4 or "group" not in kv or "about" not in kv:
            raise ScenarioError(
                "usage: survey <surveyor> group=<a,b> about=<target> [window=<n>]",
                line_no,
            )
        window = int(kv["window"]) if "window" in kv else None
        args = (tokens[1], tuple(kv["group"].split(",")), kv["about"], window)
    elif name == "reply":
        if len(tokens) != 4 or tokens[3] not in ("proceed", "withdraw"):
            raise ScenarioError("usage: reply <from> <to> proceed|withdraw", line_no)
        args = (tokens[1], tokens[2], tokens[3])
    else:
        raise ScenarioError(f"unknown directive {name!r}", line_no)
    return Directive(
        tick=tick, line=line_no, name=name, args=args, statement=statement
    )


@dataclass(frozen=True)
class ExpectResult:
    tick: int
    line: int
    subject: str
    target: str
    expected: int
    actual: int

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


@dataclass
class RunResult:
    trace: list
    expects: list
    agents: dict

    def trace_text(self) -> str:
        return "".join(line + "\n" for line in self.trace)


def _fmt_fraction(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    s = f"{float(x):.10f}".rstrip("0").rstrip(".")
    return s if s else "0"


_SOURCE_ARG = 0  # every event directive names its source agent first


class _Engine:
    def __init__(self, scenario: Scenario):
        self.header = scenario.header
        self.scenario = scenario
        self.agents: dict = {}
        self.counter = FragmentCounter()
        self.trace: list = []
        self.expects: list = []
        self.attrs: dict = {}
        self.profiles: dict = {}
        self.records_by_token: dict = {}
        self.announced_tokens: set = set()
        # reserved for optional drift/fuzz switches; core semantics use none
        self.rng = random.Random(self.header.seed)

    # -- helpers -----------------------------------------------------------

    def agent(self, name: str) -> AgentState:
        if name not in self.agents:
            self.agents[name] = AgentState(id=name)
        return self.agents[name]

    def emit(self, line: str):
        self.trace.append(line)

    def emit_trust(self, tick, subject, target, kind, level, cause):
        self.emit(
            f"t={tick} trust subject={subject} target={target} "
            f"kind={kind} level={level} cause={cause}"
        )

    def emit_lifecycle(self, tick, rec: LifecycleRecord):
        rate = _fmt_fraction(rec.fade_rate_multiplier)
        self.emit(
            f"t={tick} lifecycle token={rec.token} subject={rec.fragment.subject} "
            f"state={rec.state.value} fade={_fmt_fraction(rec.fade_level)} rate={rate}"
        )

    def emit_action(self, tick, agent_id, action: Action):
        self.emit(
            f"t={tick} agent={agent_id} action={action.kind.value} "
            f"detail={action.detail()}"
        )

    def general_key(self, subject, target) -> AppreciationKey:
        return AppreciationKey(AppreciationKind.GENERAL_TRUST, subject, target)

    def merged_attrs(self, program, task) -> AttributeVector:
        merged = AttributeVector()
        for entity in (program, task):
            for name, value in self.attrs.get(entity, {}).items():
                merged[name] = value
        return merged

    def gate_score(self, stmt: Statement) -> Fraction:
        profile = self.profiles.get(stmt.promiser)
        if profile is None:
            return Fraction(1, 2)
        try:
            focus = parse_adequacy_tag(stmt.type_tag)[0]
        except AdequacyTagError:
            focus = stmt.type_tag
        return credibility_score(credibility_level(profile, focus))

    # -- run loop ----------------------------------------------------------

    def run(self) -> RunResult:
        for directive in self.scenario.initial:
            self.apply_initial(directive)
        ticks: dict = {}
        for directive in self.scenario.events:
            ticks.setdefault(directive.tick, []).append(directive)
        for tick in sorted(ticks):
            for directive in self.order_within_tick(ticks[tick]):
                self.apply_event(directive)
            self.fade_step(tick)
            self.termination_step(tick)
        return RunResult(trace=self.trace, expects=self.expects, agents=self.agents)

    def order_within_tick(self, directives):
        if self.header.interleave is InterleavingStrategy.FILE_ORDER:
            return directives
        by_source: dict = {}
        for directive in directives:
            by_source.setdefault(self.source_of(directive), []).append(directive)
        queues = [by_source[src] for src in sorted(by_source)]
        ordered = []
        while any(queues):
            for queue in queues:
                if queue:
                    ordered.append(queue.pop(0))
        return ordered

    def source_of(self, directive: Directive) -> str:
        if directive.name == "issue":
            return directive.statement.promiser
        return directive.args[_SOURCE_ARG]

    # -- initial block -----------------------------------------------------

    def apply_initial(self, directive: Directive):
        if directive.name == "trust":
            subject, target, program, task, level = directive.args
            key = self.trust_key(subject, target, program, task)
            self.agent(subject).trust.set(key, level)
            self.agent(target)
            self.emit_trust(0, subject, target, key.kind.value, level, "init")
        elif directive.name == "attr":
            name, _entity_kind, entity_id, level = directive.args
            vector = self.attrs.setdefault(entity_id, {})
            AttributeVector({name: level})  # validates name and level
            vector[name] = level
        elif directive.name == "profile":
            agent_id, settings = directive.args
            self.profiles[agent_id] = self.build_profile(agent_id, dict(settings))
        elif directive.name == "expect-trust":
            self.check_expectation(directive)
        else:  # pragma: no cover - guarded by load()
            raise AssertionError(directive.name)

    def trust_key(self, subject, target, program, task) -> AppreciationKey:
        if program and task:
            kind = AppreciationKind.CONFIDENCE
        elif task:
            kind = AppreciationKind.TASK_TRUST
        elif program:
            kind = AppreciationKind.PROGRAM_TRUST
        else:
            kind = AppreciationKind.GENERAL_TRUST
        return AppreciationKey(kind, subject, target, program=program, task=task)

    def build_profile(self, agent_id, settings) -> ConsultantProfile:
        def ids(key):
            raw = settings.get(key, "")
            return frozenset(x for x in raw.split(",") if x)

        return ConsultantProfile(
            agent=agent_id,
            independent=settings.get("independent", "true") in ("true", "1", "yes"),
            experienced_with=ids("experienced"),
            consulted_range=ids("range"),
            recognized_reputation=ids("reputation"),
            producer_affiliation=ids("affiliated"),
        )

    # -- events ------------------------------------------------------------

    def apply_event(self, directive: Directive):
        handler = {
            "issue": self.on_issue,
            "impose": self.on_impose,
            "outcome": self.on_outcome,
            "withdraw": self.on_withdraw,
            "lor-request": self.on_lor_request,
            "survey": self.on_survey,
            "reply": self.on_reply,
            "expect-trust": self.check_expectation,
            "trust": self.on_trust_event,
        }[directive.name]
        handler(directive)

    def on_trust_event(self, directive: Directive):
        subject, target, program, task, level = directive.args
        key = self.trust_key(subject, target, program, task)
        self.agent(subject).trust.set(key, level)
        self.emit_trust(
            directive.tick, subject, target, key.kind.value, level, "init"
        )

    def on_issue(self, directive: Directive):
        self.deliver(directive.statement, directive.tick)

    def deliver(self, stmt: Statement, tick: int):
        fragments = fragment_on_issue(
            stmt, tick, self.counter, default_fade=self.header.default_fade
        )
        token = fragments[0].identity.token
        self.emit(
            f"t={tick} issue promiser={stmt.promiser} promisee={stmt.promisee} "
            f"kind={stmt.kind.value} type={stmt.type_tag} token={token}"
        )
        for fragment in fragments:
            subject = fragment.subject
            self.emit(f"t={tick} deliver token={token} subject={subject}")
            state = self.agent(subject)
            refreshed = self.try_refresh(state, stmt, tick)
            if refreshed is not None:
                self.emit_lifecycle(tick, refreshed)
                continue
            rec = LifecycleRecord(fragment=fragment, last_update=tick)
            route = credibility_gate(self.gate_score(stmt), self.header.gate_floor)
            if route is Route.DISCARD_FAST:
                rec.fade_rate_multiplier = Fraction(DISCARD_FAST_MULTIPLIER)
            holder = (
                state.portfolio
                if stmt.kind is DirectionalKind.IMPOSITION
                else state.fragments
            )
            holder.append(rec)
            self.records_by_token.setdefault(token, []).append(rec)
            if route is Route.DISCARD_FAST:
                self.emit_lifecycle(tick, rec)
                if self.header.penalize_incredible and subject != stmt.promiser:
                    level = state.trust.record_assessment(
                        self.general_key(subject, stmt.promiser),
                        Outcome.BROKEN,
                        tick,
                        self.header.tram,
                    )
                    self.emit_trust(
                        tick, subject, stmt.promiser, "general-trust", level, "broken"
                    )
                continue
            if subject == stmt.promisee and stmt.kind is DirectionalKind.PROMISE:
                self.react_to_promise(state, fragment, tick)

    def try_refresh(self, state: AgentState, stmt: Statement, tick: int):
        """Repetition of an equivalent statement refreshes fading instead of
        piling up duplicate fragments; trust is unaffected."""
        for rec in state.fragments + state.portfolio:
            if rec.state is LifecycleState.ACTIVE and equivalent(rec.fragment, stmt):
                return rec.refresh_on_repetition(stmt, tick)
        return None

    def react_to_promise(self, state: AgentState, fragment: Statement, tick: int):
        try:
            program, task = parse_adequacy_tag(fragment.type_tag)
        except AdequacyTagError:
            return
        verdict = attribute_install_decision(self.merged_attrs(program, task))
        if verdict is InstallVerdict.NO_RULE:
            actions = agent_rules.on_adequacy_promise(state, fragment, tick)
        else:
            issued = fragment.issue_time if fragment.issue_time is not None else tick
            state.adequacy_index.setdefault((program, task), []).append(
                (fragment.promiser, issued)
            )
            if verdict is InstallVerdict.REFUSE_INSTALL:
                actions = [
                    Action(ActionKind.REFUSE_INSTALL, program=program, task=task)
                ]
            else:
                actions = []
                if (program, task) not in state.prepared:
                    state.prepared[(program, task)] = agent_rules.PreparedEntry(
                        since=tick
                    )
                    actions.append(
                        Action(ActionKind.PREPARE, program=program, task=task)
                    )
        for action in actions:
            self.emit_action(tick, state.id, action)

    def on_impose(self, directive: Directive):
        imposer, target, task, strength = directive.args
        stmt = Statement(
            kind=DirectionalKind.IMPOSITION,
            promiser=imposer,
            promisee=target,
            type_tag=f"perform({task})",
            body=Body(text=f"perform task {task}"),
            strength=strength,
        )
        self.deliver(stmt, directive.tick)
        state = self.agent(target)
        for action in agent_rules.on_imposition(state, imposer, task):
            self.emit_action(directive.tick, target, action)

    def on_outcome(self, directive: Directive):
        agent_id, program, task, result = directive.args
        state = self.agent(agent_id)
        records = state.active_adequacy_records(program, task)
        if not records:
            self.emit(
                f"t={directive.tick} warning agent={agent_id} "
                f"detail=no-matching-fragment,program={program},task={task}"
            )
            return
        outcome = Outcome.KEPT if result == "success" else Outcome.BROKEN
        ordered = sorted(records, key=lambda r: r.token)
        agent_rules.on_outcome(
            state, program, task, outcome, directive.tick, self.header.tram
        )
        for rec in ordered:
            self.emit_lifecycle(directive.tick, rec)
            promiser = rec.fragment.promiser
            level = state.trust.get(self.general_key(agent_id, promiser))
            self.emit_trust(
                directive.tick, agent_id, promiser, "general-trust", level,
                outcome.value,
            )
        for action in agent_rules.apply_unload_rule(state):
            self.emit_action(directive.tick, agent_id, action)

    def on_withdraw(self, directive: Directive):
        promiser, token = directive.args
        records = self.records_by_token.get(token, [])
        touched = False
        for rec in records:
            if rec.state is LifecycleState.ACTIVE:
                try:
                    rec.withdraw(promiser, directive.tick)
                except LifecycleError as exc:
                    self.emit(
                        f"t={directive.tick} warning agent={promiser} "
                        f"detail=withdraw-rejected,token={token},reason={exc}"
                    )
                    return
                self.emit_lifecycle(directive.tick, rec)
                touched = True
        if not touched:
            self.emit(
                f"t={directive.tick} warning agent={promiser} "
                f"detail=withdraw-no-active-fragment,token={token}"
            )

    def on_lor_request(self, directive: Directive):
        asker, peer, about = directive.args
        peer_level = self.agent(peer).trust_in(about)
        new_level = lor_update(self.agent(asker).trust_in(about), peer_level)
        response = (
            LorResponse.REFUSED if new_level is None else LorResponse.COMMUNICATED
        )
        LorExchange(
            asker=asker, peer=peer, about=about,
            peer_level=peer_level, response=response,
        )
        self.emit(
            f"t={directive.tick} reputation kind=lor asker={asker} peer={peer} "
            f"about={about} peer-level={peer_level} response={response.value}"
        )
        if new_level is not None:
            self.agent(asker).trust.set(self.general_key(asker, about), new_level)
            self.emit_trust(
                directive.tick, asker, about, "general-trust", new_level, "lor"
            )

    def on_survey(self, directive: Directive):
        surveyor, group, about, window = directive.args
        window = window if window is not None else self.header.recent_window
        levels = {m: self.agent(m).trust_in(about) for m in group}
        average = Fraction(sum(levels.values()), len(levels))
        self.emit(
            f"t={directive.tick} reputation kind=survey surveyor={surveyor} "
            f"about={about} group={','.join(sorted(group))} "
            f"average={_fmt_fraction(average)}"
        )
        for member in sorted(group):
            key = self.general_key(member, about)
            last = self.agent(member).trust.last_experience_tick(key)
            recent = last is not None and directive.tick - last <= window
            new_level = survey_reinit(levels[member], average, recent)
            if not recent:
                self.agent(member).trust.set(key, new_level)
                self.emit_trust(
                    directive.tick, member, about, "general-trust", new_level,
                    "survey",
                )

    def on_reply(self, directive: Directive):
        sender, receiver, decision = directive.args
        action = agent_rules.resolve_reply(
            self.agent(receiver), sender, proceed=(decision == "proceed")
        )
        if action is not None:
            self.emit_action(directive.tick, receiver, action)

    def check_expectation(self, directive: Directive):
        subject, target, _program, _task, expected = directive.args
        actual = self.agent(subject).trust_in(target)
        self.expects.append(
            ExpectResult(
                tick=directive.tick,
                line=directive.line,
                subject=subject,
                target=target,
                expected=expected,
                actual=actual,
            )
        )

    # -- per-tick closing steps -------------------------------------------

    def fade_step(self, tick: int):
        for agent_id in sorted(self.agents):
            state = self.agents[agent_id]
            records = sorted(
                state.fragments + state.portfolio, key=lambda r: r.token
            )
            for rec in records:
                if rec.state is not LifecycleState.ACTIVE:
                    continue
                rec.step_fade(tick)
                if rec.state is LifecycleState.FADED:
                    self.emit_lifecycle(tick, rec)
            state.prune_adequacy_index()

    def termination_step(self, tick: int):
        for token in sorted(self.records_by_token):
            if token in self.announced_tokens:
                continue
            records = self.records_by_token[token]
            if records and all(r.terminal for r in records):
                self.announced_tokens.add(token)
                self.emit(f"t={tick} terminated token={token}")


def run(scenario: Scenario, **overrides) -> RunResult:
    """Run a scenario deterministically.

    ``overrides`` may replace header fields (tram, seed, interleave, ...)
    without editing the scenario, mirroring the CLI flags.
    """
    if overrides:
        header = PolicyHeader(**{**scenario.header.__dict__, **overrides})
        scenario = Scenario(
            header=header, initial=scenario.initial, events=scenario.events
        )
    return _Engine(scenario).run()


def expect_check(scenario: Scenario, result: Optional[RunResult] = None):
    """Evaluate the scenario's expect-trust assertions; returns the failures."""
    if result is None:
        result = run(scenario)
    return [e for e in result.expects if not e.passed]
