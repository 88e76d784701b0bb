import pytest

from coopsim.agents import (
    Action,
    ActionKind,
    AdequacyTagError,
    AgentState,
    PreparedEntry,
    apply_unload_rule,
    on_adequacy_promise,
    on_imposition,
    on_outcome,
    on_task_request,
    parse_adequacy_tag,
    resolve_reply,
)
from coopsim.lifecycle import LifecycleRecord, LifecycleState
from coopsim.statements import FragmentCounter, fragment_on_issue, parse
from coopsim.trust import AppreciationKey, AppreciationKind, Outcome, TramPolicy

COUNTER = None


def make_agent(name="q", **trust):
    state = AgentState(id=name)
    for target, level in trust.items():
        state.trust.set(
            AppreciationKey(AppreciationKind.GENERAL_TRUST, name, target), level
        )
    return state


def adequacy(promiser, program, task, counter, now=0):
    stmt = parse(f'{promiser}[adequacy({program},{task}):"adequate"/{{q}}]q')
    frags = fragment_on_issue(stmt, now, counter)
    return next(f for f in frags if f.subject == "q")


def give_promise(state, promiser, program, task, counter, now=0):
    frag = adequacy(promiser, program, task, counter, now)
    state.fragments.append(LifecycleRecord(fragment=frag, last_update=now))
    return on_adequacy_promise(state, frag, now)


def test_adequacy_tag_parsing():
    assert parse_adequacy_tag("adequacy(P,U)") == ("P", "U")
    with pytest.raises(AdequacyTagError):
        parse_adequacy_tag("perform(U)")


def test_positive_trust_prepares():
    state = make_agent(p=1)
    actions = give_promise(state, "p", "P", "U", FragmentCounter())
    assert actions == [Action(ActionKind.PREPARE, program="P", task="U")]
    assert ("P", "U") in state.prepared


def test_nonpositive_trust_refuses():
    for level in (0, -1):
        state = make_agent(p=level)
        actions = give_promise(state, "p", "P", "U", FragmentCounter())
        assert actions == [Action(ActionKind.REFUSE_INSTALL, program="P", task="U")]
        assert ("P", "U") not in state.prepared


def test_repeat_promise_is_idempotent_on_prepare():
    state = make_agent(p=1)
    counter = FragmentCounter()
    give_promise(state, "p", "P", "U", counter)
    assert give_promise(state, "p", "P", "U", counter, now=1) == []


def test_distrusted_sole_promiser_unloads():
    state = make_agent(p=1)
    counter = FragmentCounter()
    give_promise(state, "p", "P", "U", counter)
    state.trust.set(
        AppreciationKey(AppreciationKind.GENERAL_TRUST, "q", "p"), -2
    )
    actions = give_promise(state, "p", "P", "U", counter, now=1)
    assert actions == [Action(ActionKind.UNLOAD, program="P", task="U")]
    assert ("P", "U") not in state.prepared


def test_unload_spared_when_other_promiser_remains():
    state = make_agent(p=1, p2=1)
    counter = FragmentCounter()
    give_promise(state, "p", "P", "U", counter)
    give_promise(state, "p2", "P", "U", counter)
    state.trust.set(
        AppreciationKey(AppreciationKind.GENERAL_TRUST, "q", "p"), -2
    )
    assert apply_unload_rule(state) == []
    assert ("P", "U") in state.prepared


def test_unload_sweep_after_trust_change():
    state = make_agent(p=1)
    give_promise(state, "p", "P", "U", FragmentCounter())
    state.trust.set(
        AppreciationKey(AppreciationKind.GENERAL_TRUST, "q", "p"), -2
    )
    assert apply_unload_rule(state) == [
        Action(ActionKind.UNLOAD, program="P", task="U")
    ]


def test_task_request_no_candidate_fails():
    state = make_agent()
    assert on_task_request(state, "U") == Action(ActionKind.FAIL, task="U")


@pytest.mark.parametrize(
    "level,used_before,expected",
    [
        (2, False, ActionKind.USE),
        (1, False, ActionKind.USE),
        (0, False, ActionKind.USE),
        (-1, False, ActionKind.FAIL),
        (-1, True, ActionKind.USE),
        (-2, False, ActionKind.FAIL),
        (-2, True, ActionKind.FAIL),
    ],
)
def test_single_candidate_trust_rules(level, used_before, expected):
    state = make_agent(p=1)
    give_promise(state, "p", "P", "U", FragmentCounter())
    state.prepared[("P", "U")].used_before = used_before
    state.trust.set(
        AppreciationKey(AppreciationKind.GENERAL_TRUST, "q", "p"), level
    )
    assert on_task_request(state, "U").kind is expected


def test_argmax_prefers_highest_promiser_trust():
    state = make_agent(p1=2, p2=1)
    counter = FragmentCounter()
    give_promise(state, "p1", "A", "U", counter)
    give_promise(state, "p2", "B", "U", counter)
    assert on_task_request(state, "U") == Action(ActionKind.USE, program="A", task="U")


def test_argmax_tie_breaks_on_trust_sum():
    state = make_agent(p1=1, p2=1, p3=1)
    counter = FragmentCounter()
    give_promise(state, "p1", "A", "U", counter)
    give_promise(state, "p2", "B", "U", counter)
    give_promise(state, "p3", "B", "U", counter)
    assert on_task_request(state, "U").program == "B"


def test_argmax_tie_breaks_on_recency_then_name():
    state = make_agent(p1=1, p2=1)
    counter = FragmentCounter()
    give_promise(state, "p1", "A", "U", counter, now=1)
    give_promise(state, "p2", "B", "U", counter, now=3)
    assert on_task_request(state, "U").program == "B"

    state2 = make_agent(p1=1, p2=1)
    counter2 = FragmentCounter()
    give_promise(state2, "p1", "A", "U", counter2, now=2)
    give_promise(state2, "p2", "B", "U", counter2, now=2)
    assert on_task_request(state2, "U").program == "A"


def balancing_case(trust_s, trust_p):
    state = make_agent(p=1, s=trust_s)
    give_promise(state, "p", "P", "U", FragmentCounter())
    state.trust.set(
        AppreciationKey(AppreciationKind.GENERAL_TRUST, "q", "p"), trust_p
    )
    return state, on_imposition(state, "s", "U")


def test_balancing_full_trust_in_impositioner():
    _, actions = balancing_case(2, 2)
    assert actions[0].kind is ActionKind.USE
    state, actions = balancing_case(2, 1)
    assert actions == [Action(ActionKind.WARN, task="U", target="s")]
    assert "U" in state.pending
    for trust_p in (0, -1, -2):
        _, actions = balancing_case(2, trust_p)
        assert actions == [
            Action(ActionKind.PROPOSE_WITHDRAW, task="U", target="s")
        ]


def test_balancing_partial_trust_in_impositioner():
    for trust_p in (1, 2):
        _, actions = balancing_case(1, trust_p)
        assert actions[0].kind is ActionKind.USE
    for trust_p in (0, -1, -2):
        _, actions = balancing_case(1, trust_p)
        assert actions == [
            Action(ActionKind.PROPOSE_WITHDRAW, task="U", target="s")
        ]


def test_untrusted_impositioner_falls_through():
    _, actions = balancing_case(0, 1)
    assert actions == [Action(ActionKind.USE, program="P", task="U")]
    _, actions = balancing_case(-1, -1)
    assert actions == [Action(ActionKind.FAIL, task="U")]


def test_reply_resolution():
    state, _ = balancing_case(2, 1)
    action = resolve_reply(state, "s", proceed=True)
    assert action == Action(ActionKind.USE, program="P", task="U")
    assert state.pending == {}

    state, _ = balancing_case(2, 1)
    assert resolve_reply(state, "s", proceed=False) is None
    assert state.pending == {}
    assert resolve_reply(state, "s", proceed=True) is None


def test_outcome_updates_trust_and_terminates_records():
    state = make_agent(p=1)
    give_promise(state, "p", "P", "U", FragmentCounter())
    deltas = on_outcome(state, "P", "U", Outcome.BROKEN, 5, TramPolicy.INCREMENTAL)
    assert [d.level for d in deltas] == [0]
    assert state.trust_in("p") == 0
    assert all(r.state is LifecycleState.BROKEN for r in state.fragments)
    assert state.prepared[("P", "U")].used_before
    # the promiser's broken promise no longer backs the program
    assert state.promisers_for("P", "U") == set()
