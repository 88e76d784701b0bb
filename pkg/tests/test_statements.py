import pytest
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from coopsim.statements import (
    DEFAULT_FADE,
    Body,
    DirectionalKind,
    FadeSpec,
    FragmentCounter,
    ScopeMembershipError,
    Statement,
    StatementError,
    StatementSyntaxError,
    ValidityWindow,
    WindowOrderError,
    equivalent,
    fragment_on_issue,
    normalize,
    parse,
    render,
)

# one fixture per syntactic layer, ground form up to the fully dressed form
FORM_FIXTURES = {
    "ground": 'p[pi:"b"]q',
    "scoped": 'p[pi:"b"/{q,r}]q',
    "episode": 'p[pi:(5,"b",8)]q',
    "issuing": 'p[u=3,pi:(5,"b",8)]q',
    "observation": 'p[w=9,q/u=3,pi:(5,"b",8)]q',
    "fragmentation": 'p[w=9,q/pi:"b"]q',
    "identification": 'p[w=9,q(k1)/pi:"b"]q',
    "binding": 'p[w=9,q(x)/pi:"b"]q',
    "fading": 'p[w=9,q,fade(100,0.05)/pi:"b"]q',
    "full": 'p[w=9,q(k1),fade(100,0.05)/u=3,pi:(5,"b",8)/{p,q}]q',
}


@pytest.mark.parametrize("name", sorted(FORM_FIXTURES))
def test_form_fixture_roundtrip(name):
    text = FORM_FIXTURES[name]
    assert render(parse(text)) == text


def test_ground_form_fields():
    s = parse('p[pi:"b"]q')
    assert s.kind is DirectionalKind.PROMISE
    assert (s.promiser, s.promisee, s.type_tag) == ("p", "q", "pi")
    assert s.body == Body("b")
    assert s.scope == frozenset()
    assert s.strength is None


@pytest.mark.parametrize(
    "keyword,kind",
    [
        ("impose", DirectionalKind.IMPOSITION),
        ("suggest", DirectionalKind.SUGGESTION),
        ("warn", DirectionalKind.WARNING),
        ("propose", DirectionalKind.PROPOSAL),
        ("predict", DirectionalKind.PREDICTION),
    ],
)
def test_kind_keywords(keyword, kind):
    text = f'p[{keyword}!pi:"b"]q'
    s = parse(text)
    assert s.kind is kind
    assert render(s) == text


def test_promise_keyword_is_not_canonical():
    s = parse('p[promise!pi:"b"]q')
    assert s.kind is DirectionalKind.PROMISE
    assert render(s) == 'p[pi:"b"]q'


def test_conditional_episode_roundtrip():
    text = 'p[pi:(5,"b"if"c",8)]q'
    s = parse(text)
    assert s.body.condition == "c"
    assert s.window == ValidityWindow(5, 8)
    assert render(s) == text


def test_parenthesized_type_tag():
    s = parse('p[adequacy(P,U):"b"]q')
    assert s.type_tag == "adequacy(P,U)"


def test_strength_on_imposition_only():
    s = parse('s[impose!perform(U):"do u"@6]q')
    assert s.strength == 6
    with pytest.raises(StatementSyntaxError):
        parse('p[pi:"b"@6]q')
    with pytest.raises(StatementSyntaxError):
        parse('s[impose!pi:"b"@11]q')


def test_syntax_error_reports_column():
    with pytest.raises(StatementSyntaxError) as exc:
        parse('p[pi "b"]q')
    assert exc.value.column == 5


def test_empty_body_rejected():
    with pytest.raises(StatementSyntaxError):
        parse('p[pi:""]q')
    with pytest.raises(StatementError):
        Body("")


def test_trailing_input_rejected():
    with pytest.raises(StatementSyntaxError):
        parse('p[pi:"b"]q extra')


def test_window_order_violation():
    with pytest.raises(WindowOrderError):
        parse('p[pi:(9,"b",5)]q')


def test_observation_before_issue_rejected():
    with pytest.raises(WindowOrderError):
        parse('p[w=2,q/u=5,pi:"b"]q')


def test_subject_outside_scope_rejected():
    with pytest.raises(ScopeMembershipError):
        parse('p[w=9,z/pi:"b"]q')


def test_subject_may_be_promiser_or_promisee():
    assert parse('p[w=9,p/pi:"b"]q').subject == "p"
    assert parse('p[w=9,q/pi:"b"]q').subject == "q"


def test_fade_spec_validation():
    with pytest.raises(StatementError):
        FadeSpec(span=0, threshold=Fraction(1, 20))
    with pytest.raises(StatementError):
        FadeSpec(span=10, threshold=Fraction(0))


def test_normalize_and_equivalence():
    a = parse('p[pi:"Keep  The   Promise"]q')
    b = parse('p[pi:"keep the promise"/{r}]q')
    assert normalize(a.body) == normalize(b.body)
    assert equivalent(a, b)  # scope is irrelevant to equivalence
    c = parse('p[pi:"keep another promise"]q')
    assert not equivalent(a, c)
    d = parse('q[pi:"keep the promise"]p')
    assert not equivalent(a, d)


def test_fragment_on_issue_layout():
    s = parse('p[pi:"b"/{q,r}]q')
    frags = fragment_on_issue(s, 7, FragmentCounter())
    assert [f.subject for f in frags] == ["p", "q", "r"]
    assert len({f.identity.token for f in frags}) == 1
    assert all(f.issue_time == 7 and f.observation_time == 7 for f in frags)
    assert all(f.fade == DEFAULT_FADE for f in frags)


def test_fragment_tokens_never_collide():
    counter = FragmentCounter()
    s = parse('p[pi:"b"]q')
    t1 = fragment_on_issue(s, 3, counter)[0].identity.token
    t2 = fragment_on_issue(s, 3, counter)[0].identity.token
    assert t1 != t2


def test_fragmenting_a_fragment_rejected():
    s = parse('p[w=9,q/pi:"b"]q')
    with pytest.raises(StatementError):
        fragment_on_issue(s, 9, FragmentCounter())


def test_render_requires_observation_with_subject():
    s = parse('p[pi:"b"]q')
    frag = fragment_on_issue(s, 2, FragmentCounter())[0]
    assert parse(render(frag)) == frag


_agent = st.from_regex(r"[a-z][a-z0-9_]{0,5}", fullmatch=True)
_text = st.text(
    alphabet=st.characters(
        codec="ascii", min_codepoint=32, max_codepoint=126, exclude_characters='"'
    ),
    min_size=1,
    max_size=20,
)


@st.composite
def statements(draw):
    kind = draw(st.sampled_from(list(DirectionalKind)))
    promiser = draw(_agent)
    promisee = draw(_agent)
    scope = frozenset(draw(st.sets(_agent, max_size=3)))
    window = None
    condition = None
    if draw(st.booleans()):
        start = draw(st.integers(0, 50))
        window = ValidityWindow(start, start + draw(st.integers(0, 50)))
        if draw(st.booleans()):
            condition = draw(_text)
    strength = (
        draw(st.integers(1, 10))
        if kind is DirectionalKind.IMPOSITION and draw(st.booleans())
        else None
    )
    issue_time = draw(st.none() | st.integers(0, 100))
    subject = None
    observation_time = None
    identity = None
    fade = None
    if draw(st.booleans()):
        subject = draw(
            st.sampled_from(sorted(scope | {promiser, promisee}))
        )
        low = issue_time if issue_time is not None else 0
        observation_time = draw(st.integers(low, low + 100))
        if draw(st.booleans()):
            from coopsim.statements import FragmentIdentity

            identity = FragmentIdentity(token=draw(_agent))
        if draw(st.booleans()):
            fade = FadeSpec(
                span=draw(st.integers(1, 1000)),
                threshold=Fraction(draw(st.integers(1, 99)), 100),
            )
    return Statement(
        kind=kind,
        promiser=promiser,
        promisee=promisee,
        type_tag=draw(_agent),
        body=Body(text=draw(_text), condition=condition),
        window=window,
        scope=scope,
        issue_time=issue_time,
        observation_time=observation_time,
        subject=subject,
        identity=identity,
        fade=fade,
        strength=strength,
    )


@settings(max_examples=300, deadline=None)
@given(statements())
def test_parse_inverts_render(s):
    assert parse(render(s)) == s
