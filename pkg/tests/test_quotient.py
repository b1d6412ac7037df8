import pytest
from hypothesis import given, settings, strategies as st

from realterm.errors import GradingError, NotTerminalQuotient
from realterm.jet import Jet
from realterm.link_topology import assemble_link
from realterm.normal_form import classify
from realterm.quotient import (
    GradedAction, companion, not_isolated_check, quotient_link, tau_of, v2, validate_action,
)

HALF = GradedAction.parse("1/2(1,1,1,0)")


def test_v2_and_tau():
    assert [v2(k) for k in (1, 2, 12, 16)] == [0, 1, 2, 4]
    assert tau_of(HALF) == (-1, -1, -1, 1)
    assert tau_of(GradedAction.parse("1/4(1,3,1,2)")) == (-1, -1, -1, 1)
    assert tau_of(GradedAction.parse("1/3(1,2,1,0)")) == (1, 1, 1, 1)


def test_faithful_reduction():
    act = GradedAction.parse("1/4(2,2,2,0)").faithful()
    assert (act.n, act.grades) == (2, (1, 1, 1, 0))


def test_companion_examples(P):
    pair = companion(P("x^2 + y^2 + z^2 + t^3"), HALF)
    assert pair.Fc == P("x^2 + y^2 + z^2 - t^3")
    assert companion(pair.Fc, HALF).Fc == pair.F


def test_grading_error(P):
    with pytest.raises(GradingError) as err:
        validate_action(P("x^2 + y^2 + z^3*t"), HALF)
    assert err.value.witness is not None


def test_no_row(P):
    with pytest.raises(NotTerminalQuotient):
        validate_action(P("x^2 + y^2 + z^2 + t^2"), GradedAction.parse("1/2(1,1,0,0)"))


@pytest.mark.parametrize("text, expected", [
    ("t", "2RP2"),
    ("x^2 - y^2 + z^2 - t^3", "2RP2"),
    ("x^2 - y^2 + z^2 - t^2", "S2 + K2"),
    ("x^2 - y^2 + z^4 + t^2", "2S2"),
    ("x^2 + y^2 + z^2 - t^3", "2RP2"),
    ("x^2 + y^2 + z^2 - t^2", "2RP2"),
    ("x^2 + y^2 - z^2 + t^2", "S2 + K2"),
    ("x^2 + y^2 - z^4 - t^2", "K2"),
    ("x^2 - y^2 + z^4 + t^4", "2S2"),
])
def test_cA2_links(P, D, text, expected):
    res = quotient_link(P(text), HALF)
    assert res.exact and res.descriptor == D(expected)


@pytest.mark.parametrize("text, action", [
    ("x*y + z^3 + t^3", "1/3(1,-1,1,0)"),
    ("x^2 + y^3 + z^3 + t^3", "1/3(0,2,1,1)"),
])
def test_odd_index_passthrough(P, text, action):
    F = P(text)
    res = quotient_link(F, GradedAction.parse(action))
    cover = assemble_link(classify(F))
    assert res.exact and res.descriptor == cover.descriptor


def test_not_isolated_check(P):
    F = P("x^2 + y^2 + z^2 - t^2")
    qc = validate_action(F, HALF)
    assert not_isolated_check(qc, quotient_link(F, HALF)) == "verified"


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.tuples(*[st.integers(0, 4)] * 4), st.integers(-4, 4).filter(bool),
                       min_size=1, max_size=6),
       st.sampled_from([2, 3, 4, 6]))
def test_companion_involution(terms, n):
    act = GradedAction(n, (1, n - 1, 1, 0))
    g = act.grading()
    keep = {m: c for m, c in terms.items() if g.grade(m) == g.grade(next(iter(terms)))}
    F = Jet(keep, order=16)
    pair = companion(F, act)
    assert companion(pair.Fc, act, pair.d).Fc == F
