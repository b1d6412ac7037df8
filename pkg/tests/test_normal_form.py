import pytest
from hypothesis import given, settings, strategies as st

from realterm.errors import GermViolation, NotCDV, TruncationInconclusive
from realterm.jet import replay
from realterm.normal_form import (
    HypersurfaceGerm, check_witness_shape, classify, diagonalize, quadratic_matrix,
    split_quadratic,
)


def _classify_ok(F):
    cls = classify(F)
    assert check_witness_shape(cls)
    assert replay(F.with_order(cls.order), cls.log) == cls.witness
    return cls


@pytest.mark.parametrize("text, family, n", [
    ("x + y^2", "cA0", 0),
    ("x^2 + y^2 + z^2 + t^2", "cA1", 1),
    ("x^2 + 2*x*y - y^2 + z*t", "cA1", 1),
    ("x^2 + y^2 + z^4 - t^5", "cA", 3),
    ("x^2 - y^2 + z^3 + t^4", "cA", 2),
    ("x*y + z^3 + t^3", "cA", 2),
    ("x^2 + y*z*t + y^3 + z^3 + t^3", "cD4", 4),
    ("x^2 + y^2*z + y*t^3 + z^4", "cD", 5),
    ("x^2 + y^3 + z^4 + t^4", "cE6", 6),
    ("x^2 + y^3 + y*z^3 + t^5", "cE7", 7),
    ("x^2 + y^3 + z^5 + t^5", "cE8", 8),
])
def test_family_and_subtype(P, text, family, n):
    cls = _classify_ok(P(text))
    assert (cls.family, cls.n) == (family, n)


def test_cD_parameters(P):
    cls = classify(P("x^2 + y^2*z + y*t^3 + z^4"))
    assert (cls.params["a"], cls.params["r"], cls.params["s"]) == (1, 3, 4)
    assert cls.isolated == "unknown"


def test_cD_reduction_sign(P):
    cls = _classify_ok(P("x^2 + y^2*z + y*z^3"))
    assert cls.witness == P("x^2 + y^2*z - 1/4*z^5").with_order(cls.order)


def test_nonisolated_flagged(P):
    assert classify(P("x^2 + y^2 + z^2*t^2")).isolated == "refuted"
    assert classify(P("x^2 + y^2*z + z^3*t^4")).isolated == "refuted"


@pytest.mark.parametrize("text, exc", [
    ("x^3 + y^3 + z^3 + t^3", NotCDV),
    ("x^2 + y^3", NotCDV),
    ("x^2 + y^2", TruncationInconclusive),
])
def test_rejections(P, text, exc):
    with pytest.raises(exc):
        classify(P(text))


def test_germ_must_vanish(P):
    with pytest.raises(GermViolation):
        HypersurfaceGerm(P("1 + x"))


def test_congruence_diagonalization(P):
    F = P("x^2 + 4*x*y + y^2 - 2*z*t")
    A = quadratic_matrix(F)
    Pm, diag = diagonalize(A)
    n = len(A)
    for i in range(n):
        for j in range(n):
            v = sum(Pm[k][i] * A[k][l] * Pm[l][j] for k in range(n) for l in range(n))
            assert v == (diag[i] if i == j else 0)
    qd, *_ = split_quadratic(F)
    assert qd.signature == (2, 2) and qd.rank == 4


small = st.integers(-3, 3)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([1, -1]), st.sampled_from([1, -1]), st.integers(3, 7),
       st.integers(3, 7), small, small)
def test_cA_witness_replays(P, a, b, p, q, c, d):
    c = c or 1
    d = d or 1
    F = P(f"{a}*x^2 + {b}*y^2 + x*z^2 + {c}*z^{p} + {d}*t^{q} + y*z*t")
    cls = _classify_ok(F)
    assert cls.family in ("cA1", "cA")
