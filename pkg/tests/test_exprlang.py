import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from etanormal.exprlang import (Const, DomainError, ExprSyntaxError, coord, eval_jet2, func,
                                parse, to_string)
from oracles import EXPRESSION_CORPUS, NAMES, central_differences

SYMS = sp.symbols(NAMES)


def sympy_oracle(text):
    expr = sp.sympify(text.replace("^", "**").replace("x[2]", "z"), locals=dict(zip(NAMES, SYMS)))
    grad = [sp.diff(expr, s) for s in SYMS]
    hess = [[sp.diff(g, s) for s in SYMS] for g in grad]
    f = sp.lambdify(SYMS, [expr, grad, hess], "numpy")
    return lambda p: f(*p)


@pytest.mark.parametrize("text", EXPRESSION_CORPUS)
def test_jet_matches_sympy(text, rng):
    pts = rng.uniform(-0.9, 0.9, size=(6, 3))
    jet = eval_jet2(parse(text, NAMES), pts)
    oracle = sympy_oracle(text)
    for b, p in enumerate(pts):
        v, g, h = oracle(p)
        np.testing.assert_allclose(jet.val[b], float(v), rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(jet.d1[b], np.array(g, dtype=float), rtol=1e-11, atol=1e-11)
        np.testing.assert_allclose(jet.d2[b], np.array(h, dtype=float), rtol=1e-10, atol=1e-10)


@pytest.mark.parametrize("text", EXPRESSION_CORPUS)
def test_jet_matches_central_differences(text, rng):
    pts = rng.uniform(-0.9, 0.9, size=(10, 3))
    jet = eval_jet2(parse(text, NAMES), pts)
    grad, hess = central_differences(text, pts)
    assert np.max(np.abs(jet.d1 - grad)) < 1e-6
    assert np.max(np.abs(jet.d2 - hess)) < 1e-5


def test_precedence_and_unary_minus():
    p = np.array([2.0, 3.0, 0.5])
    assert eval_jet2(parse("-x^2", NAMES), p).val == -4.0
    assert eval_jet2(parse("x*y^2", NAMES), p).val == 18.0
    assert eval_jet2(parse("x - y - z", NAMES), p).val == pytest.approx(-1.5)
    assert eval_jet2(parse("x / y * z", NAMES), p).val == pytest.approx(2 / 3 * 0.5)
    assert eval_jet2(parse("x ** 2", NAMES), p).val == 4.0
    assert eval_jet2(parse("pi", NAMES), p).val == pytest.approx(np.pi)


@pytest.mark.parametrize("text, offset", [("x +", 3), ("x + * y", 4), ("foo(x)", 0), ("w", 0),
                                          ("(x + y", 6), ("x^1.5", 2), ("x y", 2)])
def test_syntax_errors_carry_offsets(text, offset):
    with pytest.raises(ExprSyntaxError) as info:
        parse(text, NAMES)
    assert info.value.offset == offset


def test_empty_expression_rejected():
    with pytest.raises(ExprSyntaxError):
        parse("   ", NAMES)


@pytest.mark.parametrize("text, point", [("log(x)", [0.0, 1, 1]), ("sqrt(x - 1)", [0.5, 0, 0]),
                                         ("1 / (x - y)", [1.0, 1.0, 0]), ("x^-1", [0.0, 1, 1])])
def test_domain_errors(text, point):
    with pytest.raises(DomainError):
        eval_jet2(parse(text, NAMES), np.array(point, dtype=float))


def test_positional_coordinates_and_default_names():
    e = parse("u0 * u2", 5)
    assert eval_jet2(e, np.array([2.0, 5.0, 3.0, 0.0, 0.0])).val == 6.0
    assert parse("x", 3) is not None
    assert eval_jet2(parse("x[1]", NAMES), np.array([2.0, 5.0, 3.0])).val == 5.0


def test_builders_fold_constants():
    x = coord(0, "x")
    assert isinstance(Const(0.0) * x, Const)
    assert to_string(Const(1.0) * x) == "x"
    assert to_string(x + 0.0) == "x"


# random expression trees for the round-trip property
leaves = st.one_of(st.sampled_from([coord(i, n) for i, n in enumerate(NAMES)]),
                   st.floats(-5, 5, allow_nan=False).map(Const))


def extend(children):
    return st.one_of(
        st.tuples(children, children).map(lambda t: t[0] + t[1]),
        st.tuples(children, children).map(lambda t: t[0] - t[1]),
        st.tuples(children, children).map(lambda t: t[0] * t[1]),
        st.tuples(children, st.integers(0, 4)).map(lambda t: t[0] ** t[1]),
        children.map(lambda c: -c),
        st.tuples(st.sampled_from(["sin", "cos", "exp"]), children).map(lambda t: func(t[0], 0.3 * t[1])),
    )


expressions = st.recursive(leaves, extend, max_leaves=12)


@settings(max_examples=150, deadline=None)
@given(expressions)
def test_round_trip_preserves_value_and_derivatives(e):
    p = np.array([[0.3, -0.7, 0.5], [-0.2, 0.4, 0.9]])
    a = eval_jet2(e, p)
    b = eval_jet2(parse(to_string(e), NAMES), p)
    np.testing.assert_allclose(b.val, a.val, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(b.d1, a.d1, rtol=1e-10, atol=1e-10)
    np.testing.assert_allclose(b.d2, a.d2, rtol=1e-9, atol=1e-9)
    assert np.all(np.isfinite(a.d2)) == np.all(np.isfinite(a.val))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_powers_are_finite_at_the_origin(k):
    jet = eval_jet2(parse(f"x^{k}", NAMES), np.zeros(3))
    assert np.all(np.isfinite(jet.d1)) and np.all(np.isfinite(jet.d2))
    assert jet.d2[0, 0] == (2.0 if k == 2 else 0.0)
