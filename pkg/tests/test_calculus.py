import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from etanormal import calculus as cal
from etanormal.calculus import ChartManifold, TensorField
from etanormal.jets import Jet
from oracles import METRIC_CORPUS, koszul, metric_field


def fields(rng, pts, k):
    return cal.random_vector_fields(rng, pts, k)


@pytest.mark.parametrize("entries", METRIC_CORPUS)
def test_levi_civita_matches_koszul(entries, chart3, rng):
    pts = chart3.sample(12, seed=3)
    g = metric_field(chart3, entries).jet(pts)
    C = cal.christoffels(g)
    X, Y, Z = fields(rng, pts, 3)
    lhs = 2 * cal.bilinear(g, cal.nabla(X, Y, C), Z).val
    assert np.max(np.abs(lhs - koszul(g, X, Y, Z))) < 1e-10


@pytest.mark.parametrize("entries", METRIC_CORPUS)
def test_levi_civita_torsion_free_and_metric(entries, chart3, rng):
    pts = chart3.sample(12, seed=4)
    g = metric_field(chart3, entries).jet(pts)
    C = cal.christoffels(g)
    X, Y = fields(rng, pts, 2)
    assert np.max(np.abs(cal.torsion(C, X, Y).val)) < 1e-12
    # torsion-free in the invariant form as well
    inv = cal.nabla(X, Y, C) - cal.nabla(Y, X, C) - cal.bracket(X, Y)
    assert np.max(np.abs(inv.val)) < 1e-12
    assert np.max(np.abs(cal.covariant_derivative(g, (0, 2), C).val)) < 1e-12


@pytest.mark.parametrize("entries", METRIC_CORPUS)
def test_first_bianchi_identity(entries, chart3, rng):
    pts = chart3.sample(8, seed=5)
    g = metric_field(chart3, entries).jet(pts)
    C = cal.christoffels(g)
    X, Y, Z = fields(rng, pts, 3)
    R = lambda a, b, c: cal.curvature(C, a, b, c).val
    assert np.max(np.abs(R(X, Y, Z) + R(Y, Z, X) + R(Z, X, Y))) < 1e-10
    assert np.max(np.abs(R(X, Y, Z) + R(Y, X, Z))) < 1e-10


def test_christoffels_of_warped_metric(chart3):
    # g = dx^2 + x^2 dy^2 + dz^2 on x > 0: Gamma^x_yy = -x, Gamma^y_xy = 1/x
    chart = ChartManifold(3, ("x", "y", "z"), (0.5, -1, -1), (2, 1, 1))
    pts = chart.sample(10, seed=1)
    g = TensorField.from_strings(chart, (0, 2), [["1", "0", "0"], ["0", "x^2", "0"], ["0", "0", "1"]]).jet(pts)
    C = cal.christoffels(g).val
    x = pts[:, 0]
    np.testing.assert_allclose(C[:, 0, 1, 1], -x, atol=1e-13)
    np.testing.assert_allclose(C[:, 1, 0, 1], 1 / x, atol=1e-13)
    np.testing.assert_allclose(C[:, 1, 1, 0], 1 / x, atol=1e-13)
    mask = np.ones((3, 3, 3), bool)
    mask[0, 1, 1] = mask[1, 0, 1] = mask[1, 1, 0] = False
    assert np.max(np.abs(C[:, mask])) < 1e-13


def test_flat_metric_in_polar_coordinates_has_zero_curvature(rng):
    chart = ChartManifold(3, ("r", "t", "z"), (0.5, -1, -1), (2, 1, 1))
    pts = chart.sample(6, seed=2)
    g = TensorField.from_strings(chart, (0, 2), [["1", "0", "0"], ["0", "r^2", "0"], ["0", "0", "1"]]).jet(pts)
    C = cal.christoffels(g)
    X, Y, Z = fields(rng, pts, 3)
    assert np.max(np.abs(cal.curvature(C, X, Y, Z).val)) < 1e-11


def test_round_sphere_curvature_is_constant(rng):
    chart = ChartManifold(2, ("t", "p"), (0.5, -1), (2.5, 1))
    pts = chart.sample(6, seed=2)
    gfield = TensorField.from_strings(chart, (0, 2), [["1", "0"], ["0", "sin(t)^2"]])
    g = gfield.jet(pts)
    C = cal.christoffels(g)
    X, Y, Z = fields(rng, pts, 3)
    # R(X,Y)Z = g(Y,Z)X - g(X,Z)Y for the unit sphere
    R = cal.curvature(C, X, Y, Z).val
    gv = g.truncate(0)
    want = (cal.bilinear(gv, Y.truncate(0), Z.truncate(0)).val[:, None] * X.val
            - cal.bilinear(gv, X.truncate(0), Z.truncate(0)).val[:, None] * Y.val)
    assert np.max(np.abs(R - want)) < 1e-10


def test_exterior_derivative_squares_to_zero(chart3, rng):
    pts = chart3.sample(10, seed=6)
    eta = TensorField.from_strings(chart3, (0, 1), ["exp(y)*z", "sin(x*z)", "x^2 + cos(y)"]).jet(pts)
    ddeta = cal.d2form(cal.d1form(eta))
    assert np.max(np.abs(ddeta.val)) < 1e-12
    X, Y, Z = fields(rng, pts, 3)
    deta = cal.d1form(eta)
    assert np.max(np.abs(cal.d_twoform(deta, X, Y, Z).val)) < 1e-11


def test_d_oneform_invariant_and_component_forms_agree(chart3, rng):
    pts = chart3.sample(10, seed=7)
    eta = TensorField.from_strings(chart3, (0, 1), ["y*z", "x - z^3", "exp(x*y)"]).jet(pts)
    X, Y = fields(rng, pts, 2)
    inv = cal.d_oneform(eta, X, Y).val
    comp = cal.bilinear(cal.d1form(eta), X.truncate(1), Y.truncate(1)).val
    assert np.max(np.abs(inv - comp)) < 1e-12


def test_d_twoform_rejects_non_antisymmetric(chart3, rng):
    pts = chart3.sample(3)
    g = TensorField.from_strings(chart3, (0, 2), [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]).jet(pts)
    X, Y, Z = fields(rng, pts, 3)
    with pytest.raises(ValueError):
        cal.d_twoform(g, X, Y, Z)


def test_bracket_jacobi_and_leibniz(chart3, rng):
    pts = chart3.sample(8, seed=8)
    X, Y, Z = fields(rng, pts, 3)
    f = cal.random_scalar_field(rng, pts)
    B = cal.bracket
    # Jacobi needs two derivatives of each field, which the 2-jets carry
    jac = B(X, B(Y, Z)) + B(Y, B(Z, X)) + B(Z, B(X, Y))
    assert np.max(np.abs(jac.val)) < 1e-10
    lhs = B(X, cal.scale(f, Y)).val
    rhs = cal.scale(f, B(X, Y)).val + cal.directional(X, f).val[:, None] * Y.val
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_lie_derivative_of_one_form_cartan(chart3, rng):
    pts = chart3.sample(8, seed=9)
    eta = TensorField.from_strings(chart3, (0, 1), ["y*z", "x - z^3", "exp(x*y)"]).jet(pts)
    X, Y = fields(rng, pts, 2)
    L = cal.lie_derivative(eta, X, (0, 1))
    lhs = cal.pair(L, Y.truncate(1)).val
    # (L_X eta)(Y) = X(eta(Y)) - eta([X, Y])
    rhs = (cal.directional(X, cal.pair(eta, Y)) - cal.pair(eta, cal.bracket(X, Y))).val
    assert np.max(np.abs(lhs - rhs)) < 1e-12
    # Cartan: L_X eta = i_X d eta + d(eta(X)), with d eta(X, Y) carrying the factor 1/2
    cart = 2 * cal.d_oneform(eta, X, Y).val + cal.directional(Y, cal.pair(eta, X)).val
    assert np.max(np.abs(lhs - cart)) < 1e-12


def test_lie_derivative_of_metric_matches_invariant_form(chart3, rng):
    pts = chart3.sample(8, seed=10)
    g = metric_field(chart3, METRIC_CORPUS[1]).jet(pts)
    X, Y, Z = fields(rng, pts, 3)
    L = cal.lie_derivative(g, X, (0, 2))
    lhs = cal.bilinear(L, Y.truncate(1), Z.truncate(1)).val
    rhs = (cal.directional(X, cal.bilinear(g, Y, Z)) - cal.bilinear(g, cal.bracket(X, Y), Z)
           - cal.bilinear(g, Y, cal.bracket(X, Z))).val
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_nijenhuis_vanishes_for_constant_affinor(chart3, rng):
    pts = chart3.sample(5)
    A = Jet.constant(np.array([[0.0, -1, 0], [1, 0, 0], [0, 0, 0]]), 3)
    X, Y = fields(rng, pts, 2)
    N = cal.nijenhuis(A, X, Y)
    assert np.max(np.abs(N.val)) < 1e-12


def test_degenerate_metric_rejected(chart3):
    pts = chart3.sample(3)
    g = TensorField.from_strings(chart3, (0, 2), [["1", "0", "0"], ["0", "0", "0"], ["0", "0", "1"]]).jet(pts)
    with pytest.raises(cal.DegenerateMetricError):
        cal.christoffels(g)


def test_signature_counts():
    assert cal.signature(np.diag([1.0, -2.0, 0.0, 3.0])) == (2, 1, 1)
    assert cal.signature(np.zeros((0, 0))) == (0, 0, 0)


def test_sample_is_seeded_and_inside_box(chart3):
    a, b = chart3.sample(50, seed=11), chart3.sample(50, seed=11)
    np.testing.assert_array_equal(a, b)
    assert np.all(a > np.array(chart3.lo)) and np.all(a < np.array(chart3.hi))
    with pytest.raises(ValueError):
        chart3.check_points(np.full((1, 3), 5.0))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3),
       st.lists(st.floats(-3, 3), min_size=3, max_size=3))
def test_wedge_eval_is_alternating(u, v):
    a, b = np.array(u), np.array(v)
    X = np.array([[1.0, 0.5, -1.0], [0.2, 1.0, 0.3]])
    val = cal.wedge_eval([a, b], [X[0], X[1]])
    swapped = cal.wedge_eval([a, b], [X[1], X[0]])
    assert np.allclose(val, -swapped, atol=1e-12)
    assert np.allclose(cal.wedge_eval([a, a], [X[0], X[1]]), 0.0, atol=1e-12)
