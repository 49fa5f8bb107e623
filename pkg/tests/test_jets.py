import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from etanormal.jets import Jet, JetOrderError


def poly_jet(points):
    """f(x, y) = x^2 y + 3y and its exact derivatives."""
    x, y = points[:, 0], points[:, 1]
    val = x * x * y + 3 * y
    d1 = np.stack([2 * x * y, x * x + 3], axis=-1)
    d2 = np.stack([np.stack([2 * y, 2 * x], -1), np.stack([2 * x, 0 * x], -1)], axis=-2)
    return Jet(val, d1, d2, 0)


def random_jet(rng, batch, shape, dim):
    v = rng.normal(size=(batch,) + shape)
    d1 = rng.normal(size=(batch,) + shape + (dim,))
    h = rng.normal(size=(batch,) + shape + (dim, dim))
    return Jet(v, d1, 0.5 * (h + np.swapaxes(h, -1, -2)), len(shape))


def test_product_rule_matches_closed_form(rng):
    p = rng.uniform(-1, 1, size=(7, 2))
    f = poly_jet(p)
    g = f * f
    x, y = p[:, 0], p[:, 1]
    fv = x * x * y + 3 * y
    fx, fy = 2 * x * y, x * x + 3
    np.testing.assert_allclose(g.val, fv ** 2)
    np.testing.assert_allclose(g.d1[:, 0], 2 * fv * fx)
    np.testing.assert_allclose(g.d2[:, 1, 1], 2 * fy * fy)


def test_reciprocal_and_inverse(rng):
    A = random_jet(rng, 4, (3, 3), 3)
    A = A + Jet.constant(3 * np.eye(3), 3)
    Ai = A.inv()
    prod = Jet.einsum("ij,jk->ik", A, Ai)
    np.testing.assert_allclose(prod.val, np.broadcast_to(np.eye(3), prod.val.shape), atol=1e-12)
    np.testing.assert_allclose(prod.d1, 0, atol=1e-10)
    np.testing.assert_allclose(prod.d2, 0, atol=1e-9)


def test_partial_drops_order(rng):
    f = random_jet(rng, 3, (), 2)
    df = f.partial()
    assert df.order == f.order - 1
    with pytest.raises(JetOrderError):
        df.partial().partial()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_einsum_leibniz_is_bilinear(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (random_jet(rng, 2, (3,), 3) for _ in range(3))
    lhs = Jet.einsum("i,i->", a + b, c)
    rhs = Jet.einsum("i,i->", a, c) + Jet.einsum("i,i->", b, c)
    np.testing.assert_allclose(lhs.d2, rhs.d2, atol=1e-12)
    swapped = Jet.einsum("i,i->", c, a)
    np.testing.assert_allclose(Jet.einsum("i,i->", a, c).d2, swapped.d2, atol=1e-12)
