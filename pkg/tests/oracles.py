"""Independent reference computations shared by the test modules."""

import numpy as np

from etanormal import calculus as cal
from etanormal.exprlang import eval_jet2, parse

NAMES = ("x", "y", "z")

# smooth on the box (-1, 1)^3
EXPRESSION_CORPUS = (
    "x",
    "3.5",
    "x*y - z^2",
    "exp(x) * sin(y + 2*z)",
    "cos(x*y*z) / (2 + x^2)",
    "log(3 + x + y) - sqrt(4 + z^2)",
    "sinh(x - y) * cosh(z)",
    "(x + 2)^-2 + y^5",
    "exp(-(x^2 + y^2)) * z",
    "sin(exp(x) * y) + x[2]^3",
    "-x^2 + (y - z) * (y + z)",
    "sqrt(2) * exp(z) * (x - y)",
)


def central_differences(text, points, h=1e-4):
    """Gradient and Hessian of an expression by central differences of its values."""
    e = parse(text, NAMES)
    f = lambda p: eval_jet2(e, p).val
    dim = points.shape[-1]
    eye = np.eye(dim)
    grad = np.stack([(f(points + h * eye[i]) - f(points - h * eye[i])) / (2 * h) for i in range(dim)], -1)
    hess = np.empty(points.shape[:-1] + (dim, dim))
    for i in range(dim):
        for j in range(dim):
            a, b = h * eye[i], h * eye[j]
            hess[..., i, j] = (f(points + a + b) - f(points + a - b) - f(points - a + b)
                               + f(points - a - b)) / (4 * h * h)
    return grad, hess


def koszul(g, X, Y, Z):
    """``2 g(nabla_X Y, Z)`` from the Koszul formula."""
    gYZ, gXZ, gXY = cal.bilinear(g, Y, Z), cal.bilinear(g, X, Z), cal.bilinear(g, X, Y)
    return (cal.directional(X, gYZ) + cal.directional(Y, gXZ) - cal.directional(Z, gXY)
            + cal.bilinear(g, cal.bracket(X, Y), Z) - cal.bilinear(g, cal.bracket(X, Z), Y)
            - cal.bilinear(g, cal.bracket(Y, Z), X)).val


METRIC_CORPUS = (
    ("1", "0", "0", "0", "x^2 + 1", "0", "0", "0", "exp(2*x)"),
    ("2 + sin(y)", "x*z/5", "0", "x*z/5", "1 + y^2", "z/4", "0", "z/4", "3"),
    ("1 + y^2", "-y", "0", "-y", "1", "0", "0", "0", "cosh(z)"),
    # indefinite
    ("0", "1", "0", "1", "0", "x/3", "0", "x/3", "-1 - z^2"),
)


def metric_field(chart, entries):
    return cal.TensorField.from_strings(chart, (0, 2), np.array(entries, dtype=object).reshape(3, 3))
