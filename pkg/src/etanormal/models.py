"""Frame-based construction of example structures and random perturbations.

A structure is described by an adapted frame ``E_0, ..., E_2n`` and its dual
coframe ``theta^0, ..., theta^2n``.  Index 0 is the Reeb direction; indices
``1..n`` and ``n+1..2n`` are the two halves of the contact distribution.

* almost contact metric: ``phi E_k = E_{n+k}``, ``phi E_{n+k} = -E_k`` and
  ``g = sum_a theta^a (x) theta^a``;
* almost paracontact metric: ``psi E_k = E_k``, ``psi E_{n+k} = -E_{n+k}``
  and ``g = theta^0 (x) theta^0 + c sum_k (theta^k (x) theta^{n+k} + theta^{n+k} (x) theta^k)``.

When both frame and coframe are known in closed form the components are
built as expressions (:func:`framed_acm`, :func:`framed_apcm`).  Random
perturbations only perturb the coframe, so the frame is obtained by a jet
matrix inverse (:func:`coframe_acm`, :func:`coframe_apcm`).
"""

from __future__ import annotations

import math

import numpy as np

from .calculus import ChartManifold, JetField, TensorField
from .exprlang import Const, Expr, coord, func
from .jets import Jet

SQRT2 = math.sqrt(2.0)


def acm_pattern(n: int) -> np.ndarray:
    J = np.zeros((2 * n + 1, 2 * n + 1))
    for k in range(1, n + 1):
        J[n + k, k] = 1.0
        J[k, n + k] = -1.0
    return J


def apcm_pattern(n: int) -> np.ndarray:
    return np.diag([0.0] + [1.0] * n + [-1.0] * n)


def acm_gram(n: int) -> np.ndarray:
    return np.eye(2 * n + 1)


def apcm_gram(n: int, c: float) -> np.ndarray:
    G = np.zeros((2 * n + 1, 2 * n + 1))
    G[0, 0] = 1.0
    for k in range(1, n + 1):
        G[k, n + k] = G[n + k, k] = c
    return G


def _emat(rows) -> np.ndarray:
    arr = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            arr[i, j] = v if isinstance(v, Expr) else Const(float(v))
    return arr


def _esum(terms) -> Expr:
    out = Const(0.0)
    for t in terms:
        out = out + t
    return out


def _sandwich(frame: np.ndarray, M: np.ndarray, coframe: np.ndarray) -> np.ndarray:
    """Expression matrix ``E M Theta`` for a constant pattern ``M``."""
    d = frame.shape[0]
    out = np.empty((d, d), dtype=object)
    nz = [(a, b, M[a, b]) for a in range(d) for b in range(d) if M[a, b] != 0.0]
    for i in range(d):
        for j in range(d):
            out[i, j] = _esum(frame[i, a] * coframe[b, j] * m for a, b, m in nz)
    return out


def _gram_pullback(G: np.ndarray, coframe: np.ndarray) -> np.ndarray:
    d = coframe.shape[0]
    out = np.empty((d, d), dtype=object)
    nz = [(a, b, G[a, b]) for a in range(d) for b in range(d) if G[a, b] != 0.0]
    for i in range(d):
        for j in range(i, d):
            out[i, j] = out[j, i] = _esum(coframe[a, i] * coframe[b, j] * m for a, b, m in nz)
    return out


def framed_acm(chart: ChartManifold, frame, coframe, name: str):
    """ACM structure from closed-form frame (columns) and coframe (rows)."""
    from .acm import ACMStructure

    E, T = _emat(frame), _emat(coframe)
    n = (chart.dim - 1) // 2
    return ACMStructure(
        chart,
        TensorField(chart, (1, 1), _sandwich(E, acm_pattern(n), T)),
        TensorField(chart, (1, 0), E[:, 0].copy()),
        TensorField(chart, (0, 1), T[0, :].copy()),
        TensorField(chart, (0, 2), _gram_pullback(acm_gram(n), T)),
        name,
    )


def framed_apcm(chart: ChartManifold, frame, coframe, c: float, name: str):
    """APCM structure from closed-form frame and coframe with pairing constant ``c``."""
    from .apcm import APCMStructure

    E, T = _emat(frame), _emat(coframe)
    n = (chart.dim - 1) // 2
    return APCMStructure(
        chart,
        TensorField(chart, (1, 1), _sandwich(E, apcm_pattern(n), T)),
        TensorField(chart, (1, 0), E[:, 0].copy()),
        TensorField(chart, (0, 1), T[0, :].copy()),
        TensorField(chart, (0, 2), _gram_pullback(apcm_gram(n, c), T)),
        name,
    )


class _CoframeCache:
    """Evaluates coframe and frame jets once per point set."""

    def __init__(self, chart: ChartManifold, coframe):
        self.field = TensorField.from_exprs(chart, (0, 2), coframe)
        self._key = None
        self._val = None

    def __call__(self, points):
        key = (points.shape, points.tobytes())
        if key != self._key:
            theta = self.field.jet(points)  # [a, i]
            self._val = (theta, theta.inv())  # frame [i, a]
            self._key = key
        return self._val


def _coframe_fields(chart, coframe, M, G):
    cache = _CoframeCache(chart, coframe)

    def affinor(points):
        theta, E = cache(points)
        return Jet.einsum("ia,ab,bj->ij", E, Jet.constant(M, chart.dim), theta)

    def reeb(points):
        return cache(points)[1][:, 0]

    def form(points):
        return cache(points)[0][0]

    def metric(points):
        theta = cache(points)[0]
        return Jet.einsum("ai,ab,bj->ij", theta, Jet.constant(G, chart.dim), theta)

    return (JetField(chart, (1, 1), affinor), JetField(chart, (1, 0), reeb),
            JetField(chart, (0, 1), form), JetField(chart, (0, 2), metric))


def coframe_acm(chart: ChartManifold, coframe, name: str):
    from .acm import ACMStructure

    n = (chart.dim - 1) // 2
    return ACMStructure(chart, *_coframe_fields(chart, coframe, acm_pattern(n), acm_gram(n)), name)


def coframe_apcm(chart: ChartManifold, coframe, c: float, name: str):
    from .apcm import APCMStructure

    n = (chart.dim - 1) // 2
    return APCMStructure(chart, *_coframe_fields(chart, coframe, apcm_pattern(n),
                                                 apcm_gram(n, c)), name)


# ----------------------------------------------------------------------
# charts and coordinate helpers


def contact_chart(n: int, half_width: float = 1.0) -> ChartManifold:
    """Chart ``(x_1..x_n, y_1..y_n, z)``; plain ``x, y, z`` when ``n = 1``."""
    if n == 1:
        names = ("x", "y", "z")
    else:
        names = tuple(f"x{i + 1}" for i in range(n)) + tuple(f"y{i + 1}" for i in range(n)) + ("z",)
    return ChartManifold.box(names, half_width)


def coords(chart: ChartManifold):
    """Coordinate expressions ``(xs, ys, z)`` of a contact chart."""
    n = (chart.dim - 1) // 2
    c = [coord(i, chart.coord_names[i]) for i in range(chart.dim)]
    return c[:n], c[n:2 * n], c[2 * n]


def random_smooth_expr(rng: np.random.Generator, chart: ChartManifold, terms: int = 2) -> Expr:
    """A random bounded smooth function built from sines and a bilinear term."""
    c = [coord(i, chart.coord_names[i]) for i in range(chart.dim)]
    out = Const(0.0)
    for _ in range(terms):
        i, j = rng.integers(chart.dim, size=2)
        amp, freq, phase = rng.normal(), rng.uniform(0.5, 1.5), rng.uniform(-1, 1)
        out = out + float(amp) * func("sin", float(freq) * c[i] + float(phase))
        out = out + float(rng.normal()) * 0.5 * c[i] * c[j]
    return out


def perturb_coframe(coframe, eps: float, rng: np.random.Generator, chart: ChartManifold,
                    rows=None) -> np.ndarray:
    """Add ``eps`` times random smooth functions to the selected coframe rows."""
    T = _emat(coframe)
    rows = range(T.shape[0]) if rows is None else rows
    for a in rows:
        for i in range(T.shape[1]):
            T[a, i] = T[a, i] + eps * random_smooth_expr(rng, chart)
    return T


# ----------------------------------------------------------------------
# closed-form frames of the example families


def heisenberg_frame(chart: ChartManifold, f):
    """Frame/coframe with ``eta = dz - sum f_j dx_j``, ``xi = d_z``.

    ``V_k = sqrt2 d_{y_k}`` and ``V_{n+k} = sqrt2 (d_{x_k} + f_k d_z)``;
    ``f`` is a list of ``n`` expressions.
    """
    n = (chart.dim - 1) // 2
    d = chart.dim
    z = 2 * n
    frame = [[0.0] * d for _ in range(d)]
    coframe = [[0.0] * d for _ in range(d)]
    frame[z][0] = 1.0
    coframe[0][z] = 1.0
    for k in range(n):
        frame[n + k][1 + k] = SQRT2
        frame[k][1 + n + k] = SQRT2
        frame[z][1 + n + k] = SQRT2 * f[k]
        coframe[0][k] = -f[k]
        coframe[1 + k][n + k] = 1.0 / SQRT2
        coframe[1 + n + k][k] = 1.0 / SQRT2
    return frame, coframe


def twisted_heisenberg(chart: ChartManifold, f, name: str = "twisted heisenberg"):
    """Heisenberg-type ACM structure with arbitrary potentials ``f_j``."""
    frame, coframe = heisenberg_frame(chart, f)
    return framed_acm(chart, frame, coframe, name)


def kenmotsu_model(n: int = 1, half_width: float = 1.0):
    """Warped product ``dz^2 + e^{2z} sum(dx^2 + dy^2)`` with ``phi d_x = d_y``."""
    chart = contact_chart(n, half_width)
    xs, ys, z = coords(chart)
    d = chart.dim
    frame = [[0.0] * d for _ in range(d)]
    coframe = [[0.0] * d for _ in range(d)]
    frame[2 * n][0] = 1.0
    coframe[0][2 * n] = 1.0
    for k in range(n):
        frame[k][1 + k] = func("exp", -z)
        frame[n + k][1 + n + k] = func("exp", -z)
        coframe[1 + k][k] = func("exp", z)
        coframe[1 + n + k][n + k] = func("exp", z)
    return framed_acm(chart, frame, coframe, "kenmotsu warped product")


def para_sasakian(n: int = 1, half_width: float = 1.0):
    """``tau = dz - sum y_i dx_i`` with ``psi (d_x + y d_z) = d_x + y d_z``, ``psi d_y = -d_y``.

    With pairing constant ``c = -1/2`` one has ``d tau = Psi``.
    """
    chart = contact_chart(n, half_width)
    xs, ys, z = coords(chart)
    d = chart.dim
    frame = [[0.0] * d for _ in range(d)]
    coframe = [[0.0] * d for _ in range(d)]
    frame[2 * n][0] = 1.0
    coframe[0][2 * n] = 1.0
    for k in range(n):
        frame[k][1 + k] = 1.0
        frame[2 * n][1 + k] = ys[k]
        frame[n + k][1 + n + k] = 1.0
        coframe[0][k] = -ys[k]
        coframe[1 + k][k] = 1.0
        coframe[1 + n + k][n + k] = 1.0
    return framed_apcm(chart, frame, coframe, -0.5, f"para-Sasakian (dim {d})")


def para_kenmotsu(n: int = 1, half_width: float = 1.0):
    """``g = dz^2 + e^{2z} 1/2 sum(dx dy + dy dx)``, ``tau = dz``, ``psi`` diagonal."""
    chart = contact_chart(n, half_width)
    xs, ys, z = coords(chart)
    d = chart.dim
    frame = [[0.0] * d for _ in range(d)]
    coframe = [[0.0] * d for _ in range(d)]
    frame[2 * n][0] = 1.0
    coframe[0][2 * n] = 1.0
    for k in range(n):
        frame[k][1 + k] = func("exp", -z)
        frame[n + k][1 + n + k] = func("exp", -z)
        coframe[1 + k][k] = func("exp", z)
        coframe[1 + n + k][n + k] = func("exp", z)
    return framed_apcm(chart, frame, coframe, 0.5, f"para-Kenmotsu warped product (dim {d})")


def kappa_mu_frame(a: float, chart: ChartManifold):
    """Closed-form frame of the 3-dimensional algebra
    ``[zeta,e1] = a e1 + e2``, ``[zeta,e2] = -a e2``, ``[e1,e2] = -zeta``.

    ``e1 = e^{az} d_x + (a y^2/2 + b(z)) d_y + y d_z``, ``e2 = d_y``,
    ``zeta = d_z + a y d_y`` with ``b' = 2ab + 1``, ``b(0) = 0``.
    """
    x, y, z = (coord(i, chart.coord_names[i]) for i in range(3))
    if a == 0.0:
        b = z
    else:
        b = (func("exp", 2.0 * a * z) - 1.0) / (2.0 * a)
    eaz, emz = func("exp", a * z), func("exp", -a * z)
    if a == 0.0:
        eaz = emz = Const(1.0)
    e1 = [eaz, a * y * y / 2.0 + b, y]
    frame = [[0.0, e1[0], 0.0], [a * y, e1[1], 1.0], [1.0, e1[2], 0.0]]
    coframe = [
        [-y * emz, 0.0, 1.0],  # tau
        [emz, 0.0, 0.0],  # theta^1
        [(a * y * y / 2.0 - b) * emz, 1.0, -a * y],  # theta^2
    ]
    return frame, coframe


def kappa_mu_candidate(mu: float, half_width: float = 1.0):
    """Paracontact metric candidate with ``kappa = -1`` and ``a = 1 - mu/2``."""
    a = 1.0 - mu / 2.0
    chart = ChartManifold.box(("x", "y", "z"), half_width)
    frame, coframe = kappa_mu_frame(a, chart)
    return framed_apcm(chart, frame, coframe, -0.5, f"paracontact (-1,{mu:g}) candidate")


def rescale_reeb(S, f: Expr, name: str | None = None):
    """Replace ``eta`` by ``f eta`` and ``xi`` by ``xi / f``, keeping the structure valid.

    ``phi`` is unchanged and ``g' = g - eta (x) eta + eta' (x) eta'``.
    Works for both structure kinds.
    """
    chart = S.chart
    fld_names = ("phi", "xi", "eta", "g") if S.kind == "acm" else ("psi", "zeta", "tau", "g")
    aff, reeb, form, g = (getattr(S, k) for k in fld_names)
    fT = TensorField.from_exprs(chart, (0, 0), np.array(f, dtype=object))

    def new_form(points):
        return Jet.einsum(",i->i", fT.jet(points), form.jet(points))

    def new_reeb(points):
        return Jet.einsum(",i->i", fT.jet(points).reciprocal(), reeb.jet(points))

    def new_g(points):
        w, w2 = form.jet(points), new_form(points)
        return g.jet(points) - Jet.einsum("i,j->ij", w, w) + Jet.einsum("i,j->ij", w2, w2)

    fields = (JetField(chart, (1, 1), aff.jet), JetField(chart, (1, 0), new_reeb),
              JetField(chart, (0, 1), new_form), JetField(chart, (0, 2), new_g))
    return type(S)(chart, *fields, name or f"{S.name} (Reeb rescaled)")


def paracontact_sl2(half_width: float = 1.0):
    """Paracontact metric structure on the algebra
    ``[zeta,e1] = e2``, ``[zeta,e2] = e1``, ``[e1,e2] = -zeta`` with ``psi e1 = e1``, ``psi e2 = -e2``.

    Realized by ``zeta = d_z``, ``u = e^z d_x``, ``v = e^{-z}(d_y + x^2 d_x + 2x d_z)``,
    ``e1 = (u+v)/2``, ``e2 = (u-v)/2``; here ``h^2 = -Id`` on ``ker tau``.
    """
    chart = ChartManifold.box(("x", "y", "z"), half_width)
    x, y, z = (coord(i, chart.coord_names[i]) for i in range(3))
    ez, emz = func("exp", z), func("exp", -z)
    u = [ez, Const(0.0), Const(0.0)]
    v = [emz * x * x, emz, 2.0 * x * emz]
    e1 = [0.5 * (a + b) for a, b in zip(u, v)]
    e2 = [0.5 * (a - b) for a, b in zip(u, v)]
    frame = [[Const(1.0) if r == 2 else Const(0.0), e1[r], e2[r]] for r in range(3)]
    tu = [emz, -emz * x * x, Const(0.0)]  # dual to u
    tv = [Const(0.0), ez, Const(0.0)]  # dual to v
    coframe = [[Const(0.0), -2.0 * x, Const(1.0)],
               [a + b for a, b in zip(tu, tv)],
               [a - b for a, b in zip(tu, tv)]]
    return framed_apcm(chart, frame, coframe, -0.5, "paracontact sl2 model")


def para_sasakian_coframe(chart: ChartManifold):
    """Coframe of :func:`para_sasakian` on ``chart``."""
    n = (chart.dim - 1) // 2
    _, ys, _ = coords(chart)
    d = chart.dim
    coframe = [[0.0] * d for _ in range(d)]
    coframe[0][2 * n] = 1.0
    for k in range(n):
        coframe[0][k] = -ys[k]
        coframe[1 + k][k] = 1.0
        coframe[1 + n + k][n + k] = 1.0
    return coframe


def perturbed_acm(n: int, seed: int, eps: float = 0.1):
    """Valid ACM structure from a randomly perturbed Heisenberg coframe."""
    chart = contact_chart(n)
    _, ys, _ = coords(chart)
    _, coframe = heisenberg_frame(chart, list(ys))
    rng = np.random.default_rng(seed)
    return coframe_acm(chart, perturb_coframe(coframe, eps, rng, chart), f"perturbed acm n={n} seed={seed}")


def perturbed_apcm(n: int, seed: int, eps: float = 0.1):
    """Valid APCM structure from a randomly perturbed para-Sasakian coframe."""
    chart = contact_chart(n)
    rng = np.random.default_rng(seed)
    coframe = perturb_coframe(para_sasakian_coframe(chart), eps, rng, chart)
    return coframe_apcm(chart, coframe, -0.5, f"perturbed apcm n={n} seed={seed}")
