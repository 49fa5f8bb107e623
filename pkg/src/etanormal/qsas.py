"""Quasi-Sasakian structures: Heisenberg-type family and the foliation by ``C = ker nabla phi``.

The Heisenberg-type structure lives on coordinates ``(x_1..x_n, y_1..y_n, z)``
with ``eta = dz - a_ji y_i dx_j``, ``xi = d_z``, ``V_k = sqrt2 d_{y_k}``,
``V_{n+k} = sqrt2 (d_{x_k} + a_kj y_j d_z)`` and ``phi V_k = V_{n+k}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import acm
from . import calculus as cal
from .exprlang import Const
from .jets import Jet
from .linalg import act, ev1, ev2, null_space, random_vectors
from .models import contact_chart, coords, heisenberg_frame, twisted_heisenberg
from .report import Report, max_abs

DEFAULT_TOL = 1e-8
NULL_TOL = 1e-8


@dataclass(frozen=True)
class HeisenbergSpec:
    n: int
    a: np.ndarray

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a, dtype=float))
        if self.n < 1 or a.shape != (self.n, self.n):
            raise ValueError(f"a must be a {self.n}x{self.n} matrix, got shape {a.shape}")
        if not np.allclose(a, a.T, atol=1e-12, rtol=0.0):
            raise ValueError("a must be symmetric")
        object.__setattr__(self, "a", a)


def _potentials(spec: HeisenbergSpec, chart):
    _, ys, _ = coords(chart)
    f = []
    for j in range(spec.n):
        e = Const(0.0)
        for i in range(spec.n):
            if spec.a[j, i] != 0.0:
                e = e + float(spec.a[j, i]) * ys[i]
        f.append(e)
    return f


def heisenberg(n: int, a, half_width: float = 1.0, name: str | None = None):
    """Heisenberg-type quasi-Sasakian structure for a symmetric ``n x n`` matrix ``a``."""
    spec = HeisenbergSpec(n, a)
    chart = contact_chart(n, half_width)
    label = name or f"heisenberg n={n} a={spec.a.tolist()}"
    return twisted_heisenberg(chart, _potentials(spec, chart), label)


def alpha_sasakian(n: int, alpha: float, half_width: float = 1.0):
    """Heisenberg structure with ``a = alpha Id``."""
    return heisenberg(n, alpha * np.eye(n), half_width, name=f"alpha-Sasakian n={n} alpha={alpha:g}")


def frame_fields(S, points) -> list[Jet]:
    """Jets of ``(xi, V_1, ..., V_2n)`` recovered from the structure's frame."""
    n = (S.chart.dim - 1) // 2
    a = heisenberg_matrix(S, points)
    spec = HeisenbergSpec(n, a)
    frame, _ = heisenberg_frame(S.chart, _potentials(spec, S.chart))
    out = []
    for col in range(S.chart.dim):
        exprs = [frame[row][col] for row in range(S.chart.dim)]
        exprs = [e if not isinstance(e, (int, float)) else Const(float(e)) for e in exprs]
        out.append(cal.TensorField.from_exprs(S.chart, (1, 0), exprs).jet(points))
    return out


def heisenberg_matrix(S, points=None) -> np.ndarray:
    """Recover ``a`` from ``eta``: ``a_ji = -d eta_{x_j} / d y_i``."""
    points = S.sample(1) if points is None else points
    n = (S.chart.dim - 1) // 2
    eta = S.eta.jet(points)
    d = eta.d1[0]  # d[j, m] = d_m eta_j
    return np.array([[-d[j, n + i] for i in range(n)] for j in range(n)])


def commutator_table(S, points, a) -> Report:
    """``[V_i, V_{n+j}] = 2 a_ji d_z``, all other frame brackets zero."""
    n = (S.chart.dim - 1) // 2
    a = np.asarray(a, dtype=float)
    fr = frame_fields(S, points)
    V = fr[1:]
    dz = np.zeros(S.chart.dim)
    dz[-1] = 1.0
    worst = 0.0
    for p in range(2 * n):
        for q in range(2 * n):
            got = cal.bracket(V[p], V[q]).val
            want = np.zeros(S.chart.dim)
            if p < n <= q:
                want = 2.0 * a[q - n, p] * dz
            elif q < n <= p:
                want = -2.0 * a[p - n, q] * dz
            worst = max(worst, max_abs(got - want))
        worst = max(worst, max_abs(cal.bracket(fr[0], V[p]).val))
    rep = Report(f"frame commutators {S.name}")
    rep.add("commutators", "[V_i, V_{n+j}] = 2 a_ji d_z, other frame brackets 0", worst, 1e-10)
    return rep


def deta_table(S, points, a) -> Report:
    """``d eta(phi V_i, V_j) = d eta(phi V_{n+i}, V_{n+j}) = a_ij``, mixed terms zero."""
    n = (S.chart.dim - 1) // 2
    a = np.asarray(a, dtype=float)
    loc = S.at(points)
    fr = frame_fields(S, points)
    V = [v.val for v in fr[1:]]
    phi, deta = loc.phi.val, loc.deta.val
    worst = 0.0
    for i in range(n):
        for j in range(n):
            worst = max(worst,
                        max_abs(ev2(deta, act(phi, V[i]), V[j]) - a[i, j]),
                        max_abs(ev2(deta, act(phi, V[j]), V[i]) - a[i, j]),
                        max_abs(ev2(deta, act(phi, V[n + i]), V[n + j]) - a[i, j]),
                        max_abs(ev2(deta, act(phi, V[i]), V[n + j])),
                        max_abs(ev2(deta, act(phi, V[n + i]), V[j])))
    rep = Report(f"d eta table {S.name}")
    rep.add("deta table", "d eta(phi V_i, V_j) = d eta(phi V_{n+i}, V_{n+j}) = a_ij, mixed 0", worst, 1e-9)
    return rep


def fundamental_coefficient(S, points=None) -> float:
    """Least-squares ``c`` in ``d eta = c Phi`` (``nan`` when ``Phi`` vanishes)."""
    loc = S.at(S.sample() if points is None else points)
    P, D = loc.Phi.val.ravel(), loc.deta.val.ravel()
    den = float(P @ P)
    return float(P @ D / den) if den > 0 else float("nan")


def is_quasi_sasakian(S, points=None, tol: float = DEFAULT_TOL, loc=None) -> bool:
    loc = S.at(S.sample() if points is None else points) if loc is None else loc
    return max_abs(loc.N1) < tol and max_abs(loc.dPhi.val) < tol


def qs_formulas_check(S, points=None, tol: float = DEFAULT_TOL, seed: int = 42, loc=None) -> Report:
    """Covariant derivative of ``phi`` and ``xi`` on a quasi-Sasakian structure."""
    loc = S.at(S.sample() if points is None else points) if loc is None else loc
    rep = Report(f"quasi-Sasakian formulas {S.name}")
    if not is_quasi_sasakian(S, tol=tol, loc=loc):
        rep.add_na("gate", "N1 = 0 and d Phi = 0", "structure is not quasi-Sasakian")
        return rep
    rng = np.random.default_rng(seed)
    X, Y, Z = (random_vectors(rng, loc.batch, loc.dim, 5) for _ in range(3))
    g, eta, deta, phi = loc.g.val, loc.eta.val, loc.deta.val, loc.phi.val
    lhs = ev2(g, loc.cov_phi(X, Y), Z)
    rhs = ev2(deta, act(phi, Y), X) * ev1(eta, Z) - ev2(deta, act(phi, Z), X) * ev1(eta, Y)
    rep.add("nabla phi", "g((nabla_X phi)Y,Z) = d eta(phi Y,X) eta(Z) - d eta(phi Z,X) eta(Y)",
            max_abs(lhs - rhs), tol)
    neta = lambda U, W: np.einsum("...jm,...j,...m->...", loc.nabla_eta, W, U)  # (nabla_U eta)(W)
    rhs2 = -ev1(eta, Z) * neta(X, act(phi, Y)) + ev1(eta, Y) * neta(X, act(phi, Z))
    rep.add("nabla phi (nabla eta)", "g((nabla_X phi)Y,Z) = -eta(Z)(nabla_X eta)(phi Y) + eta(Y)(nabla_X eta)(phi Z)",
            max_abs(lhs - rhs2), tol)
    nxi = np.einsum("...km,...m->...k", loc.nabla_xi, X)
    rep.add("nabla xi", "g(nabla_X xi, Y) = d eta(X,Y)", max_abs(ev2(g, nxi, Y) - ev2(deta, X, Y)), tol)
    return rep


@dataclass
class FoliationProbe:
    point: np.ndarray
    basis: np.ndarray  # columns span C_p
    singular_values: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def _nabla_phi_map(S, point) -> Jet:
    """Jet of ``X -> nabla_X phi`` as a matrix ``M[(i,j), m]`` near ``point``."""
    loc = S.at(np.atleast_2d(point))
    C = loc.Gamma.truncate(1)
    N = cal.covariant_derivative(loc.phi, (1, 1), C)
    d = loc.dim
    val = N.val.reshape(1, d * d, d)
    d1 = None if N.d1 is None else N.d1.reshape(1, d * d, d, d)
    return Jet(val, d1, None, 2)


def c_distribution(S, point, null_tol: float = NULL_TOL) -> FoliationProbe:
    """Basis of ``C_p = {X : (nabla_X phi)(p) = 0}``."""
    M = _nabla_phi_map(S, point).val[0]
    s = np.linalg.svd(M, compute_uv=False)
    return FoliationProbe(np.asarray(point, dtype=float), null_space(M, null_tol), s)


def _extension(M: Jet, c: np.ndarray) -> np.ndarray:
    """First-order extension ``X(p + t) = c + D t`` of ``c`` staying in ``ker M``.

    Returns ``D[k, m] = d_m X^k`` solving ``M D_m + (d_m M) c = 0`` by least squares.
    """
    M0, dM = M.val[0], M.d1[0]
    rhs = -np.einsum("rkm,k->rm", dM, c)
    return np.linalg.lstsq(M0, rhs, rcond=None)[0]


def foliation_checks(S, points=None, tol: float = 1e-7, null_tol: float = NULL_TOL,
                     loc=None) -> Report:
    """``phi C in C``, involutivity of ``C``, ``dim C = dim M - r + 1`` and leaf conditions."""
    points = S.sample() if points is None else points
    loc = S.at(points) if loc is None else loc
    rep = Report(f"cosymplectic foliation {S.name}")
    if not is_quasi_sasakian(S, tol=DEFAULT_TOL, loc=loc):
        rep.add_na("gate", "N1 = 0 and d Phi = 0", "structure is not quasi-Sasakian")
        return rep
    r = int(acm.classify(S, loc=loc).labels["rank"])
    expected = loc.dim - r + 1
    dims, phi_res, inv_res, leaf_deta, leaf_dphi, leaf_n1, xi_in = [], 0.0, 0.0, 0.0, 0.0, 0.0, 0.0
    for b, p in enumerate(points):
        probe = c_distribution(S, p, null_tol)
        Cb = probe.basis
        dims.append(probe.dim)
        proj = Cb @ Cb.T
        phi = loc.phi.val[b]
        phi_res = max(phi_res, max_abs(phi @ Cb - proj @ phi @ Cb))
        xi = loc.xi.val[b]
        xi_in = max(xi_in, max_abs(xi - proj @ xi))
        M = _nabla_phi_map(S, p)
        exts = [_extension(M, Cb[:, a]) for a in range(probe.dim)]
        for a in range(probe.dim):
            for c in range(a + 1, probe.dim):
                br = exts[c] @ Cb[:, a] - exts[a] @ Cb[:, c]
                inv_res = max(inv_res, max_abs(br - proj @ br))
        deta, dPhi, N1 = loc.deta.val[b], loc.dPhi.val[b], loc.N1[b]
        leaf_deta = max(leaf_deta, max_abs(Cb.T @ deta @ Cb))
        leaf_dphi = max(leaf_dphi, max_abs(np.einsum("ijk,ia,jb,kc->abc", dPhi, Cb, Cb, Cb)))
        leaf_n1 = max(leaf_n1, max_abs(np.einsum("kij,ia,jb->kab", N1, Cb, Cb)))
    dims = np.array(dims)
    rep.add_flag("dim C", "dim C = dim M - r + 1", bool(np.all(dims == expected)),
                 f"expected {expected}, found {sorted(set(int(d) for d in dims))}")
    rep.add("xi in C", "xi in C", xi_in, tol)
    rep.add("phi C in C", "phi C in C", phi_res, tol)
    rep.add("involutive", "[C, C] in C (probe level)", inv_res, tol)
    rep.add("leaf deta", "d eta|C = 0", leaf_deta, tol)
    rep.add("leaf dPhi", "d Phi|C = 0", leaf_dphi, tol)
    rep.add("leaf N1", "N1|C = 0", leaf_n1, tol)
    rep.labels["rank"] = r
    rep.labels["dim C"] = sorted(set(int(d) for d in dims))
    rep.labels["involutivity"] = "probe level only"
    return rep


def heisenberg_report(n: int, a, points=None, tol: float = 1e-8) -> Report:
    """Validator, N1, commutator and d eta tables, Levi signature and rank for one member."""
    S = heisenberg(n, a)
    points = S.sample() if points is None else points
    a = np.asarray(a, dtype=float).reshape(n, n)
    rep = Report(f"heisenberg family {S.name}")
    rep.extend(acm.validate_acm(S, points))
    loc = S.at(points)
    rep.add("N1", "N1 = 0", max_abs(loc.N1), tol)
    rep.extend(commutator_table(S, points, a))
    rep.extend(deta_table(S, points, a))
    sig_a = cal.signature(a)
    expected = (2 * sig_a[0], 2 * sig_a[1])
    found = {acm.levi_form(S, p)[1][:2] for p in points[:10]}
    rep.add_flag("levi signature", "signature(Levi form) = (2k, 2l), (k, l) = signature(a)",
                 found == {expected}, f"expected {expected}, found {sorted(found)}")
    r = acm.classify(S, loc=loc).labels["rank"]
    rank_a = int(np.linalg.matrix_rank(a)) if a.any() else 0
    rep.add_flag("rank", "r = 2 rank(a) + 1", r == 2 * rank_a + 1, f"r = {r}, rank(a) = {rank_a}")
    rep.labels["levi signature"] = list(expected)
    rep.labels["rank"] = r
    return rep
