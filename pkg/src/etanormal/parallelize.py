"""Connections that make an (almost) contact or paracontact metric structure parallel.

The connection is built from Levi-Civita by two deformation tensors,
``nabla~ = nabla - T1 - T2``.  ``T1`` is given in closed form in terms of
``F`` (or ``P``), ``B``, ``hbar`` and ``L_xi g``; ``T2`` repairs metricity:
``g(T2_X Y, Z) = -1/2 (nabla1_X g)(Y, Z)`` where ``nabla1 = nabla - T1``.
Because ``nabla g = 0`` the defect is ``g(T1_X Y, Z) + g(Y, T1_X Z)``, so
only values of ``T1`` are needed.

All (1,2) tensors use ``T[k, i, j]`` = ``d_k`` component of ``T_{d_i} d_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import acm, apcm
from .jets import Jet
from .linalg import act, ev2, matmul, outer, random_vectors
from .report import Report, max_abs

DEFAULT_TOL = 1e-8


class PreconditionError(ValueError):
    """The structure does not satisfy the hypotheses of the construction."""


@dataclass
class DeformedConnection:
    """Levi-Civita coefficients together with the deformation tensors at sample points."""

    loc: object
    T1: np.ndarray
    T2: np.ndarray
    extra: np.ndarray | None = field(default=None)

    @property
    def gamma(self) -> np.ndarray:
        return self.loc.Gamma.val

    @property
    def first(self) -> np.ndarray:
        """Coefficients of ``nabla1 = nabla - T1``."""
        return self.gamma - self.T1

    @property
    def coefficients(self) -> np.ndarray:
        C = self.gamma - self.T1 - self.T2
        return C if self.extra is None else C + self.extra

    def with_difference(self, T: np.ndarray) -> "DeformedConnection":
        """Same connection shifted by a (1,2) tensor ``T`` (``nabla~ + T``)."""
        extra = T if self.extra is None else self.extra + T
        return DeformedConnection(self.loc, self.T1, self.T2, extra)

    def torsion(self, X, Y):
        C = self.coefficients
        return (np.einsum("...kij,...i,...j->...k", C, X, Y)
                - np.einsum("...kij,...i,...j->...k", C, Y, X))


def _covd(T: Jet, valence, C: np.ndarray) -> np.ndarray:
    """Covariant derivative components of a field for connection values ``C``."""
    from .calculus import covariant_derivative
    return covariant_derivative(T.truncate(1), valence, Jet(C, None, None, 3)).val


def t1_acm(loc) -> np.ndarray:
    """``T1_X Y = -phi F_X Y - eta(X) BY - eta(Y)(phi hbar X + BX)
    + 1/2 eta(Y) phi (nabla_xi phi) X + (d eta(Y,X) - 1/2 (L_xi g)(Y,X)) xi``."""
    phi, eta, xi = loc.phi.val, loc.eta.val, loc.xi.val
    B, hb, nxp = loc.B, loc.hbar, loc.nabla_xi_phi
    T = -np.einsum("...kl,...lij->...kij", phi, loc.F)
    T -= np.einsum("...i,...kj->...kij", eta, B)
    T -= np.einsum("...j,...ki->...kij", eta, matmul(phi, hb) + B)
    T += 0.5 * np.einsum("...j,...ki->...kij", eta, matmul(phi, nxp))
    coef = np.swapaxes(loc.deta.val, -1, -2) - 0.5 * np.swapaxes(loc.lxi_g, -1, -2)
    T += np.einsum("...ij,...k->...kij", coef, xi)
    return T


def t1_apcm(loc) -> np.ndarray:
    """``T1_X Y = psi P_X Y - tau(X) BY + tau(Y)(psi hbar X - BX)
    + 1/2 tau(Y) psi (nabla_zeta psi) X + (d tau(Y,X) - 1/2 (L_zeta g)(Y,X)) zeta``."""
    psi, tau, zeta = loc.psi.val, loc.tau.val, loc.zeta.val
    B, hb, nzp = loc.B, loc.hbar, loc.nabla_reeb_aff
    T = np.einsum("...kl,...lij->...kij", psi, loc.F)
    T -= np.einsum("...i,...kj->...kij", tau, B)
    T += np.einsum("...j,...ki->...kij", tau, matmul(psi, hb) - B)
    T += 0.5 * np.einsum("...j,...ki->...kij", tau, matmul(psi, nzp))
    coef = np.swapaxes(loc.dtau.val, -1, -2) - 0.5 * np.swapaxes(loc.l_g, -1, -2)
    T += np.einsum("...ij,...k->...kij", coef, zeta)
    return T


def metric_defect(loc, T1: np.ndarray) -> np.ndarray:
    """``(nabla1_{d_i} g)(d_j, d_l)`` as ``[i, j, l]``."""
    g = loc.g.val
    return np.einsum("...kl,...kij->...ijl", g, T1) + np.einsum("...jk,...kil->...ijl", g, T1)


def t2_from(loc, T1: np.ndarray) -> np.ndarray:
    D = metric_defect(loc, T1)
    return -0.5 * np.einsum("...kl,...ijl->...kij", loc.ginv.val, D)


def _gate(S, loc, tol):
    if S.kind == "acm":
        normal = acm.is_eta_normal(S, tol=tol, loc=loc).labels["eta_normal"]
        auto = acm.autoparallel_equivalences(S, tol=tol, loc=loc).labels["autoparallel_reeb"]
        what = "eta-normal"
    else:
        normal = apcm.is_tau_normal(S, tol=tol, loc=loc).labels["tau_normal"]
        auto = apcm.autoparallel_equivalences(S, tol=tol, loc=loc).labels["autoparallel_reeb"]
        what = "tau-normal"
    return normal, auto, what


def build_tanaka_like(S, points=None, tol: float = DEFAULT_TOL, check: bool = True, loc=None):
    """Deformed connection for an ACM or APCM structure.

    Raises :class:`PreconditionError` unless the structure is eta-normal
    (tau-normal) with autoparallel Reeb field.
    """
    loc = S.at(S.sample() if points is None else points) if loc is None else loc
    if check:
        normal, auto, what = _gate(S, loc, tol)
        if not (normal and auto):
            raise PreconditionError(
                f"{S.name}: construction needs a {what} structure with autoparallel Reeb field"
                f" ({what}={normal}, autoparallel={auto})")
    T1 = t1_acm(loc) if S.kind == "acm" else t1_apcm(loc)
    return DeformedConnection(loc, T1, t2_from(loc, T1))


def para_parallelize(S, points=None, tol: float = DEFAULT_TOL, loc=None):
    """Paracontact version: returns ``(connection, report)``."""
    C = build_tanaka_like(S, points, tol, loc=loc)
    return C, verify_parallel(C, tol)


def parallel_residuals(loc, C: np.ndarray) -> dict:
    return {
        "affinor": max_abs(_covd(loc.aff, (1, 1), C)),
        "reeb": max_abs(_covd(loc.reeb, (1, 0), C)),
        "form": max_abs(_covd(loc.form, (0, 1), C)),
        "metric": max_abs(_covd(loc.g, (0, 2), C)),
    }


def _names(S):
    return ("phi", "xi", "eta") if S.kind == "acm" else ("psi", "zeta", "tau")


def verify_parallel(conn: DeformedConnection, tol: float = DEFAULT_TOL) -> Report:
    loc = conn.loc
    S = loc.S
    a, r, f = _names(S)
    rep = Report(f"parallel structure {S.name}")
    res = parallel_residuals(loc, conn.coefficients)
    for key, sym in (("affinor", a), ("reeb", r), ("form", f), ("metric", "g")):
        rep.add(f"nabla~ {sym}", f"nabla~ {sym} = 0, nabla~ = nabla - T1 - T2", res[key], tol)
    # the first stage already parallelizes everything but g
    first = parallel_residuals(loc, conn.first)
    for key, sym in (("affinor", a), ("reeb", r), ("form", f)):
        rep.add(f"nabla1 {sym}", f"nabla1 {sym} = 0, nabla1 = nabla - T1", first[key], tol)
    D = metric_defect(loc, conn.T1)
    rng = np.random.default_rng(7)
    X, Y, Z = (random_vectors(rng, loc.batch, loc.dim, 3) for _ in range(3))
    aff = loc.aff.val
    dg = lambda U, V: np.einsum("...ijl,...i,...j,...l->...", D, X, U, V)
    sign = -1.0 if S.kind == "acm" else 1.0  # g(AY,AZ) = -/+ g(Y,Z) on the kernel
    rep.add("nabla1 g symmetry 1", f"(nabla1_X g)(A Y, A Z) = {'' if S.kind == 'acm' else '-'}(nabla1_X g)(Y,Z)",
            max_abs(dg(act(aff, Y), act(aff, Z)) + sign * dg(Y, Z)), tol)
    rep.add("nabla1 g symmetry 2", "(nabla1_X g)(A Y, Z) + (nabla1_X g)(Y, A Z) = 0",
            max_abs(dg(act(aff, Y), Z) + dg(Y, act(aff, Z))), tol)
    if S.kind == "acm":
        B = loc.B
        rep.add("phi B = B phi", "phi B = B phi", max_abs(matmul(aff, B) - matmul(B, aff)), tol)
    rep.labels["max |T1|"] = max_abs(conn.T1)
    rep.labels["max |T2|"] = max_abs(conn.T2)
    return rep


def levi_civita_parallel_defect(S, points=None, loc=None) -> float:
    """``max |nabla A|`` for the Levi-Civita connection itself."""
    loc = S.at(S.sample() if points is None else points) if loc is None else loc
    return max_abs(loc.nabla_aff)


def torsion_conditions(conn: DeformedConnection, tol: float = DEFAULT_TOL, seed: int = 42) -> Report:
    """Torsion conditions singling out the connection on eta-normal structures
    with closed fundamental form."""
    loc = conn.loc
    S = loc.S
    rep = Report(f"torsion conditions {S.name}")
    closed = max_abs(loc.dfund.val) < tol
    if not closed:
        rep.labels["hypothesis"] = "hypothesis not met: d Phi != 0"
    rng = np.random.default_rng(seed)
    Y = random_vectors(rng, loc.batch, loc.dim, 5)
    X = random_vectors(rng, loc.batch, loc.dim, 5)
    xi = np.broadcast_to(loc.xi.val, Y.shape)
    phi = loc.phi.val
    c1 = conn.torsion(xi, act(phi, Y)) + act(phi, conn.torsion(xi, Y))
    rep.add("S(xi,phiY) = -phi S(xi,Y)", "S(xi, phi Y) = -phi S(xi, Y)", max_abs(c1), tol)
    Xd, Yd = loc.project_D(X), loc.project_D(Y)
    c2 = conn.torsion(Xd, Yd) - 2.0 * ev2(loc.deta.val, Xd, Yd)[..., None] * loc.xi.val
    rep.add("S(X,Y) = 2deta(X,Y)xi on ker eta", "S(X,Y) = 2 d eta(X,Y) xi for eta(X) = eta(Y) = 0",
            max_abs(c2), tol)
    return rep


def closed_forms(loc) -> dict:
    """Class-specific closed forms of ``T1`` (and the Kenmotsu ``T2``)."""
    phi, eta, xi, g = loc.phi.val, loc.eta.val, loc.xi.val, loc.g.val
    nx = loc.nabla_xi  # [k, i] = (nabla_i xi)^k
    gnx = np.einsum("...ki,...kj->...ij", nx, g)  # g(nabla_i xi, d_j)
    common = np.einsum("...j,...ki->...kij", eta, nx) - np.einsum("...ij,...k->...kij", gnx, xi)
    eye = np.eye(loc.dim)
    ee_xi = np.einsum("...i,...j,...k->...kij", eta, eta, xi)
    return {
        "tanaka": common - np.einsum("...i,...kj->...kij", eta, phi),
        "cosymplectic": common,
        "kenmotsu_T1": common - np.einsum("...i,kj->...kij", eta, eye) + ee_xi,
        "kenmotsu_T2": np.einsum("...i,kj->...kij", eta, eye) - ee_xi,
    }


def specialization_check(S, points=None, tol: float = 1e-9, loc=None) -> Report:
    """Compare the general ``T1`` with the closed form of the structure's class."""
    loc = S.at(S.sample() if points is None else points) if loc is None else loc
    rep = Report(f"specialized deformation tensors {S.name}")
    classes = set(acm.classify(S, loc=loc).labels["classes"])
    conn = build_tanaka_like(S, loc=loc)
    cf = closed_forms(loc)
    matched = False
    if "contact metric" in classes:
        matched = True
        rep.add("tanaka", "T1_X Y = -eta(X) phi Y + eta(Y) nabla_X xi - g(nabla_X xi, Y) xi",
                max_abs(conn.T1 - cf["tanaka"]), tol)
    if "almost cosymplectic" in classes:
        matched = True
        rep.add("cosymplectic", "T1_X Y = eta(Y) nabla_X xi - g(nabla_X xi, Y) xi",
                max_abs(conn.T1 - cf["cosymplectic"]), tol)
        rep.add("cosymplectic T2", "T2 = 0", max_abs(conn.T2), tol)
    if "almost Kenmotsu" in classes:
        matched = True
        rep.add("kenmotsu T1", "T1_X Y = -eta(X)Y + eta(Y) nabla_X xi - g(nabla_X xi,Y) xi + eta(X)eta(Y) xi",
                max_abs(conn.T1 - cf["kenmotsu_T1"]), tol)
        rep.add("kenmotsu T2", "T2_X Y = eta(X)Y - eta(X)eta(Y) xi",
                max_abs(conn.T2 - cf["kenmotsu_T2"]), tol)
        rep.add("kenmotsu connection", "nabla~_X Y = nabla_X Y - eta(Y) nabla_X xi + g(nabla_X xi, Y) xi",
                max_abs(conn.T1 + conn.T2 - cf["cosymplectic"]), tol)
    if not matched:
        rep.add_na("class", "contact metric / almost cosymplectic / almost Kenmotsu",
                   "structure is in none of the three classes")
    return rep


def admissible_generator(loc, seed: int = 0, break_reeb: bool = False) -> np.ndarray:
    """``T_X Y = eta(X) K Y`` with ``K`` g-skew, commuting with ``phi`` and ``K xi = 0``.

    ``break_reeb`` adds ``xi (x) eta`` to ``K`` so that ``K xi != 0``.
    """
    rng = np.random.default_rng(seed)
    phi, xi, eta, g, ginv = loc.phi.val, loc.xi.val, loc.eta.val, loc.g.val, loc.ginv.val
    P = np.eye(loc.dim) - outer(xi, eta)
    M = rng.normal(size=(loc.batch, loc.dim, loc.dim))
    K1 = matmul(P, matmul(M, P))
    K2 = 0.5 * (K1 - matmul(phi, matmul(K1, phi)))
    K = 0.5 * (K2 - matmul(ginv, matmul(np.swapaxes(K2, -1, -2), g)))
    if break_reeb:
        K = K + outer(xi, eta)
    return np.einsum("...i,...kj->...kij", eta, K)


def difference_tensor_check(c1: DeformedConnection, c2: DeformedConnection,
                            tol: float = DEFAULT_TOL, seed: int = 42) -> Report:
    """Properties of ``T = nabla2 - nabla1`` for two parallelizations."""
    loc = c1.loc
    rep = Report(f"difference tensor {loc.S.name}")
    T = c2.coefficients - c1.coefficients
    rng = np.random.default_rng(seed)
    X, Y, Z = (random_vectors(rng, loc.batch, loc.dim, 5) for _ in range(3))
    phi, xi, g = loc.phi.val, loc.xi.val, loc.g.val
    tv = lambda U, V: np.einsum("...kij,...i,...j->...k", T, U, V)
    rep.add("T_X phi Y = phi T_X Y", "T_X phi Y = phi T_X Y", max_abs(tv(X, act(phi, Y)) - act(phi, tv(X, Y))), tol)
    rep.add("T_X xi = 0", "T_X xi = 0", max_abs(tv(X, np.broadcast_to(xi, X.shape))), tol)
    rep.add("g(T_X Y,Z) + g(Y,T_X Z) = 0", "g(T_X Y, Z) + g(Y, T_X Z) = 0",
            max_abs(ev2(g, tv(X, Y), Z) + ev2(g, Y, tv(X, Z))), tol)
    return rep
