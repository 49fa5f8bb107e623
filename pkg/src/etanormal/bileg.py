"""Bi-Legendrian geometry of paracontact-type structures.

The eigendistributions ``V+`` and ``V-`` of ``psi`` are Legendrian when
``tau`` is a contact form.  Flatness is measured by the Pang invariants
``Pi+-(X, Y) = -tau([[zeta, X], Y])`` on sections of ``V+-``, computed from
second-order jets of projector-corrected coordinate fields.
"""

from __future__ import annotations

import numpy as np

from . import acm, apcm
from . import calculus as cal
from .jets import Jet
from .linalg import act, ev1, ev2, matmul
from .report import Report, max_abs

DEFAULT_TOL = 1e-8
CONTACT_TOL = 1e-10

ANCHORS = {
    "R=zeta": "R = zeta, tau(R) = 1, i_R d tau = 0",
    "L_zeta tau": "L_zeta tau = 0",
    "nabla_zeta zeta": "nabla_zeta zeta = 0",
    "h psi": "h psi + psi h = 0",
    "pang": "Pi+-(X,Y) = (L_X L_Y tau)(zeta) = -tau([[zeta,X],Y])",
    "pang h": "Pi+(X+,Y+) = 2 d tau(h X+, Y+), Pi-(X-,Y-) = -2 d tau(h X-, Y-)",
    "pi2plus": "Pi+(X+,Y+) = 4 d tau(h X+, Y+) + 2 d tau(psi [zeta, X+], Y+)",
    "dtpsi": "2 d tau(psi [zeta, X+], Y+) = -Pi+(X+,Y+)",
    "projectors": "P+-^2 = P+-, P+ P- = 0, P+ + P- = Id - tau (x) zeta",
    "h flips": "P-+ h P+- = h P+-",
    "chi sym": "chi(X,Y) = chi(Y,X), chi(X,Y) = d tau(hX, psi Y)",
    "chi dtau": "chi(X,Y) = -d tau(psi h X, Y) = d tau(h psi X, Y)",
    "chi orth": "chi(V+, V-) = 0",
    "chi pang": "chi|V+- = 1/2 Pi+-",
    "flat": "flat <-> normal <-> h = 0",
    "semi-flat": "semi-flat <-> h^2 = 0",
    "chi h": "one Pi vanishes -> chi(X, hY) = 0",
    "kappa mu": "R(X,Y)zeta = kappa(tau(Y)X - tau(X)Y) + mu(tau(Y)hX - tau(X)hY)",
    "h^2": "h^2 X = (1 + kappa)(X - tau(X) zeta)",
}


class ReebUndefinedError(ValueError):
    """``tau`` is not a contact form at some sample point."""


def _loc(S, points, loc):
    return S.at(S.sample() if points is None else points) if loc is None else loc


def contact_value(loc) -> np.ndarray:
    """``|tau ^ (d tau)^n|`` maximized over coordinate subsets, per point."""
    n = (loc.dim - 1) // 2
    return acm.eta_wedge_power(loc, loc.tau.val, loc.dtau.val, n)


def is_contact(loc, tol: float = CONTACT_TOL) -> bool:
    return bool(np.all(contact_value(loc) > tol))


def reeb_field(S, points=None, loc=None) -> np.ndarray:
    """Values of the Reeb field ``R`` of ``tau``: ``tau(R) = 1``, ``d tau(R, .) = 0``."""
    loc = _loc(S, points, loc)
    if not is_contact(loc):
        raise ReebUndefinedError(f"Reeb undefined: tau is not contact on {S.name}")
    A = np.concatenate([np.swapaxes(loc.dtau.val, -1, -2), loc.tau.val[..., None, :]], axis=-2)
    rhs = np.zeros(A.shape[:-1])
    rhs[..., -1] = 1.0
    return np.stack([np.linalg.lstsq(a, b, rcond=None)[0] for a, b in zip(A, rhs)])


def reeb_equivalences(S, points=None, tol: float = DEFAULT_TOL, loc=None) -> Report:
    """a) ``R = zeta``, b) ``L_zeta tau = 0``, c) ``nabla_zeta zeta = 0``, d) ``h psi + psi h = 0``."""
    loc = _loc(S, points, loc)
    rep = Report(f"Reeb equivalences {S.name}")
    if not is_contact(loc):
        for key in ("R=zeta", "L_zeta tau", "nabla_zeta zeta", "h psi"):
            rep.add_na(key, ANCHORS[key], "tau is not contact")
        rep.labels["R=zeta"] = False
        return rep
    R = reeb_field(S, loc=loc)
    zeta, psi, h = loc.zeta.val, loc.psi.val, loc.h
    c = [rep.add("R=zeta", ANCHORS["R=zeta"], max_abs(R - zeta), tol),
         rep.add("L_zeta tau", ANCHORS["L_zeta tau"], max_abs(loc.l_form), tol),
         rep.add("nabla_zeta zeta", ANCHORS["nabla_zeta zeta"],
                 max_abs(np.einsum("...km,...m->...k", loc.nabla_reeb, zeta)), tol),
         rep.add("h psi", ANCHORS["h psi"], max_abs(matmul(h, psi) + matmul(psi, h)), tol)]
    verdicts = [x.verdict for x in c]
    rep.add_flag("agreement", "a) <-> b) <-> c) <-> d)", len(set(verdicts)) == 1, ",".join(verdicts))
    rep.labels["R=zeta"] = c[0].ok
    return rep


def eigen_fields(loc, sign: int) -> list[Jet]:
    """Second-order jets of ``P+- d_k``; they span ``V+-``."""
    P = loc.projectors[0 if sign > 0 else 1]
    return [cal.apply(P, cal.coordinate_field(k, loc.dim)) for k in range(loc.dim)]


def pang_matrix(loc, sign: int) -> np.ndarray:
    """``Pi[b, k, l] = -tau([[zeta, X_k], X_l])`` for ``X_k = P+- d_k``."""
    fields = eigen_fields(loc, sign)
    zeta = loc.zeta
    tau = loc.tau.val
    inner = [cal.bracket(zeta, X) for X in fields]
    out = np.empty((loc.batch, loc.dim, loc.dim))
    for k, ZX in enumerate(inner):
        for l, Y in enumerate(fields):
            out[:, k, l] = -ev1(tau, cal.bracket(ZX, Y.truncate(1)).val)
    return out


def pang(S, sign: int, X, Y, points=None, loc=None) -> np.ndarray:
    """``Pi+-(X, Y)`` for vectors ``X, Y`` of ``V+-`` at the sample points.

    The invariant is tensorial on ``V+-``, so it is evaluated on the
    spanning fields and extended linearly through ``X = P+- X``.
    """
    loc = _loc(S, points, loc)
    Pi = pang_matrix(loc, sign)
    return np.einsum("...kl,...k,...l->...", Pi, X, Y)


def _eigen_vectors(loc, sign: int):
    """Values of the spanning fields ``P+- d_k`` as ``(dim, B, dim)``."""
    P = loc.projectors[0 if sign > 0 else 1].val
    return np.moveaxis(P, -1, 0)


def pang_report(S, points=None, tol: float = 1e-7, loc=None) -> Report:
    """Double-bracket Pang invariants against their ``d tau(h., .)`` closed forms."""
    loc = _loc(S, points, loc)
    rep = Report(f"Pang invariants {S.name}")
    if not (is_contact(loc) and reeb_equivalences(S, tol=DEFAULT_TOL, loc=loc).labels["R=zeta"]):
        for key in ("pang h", "pi2plus", "dtpsi"):
            rep.add_na(key, ANCHORS[key], "needs contact tau with R = zeta")
        return rep
    dtau, h, psi, zeta = loc.dtau.val, loc.h, loc.psi.val, loc.zeta
    worst_h, worst_pi2, worst_dt = 0.0, 0.0, 0.0
    pis = {}
    for sign in (1, -1):
        Pi = pang_matrix(loc, sign)
        pis[sign] = Pi
        V = _eigen_vectors(loc, sign)
        fields = eigen_fields(loc, sign)
        for k in range(loc.dim):
            zX = cal.bracket(zeta, fields[k]).val
            for l in range(loc.dim):
                closed = sign * 2.0 * ev2(dtau, act(h, V[k]), V[l])
                worst_h = max(worst_h, max_abs(Pi[:, k, l] - closed))
                if sign > 0:
                    psi_term = 2.0 * ev2(dtau, act(psi, zX), V[l])
                    worst_pi2 = max(worst_pi2, max_abs(
                        Pi[:, k, l] - 4.0 * ev2(dtau, act(h, V[k]), V[l]) - psi_term))
                    worst_dt = max(worst_dt, max_abs(psi_term + Pi[:, k, l]))
    rep.add("pang h", ANCHORS["pang h"], worst_h, tol)
    rep.add("pi2plus", ANCHORS["pi2plus"], worst_pi2, tol)
    rep.add("dtpsi", ANCHORS["dtpsi"], worst_dt, tol)
    rep.labels["max |Pi+|"] = max_abs(pis[1])
    rep.labels["max |Pi-|"] = max_abs(pis[-1])
    return rep


def chi(loc) -> np.ndarray:
    """Components of ``chi(X, Y) = d tau(hX, psi Y)``."""
    return np.einsum("...ab,...ai,...bj->...ij", loc.dtau.val, loc.h, loc.psi.val)


def projector_checks(S, points=None, tol: float = 1e-9, loc=None) -> Report:
    loc = _loc(S, points, loc)
    rep = Report(f"eigen-projectors {S.name}")
    Pp, Pm = (P.val for P in loc.projectors)
    eye = np.eye(loc.dim)
    res = max_abs(matmul(Pp, Pp) - Pp, matmul(Pm, Pm) - Pm, matmul(Pp, Pm),
                  Pp + Pm - eye + np.einsum("...k,...i->...ik", loc.tau.val, loc.zeta.val))
    rep.add("projectors", ANCHORS["projectors"], res, tol)
    h, psi = loc.h, loc.psi.val
    if max_abs(matmul(h, psi) + matmul(psi, h)) >= DEFAULT_TOL:
        rep.add_na("h flips", ANCHORS["h flips"], "needs h psi + psi h = 0")
        return rep
    rep.add("h flips", ANCHORS["h flips"],
            max_abs(matmul(Pm, matmul(h, Pp)) - matmul(h, Pp), matmul(Pp, matmul(h, Pm)) - matmul(h, Pm)),
            DEFAULT_TOL)
    return rep


def chi_properties(S, points=None, tol: float = 1e-7, seed: int = 42, loc=None) -> Report:
    loc = _loc(S, points, loc)
    rep = Report(f"chi tensor {S.name}")
    eq = reeb_equivalences(S, tol=DEFAULT_TOL, loc=loc)
    if not eq.labels.get("R=zeta"):
        for key in ("chi sym", "chi dtau", "chi orth", "chi pang"):
            rep.add_na(key, ANCHORS[key], "needs R = zeta")
        return rep
    X_ = chi(loc)
    dtau, h, psi = loc.dtau.val, loc.h, loc.psi.val
    rep.add("chi sym", ANCHORS["chi sym"], max_abs(X_ - np.swapaxes(X_, -1, -2)), tol)
    alt1 = -matmul(np.swapaxes(matmul(psi, h), -1, -2), dtau)
    alt2 = matmul(np.swapaxes(matmul(h, psi), -1, -2), dtau)
    rep.add("chi dtau", ANCHORS["chi dtau"], max_abs(X_ - alt1, X_ - alt2), tol)
    Pp, Pm = (P.val for P in loc.projectors)
    rep.add("chi orth", ANCHORS["chi orth"],
            max_abs(np.einsum("...ij,...ia,...jb->...ab", X_, Pp, Pm)), tol)
    worst = 0.0
    for sign, P in ((1, Pp), (-1, Pm)):
        Pi = pang_matrix(loc, sign)
        restricted = np.einsum("...ij,...ia,...jb->...ab", X_, P, P)
        worst = max(worst, max_abs(restricted - 0.5 * Pi))
    rep.add("chi pang", ANCHORS["chi pang"], worst, tol)
    rep.labels["max |chi|"] = max_abs(X_)
    return rep


def flatness(S, points=None, tol: float = 1e-8, loc=None) -> Report:
    """Flat / semi-flat / non-flat verdict with the theorem cross-checks."""
    loc = _loc(S, points, loc)
    rep = Report(f"bi-Legendrian flatness {S.name}")
    tn = apcm.is_tau_normal(S, tol=DEFAULT_TOL, loc=loc).labels["tau_normal"]
    contact = is_contact(loc)
    rz = contact and reeb_equivalences(S, tol=DEFAULT_TOL, loc=loc).labels["R=zeta"]
    if not (tn and contact and rz):
        rep.add_na("flatness", ANCHORS["flat"],
                   f"needs tau-normal contact structure with R = zeta (tau-normal={tn}, contact={contact}, R=zeta={rz})")
        rep.labels["flatness"] = "not applicable"
        return rep
    pp, pm = max_abs(pang_matrix(loc, 1)), max_abs(pang_matrix(loc, -1))
    h = loc.h
    nK1, nh, nh2 = max_abs(loc.K1), max_abs(h), max_abs(matmul(h, h))
    flat = max(pp, pm) < tol
    semi_plus, semi_minus = pp < tol, pm < tol
    semi = semi_plus or semi_minus
    rep.labels["max |Pi+|"] = pp
    rep.labels["max |Pi-|"] = pm
    rep.add_flag("flat <-> normal", ANCHORS["flat"], flat == (nK1 < tol), f"|K1| = {nK1:.3e}")
    rep.add_flag("flat <-> h = 0", ANCHORS["flat"], flat == (nh < tol), f"|h| = {nh:.3e}")
    rep.add_flag("semi-flat <-> h^2 = 0", ANCHORS["semi-flat"], semi == (nh2 < tol), f"|h^2| = {nh2:.3e}")
    if semi:
        X_ = chi(loc)
        rep.add("chi(X,hY) = 0", ANCHORS["chi h"], max_abs(matmul(X_, h)), max(tol, 1e-7))
    if flat:
        label = "flat"
    elif semi_plus:
        label = "semi_flat_plus"
    elif semi_minus:
        label = "semi_flat_minus"
    else:
        label = "non_flat"
    rep.labels["flatness"] = label
    rep.labels["normal"] = nK1 < tol
    rep.labels["h=0"] = nh < tol
    rep.labels["h^2=0"] = nh2 < tol
    return rep


def curvature_reeb(loc) -> np.ndarray:
    """``Rz[b, k, i, j]`` = components of ``R(d_i, d_j) zeta``,
    ``R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]``."""
    C = loc.Gamma
    zeta = loc.zeta
    out = np.zeros((loc.batch, loc.dim, loc.dim, loc.dim))
    E = cal.coordinate_fields(loc.dim)
    for i in range(loc.dim):
        for j in range(i + 1, loc.dim):
            v = cal.curvature(C, E[i], E[j], zeta).val
            out[:, :, i, j] = v
            out[:, :, j, i] = -v
    return out


def _kappa_mu_basis(loc):
    """Tensors multiplying ``kappa`` and ``mu`` in the curvature identity."""
    tau, h = loc.tau.val, loc.h
    eye = np.eye(loc.dim)
    K = np.einsum("...j,ki->...kij", tau, eye) - np.einsum("...i,kj->...kij", tau, eye)
    M = np.einsum("...j,...ki->...kij", tau, h) - np.einsum("...i,...kj->...kij", tau, h)
    return K, M


def fit_kappa_mu(S, points=None, kappa: float | None = None, loc=None) -> tuple[float, float]:
    """Least-squares ``(kappa, mu)``; with ``kappa`` given only ``mu`` is fitted."""
    loc = _loc(S, points, loc)
    Rz = curvature_reeb(loc).ravel()
    K, M = (t.ravel() for t in _kappa_mu_basis(loc))
    if kappa is None:
        sol = np.linalg.lstsq(np.stack([K, M], axis=1), Rz, rcond=None)[0]
        return float(sol[0]), float(sol[1])
    r = Rz - kappa * K
    den = float(M @ M)
    return float(kappa), float(M @ r / den) if den > 0 else 0.0


def kappa_mu_residual(S, kappa: float, mu: float, points=None, loc=None) -> tuple[float, float]:
    """``(max |R(X,Y)zeta - kappa(..) - mu(..)|, max |h^2 - (1+kappa)(Id - tau (x) zeta)|)``."""
    loc = _loc(S, points, loc)
    K, M = _kappa_mu_basis(loc)
    curv = max_abs(curvature_reeb(loc) - kappa * K - mu * M)
    h = loc.h
    target = (1.0 + kappa) * (np.eye(loc.dim) - np.einsum("...k,...i->...ik", loc.tau.val, loc.zeta.val))
    return curv, max_abs(matmul(h, h) - target)


def kappa_mu_report(S, kappa: float | None = -1.0, points=None, tol: float = 1e-6, loc=None) -> Report:
    """Fit ``mu`` (and ``kappa`` if not given) and certify the curvature identity."""
    loc = _loc(S, points, loc)
    k, m = fit_kappa_mu(S, kappa=kappa, loc=loc)
    curv, hres = kappa_mu_residual(S, k, m, loc=loc)
    rep = Report(f"(kappa,mu) certification {S.name}")
    rep.add("kappa mu", ANCHORS["kappa mu"], curv, tol)
    rep.add("h^2", ANCHORS["h^2"], hres, tol)
    rep.labels["kappa"] = k
    rep.labels["mu"] = m
    return rep


def bileg_suite(S, points=None, tol: float = 1e-7, loc=None) -> Report:
    """All bi-Legendrian checks applicable to ``S``."""
    loc = _loc(S, points, loc)
    rep = Report(f"bi-Legendrian {S.name}")
    rep.extend(projector_checks(S, loc=loc))
    rep.extend(reeb_equivalences(S, loc=loc))
    if is_contact(loc):
        rep.extend(pang_report(S, tol=tol, loc=loc))
        rep.extend(chi_properties(S, tol=tol, loc=loc))
    rep.extend(flatness(S, loc=loc))
    return rep
