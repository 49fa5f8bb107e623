"""Almost contact metric structures ``(phi, xi, eta, g)``.

All tensors are evaluated as component jets at a batch of sample points
(:class:`ACMLocal`).  Identities are then checked by contracting the
component values with random vectors, which is legitimate because every
identity checked here is tensorial.  Non-tensorial ingredients (brackets,
Lie derivatives) are always computed through jets, never by finite
differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import calculus as cal
from .calculus import ChartManifold
from .jets import Jet
from .local import StructureLocal
from .linalg import act, ev1, ev2, ev3, matmul, outer, random_vectors, vv
from .report import Report, max_abs

DEFAULT_TOL = 1e-8

# anchors are the identities in formula form; report rows carry them verbatim
ANCHORS = {
    "phi^2": "phi^2 = -Id + eta(x)xi",
    "eta(xi)=1": "eta(xi) = 1",
    "compat": "g(phi X, phi Y) = g(X,Y) - eta(X)eta(Y)",
    "g symmetric": "g(X,Y) = g(Y,X)",
    "volume": "eta ^ Phi^n != 0",
    "N1|D": "N1(X,Y) = [phi,phi](X,Y) + 2 d eta(X,Y) xi = 0 on ker eta",
    "CR eta": "eta([X,Y] - [phi X, phi Y]) = 0 on ker eta",
    "CR phi": "phi([X,Y] - [phi X, phi Y]) = [phi X, Y] + [X, phi Y] on ker eta",
    "general": ("2g((nabla_X phi)Y,Z) = 3dPhi(X,phiY,phiZ) - 3dPhi(X,Y,Z) + g(N1(Y,Z),phiX)"
                " + N2(Y,Z)eta(X) + 2deta(phiY,X)eta(Z) - 2deta(phiZ,X)eta(Y)"),
    "covd": ("g((nabla_X phi)Y,Z) = 3/2 dPhi(X,phiY,phiZ) - 3/2 dPhi(X,Y,Z)"
             " + u(Y,X)eta(Z) - u(Z,X)eta(Y), u(Y,X) = deta(phiY,X) + g(hY,X)"),
    "nabla xi": "2g(nabla_X xi, Y) = 2 d eta(X,Y) + (L_xi g)(X,Y)",
    "dPhi xi": "3 dPhi(xi,X,Y) = (L_xi Phi)(X,Y)",
    "lxiFi": "(L_xi Phi)(X,Y) + (L_xi g)(phi X, Y) = -2 g(hX,Y)",
    "h anti": "g(hY,Z) - g(hZ,Y) = -1/2 (L_xi Phi)(Y,Z) + 1/2 (L_xi Phi)(phiY,phiZ) on ker eta",
    "n2 deta": "N2(X,Y) = 2 d eta(phi X, Y) - 2 d eta(phi Y, X)",
    "hphi": "h phi + phi h = 1/2 (L_xi eta) (x) xi",
    "2etah": "2 eta(hX) = eta((nabla_xi phi) X)",
    "nxi phi": "g((nabla_xi phi)Y,Z) = g(hY,Z) - g(hZ,Y)",
    "ubar sym": "ubar(X,Y) = d eta(phi Y, X) + g(hbar X, Y) is symmetric",
    "hbar sym": "g(hbar Y, Z) = g(hbar Z, Y)",
    "contact": "d eta = Phi",
    "deta=0": "d eta = 0",
    "dPhi=0": "d Phi = 0",
    "dPhi=2eta^Phi": "d Phi = 2 eta ^ Phi",
    "normal": "N1 = 0",
    "contact CR": "(nabla_X phi)Y = g(X+hX,Y)xi - eta(Y)(X+hX)",
    "cosymplectic CR": "(nabla_X phi)Y = -g(phi A X,Y)xi + eta(Y) phi A X, AX = -nabla_X xi",
    "Kenmotsu CR": "(nabla_X phi)Y = g(phi X+hX,Y)xi - eta(Y)(phi X+hX)",
    "autoparallel": "h phi + phi h = 0 <-> L_xi eta = 0 <-> eta o h = 0 <-> nabla_xi xi = 0",
}


@dataclass(frozen=True)
class ACMStructure:
    """Tensor fields of an almost contact metric structure on one chart.

    Fields may be :class:`~etanormal.calculus.TensorField` (expression
    components) or :class:`~etanormal.calculus.JetField` (derived fields).
    """

    chart: ChartManifold
    phi: object
    xi: object
    eta: object
    g: object
    name: str = "acm"
    kind = "acm"

    affinor = property(lambda self: self.phi)
    reeb = property(lambda self: self.xi)
    form = property(lambda self: self.eta)

    def __post_init__(self):
        n = self.chart.dim
        if n < 3 or n % 2 == 0:
            raise ValueError("almost contact structures need odd dimension >= 3")
        for f, val in (("phi", (1, 1)), ("xi", (1, 0)), ("eta", (0, 1)), ("g", (0, 2))):
            fld = getattr(self, f)
            if tuple(fld.valence) != val:
                raise ValueError(f"{f} must have valence {val}")
            if fld.chart != self.chart:
                raise cal.ChartMismatchError(f"{f} lives on a different chart")

    @property
    def n(self) -> int:
        return (self.chart.dim - 1) // 2

    def at(self, points) -> "ACMLocal":
        return ACMLocal(self, self.chart.check_points(points))

    def sample(self, count: int = 100, seed: int = 42) -> np.ndarray:
        return self.chart.sample(count, seed)


class ACMLocal(StructureLocal):
    """Evaluated ACM structure; see :class:`~etanormal.local.StructureLocal`."""

    phi = property(lambda self: self.aff)
    xi = property(lambda self: self.reeb)
    eta = property(lambda self: self.form)
    Phi = property(lambda self: self.fund)
    deta = property(lambda self: self.dform)
    dPhi = property(lambda self: self.dfund)
    nabla_phi = property(lambda self: self.nabla_aff)
    nabla_xi = property(lambda self: self.nabla_reeb)
    nabla_eta = property(lambda self: self.nabla_form)
    lxi_phi = property(lambda self: self.l_aff)
    lxi_eta = property(lambda self: self.l_form)
    lxi_g = property(lambda self: self.l_g)
    lxi_Phi = property(lambda self: self.l_fund)
    nabla_xi_phi = property(lambda self: self.nabla_reeb_aff)
    N2 = property(lambda self: self.lie_pair)

    @cached_property
    def N1(self) -> np.ndarray:
        return self.nijenhuis_aff + 2.0 * np.einsum("...ij,...k->...kij", self.deta.val, self.xi.val)

    def gval(self, X, Y):
        return ev2(self.g.val, X, Y)

    def cov_phi(self, X, Y):
        return self.cov_aff(X, Y)

    def d_basis(self) -> np.ndarray:
        return self.kernel_basis()

    def project_D(self, X):
        return self.project_kernel(X)


# ----------------------------------------------------------------------
# field-level operations (jets of vector fields in, jets out)


def n1(loc: ACMLocal, X: Jet, Y: Jet) -> Jet:
    """``N1(X, Y) = [phi,phi](X,Y) + 2 d eta(X,Y) xi`` from brackets of the fields."""
    return cal.nijenhuis(loc.phi, X, Y) + 2.0 * cal.scale(cal.d_oneform(loc.eta, X, Y), loc.xi)


def n2(loc: ACMLocal, X: Jet, Y: Jet) -> Jet:
    """``N2(X, Y) = (L_{phi X} eta)(Y) - (L_{phi Y} eta)(X)`` from the field definitions."""
    pX, pY = cal.apply(loc.phi, X), cal.apply(loc.phi, Y)
    lx = cal.directional(pX, cal.pair(loc.eta, Y)) - cal.pair(loc.eta, cal.bracket(pX, Y))
    ly = cal.directional(pY, cal.pair(loc.eta, X)) - cal.pair(loc.eta, cal.bracket(pY, X))
    return lx - ly


def d_spanning_fields(loc: ACMLocal) -> list[Jet]:
    """Sections ``d_k - eta_k xi`` of ``ker eta``; together they span it."""
    fields = []
    for k in range(loc.dim):
        e = cal.coordinate_field(k, loc.dim)
        fields.append(e - cal.scale(cal.pair(loc.eta, e), loc.xi))
    return fields


# ----------------------------------------------------------------------
# residual maps on vector values


def general_identity_residual(loc: ACMLocal, X, Y, Z) -> np.ndarray:
    phi, eta, g = loc.phi.val, loc.eta.val, loc.g.val
    pX, pY, pZ = act(phi, X), act(phi, Y), act(phi, Z)
    dPhi, deta = loc.dPhi.val, loc.deta.val
    lhs = 2.0 * ev1(act(g, loc.cov_phi(X, Y)), Z)
    rhs = (3.0 * ev3(dPhi, X, pY, pZ) - 3.0 * ev3(dPhi, X, Y, Z)
           + ev2(g, vv(loc.N1, Y, Z), pX)
           + ev2(loc.N2, Y, Z) * ev1(eta, X)
           + 2.0 * ev2(deta, pY, X) * ev1(eta, Z)
           - 2.0 * ev2(deta, pZ, X) * ev1(eta, Y))
    return lhs - rhs


def u_form(loc: ACMLocal, Y, X):
    """``u(Y, X) = d eta(phi Y, X) + g(hY, X)``."""
    return ev2(loc.deta.val, act(loc.phi.val, Y), X) + ev2(loc.g.val, act(loc.h, Y), X)


def covd_residual(loc: ACMLocal, X, Y, Z) -> np.ndarray:
    eta, dPhi, phi = loc.eta.val, loc.dPhi.val, loc.phi.val
    lhs = ev1(act(loc.g.val, loc.cov_phi(X, Y)), Z)
    rhs = (1.5 * ev3(dPhi, X, act(phi, Y), act(phi, Z)) - 1.5 * ev3(dPhi, X, Y, Z)
           + u_form(loc, Y, X) * ev1(eta, Z) - u_form(loc, Z, X) * ev1(eta, Y))
    return lhs - rhs


# ----------------------------------------------------------------------
# reports


def _vectors(loc, seed, count=5):
    rng = np.random.default_rng(seed)
    return [random_vectors(rng, loc.batch, loc.dim, count) for _ in range(3)]


def validate_acm(S: ACMStructure, points=None, tol: float = 1e-9, seed: int = 42) -> Report:
    points = S.sample() if points is None else points
    loc = S.at(points)
    rep = Report(f"validate {S.name}")
    n = loc.dim
    phi, xi, eta, g = loc.phi.val, loc.xi.val, loc.eta.val, loc.g.val
    eye = np.eye(n)
    rep.add("phi^2", ANCHORS["phi^2"], max_abs(matmul(phi, phi) + eye - outer(xi, eta)), tol)
    rep.add("eta(xi)=1", ANCHORS["eta(xi)=1"], max_abs(ev1(eta, xi) - 1.0), min(tol, 1e-10) * 10)
    rep.add("g symmetric", ANCHORS["g symmetric"], max_abs(g - np.swapaxes(g, -1, -2)), tol)
    compat = np.einsum("...ki,...kl,...lj->...ij", phi, g, phi) - g + outer(eta, eta)
    rep.add("compat", ANCHORS["compat"], max_abs(compat), tol)
    vol = float(np.min(eta_wedge_power(loc, eta=eta, two=loc.Phi.val, p=S.n)))
    rep.add_flag("volume", ANCHORS["volume"], vol > 1e-10,
                 note=f"min |eta^Phi^n| on the coordinate frame = {vol:.3e}")
    return rep


def eta_wedge_power(loc, eta, two, p: int) -> np.ndarray:
    """``eta ^ two^p`` evaluated on a frame, per point.

    The frame is orthonormal for the Euclidean coordinate inner product and
    adapted so that the value is nonzero exactly when the form has full
    degree-(2p+1) rank somewhere: we maximize over coordinate subsets.
    """
    n = loc.dim if hasattr(loc, "dim") else eta.shape[-1]
    k = 2 * p + 1
    best = np.zeros(eta.shape[:-1])
    import itertools
    eye = np.eye(n)
    for subset in itertools.combinations(range(n), k):
        vecs = [np.broadcast_to(eye[i], eta.shape) for i in subset]
        val = cal.wedge_eval([eta] + [two] * p, vecs)
        best = np.maximum(best, np.abs(val))
    return best


def form_rank(loc: ACMLocal, eta=None, deta=None, threshold: float = 1e-9) -> np.ndarray:
    """Rank ``2p+1`` per point: largest ``p`` with ``eta ^ (d eta)^p != 0``."""
    eta = loc.eta.val if eta is None else eta
    deta = loc.deta.val if deta is None else deta
    n = eta.shape[-1]
    rank = np.ones(eta.shape[:-1], dtype=int)
    for p in range(1, (n - 1) // 2 + 1):
        val = eta_wedge_power(loc, eta, deta, p)
        rank = np.where(val > threshold, 2 * p + 1, rank)
    return rank


def is_eta_normal(S: ACMStructure, points=None, tol: float = DEFAULT_TOL, loc=None) -> Report:
    loc = S.at(S.sample() if points is None else points) if loc is None else loc
    rep = Report(f"eta-normality {S.name}")
    D = loc.d_basis()
    res = np.einsum("...kij,...ia,...jb->...kab", loc.N1, D, D)
    c = rep.add("N1|D", ANCHORS["N1|D"], max_abs(res), tol)
    rep.labels["eta_normal"] = c.verdict == "pass"
    return rep


def cr_residuals(loc: ACMLocal) -> tuple[float, float]:
    """Max residuals of the two CR conditions over pairs of ker-eta sections."""
    fields = [f.truncate(1) for f in d_spanning_fields(loc)]
    phi = loc.phi.truncate(1)
    r_eta = r_phi = 0.0
    pf = [cal.apply(phi, X) for X in fields]
    for a in range(loc.dim):
        for b in range(a + 1, loc.dim):
            X, Y, pX, pY = fields[a], fields[b], pf[a], pf[b]
            Z = (cal.bracket(X, Y) - cal.bracket(pX, pY)).val
            W = (cal.bracket(pX, Y) + cal.bracket(X, pY)).val
            r_eta = max(r_eta, max_abs(ev1(loc.eta.val, Z)))
            r_phi = max(r_phi, max_abs(act(loc.phi.val, Z) - W))
    return r_eta, r_phi


def cr_check(S: ACMStructure, points=None, tol: float = DEFAULT_TOL, loc=None) -> Report:
    loc = S.at(S.sample() if points is None else points) if loc is None else loc
    rep = Report(f"CR {S.name}")
    r_eta, r_phi = cr_residuals(loc)
    a = rep.add("CR eta", ANCHORS["CR eta"], r_eta, tol)
    b = rep.add("CR phi", ANCHORS["CR phi"], r_phi, tol)
    rep.labels["CR"] = a.verdict == "pass" and b.verdict == "pass"
    return rep


def covd_report(S: ACMStructure, points=None, tol: float = DEFAULT_TOL, seed: int = 42,
                loc=None) -> Report:
    loc = S.at(S.sample() if points is None else points) if loc is None else loc
    X, Y, Z = _vectors(loc, seed)
    rep = Report(f"covariant derivative formulas {S.name}")
    rep.add("general", ANCHORS["general"], max_abs(general_identity_residual(loc, X, Y, Z)),
            max(tol, 1e-7))
    c = rep.add("covd", ANCHORS["covd"], max_abs(covd_residual(loc, X, Y, Z)), max(tol, 1e-7))
    rep.labels["covd"] = c.verdict == "pass"
    return rep


def normality_report(S: ACMStructure, points=None, tol: float = DEFAULT_TOL, seed: int = 42,
                     loc=None) -> Report:
    """eta-normality, CR and the covariant-derivative formula, with their agreement."""
    loc = S.at(S.sample() if points is None else points) if loc is None else loc
    rep = Report(f"normality {S.name}")
    rep.extend(is_eta_normal(S, tol=tol, loc=loc))
    rep.extend(cr_check(S, tol=tol, loc=loc))
    rep.extend(covd_report(S, tol=tol, seed=seed, loc=loc))
    v = (rep.labels["eta_normal"], rep.labels["CR"], rep.labels["covd"])
    rep.add_flag("equivalence", "eta-normal <-> CR <-> covd formula", len(set(v)) == 1,
                 note=f"eta-normal={v[0]} CR={v[1]} covd={v[2]}")
    return rep


def levi_form(S: ACMStructure, point, tol: float = 1e-9):
    """Levi form ``L(X, Y) = d eta(phi Y, X)`` on a basis of ``ker eta`` at one point.

    Returns ``(matrix, signature, symmetric)``; when the form is not symmetric
    the signature is that of its symmetrization.
    """
    loc = S.at(np.atleast_2d(point))
    D = loc.d_basis()[0]
    phi, deta = loc.phi.val[0], loc.deta.val[0]
    L = np.einsum("ij,ia,jb->ba", deta, phi @ D, D)  # L[a, b] = deta(phi D_b, D_a)
    sym = bool(np.max(np.abs(L - L.T), initial=0.0) < 1e-8)
    # express in a g-orthonormal basis of ker eta so the signature is basis-free
    return L, cal.signature(0.5 * (L + L.T), tol), sym


def classify(S: ACMStructure, points=None, tol: float = DEFAULT_TOL, seed: int = 42,
             loc=None) -> Report:
    """Class labels (contact metric, almost cosymplectic, almost Kenmotsu, normal, ...)."""
    loc = S.at(S.sample() if points is None else points) if loc is None else loc
    rep = Report(f"classify {S.name}")
    X, Y, Z = _vectors(loc, seed)
    eta, Phi, deta, dPhi = loc.eta.val, loc.Phi.val, loc.deta.val, loc.dPhi.val
    labels = set()
    r_contact = max_abs(deta - Phi)
    r_closed = max_abs(deta)
    r_dPhi = max_abs(dPhi)
    eta_Phi = wedge_1_2(eta, Phi)
    r_kenmotsu = max_abs(dPhi - 2.0 * eta_Phi)
    r_normal = max_abs(loc.N1)
    # class membership tests are recorded as labels: failing one is not an error
    rep.labels["class residuals"] = {
        ANCHORS[key]: r for key, r in (("contact", r_contact), ("deta=0", r_closed), ("dPhi=0", r_dPhi),
                                       ("dPhi=2eta^Phi", r_kenmotsu), ("normal", r_normal))}
    normal = r_normal < tol
    if normal:
        labels.add("normal")
    if r_contact < tol:
        labels.add("contact metric")
        if normal:
            labels.add("Sasakian")
    if r_closed < tol and r_dPhi < tol:
        labels.add("almost cosymplectic")
        if normal:
            labels.add("cosymplectic")
    if r_closed < tol and r_kenmotsu < tol and r_dPhi >= tol:
        labels.add("almost Kenmotsu")
        if normal:
            labels.add("Kenmotsu")
    if normal and r_dPhi < tol:
        labels.add("quasi-Sasakian")
    eta_normal = max_abs(np.einsum("...kij,...ia,...jb->...kab", loc.N1, loc.d_basis(),
                                   loc.d_basis())) < tol
    if eta_normal:
        labels.add("eta-normal")
    # specialized covariant-derivative formulas for the matched CR classes
    lhs = loc.cov_phi(X, Y)
    phi, g, xi, h = loc.phi.val, loc.g.val, loc.xi.val, loc.h
    if eta_normal and "contact metric" in labels:
        W = X + act(h, X)
        rhs = ev2(g, W, Y)[..., None] * xi - ev1(eta, Y)[..., None] * W
        rep.add("contact CR", ANCHORS["contact CR"], max_abs(lhs - rhs), max(tol, 1e-7))
    if eta_normal and "almost cosymplectic" in labels:
        pAX = act(phi, act(loc.A, X))
        rhs = -ev2(g, pAX, Y)[..., None] * xi + ev1(eta, Y)[..., None] * pAX
        rep.add("cosymplectic CR", ANCHORS["cosymplectic CR"], max_abs(lhs - rhs), max(tol, 1e-7))
    if eta_normal and "almost Kenmotsu" in labels:
        W = act(phi, X) + act(h, X)
        rhs = ev2(g, W, Y)[..., None] * xi - ev1(eta, Y)[..., None] * W
        rep.add("Kenmotsu CR", ANCHORS["Kenmotsu CR"], max_abs(lhs - rhs), max(tol, 1e-7))
    ranks = form_rank(loc)
    rep.labels["classes"] = sorted(labels)
    rep.labels["rank"] = int(np.max(ranks))
    rep.labels["rank_constant"] = bool(np.all(ranks == ranks.flat[0]))
    return rep


def wedge_1_2(a: np.ndarray, F: np.ndarray) -> np.ndarray:
    """Components of ``a ^ F`` for a one-form and a two-form (alternation convention)."""
    t = np.einsum("...i,...jk->...ijk", a, F)
    return (t + np.einsum("...jki->...ijk", t) + np.einsum("...kij->...ijk", t)) / 3.0


def autoparallel_equivalences(S: ACMStructure, points=None, tol: float = DEFAULT_TOL,
                              loc=None) -> Report:
    """The four conditions equivalent to the Reeb field being autoparallel."""
    loc = S.at(S.sample() if points is None else points) if loc is None else loc
    rep = Report(f"autoparallel Reeb {S.name}")
    phi, h, eta, xi = loc.phi.val, loc.h, loc.eta.val, loc.xi.val
    hphi = matmul(h, phi) + matmul(phi, h)
    c1 = rep.add("h phi + phi h = 0", ANCHORS["autoparallel"], max_abs(hphi), tol)
    c2 = rep.add("L_xi eta = 0", ANCHORS["autoparallel"], max_abs(loc.lxi_eta), tol)
    c3 = rep.add("eta o h = 0", ANCHORS["autoparallel"], max_abs(np.einsum("...i,...ij->...j", eta, h)), tol)
    c4 = rep.add("nabla_xi xi = 0", ANCHORS["autoparallel"],
                 max_abs(np.einsum("...km,...m->...k", loc.nabla_xi, xi)), tol)
    # unconditional companions
    rep.add("hphi", ANCHORS["hphi"], max_abs(hphi - 0.5 * outer(xi, loc.lxi_eta)), max(tol, 1e-8))
    rep.add("2etah", ANCHORS["2etah"],
            max_abs(2.0 * np.einsum("...i,...ij->...j", eta, h)
                    - np.einsum("...i,...ij->...j", eta, loc.nabla_xi_phi)), max(tol, 1e-8))
    verdicts = [c.verdict for c in (c1, c2, c3, c4)]
    rep.add_flag("agreement", ANCHORS["autoparallel"], len(set(verdicts)) == 1,
                 note=",".join(verdicts))
    rep.labels["autoparallel_reeb"] = verdicts[3] == "pass"
    return rep


def identity_suite(S: ACMStructure, points=None, tol: float = DEFAULT_TOL, seed: int = 42,
                   loc=None) -> Report:
    """Identities that hold on every almost contact metric structure, plus
    the ones conditional on eta-normality with autoparallel Reeb field."""
    loc = S.at(S.sample() if points is None else points) if loc is None else loc
    X, Y, Z = _vectors(loc, seed)
    rep = Report(f"identities {S.name}")
    g, phi, xi = loc.g.val, loc.phi.val, loc.xi.val
    gnx = 2.0 * ev2(g, np.einsum("...km,...m->...k", loc.nabla_xi, X), Y)
    rep.add("nabla xi", ANCHORS["nabla xi"],
            max_abs(gnx - 2.0 * ev2(loc.deta.val, X, Y) - ev2(loc.lxi_g, X, Y)), tol)
    rep.add("dPhi xi", ANCHORS["dPhi xi"],
            max_abs(3.0 * ev3(loc.dPhi.val, xi, X, Y) - ev2(loc.lxi_Phi, X, Y)), tol)
    rep.add("lxiFi", ANCHORS["lxiFi"],
            max_abs(ev2(loc.lxi_Phi, X, Y) + ev2(loc.lxi_g, act(phi, X), Y)
                    + 2.0 * ev2(g, act(loc.h, X), Y)), tol)
    Yd, Zd = loc.project_D(Y), loc.project_D(Z)
    hh = ev2(g, act(loc.h, Yd), Zd) - ev2(g, act(loc.h, Zd), Yd)
    rep.add("h anti", ANCHORS["h anti"],
            max_abs(hh + 0.5 * ev2(loc.lxi_Phi, Yd, Zd)
                    - 0.5 * ev2(loc.lxi_Phi, act(phi, Yd), act(phi, Zd))), tol)
    n2d = (ev2(loc.N2, X, Y) - 2.0 * ev2(loc.deta.val, act(phi, X), Y)
           + 2.0 * ev2(loc.deta.val, act(phi, Y), X))
    rep.add("n2 deta", ANCHORS["n2 deta"], max_abs(n2d), tol)
    rep.add("general", ANCHORS["general"], max_abs(general_identity_residual(loc, X, Y, Z)),
            max(tol, 1e-7))
    # conditional identities
    eta_normal = is_eta_normal(S, tol=tol, loc=loc).labels["eta_normal"]
    auto = autoparallel_equivalences(S, tol=tol, loc=loc).labels["autoparallel_reeb"]
    if eta_normal and auto:
        nxp = ev2(g, act(loc.nabla_xi_phi, Y), Z)
        rep.add("nxi phi", ANCHORS["nxi phi"],
                max_abs(nxp - ev2(g, act(loc.h, Y), Z) + ev2(g, act(loc.h, Z), Y)), tol)
        hb = ev2(g, act(loc.hbar, Y), Z) - ev2(g, act(loc.hbar, Z), Y)
        rep.add("hbar sym", ANCHORS["hbar sym"], max_abs(hb), tol)
        ubar = lambda A, B: ev2(loc.deta.val, act(phi, B), A) + ev2(g, act(loc.hbar, A), B)
        rep.add("ubar sym", ANCHORS["ubar sym"], max_abs(ubar(Y, Z) - ubar(Z, Y)), tol)
    else:
        for key in ("nxi phi", "hbar sym", "ubar sym"):
            rep.add_na(key, ANCHORS[key], "needs eta-normal structure with autoparallel Reeb field")
    return rep
