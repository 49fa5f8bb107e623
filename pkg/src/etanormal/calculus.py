"""Chart-level differential calculus on jets.

Vector fields, forms and tensor fields are all represented by
:class:`~etanormal.jets.Jet` objects evaluated at a batch of sample points.
Component layout puts contravariant indices first, so an affinor ``A`` is
stored as ``A[i, j] = A^i_j`` and ``A(d_j) = A^i_j d_i``.

Connection coefficients use ``C[k, i, j]`` for the ``d_k`` component of
``nabla_{d_i} d_j`` (first lower index is the direction).

Exterior derivatives follow the coboundary normalization with a factor
``1/(p+1)``, e.g. ``2 d eta(X, Y) = X eta(Y) - Y eta(X) - eta([X, Y])``.
Wedge products are the matching alternations, so
``(dx ^ dy)(d_x, d_y) = 1/2``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exprlang import Const, Expr, eval_jet2, parse
from .jets import Jet

__all__ = [
    "ChartManifold", "TensorField", "JetField", "DegenerateMetricError", "ChartMismatchError",
    "coordinate_field", "coordinate_fields", "apply", "pair", "bilinear", "directional",
    "bracket", "nijenhuis", "d_oneform", "d_twoform", "d1form", "d2form",
    "lie_derivative", "christoffels", "nabla", "covariant_derivative", "curvature",
    "signature", "wedge_eval", "random_vector_fields", "random_scalar_field", "torsion",
]


class DegenerateMetricError(ArithmeticError):
    """The metric is singular (or nearly so) at a sample point."""


class ChartMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class ChartManifold:
    """A single coordinate chart with an axis-aligned box domain."""

    dim: int
    coord_names: tuple
    lo: tuple
    hi: tuple

    def __post_init__(self):
        if len(self.coord_names) != self.dim or len(self.lo) != self.dim or len(self.hi) != self.dim:
            raise ValueError("chart data does not match dimension")
        if len(set(self.coord_names)) != self.dim:
            raise ValueError("coordinate names must be distinct")
        if any(a >= b for a, b in zip(self.lo, self.hi)):
            raise ValueError("domain box needs lo < hi in every coordinate")

    @classmethod
    def box(cls, names: Sequence[str], half_width: float = 1.0) -> "ChartManifold":
        names = tuple(names)
        return cls(len(names), names, (-half_width,) * len(names), (half_width,) * len(names))

    def parse(self, text: str) -> Expr:
        return parse(text, self.coord_names)

    def sample(self, count: int = 100, seed: int = 42, margin: float = 0.05) -> np.ndarray:
        """Uniform points strictly inside the domain box (``margin`` trimmed off each side)."""
        rng = np.random.default_rng(seed)
        lo, hi = np.asarray(self.lo, float), np.asarray(self.hi, float)
        pad = margin * (hi - lo)
        return rng.uniform(lo + pad, hi - pad, size=(count, self.dim))

    def check_points(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[-1] != self.dim:
            raise ValueError(f"points must have {self.dim} coordinates")
        lo, hi = np.asarray(self.lo), np.asarray(self.hi)
        if np.any(pts <= lo) or np.any(pts >= hi):
            raise ValueError("sample points must lie strictly inside the chart domain")
        return pts


@dataclass(frozen=True)
class TensorField:
    """Valence-(r, s) field with one expression per component."""

    chart: ChartManifold
    valence: tuple
    components: np.ndarray = field(repr=False)

    def __post_init__(self):
        comps = np.asarray(self.components, dtype=object)
        r, s = self.valence
        want = (self.chart.dim,) * (r + s)
        if comps.shape != want:
            raise ValueError(f"expected component array of shape {want}, got {comps.shape}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_strings(cls, chart: ChartManifold, valence, strings) -> "TensorField":
        arr = np.asarray(strings, dtype=object)
        parsed = np.empty(arr.shape, dtype=object)
        for idx in np.ndindex(arr.shape):
            item = arr[idx]
            parsed[idx] = item if isinstance(item, Expr) else chart.parse(str(item))
        return cls(chart, tuple(valence), parsed)

    @classmethod
    def from_exprs(cls, chart: ChartManifold, valence, exprs) -> "TensorField":
        arr = np.asarray(exprs, dtype=object)
        out = np.empty(arr.shape, dtype=object)
        for idx in np.ndindex(arr.shape):
            item = arr[idx]
            out[idx] = item if isinstance(item, Expr) else Const(float(item))
        return cls(chart, tuple(valence), out)

    @property
    def rank(self) -> int:
        return sum(self.valence)

    def jet(self, points) -> Jet:
        pts = np.asarray(points, dtype=float)
        flat = [eval_jet2(e, pts) for e in self.components.reshape(-1)]
        return Jet.from_components(flat, self.components.shape)


@dataclass(frozen=True)
class JetField:
    """Field defined by a function ``points -> Jet`` (derived or frame-built fields)."""

    chart: ChartManifold
    valence: tuple
    fn: Callable = field(repr=False, compare=False)

    @property
    def rank(self) -> int:
        return sum(self.valence)

    def jet(self, points) -> Jet:
        return self.fn(np.asarray(points, dtype=float))


# ----------------------------------------------------------------------
# basic algebra on field jets


def coordinate_field(k: int, dim: int) -> Jet:
    v = np.zeros(dim)
    v[k] = 1.0
    return Jet.constant(v, dim)


def coordinate_fields(dim: int) -> list[Jet]:
    return [coordinate_field(k, dim) for k in range(dim)]


def apply(A: Jet, X: Jet) -> Jet:
    """Affinor acting on a vector field."""
    return Jet.einsum("ij,j->i", A, X)


def pair(w: Jet, X: Jet) -> Jet:
    return Jet.einsum("i,i->", w, X)


def bilinear(T: Jet, X: Jet, Y: Jet) -> Jet:
    return Jet.einsum("ij,i,j->", T, X, Y)


def scale(f: Jet, X: Jet) -> Jet:
    """Pointwise product of a function with a tensor field."""
    idx = "abcdefgh"[: X.rank]
    return Jet.einsum(f",{idx}->{idx}", f, X)


def directional(X: Jet, f: Jet) -> Jet:
    """Derivative ``X(f)`` of a (possibly tensor-valued) field, componentwise."""
    idx = "abcdefgh"[: f.rank]
    return Jet.einsum(f"{idx}m,m->{idx}", f.partial(), X)


def bracket(X: Jet, Y: Jet) -> Jet:
    """Lie bracket ``[X, Y]^k = X^i d_i Y^k - Y^i d_i X^k``."""
    return directional(X, Y) - directional(Y, X)


def nijenhuis(A: Jet, X: Jet, Y: Jet) -> Jet:
    """``[A, A](X, Y) = A^2[X,Y] + [AX, AY] - A[AX, Y] - A[X, AY]``."""
    AX, AY = apply(A, X), apply(A, Y)
    XY = bracket(X, Y)
    return (apply(A, apply(A, XY)) + bracket(AX, AY)
            - apply(A, bracket(AX, Y)) - apply(A, bracket(X, AY)))


def d_oneform(eta: Jet, X: Jet, Y: Jet) -> Jet:
    """``d eta(X, Y)`` from the coboundary formula (factor 1/2)."""
    return 0.5 * (directional(X, pair(eta, Y)) - directional(Y, pair(eta, X))
                  - pair(eta, bracket(X, Y)))


def _antisymmetry_defect(Phi: Jet) -> float:
    return float(np.max(np.abs(Phi.val + np.swapaxes(Phi.val, -1, -2)), initial=0.0))


def d_twoform(Phi: Jet, X: Jet, Y: Jet, Z: Jet, check: bool = True, tol: float = 1e-10) -> Jet:
    """``d Phi(X, Y, Z)`` from the coboundary formula (factor 1/3)."""
    if check and _antisymmetry_defect(Phi) > tol:
        raise ValueError("two-form components are not antisymmetric")
    cyc = (directional(X, bilinear(Phi, Y, Z)) + directional(Y, bilinear(Phi, Z, X))
           + directional(Z, bilinear(Phi, X, Y)))
    brk = (bilinear(Phi, bracket(X, Y), Z) + bilinear(Phi, bracket(Y, Z), X)
           + bilinear(Phi, bracket(Z, X), Y))
    return (cyc - brk) / 3.0


def d1form(eta: Jet) -> Jet:
    """Components ``(d eta)_{ij} = (d_i eta_j - d_j eta_i) / 2``."""
    de = eta.partial()  # [j, i] = d_i eta_j
    return 0.5 * (Jet.einsum("ji->ij", de) - de)


def d2form(Phi: Jet) -> Jet:
    """Components ``(d Phi)_{ijk} = (d_i Phi_jk + d_j Phi_ki + d_k Phi_ij) / 3``."""
    dP = Phi.partial()  # [j, k, i] = d_i Phi_jk
    return (Jet.einsum("jki->ijk", dP) + Jet.einsum("kij->ijk", dP)
            + Jet.einsum("ijk->ijk", dP)) / 3.0


def lie_derivative(T: Jet, X: Jet, valence) -> Jet:
    """Component jet of ``L_X T`` for valence (0,1), (1,0), (0,2) or (1,1)."""
    valence = tuple(valence)
    dX = X.partial()  # [k, i] = d_i X^k
    dT = directional(X, T)
    if valence == (0, 1):
        return dT + Jet.einsum("k,kj->j", T, dX)
    if valence == (1, 0):
        return bracket(X, T)
    if valence == (0, 2):
        return dT + Jet.einsum("kj,ki->ij", T, dX) + Jet.einsum("ik,kj->ij", T, dX)
    if valence == (1, 1):
        return dT - Jet.einsum("kj,ik->ij", T, dX) + Jet.einsum("ik,kj->ij", T, dX)
    raise ValueError(f"unsupported valence {valence} for Lie derivative")


# ----------------------------------------------------------------------
# metric geometry


def metric_inverse(g: Jet, tol: float = 1e-12) -> Jet:
    det = np.linalg.det(g.val)
    if np.any(np.abs(det) <= tol):
        raise DegenerateMetricError(f"metric determinant {np.min(np.abs(det)):.3e} below {tol}")
    return g.inv()


def christoffels(g: Jet, tol: float = 1e-12) -> Jet:
    """Levi-Civita coefficients ``Gamma^k_ij`` (one derivative order below ``g``)."""
    ginv = metric_inverse(g, tol)
    dg = g.partial()  # [a, b, c] = d_c g_ab
    # Gamma_{l i j} = (d_i g_jl + d_j g_il - d_l g_ij) / 2
    low = 0.5 * (Jet.einsum("jli->lij", dg) + Jet.einsum("ilj->lij", dg) - Jet.einsum("ijl->lij", dg))
    return Jet.einsum("kl,lij->kij", ginv, low)


def nabla(X: Jet, Y: Jet, C: Jet) -> Jet:
    """``nabla_X Y`` for connection coefficients ``C[k, i, j]``."""
    return directional(X, Y) + Jet.einsum("kij,i,j->k", C, X, Y)


def covariant_derivative(T: Jet, valence, C: Jet) -> Jet:
    """Components of ``nabla T`` with the derivative index appended last."""
    r, s = valence
    letters = "abcdefgh"[: r + s]
    out = T.partial()
    for pos in range(r + s):
        src = list(letters)
        src[pos] = "p"
        src = "".join(src)
        if pos < r:
            term = Jet.einsum(f"{letters[pos]}mp,{src}->{letters}m", C, T)
            out = out + term
        else:
            term = Jet.einsum(f"pm{letters[pos]},{src}->{letters}m", C, T)
            out = out - term
    return out


def torsion(C: Jet, X: Jet, Y: Jet) -> Jet:
    """``nabla_X Y - nabla_Y X - [X, Y]`` (tensorial)."""
    return Jet.einsum("kij,i,j->k", C, X, Y) - Jet.einsum("kij,i,j->k", C, Y, X)


def curvature(C: Jet, X: Jet, Y: Jet, Z: Jet) -> Jet:
    """``R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z``."""
    return (nabla(X, nabla(Y, Z, C), C) - nabla(Y, nabla(X, Z, C), C)
            - nabla(bracket(X, Y), Z, C))


def signature(q, tol: float = 1e-9) -> tuple[int, int, int]:
    """Counts of positive, negative and (numerically) zero eigenvalues."""
    q = np.asarray(q, dtype=float)
    if q.size == 0:
        return (0, 0, 0)
    w = np.linalg.eigvalsh(0.5 * (q + q.T))
    return (int(np.sum(w > tol)), int(np.sum(w < -tol)), int(np.sum(np.abs(w) <= tol)))


# ----------------------------------------------------------------------
# exterior algebra on frames


def _perm_sign(p) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def wedge_eval(factors: Sequence[np.ndarray], vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Evaluate ``f1 ^ f2 ^ ...`` on vectors with the alternation convention.

    Each factor is an array of shape ``batch + (n,)*degree``; vectors have
    shape ``batch + (n,)``.  Degrees must sum to the number of vectors.
    """
    k = len(vectors)
    nb = vectors[0].ndim - 1
    degrees = [f.ndim - nb for f in factors]
    if sum(degrees) != k:
        raise ValueError("form degrees do not match number of vectors")
    total = 0.0
    for perm in itertools.permutations(range(k)):
        term = float(_perm_sign(perm))
        pos = 0
        for f, deg in zip(factors, degrees):
            val = f
            for slot in range(deg):
                val = _contract_first(val, vectors[perm[pos + slot]])
            pos += deg
            term = term * val
        total = total + term
    return total / math.factorial(k)


def _contract_first(arr: np.ndarray, v: np.ndarray) -> np.ndarray:
    # contract the leftmost form slot with v; batch axes lead in both
    nb = v.ndim - 1
    arr = np.moveaxis(arr, nb, -1)
    extra = arr.ndim - v.ndim
    vb = v.reshape(v.shape[:-1] + (1,) * extra + v.shape[-1:])
    return np.sum(arr * vb, axis=-1)


# ----------------------------------------------------------------------
# random local fields


def random_vector_fields(rng: np.random.Generator, points, count: int, scale: float = 1.0) -> list[Jet]:
    """Random 2-jets of vector fields at ``points`` (arbitrary smooth extensions)."""
    pts = np.atleast_2d(points)
    B, n = pts.shape
    out = []
    for _ in range(count):
        v = scale * rng.normal(size=(B, n))
        d1 = scale * rng.normal(size=(B, n, n))
        h = scale * rng.normal(size=(B, n, n, n))
        d2 = 0.5 * (h + np.swapaxes(h, -1, -2))
        out.append(Jet(v, d1, d2, 1))
    return out


def random_scalar_field(rng: np.random.Generator, points, scale: float = 1.0) -> Jet:
    pts = np.atleast_2d(points)
    B, n = pts.shape
    h = rng.normal(size=(B, n, n))
    return Jet(1.0 + 0.5 * rng.normal(size=B), scale * rng.normal(size=(B, n)),
               scale * 0.5 * (h + np.swapaxes(h, -1, -2)), 0)
