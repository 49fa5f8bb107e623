"""Evaluated structure bundle shared by the contact and paracontact sides.

Both structure kinds consist of an affinor, a Reeb field, a one-form and a
metric.  :class:`StructureLocal` evaluates them as jets at sample points
and derives everything the identities need, caching each quantity.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from . import calculus as cal
from .jets import Jet
from .linalg import ev1, kernel_basis, matmul


def nijenhuis_components(A: Jet) -> np.ndarray:
    """``[A,A]^k_ij`` for ``[A,A](X,Y) = A^2[X,Y] + [AX,AY] - A[AX,Y] - A[X,AY]``."""
    a, da = A.val, A.d1  # da[k, j, l] = d_l A^k_j
    t1 = np.einsum("...li,...kjl->...kij", a, da)
    t2 = np.einsum("...kl,...lji->...kij", a, da)
    return (t1 - np.swapaxes(t1, -1, -2)) - (t2 - np.swapaxes(t2, -1, -2))


def lie_pair_components(A: Jet, w: Jet) -> np.ndarray:
    """``(L_{A X} w)(Y) - (L_{A Y} w)(X)`` on coordinate fields."""
    a, da, dw = A.val, A.d1, w.d1  # dw[j, m] = d_m w_j
    L = np.einsum("...mi,...jm->...ij", a, dw) + np.einsum("...m,...mij->...ij", w.val, da)
    return L - np.swapaxes(L, -1, -2)


class StructureLocal:
    """Component jets of ``(affinor, reeb, form, g)`` and derived tensors.

    (1,2) tensors ``T[k, i, j]`` hold the components of ``T_{d_i} d_j``;
    covariant derivatives put the direction index last.
    """

    def __init__(self, S, points: np.ndarray):
        self.S = S
        self.points = points
        self.dim = S.chart.dim
        self.batch = points.shape[0]

    # primary fields ---------------------------------------------------
    @cached_property
    def aff(self) -> Jet:
        return self.S.affinor.jet(self.points)

    @cached_property
    def reeb(self) -> Jet:
        return self.S.reeb.jet(self.points)

    @cached_property
    def form(self) -> Jet:
        return self.S.form.jet(self.points)

    @cached_property
    def g(self) -> Jet:
        return self.S.g.jet(self.points)

    # metric quantities -------------------------------------------------
    @cached_property
    def ginv(self) -> Jet:
        return cal.metric_inverse(self.g)

    @cached_property
    def Gamma(self) -> Jet:
        return cal.christoffels(self.g)

    @cached_property
    def fund(self) -> Jet:
        """Fundamental form ``g(X, A Y)``."""
        return Jet.einsum("ik,kj->ij", self.g, self.aff)

    @cached_property
    def dform(self) -> Jet:
        return cal.d1form(self.form)

    @cached_property
    def dfund(self) -> Jet:
        return cal.d2form(self.fund)

    @cached_property
    def nabla_aff(self) -> np.ndarray:
        """``[i, j, m]``: components of ``nabla_{d_m}`` of the affinor."""
        return cal.covariant_derivative(self.aff.truncate(1), (1, 1), self.Gamma.truncate(0)).val

    @cached_property
    def nabla_reeb(self) -> np.ndarray:
        """``[k, m]``: components of ``nabla_{d_m}`` of the Reeb field."""
        return cal.covariant_derivative(self.reeb.truncate(1), (1, 0), self.Gamma.truncate(0)).val

    @cached_property
    def nabla_form(self) -> np.ndarray:
        return cal.covariant_derivative(self.form.truncate(1), (0, 1), self.Gamma.truncate(0)).val

    @cached_property
    def nabla_g(self) -> np.ndarray:
        return cal.covariant_derivative(self.g.truncate(1), (0, 2), self.Gamma.truncate(0)).val

    # Lie derivatives along the Reeb field -------------------------------
    @cached_property
    def l_aff(self) -> np.ndarray:
        return cal.lie_derivative(self.aff, self.reeb, (1, 1)).val

    @cached_property
    def l_form(self) -> np.ndarray:
        return cal.lie_derivative(self.form, self.reeb, (0, 1)).val

    @cached_property
    def l_g(self) -> np.ndarray:
        return cal.lie_derivative(self.g, self.reeb, (0, 2)).val

    @cached_property
    def l_fund(self) -> np.ndarray:
        return cal.lie_derivative(self.fund, self.reeb, (0, 2)).val

    # derived affinors ------------------------------------------------------
    @cached_property
    def h(self) -> np.ndarray:
        """Half the Lie derivative of the affinor along the Reeb field."""
        return 0.5 * self.l_aff

    @cached_property
    def nabla_reeb_aff(self) -> np.ndarray:
        """Affinor ``nabla_reeb`` of the structure affinor."""
        return np.einsum("...ijm,...m->...ij", self.nabla_aff, self.reeb.val)

    @cached_property
    def hbar(self) -> np.ndarray:
        return self.h - 0.5 * self.nabla_reeb_aff

    @cached_property
    def A(self) -> np.ndarray:
        """``A X = -nabla_X reeb``."""
        return -self.nabla_reeb

    @cached_property
    def B(self) -> np.ndarray:
        """``d form(X, Y) = g(X, B Y)``."""
        return matmul(self.ginv.val, self.dform.val)

    @cached_property
    def F(self) -> np.ndarray:
        """``g(F_X Y, Z) = 3/2 d fund(X, Y, Z)``; ``F[l, i, j]``."""
        return 1.5 * np.einsum("...lk,...ijk->...lij", self.ginv.val, self.dfund.val)

    @cached_property
    def nijenhuis_aff(self) -> np.ndarray:
        return nijenhuis_components(self.aff)

    @cached_property
    def lie_pair(self) -> np.ndarray:
        """``(L_{A X} form)(Y) - (L_{A Y} form)(X)``."""
        return lie_pair_components(self.aff, self.form)

    # helpers ------------------------------------------------------------
    def cov_aff(self, X, Y):
        """``(nabla_X A) Y`` for vector values."""
        return np.einsum("...ijm,...j,...m->...i", self.nabla_aff, Y, X)

    def kernel_basis(self) -> np.ndarray:
        """Euclidean-orthonormal basis of ``ker form`` per point: ``(B, dim, dim-1)``."""
        return kernel_basis(self.form.val)

    def project_kernel(self, X):
        """``X - form(X) reeb``."""
        return X - ev1(self.form.val, X)[..., None] * self.reeb.val
