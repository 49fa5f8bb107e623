"""Pointwise contractions of component arrays with vector values.

Component arrays carry leading batch axes (one per sample point); vector
arguments may carry extra leading axes (several random vectors per point),
which broadcast through the ``...`` in every contraction.
"""

from __future__ import annotations

import numpy as np


def act(A, X):
    """``A(X)`` for an affinor ``A[i, j] = A^i_j``."""
    return np.einsum("...ij,...j->...i", A, X)


def ev1(w, X):
    return np.einsum("...i,...i->...", w, X)


def ev2(T, X, Y):
    return np.einsum("...ij,...i,...j->...", T, X, Y)


def ev3(T, X, Y, Z):
    return np.einsum("...ijk,...i,...j,...k->...", T, X, Y, Z)


def vv(T, X, Y):
    """Vector ``T(X, Y)`` of a (1,2) tensor ``T[k, i, j]``."""
    return np.einsum("...kij,...i,...j->...k", T, X, Y)


def outer(a, b):
    return np.einsum("...i,...j->...ij", a, b)


def matmul(A, B):
    return np.einsum("...ij,...jk->...ik", A, B)


def random_vectors(rng: np.random.Generator, batch: int, dim: int, count: int = 5) -> np.ndarray:
    """``count`` independent standard normal vectors at each of ``batch`` points."""
    return rng.normal(size=(count, batch, dim))


def null_space(M: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis (columns) of the right null space of ``M``."""
    M = np.atleast_2d(M)
    if M.size == 0:
        return np.eye(M.shape[1])
    _, s, vt = np.linalg.svd(M)
    rank = int(np.sum(s > tol))
    return vt[rank:].T.copy()


def kernel_basis(form: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Basis of ``ker form`` at each point: shape ``(B, dim, dim-1)``."""
    form = np.atleast_2d(form)
    return np.stack([null_space(w[None, :], tol) for w in form])
