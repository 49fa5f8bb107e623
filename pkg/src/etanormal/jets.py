"""Second-order truncated jets of array-valued functions.

A :class:`Jet` stores the value, gradient and Hessian of a tensor-valued
function at a batch of points.  Array layout is always
``batch + component + derivative``: ``val`` has shape ``B + S``, ``d1`` has
shape ``B + S + (dim,)`` and ``d2`` has shape ``B + S + (dim, dim)``.  The
batch part may be empty (constant data) and broadcasts against batched jets.

Derivatives are propagated exactly by the product and chain rules, so
polynomial data carries no truncation error.  Differentiating a jet drops
one order; ``order`` records how many derivative levels are still valid.
"""

from __future__ import annotations

import string

import numpy as np

__all__ = ["Jet", "JetOrderError"]


class JetOrderError(ValueError):
    """Raised when an operation needs more derivatives than a jet carries."""


class Jet:
    __slots__ = ("val", "d1", "d2", "rank")

    def __init__(self, val, d1=None, d2=None, rank=None):
        self.val = np.asarray(val, dtype=float)
        self.d1 = None if d1 is None else np.asarray(d1, dtype=float)
        self.d2 = None if d2 is None or d1 is None else np.asarray(d2, dtype=float)
        self.rank = self.val.ndim if rank is None else int(rank)

    # ------------------------------------------------------------------
    # construction
    @classmethod
    def constant(cls, val, dim: int, rank: int | None = None) -> "Jet":
        val = np.asarray(val, dtype=float)
        return cls(val, np.zeros(val.shape + (dim,)),
                   np.zeros(val.shape + (dim, dim)), rank)

    @classmethod
    def from_components(cls, items, shape) -> "Jet":
        """Assemble a rank-``len(shape)`` jet from a flat list of scalar jets."""
        items = list(items)
        shape = tuple(shape)
        if len(items) != int(np.prod(shape, dtype=int)):
            raise ValueError("component count does not match shape")
        batch = np.broadcast_shapes(*(j.val.shape for j in items))
        order = min(j.order for j in items)
        dim = next((j.d1.shape[-1] for j in items if j.d1 is not None), None)

        def assemble(arrs, tail):
            arrs = [np.broadcast_to(a, batch + tail) for a in arrs]
            out = np.stack(arrs, axis=len(batch))
            return out.reshape(batch + shape + tail)

        val = assemble([j.val for j in items], ())
        d1 = d2 = None
        if order >= 1:
            d1 = assemble([j.d1 for j in items], (dim,))
        if order >= 2:
            d2 = assemble([j.d2 for j in items], (dim, dim))
        return cls(val, d1, d2, len(shape))

    # ------------------------------------------------------------------
    @property
    def order(self) -> int:
        if self.d1 is None:
            return 0
        return 1 if self.d2 is None else 2

    @property
    def dim(self) -> int:
        if self.d1 is None:
            raise JetOrderError("order-0 jet carries no dimension")
        return self.d1.shape[-1]

    @property
    def shape(self) -> tuple:
        """Component shape (excludes batch axes)."""
        return self.val.shape[self.val.ndim - self.rank:]

    @property
    def batch_shape(self) -> tuple:
        return self.val.shape[: self.val.ndim - self.rank]

    def truncate(self, order: int) -> "Jet":
        if order >= self.order:
            return self
        return Jet(self.val, self.d1 if order >= 1 else None, None, self.rank)

    def partial(self) -> "Jet":
        """Coordinate gradient as a jet with one more (trailing) component axis."""
        if self.order < 1:
            raise JetOrderError("cannot differentiate an order-0 jet")
        return Jet(self.d1, self.d2, None, self.rank + 1)

    def __getitem__(self, idx) -> "Jet":
        if not isinstance(idx, tuple):
            idx = (idx,)
        if len(idx) > self.rank:
            raise IndexError("too many component indices")
        pad = (slice(None),) * (self.rank - len(idx))
        key = (Ellipsis,) + idx + pad
        dropped = sum(1 for i in idx if isinstance(i, (int, np.integer)))
        val = self.val[key]
        d1 = None if self.d1 is None else self.d1[key + (slice(None),)]
        d2 = None if self.d2 is None else self.d2[key + (slice(None),) * 2]
        return Jet(val, d1, d2, self.rank - dropped)

    # ------------------------------------------------------------------
    # arithmetic
    def _check_rank(self, other: "Jet"):
        if self.rank != other.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.val + other, self.d1, self.d2, self.rank)
        self._check_rank(other)
        order = min(self.order, other.order)
        return Jet(self.val + other.val,
                   self.d1 + other.d1 if order >= 1 else None,
                   self.d2 + other.d2 if order >= 2 else None, self.rank)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.val,
                   None if self.d1 is None else -self.d1,
                   None if self.d2 is None else -self.d2, self.rank)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return self._elementwise_mul(other)
        c = float(other)
        return Jet(c * self.val,
                   None if self.d1 is None else c * self.d1,
                   None if self.d2 is None else c * self.d2, self.rank)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self._elementwise_mul(other.reciprocal())
        return self * (1.0 / float(other))

    def _elementwise_mul(self, other: "Jet") -> "Jet":
        self._check_rank(other)
        a, b = self, other
        order = min(a.order, b.order)
        val = a.val * b.val
        d1 = d2 = None
        if order >= 1:
            d1 = a.d1 * b.val[..., None] + a.val[..., None] * b.d1
        if order >= 2:
            cross = a.d1[..., :, None] * b.d1[..., None, :]
            d2 = (a.d2 * b.val[..., None, None] + cross + np.swapaxes(cross, -1, -2)
                  + a.val[..., None, None] * b.d2)
        return Jet(val, d1, d2, self.rank)

    def chain(self, f0, f1, f2) -> "Jet":
        """Apply an elementwise function given its value and first two derivatives."""
        d1 = d2 = None
        if self.order >= 1:
            d1 = f1[..., None] * self.d1
        if self.order >= 2:
            d2 = (f2[..., None, None] * self.d1[..., :, None] * self.d1[..., None, :]
                  + f1[..., None, None] * self.d2)
        return Jet(f0, d1, d2, self.rank)

    def reciprocal(self) -> "Jet":
        u = self.val
        return self.chain(1.0 / u, -1.0 / u**2, 2.0 / u**3)

    # ------------------------------------------------------------------
    @staticmethod
    def einsum(spec: str, *ops: "Jet") -> "Jet":
        """Tensor contraction with Leibniz-rule derivatives.

        ``spec`` is written over component indices only (e.g. ``"ij,j->i"``);
        batch axes are handled by an implicit leading ellipsis.
        """
        lhs, out = spec.replace(" ", "").split("->")
        subs = lhs.split(",")
        if len(subs) != len(ops):
            raise ValueError("operand count does not match subscripts")
        for s, op in zip(subs, ops):
            if len(s) != op.rank:
                raise ValueError(f"subscript {s!r} does not match rank {op.rank}")
        free = [c for c in string.ascii_letters if c not in spec]
        m, n = free[0], free[1]
        order = min(op.order for op in ops)

        def e(terms, tail):
            sub = ",".join("..." + s for s, _ in terms)
            opt = "greedy" if len(terms) > 2 else False
            return np.einsum(f"{sub}->...{out}{tail}", *(a for _, a in terms), optimize=opt)

        vals = [(s, op.val) for s, op in zip(subs, ops)]
        val = e(vals, "")
        d1 = d2 = None
        if order >= 1:
            d1 = 0.0
            for k, op in enumerate(ops):
                terms = list(vals)
                terms[k] = (subs[k] + m, op.d1)
                d1 = d1 + e(terms, m)
        if order >= 2:
            d2 = 0.0
            for k, op in enumerate(ops):
                terms = list(vals)
                terms[k] = (subs[k] + m + n, op.d2)
                d2 = d2 + e(terms, m + n)
                for l, other in enumerate(ops):
                    if l == k:
                        continue
                    terms = list(vals)
                    terms[k] = (subs[k] + m, op.d1)
                    terms[l] = (subs[l] + n, other.d1)
                    d2 = d2 + e(terms, m + n)
        return Jet(val, d1, d2, len(out))

    def inv(self) -> "Jet":
        """Matrix inverse of a rank-2 jet."""
        if self.rank != 2:
            raise ValueError("inverse needs a rank-2 jet")
        ai = np.linalg.inv(self.val)
        d1 = d2 = None
        if self.order >= 1:
            # D_m(A^-1) = -A^-1 (D_m A) A^-1, derivative axis moved to the front
            dA = np.moveaxis(self.d1, -1, -3)
            left = ai[..., None, :, :] @ dA  # A^-1 D_m A
            t1 = left @ ai[..., None, :, :]
            d1 = -np.moveaxis(t1, -3, -1)
        if self.order >= 2:
            right = dA @ ai[..., None, :, :]  # D_n A A^-1
            t = np.einsum("...mil,...nlq->...iqmn", t1, right)
            d2A = np.moveaxis(self.d2, (-2, -1), (-4, -3))
            t2 = ai[..., None, None, :, :] @ d2A @ ai[..., None, None, :, :]
            d2 = t + np.swapaxes(t, -1, -2) - np.moveaxis(t2, (-4, -3), (-2, -1))
        return Jet(ai, d1, d2, 2)

    def __repr__(self) -> str:
        return f"Jet(shape={self.shape}, batch={self.batch_shape}, order={self.order})"
