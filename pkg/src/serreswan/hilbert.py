"""Finitely generated Hilbert C*-modules over A = M_{n_1} + ... + M_{n_K}.

Up to isomorphism such a module is a direct sum of rectangular blocks
``M_{d_k x n_k}`` with right action ``xi_k A_k`` and inner product
``<xi|eta>_k = xi_k^* eta_k``, so this normal form is the input format.
``d_k = 0`` drops the k-th summand.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Sequence

import numpy as np

from .algebra import AlgebraElement, AlgebraShape, as_rng
from .errors import ShapeError

__all__ = [
    "ModuleShape",
    "ModuleElement",
    "make_module",
    "inner",
    "act",
    "module_norm",
    "random_module_element",
]


@dataclass(frozen=True)
class ModuleShape:
    algebra: AlgebraShape
    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(d) for d in self.rows)
        if len(rows) != len(self.algebra.blocks):
            raise ShapeError(
                f"module needs one row count per block: {len(rows)} vs {len(self.algebra.blocks)}"
            )
        if any(d < 0 for d in rows):
            raise ShapeError("row counts must be nonnegative")
        object.__setattr__(self, "rows", rows)

    def block_shape(self, k: int) -> tuple[int, int]:
        return self.rows[k - 1], self.algebra.dim(k)

    @property
    def dim(self) -> int:
        """Complex dimension of the module."""
        return sum(d * n for d, n in zip(self.rows, self.algebra.blocks))

    def zero(self) -> ModuleElement:
        return ModuleElement(self, tuple(np.zeros((d, n)) for d, n in zip(self.rows, self.algebra.blocks)))

    def from_vector(self, v) -> ModuleElement:
        """Inverse of :meth:`ModuleElement.to_vector`."""
        v = np.asarray(v, dtype=complex)
        data, pos = [], 0
        for d, n in zip(self.rows, self.algebra.blocks):
            data.append(v[pos:pos + d * n].reshape(d, n))
            pos += d * n
        return ModuleElement(self, tuple(data))


def make_module(algebra: AlgebraShape, rows: Sequence[int]) -> ModuleShape:
    return ModuleShape(algebra, tuple(rows))


@dataclass(frozen=True, eq=False)
class ModuleElement:
    shape: ModuleShape
    data: tuple[np.ndarray, ...]

    def __post_init__(self):
        data = []
        for k, b in enumerate(self.data, start=1):
            arr = np.array(b, dtype=np.complex128)
            if arr.shape != self.shape.block_shape(k):
                raise ShapeError(f"module block {k} must be {self.shape.block_shape(k)}, got {arr.shape}")
            arr.flags.writeable = False
            data.append(arr)
        if len(data) != len(self.shape.rows):
            raise ShapeError("wrong number of module blocks")
        object.__setattr__(self, "data", tuple(data))

    def block(self, k: int) -> np.ndarray:
        self.shape.algebra.dim(k)
        return self.data[k - 1]

    def to_vector(self) -> np.ndarray:
        return np.concatenate([b.ravel() for b in self.data])

    def __add__(self, other: ModuleElement) -> ModuleElement:
        _same(self.shape, other.shape)
        return ModuleElement(self.shape, tuple(a + b for a, b in zip(self.data, other.data)))

    def __sub__(self, other: ModuleElement) -> ModuleElement:
        return self + (-1.0) * other

    def __mul__(self, c):
        if isinstance(c, AlgebraElement):
            return act(self, c)
        if not isinstance(c, Number):
            return NotImplemented
        return ModuleElement(self.shape, tuple(c * a for a in self.data))

    def __rmul__(self, c):
        if not isinstance(c, Number):
            return NotImplemented
        return self * c

    def max_abs_diff(self, other: ModuleElement) -> float:
        _same(self.shape, other.shape)
        return max((float(np.max(np.abs(a - b), initial=0.0)) for a, b in zip(self.data, other.data)), default=0.0)

    def __repr__(self):
        return f"ModuleElement(rows={list(self.shape.rows)}, blocks={list(self.shape.algebra.blocks)})"


def _same(s: ModuleShape, t: ModuleShape):
    if s != t:
        raise ShapeError("module shape mismatch")


def inner(xi: ModuleElement, eta: ModuleElement) -> AlgebraElement:
    """A-valued inner product, conjugate-linear in ``xi``."""
    _same(xi.shape, eta.shape)
    return AlgebraElement(xi.shape.algebra, tuple(a.conj().T @ b for a, b in zip(xi.data, eta.data)))


def act(xi: ModuleElement, A: AlgebraElement) -> ModuleElement:
    """Right action ``xi . A``."""
    if A.shape != xi.shape.algebra:
        raise ShapeError("algebra element does not act on this module")
    return ModuleElement(xi.shape, tuple(x @ a for x, a in zip(xi.data, A.data)))


def module_norm(xi: ModuleElement) -> float:
    """``|<xi|xi>|^{1/2}``, the largest singular value over blocks."""
    return max(
        (float(np.linalg.svd(b, compute_uv=False)[0]) for b in xi.data if b.size),
        default=0.0,
    )


def random_module_element(shape: ModuleShape, seed=None) -> ModuleElement:
    rng = as_rng(seed)
    return ModuleElement(
        shape,
        tuple(
            rng.normal(size=(d, n)) + 1j * rng.normal(size=(d, n))
            for d, n in zip(shape.rows, shape.algebra.blocks)
        ),
    )
