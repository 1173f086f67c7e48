"""Finite-dimensional C*-algebras A = M_{n_1} + ... + M_{n_K}.

Elements are stored as a tuple of square complex blocks. All arrays are
made read-only on construction so that elements can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Sequence

import numpy as np

from .errors import ShapeError, UnitaryError

__all__ = [
    "AlgebraShape",
    "AlgebraElement",
    "make_algebra",
    "add",
    "scale",
    "mul",
    "adjoint",
    "operator_norm",
    "spectrum",
    "iso_signature",
    "random_element",
    "random_hermitian",
    "random_unitary",
    "pauli",
    "as_rng",
    "is_unitary",
    "check_unitary",
]

MAX_BLOCK = 16


def as_rng(seed) -> np.random.Generator:
    """Return a Generator for an int seed, a seed sequence, or a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.complex128)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class AlgebraShape:
    blocks: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(int(n) for n in self.blocks)
        if not blocks:
            raise ShapeError("algebra needs at least one block")
        if any(n < 1 for n in blocks):
            raise ShapeError(f"block dimensions must be positive, got {list(blocks)}")
        object.__setattr__(self, "blocks", blocks)

    def __len__(self):
        return len(self.blocks)

    def dim(self, block: int) -> int:
        """Matrix size of the block with 1-based id ``block``."""
        if not 1 <= block <= len(self.blocks):
            raise ShapeError(f"block id {block} outside 1..{len(self.blocks)}")
        return self.blocks[block - 1]

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, tuple(np.zeros((n, n)) for n in self.blocks))

    def unit(self) -> AlgebraElement:
        return AlgebraElement(self, tuple(np.eye(n) for n in self.blocks))

    def element(self, *blocks) -> AlgebraElement:
        return AlgebraElement(self, tuple(blocks))

    def embed(self, block: int, matrix) -> AlgebraElement:
        """Element that is ``matrix`` in one block and zero elsewhere."""
        n = self.dim(block)
        data = [np.zeros((m, m)) for m in self.blocks]
        matrix = np.asarray(matrix)
        if matrix.shape != (n, n):
            raise ShapeError(f"block {block} needs a {n}x{n} matrix, got {matrix.shape}")
        data[block - 1] = matrix
        return AlgebraElement(self, tuple(data))


def make_algebra(blocks: Sequence[int]) -> AlgebraShape:
    return AlgebraShape(tuple(blocks))


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    shape: AlgebraShape
    data: tuple[np.ndarray, ...]

    def __post_init__(self):
        data = tuple(_frozen(b) for b in self.data)
        if len(data) != len(self.shape.blocks):
            raise ShapeError(
                f"expected {len(self.shape.blocks)} blocks, got {len(data)}"
            )
        for k, (n, b) in enumerate(zip(self.shape.blocks, data), start=1):
            if b.shape != (n, n):
                raise ShapeError(f"block {k} must be {n}x{n}, got {b.shape}")
        object.__setattr__(self, "data", data)

    def block(self, k: int) -> np.ndarray:
        """The matrix of block ``k`` (1-based)."""
        self.shape.dim(k)
        return self.data[k - 1]

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(-1.0, other))

    def __neg__(self):
        return scale(-1.0, self)

    def __mul__(self, c):
        if not isinstance(c, Number):
            return NotImplemented
        return scale(c, self)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return mul(self, other)

    @property
    def H(self) -> AlgebraElement:
        return adjoint(self)

    def allclose(self, other: AlgebraElement, atol=1e-12) -> bool:
        _check_same(self.shape, other.shape)
        return all(np.allclose(a, b, rtol=0, atol=atol) for a, b in zip(self.data, other.data))

    def max_abs_diff(self, other: AlgebraElement) -> float:
        _check_same(self.shape, other.shape)
        return max(float(np.max(np.abs(a - b), initial=0.0)) for a, b in zip(self.data, other.data))

    def __repr__(self):
        return f"AlgebraElement(blocks={list(self.shape.blocks)})"


def _check_same(s: AlgebraShape, t: AlgebraShape):
    if s != t:
        raise ShapeError(f"shape mismatch: {list(s.blocks)} vs {list(t.blocks)}")


def add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    _check_same(a.shape, b.shape)
    return AlgebraElement(a.shape, tuple(x + y for x, y in zip(a.data, b.data)))


def scale(c: complex, a: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(a.shape, tuple(c * x for x in a.data))


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    _check_same(a.shape, b.shape)
    return AlgebraElement(a.shape, tuple(x @ y for x, y in zip(a.data, b.data)))


def adjoint(a: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(a.shape, tuple(x.conj().T for x in a.data))


def operator_norm(a: AlgebraElement) -> float:
    """C*-norm: the largest singular value over all blocks."""
    return max(float(np.linalg.svd(x, compute_uv=False)[0]) for x in a.data)


def spectrum(shape: AlgebraShape) -> set[int]:
    """Block ids 1..K; each is an isolated point of the (discrete) spectrum."""
    return set(range(1, len(shape.blocks) + 1))


def iso_signature(shape: AlgebraShape) -> tuple[int, ...]:
    """Sorted block multiset; equal signatures <=> *-isomorphic algebras."""
    return tuple(sorted(shape.blocks))


def random_element(shape: AlgebraShape, seed=None) -> AlgebraElement:
    rng = as_rng(seed)
    return AlgebraElement(
        shape,
        tuple(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)) for n in shape.blocks),
    )


def random_hermitian(shape: AlgebraShape, seed=None) -> AlgebraElement:
    """Blockwise (G + G^*)/2 for complex Gaussian G; Hermitian exactly."""
    g = random_element(shape, seed)
    return AlgebraElement(shape, tuple((x + x.conj().T) / 2 for x in g.data))


def random_unitary(shape: AlgebraShape, seed=None) -> AlgebraElement:
    """Haar-distributed unitary in each block (QR with phase fix)."""
    g = random_element(shape, seed)
    blocks = []
    for x in g.data:
        q, r = np.linalg.qr(x)
        d = np.diag(r)
        blocks.append(q * (d / np.abs(d)))
    return AlgebraElement(shape, tuple(blocks))


def is_unitary(u: AlgebraElement, tol=1e-10) -> bool:
    return all(np.allclose(x.conj().T @ x, np.eye(len(x)), rtol=0, atol=tol) for x in u.data)


def check_unitary(u: AlgebraElement, tol=1e-10):
    if not is_unitary(u, tol):
        raise UnitaryError("element is not unitary")


_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli(name: str) -> np.ndarray:
    """Pauli matrix ``'x'``, ``'y'`` or ``'z'`` as a 2x2 array."""
    return _PAULI[name.lower().removeprefix("sigma_").removeprefix("sigma")].copy()
