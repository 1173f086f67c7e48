"""Pure states of A and the Kähler geometry of each fiber CP^{n_k - 1}.

A pure state of M_{n_1} + ... + M_{n_K} is a block id together with a unit
vector modulo phase. Every :class:`PureState` stores the canonical lift of
its ray: the first (near-)largest component is real and positive.

Charts follow the affine coordinates centered at a unit vector ``h``::

    beta_h([x]) = x / <h|x> - h,     beta_h^{-1}(z) = [(z + h) / |z + h|]

with ``z`` ranging over the orthogonal complement H_h of ``h``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import null_space

from .algebra import AlgebraElement, AlgebraShape, as_rng
from .errors import ChartError, EvaluationError, ShapeError

__all__ = [
    "PureState",
    "Chart",
    "evaluate",
    "base_point",
    "beta",
    "beta_inv",
    "omega_vector",
    "weight",
    "kahler_metric",
    "kahler_form",
    "transition_phase",
    "wirtinger",
    "wirtinger_derivative",
    "random_state",
    "StateSampler",
    "basis_state",
    "canonical_phase",
]

NORM_TOL = 1e-12
CHART_GUARD = 1e-12
ORTHO_TOL = 1e-10
DEFAULT_STEP = 1e-4


def canonical_phase(x: np.ndarray) -> np.ndarray:
    """Rotate ``x`` by a unit phase so its leading large component is real > 0.

    "Leading" is the first index whose modulus is within a relative 1e-9 of
    the maximum, which keeps the choice stable under rounding noise.
    """
    mags = np.abs(x)
    top = mags.max()
    if top == 0:
        return x
    i = int(np.argmax(mags >= top * (1 - 1e-9)))
    return x * (np.conj(x[i]) / mags[i])


@dataclass(frozen=True, eq=False)
class PureState:
    """The vector state ``A -> <x|A_k x>`` on block ``k`` (1-based)."""

    block: int
    vector: np.ndarray

    def __post_init__(self):
        x = np.array(self.vector, dtype=np.complex128).ravel()
        if abs(np.linalg.norm(x) - 1.0) > NORM_TOL:
            raise ShapeError(f"pure state vector must be a unit vector, |x| = {np.linalg.norm(x)!r}")
        x = canonical_phase(x)
        x.flags.writeable = False
        object.__setattr__(self, "block", int(self.block))
        object.__setattr__(self, "vector", x)

    @classmethod
    def from_vector(cls, block: int, v) -> PureState:
        v = np.asarray(v, dtype=np.complex128)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ShapeError("zero vector does not define a state")
        return cls(block, v / nrm)

    @property
    def dim(self) -> int:
        return len(self.vector)

    def overlap(self, other: PureState) -> float:
        """|<x|y>|^2, the transition probability (0 across blocks)."""
        if self.block != other.block or self.dim != other.dim:
            return 0.0
        return float(abs(np.vdot(self.vector, other.vector)) ** 2)

    def same_as(self, other: PureState, tol: float = 1e-10) -> bool:
        """Phase-insensitive equality."""
        if self.block != other.block or self.dim != other.dim:
            return False
        return float(np.linalg.norm(self.vector - other.vector)) <= tol or (
            1.0 - abs(np.vdot(self.vector, other.vector)) <= tol * tol
        )

    def __repr__(self):
        return f"PureState(block={self.block}, vector={np.round(self.vector, 6).tolist()})"


def basis_state(block: int, n: int, i: int) -> PureState:
    """The state of the ``i``-th standard basis vector (0-based) of C^n."""
    e = np.zeros(n, dtype=complex)
    e[i] = 1.0
    return PureState(block, e)


def _check_block(state: PureState, A: AlgebraElement) -> np.ndarray:
    a = A.block(state.block)
    if a.shape[0] != state.dim:
        raise ShapeError(f"state of dimension {state.dim} on block {state.block} of size {a.shape[0]}")
    return a


def evaluate(state: PureState, A: AlgebraElement) -> complex:
    """The Gel'fand value ``<x|A_k x>``."""
    a = _check_block(state, A)
    x = state.vector
    return complex(np.vdot(x, a @ x))


def base_point(state: PureState) -> int:
    """The point of Spec A below ``state``: its block id."""
    return state.block


@dataclass(frozen=True, eq=False)
class Chart:
    """Affine chart of CP^{n-1} in block ``block`` centered at ``base``."""

    block: int
    base: np.ndarray

    def __post_init__(self):
        h = np.array(self.base, dtype=np.complex128).ravel()
        if abs(np.linalg.norm(h) - 1.0) > NORM_TOL:
            raise ShapeError("chart base must be a unit vector")
        h.flags.writeable = False
        object.__setattr__(self, "block", int(self.block))
        object.__setattr__(self, "base", h)

    @classmethod
    def centered_at(cls, state: PureState) -> Chart:
        """The chart with ``beta(state) = 0`` using the canonical lift."""
        return cls(state.block, state.vector)

    @property
    def dim(self) -> int:
        return len(self.base)

    def tangent_basis(self) -> np.ndarray:
        """Orthonormal basis of H_h as the columns of an n x (n-1) array."""
        if self.dim == 1:
            return np.zeros((1, 0), dtype=complex)
        return null_space(self.base.conj()[None, :])

    def project_tangent(self, v) -> np.ndarray:
        """Orthogonal projection of ``v`` onto H_h."""
        v = np.asarray(v, dtype=complex)
        return v - np.vdot(self.base, v) * self.base

    def contains(self, state: PureState) -> bool:
        return state.block == self.block and abs(np.vdot(self.base, state.vector)) > CHART_GUARD

    def check_tangent(self, *vectors):
        for v in vectors:
            v = np.asarray(v)
            if v.shape != (self.dim,):
                raise ShapeError(f"tangent vector must have length {self.dim}, got {v.shape}")
            if abs(np.vdot(self.base, v)) > ORTHO_TOL * max(1.0, float(np.linalg.norm(v))):
                raise ChartError("vector is not orthogonal to the chart base")


def weight(z) -> float:
    """w_z = 1 / (1 + |z|^2)."""
    return 1.0 / (1.0 + float(np.vdot(z, z).real))


def beta(chart: Chart, state: PureState) -> np.ndarray:
    """Chart coordinate ``x/<h|x> - h`` of ``state`` (phase independent)."""
    if state.block != chart.block or state.dim != chart.dim:
        raise ShapeError("state and chart live on different blocks")
    c = np.vdot(chart.base, state.vector)
    if abs(c) <= CHART_GUARD:
        raise ChartError("state lies outside the chart domain (<h|x> = 0)")
    return chart.project_tangent(state.vector / c - chart.base)


def omega_vector(chart: Chart, state: PureState) -> np.ndarray:
    """The unit lift of ``state`` with positive inner product against ``h``."""
    z = beta(chart, state)
    return (z + chart.base) * np.sqrt(weight(z))


def beta_inv(chart: Chart, z) -> PureState:
    z = np.asarray(z, dtype=complex)
    chart.check_tangent(z)
    return PureState(chart.block, (z + chart.base) * np.sqrt(weight(z)))


def kahler_metric(chart: Chart, z, u, v) -> complex:
    """g_z(v-bar, u) = w <v|u> - w^2 <v|z><z|u>."""
    chart.check_tangent(z, u, v)
    w = weight(z)
    return complex(w * np.vdot(v, u) - w * w * np.vdot(v, z) * np.vdot(z, u))


def kahler_form(chart: Chart, z, u, v) -> complex:
    """omega_z(v-bar, u) = i (-w <v|u> + w^2 <v|z><z|u>)."""
    chart.check_tangent(z, u, v)
    w = weight(z)
    return complex(1j * (-w * np.vdot(v, u) + w * w * np.vdot(v, z) * np.vdot(z, u)))


def transition_phase(chart: Chart, z) -> complex:
    """U(1) part of the Hopf trivialization: ``<z|h> / |<h|z>|``."""
    z = np.asarray(z, dtype=complex)
    c = np.vdot(z, chart.base)
    if abs(c) <= CHART_GUARD:
        raise ChartError("vector is orthogonal to the chart base")
    return complex(c / abs(c))


def wirtinger(
    fn: Callable[[np.ndarray], complex | np.ndarray],
    z,
    Y,
    kind: str = "holomorphic",
    step: float = DEFAULT_STEP,
):
    """Directional Wirtinger derivative of a function of chart coordinates.

    ``holomorphic``:      (d_t f(z + tY) - i d_t f(z + i t Y)) / 2
    ``antiholomorphic``:  (d_t f(z + tY) + i d_t f(z + i t Y)) / 2

    Both t-derivatives use central differences. The stencil is taken along
    the unit direction Y/|Y| and rescaled, so ``step`` is an absolute
    distance in the chart. Works for scalar- and array-valued ``fn``.
    """
    if kind not in ("holomorphic", "antiholomorphic"):
        raise ValueError(f"unknown derivative kind {kind!r}")
    z = np.asarray(z, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    r = float(np.linalg.norm(Y))
    if r == 0.0:
        return 0.0 * np.asarray(fn(z))
    d = Y / r
    try:
        dr = (np.asarray(fn(z + step * d)) - np.asarray(fn(z - step * d))) / (2 * step)
        di = (np.asarray(fn(z + 1j * step * d)) - np.asarray(fn(z - 1j * step * d))) / (2 * step)
    except (ChartError, ShapeError, FloatingPointError) as exc:
        raise EvaluationError(f"evaluation failed inside the stencil: {exc}") from exc
    sign = -1j if kind == "holomorphic" else 1j
    return r * 0.5 * (dr + sign * di)


def wirtinger_derivative(
    fn: Callable[[PureState], complex],
    chart: Chart,
    z,
    Y,
    kind: str = "holomorphic",
    step: float = DEFAULT_STEP,
) -> complex:
    """Wirtinger derivative of ``fn o beta_inv`` at chart point ``z``."""
    chart.check_tangent(z, Y)
    return complex(wirtinger(lambda q: fn(beta_inv(chart, q)), z, Y, kind, step))


def random_state(shape: AlgebraShape, seed=None, block: int | None = None) -> PureState:
    """Haar-random pure state; the block is uniform unless pinned."""
    rng = as_rng(seed)
    if block is None:
        block = int(rng.integers(1, len(shape.blocks) + 1))
    n = shape.dim(block)
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return PureState.from_vector(block, v)


class StateSampler:
    """Seeded source of Haar-random pure states. Not shared across tasks."""

    def __init__(self, shape: AlgebraShape, seed=None, block: int | None = None):
        self.shape = shape
        self.block = block
        self.rng = as_rng(seed)

    def __call__(self) -> PureState:
        return random_state(self.shape, self.rng, self.block)

    def sample(self, n: int) -> list[PureState]:
        return [self() for _ in range(n)]
