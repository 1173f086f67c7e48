"""The atomic bundle E_X of a Hilbert module X over the pure states.

The fiber over a pure state ``rho = [x]`` on block ``k`` is ``X / N_rho``
with inner product ``rho(<xi|eta>)``. The map ``xi -> xi_k x`` identifies
it with C^{d_k}: its kernel is exactly N_rho. Fiber values therefore
depend on the chosen unit lift ``x`` of ``rho`` and transform like ``x``
under phase changes (``x -> c x`` sends ``f -> c f``), which is the U(1)
twist of the associated Hopf bundle. A :class:`FiberVector` always stores
its value against the canonical lift ``at.vector``.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Callable, NamedTuple

import numpy as np

from .algebra import AlgebraElement, adjoint, check_unitary
from .errors import ShapeError
from .gelfand import StateFunction
from .hilbert import ModuleElement, ModuleShape, act
from .residual import Check
from .states import (
    DEFAULT_STEP,
    Chart,
    PureState,
    beta_inv,
    omega_vector,
    wirtinger,
)

__all__ = [
    "FiberVector",
    "Section",
    "constant_section",
    "generic_section",
    "project",
    "fiber_inner",
    "quotient_oracle",
    "QuotientOracle",
    "hermitian",
    "h_function",
    "section_norm",
    "singular_states",
    "trivialize",
    "local_section",
    "group_act",
    "typical_fiber_map",
    "holomorphy_check",
]


def rebase(value: np.ndarray, from_lift: np.ndarray, to_lift: np.ndarray) -> np.ndarray:
    """Re-express a fiber value given against one lift against another lift of the same ray."""
    return np.vdot(from_lift, to_lift) * value


@dataclass(frozen=True, eq=False)
class FiberVector:
    at: PureState
    value: np.ndarray

    def __post_init__(self):
        v = np.array(self.value, dtype=np.complex128).ravel()
        v.flags.writeable = False
        object.__setattr__(self, "value", v)

    def relative_to(self, lift: np.ndarray) -> np.ndarray:
        """The value against another unit lift of ``at``."""
        return rebase(self.value, self.at.vector, lift)

    def norm(self) -> float:
        return float(np.linalg.norm(self.value))

    def __add__(self, other: FiberVector) -> FiberVector:
        return FiberVector(self.at, self.value + other.relative_to(self.at.vector))

    def __sub__(self, other: FiberVector) -> FiberVector:
        return FiberVector(self.at, self.value - other.relative_to(self.at.vector))

    def __mul__(self, c):
        if not isinstance(c, Number):
            return NotImplemented
        return FiberVector(self.at, c * self.value)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class Section:
    """A section of E_X given by a pointwise evaluator.

    ``xi`` is set for constant sections ``Psi(xi): rho -> [xi]_rho``.
    """

    shape: ModuleShape
    evaluator: Callable[[PureState], FiberVector]
    xi: ModuleElement | None = None

    def __call__(self, rho: PureState) -> FiberVector:
        v = self.evaluator(rho)
        d = self.shape.rows[rho.block - 1]
        if v.value.shape != (d,) or v.at.block != rho.block:
            raise ShapeError(f"section value must lie in C^{d} over block {rho.block}")
        return v

    @property
    def is_constant(self) -> bool:
        return self.xi is not None

    def times(self, l: StateFunction) -> Section:
        """Pointwise product ``s . l`` with a scalar function."""
        return generic_section(self.shape, lambda rho: l(rho) * self(rho))

    def __add__(self, other: Section) -> Section:
        if other.shape != self.shape:
            raise ShapeError("section shape mismatch")
        return generic_section(self.shape, lambda rho: self(rho) + other(rho))

    def __mul__(self, c):
        if not isinstance(c, Number):
            return NotImplemented
        return generic_section(self.shape, lambda rho: c * self(rho))

    __rmul__ = __mul__


def project(xi: ModuleElement, rho: PureState) -> FiberVector:
    """The class ``[xi]_rho``, realized as ``xi_k x``."""
    b = xi.block(rho.block)
    if b.shape[1] != rho.dim:
        raise ShapeError("state does not match the module block")
    return FiberVector(rho, b @ rho.vector)


def constant_section(xi: ModuleElement) -> Section:
    """``Psi(xi)``."""
    return Section(xi.shape, lambda rho: project(xi, rho), xi)


def generic_section(shape: ModuleShape, fn: Callable[[PureState], FiberVector]) -> Section:
    return Section(shape, fn)


def fiber_inner(v: FiberVector, w: FiberVector) -> complex:
    """``<v|w>_rho``; both vectors must lie over the same state."""
    if not v.at.same_as(w.at):
        raise ShapeError("fiber vectors lie over different states")
    return complex(np.vdot(v.value, w.relative_to(v.at.vector)))


class QuotientOracle(NamedTuple):
    rank: int
    kernel: list[ModuleElement]


def quotient_oracle(shape: ModuleShape, rho: PureState, rtol=1e-10) -> QuotientOracle:
    """Materialize N_rho by singular-value thresholding of ``xi -> [xi]_rho``.

    Returns the rank of the map (the dimension of X / N_rho) and a basis of
    its kernel, built independently of the fast path in :func:`project`.
    """
    cols = []
    for i in range(shape.dim):
        e = np.zeros(shape.dim, complex)
        e[i] = 1.0
        cols.append(project(shape.from_vector(e), rho).value)
    M = np.array(cols).T.reshape(-1, shape.dim)
    if M.size == 0:
        return QuotientOracle(0, [shape.from_vector(np.eye(shape.dim)[i]) for i in range(shape.dim)])
    _, s, vh = np.linalg.svd(M)
    rank = int(np.sum(s > rtol * max(1.0, s.max(initial=0.0))))
    kernel = [shape.from_vector(vh[i].conj()) for i in range(rank, shape.dim)]
    return QuotientOracle(rank, kernel)


def hermitian(s: Section, t: Section, rho: PureState) -> complex:
    """``H_rho(s, t) = <s(rho)|t(rho)>_rho``."""
    if s.shape != t.shape:
        raise ShapeError("section shape mismatch")
    return fiber_inner(s(rho), t(rho))


def h_function(s: Section, t: Section) -> StateFunction:
    if s.shape != t.shape:
        raise ShapeError("section shape mismatch")
    return StateFunction(lambda rho: hermitian(s, t, rho))


def singular_states(xi: ModuleElement) -> list[PureState]:
    """Top right singular vector state of each nonempty block of ``xi``."""
    out = []
    for k, b in enumerate(xi.data, start=1):
        if b.shape[0] == 0:
            continue
        _, _, vh = np.linalg.svd(b)
        out.append(PureState.from_vector(k, vh[0].conj()))
    return out


def section_norm(s: Section, sampler: Callable[[], PureState], n: int, augment: bool = True) -> float:
    """``sup_rho |s(rho)|_rho`` over sampled states."""
    if n < 1:
        raise ValueError("n must be >= 1")
    states = [sampler() for _ in range(n)]
    if augment and s.is_constant:
        states += singular_states(s.xi)
    return max(s(rho).norm() for rho in states)


def trivialize(s: Section, chart: Chart, rho: PureState) -> np.ndarray:
    """Typical-fiber value of ``s(rho)`` in the Hopf trivialization over ``chart``.

    This is ``phi_h(x) f(x)`` for any lift ``x``, i.e. the value against the
    lift ``Omega^h_rho`` with ``<h|Omega> > 0``.
    """
    return s(rho).relative_to(omega_vector(chart, rho))


def local_section(s: Section, chart: Chart):
    """``z -> trivialize(s, chart, beta_inv(z))``."""
    return lambda z: trivialize(s, chart, beta_inv(chart, z))


def group_act(u: AlgebraElement, target, tol=1e-10):
    """Action of a unitary ``u`` on states, module elements, fiber vectors,
    or ``(xi, rho)`` pairs: ``rho -> rho o Ad u^*``, ``xi -> xi u^*``,
    ``[xi]_rho -> [xi u^*]_{chi_u(rho)}``.
    """
    check_unitary(u, tol)
    if isinstance(target, PureState):
        return PureState.from_vector(target.block, u.block(target.block) @ target.vector)
    if isinstance(target, ModuleElement):
        return act(target, adjoint(u))
    if isinstance(target, FiberVector):
        lift = u.block(target.at.block) @ target.at.vector
        moved = PureState.from_vector(target.at.block, lift)
        return FiberVector(moved, rebase(target.value, lift, moved.vector))
    if isinstance(target, tuple) and len(target) == 2:
        return tuple(group_act(u, t, tol) for t in target)
    raise TypeError(f"cannot act on {type(target).__name__}")


def typical_fiber_map(xi: ModuleElement, block: int, z) -> np.ndarray:
    """Orbit invariant ``(xi, z) -> xi_k z`` identifying F_X^b with C^{d_k}."""
    z = np.asarray(z, dtype=complex)
    if abs(np.linalg.norm(z) - 1.0) > 1e-12:
        raise ShapeError("typical_fiber_map needs a unit vector")
    return xi.block(block) @ z


def holomorphy_check(s: Section, rho: PureState, tol: float = 1e-5, step=DEFAULT_STEP) -> Check:
    """Largest antiholomorphic derivative of the trivialized section at ``rho``,
    taken in the chart centered at ``rho`` over an orthonormal basis of H_h.
    """
    chart = Chart.centered_at(rho)
    V = chart.tangent_basis()
    f = local_section(s, chart)
    z0 = np.zeros(chart.dim, complex)
    worst = 0.0
    for j in range(V.shape[1]):
        worst = max(worst, float(np.linalg.norm(wirtinger(f, z0, V[:, j], "antiholomorphic", step))))
    return Check(worst, tol)
