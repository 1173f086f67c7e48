"""Gel'fand representation of A as functions on the pure states.

``f_A(rho) = rho(A)`` turns A into functions on P = Pure A. The non-local
product ``l * m = l m + i X_m l`` (with X_m the holomorphic Hamiltonian
field of m) makes ``A -> f_A`` multiplicative. Everything here is evaluated
in the chart centered at the evaluation point, where the chart coordinate
is 0 and no connection terms appear.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple

import numpy as np

from .algebra import AlgebraElement, AlgebraShape, adjoint
from .errors import SerreSwanError, ShapeError, UnderdeterminedError
from .residual import Check
from .states import (
    DEFAULT_STEP,
    Chart,
    PureState,
    beta_inv,
    evaluate,
    weight,
    wirtinger,
)

__all__ = [
    "StateFunction",
    "gelfand",
    "generic",
    "constant",
    "local_derivative",
    "hamiltonian_field",
    "star",
    "star_norm",
    "eigen_states",
    "ku_membership_check",
    "MembershipReport",
    "reconstruct",
    "Reconstruction",
    "tomographic_frame",
    "hermitian_basis",
]

_MODES = ("auto", "analytic", "fd")


@dataclass(frozen=True, eq=False)
class StateFunction:
    """A complex function on pure states.

    If ``element`` is set the function is the Gel'fand transform of that
    element and analytic formulas are available for its derivatives.
    """

    evaluator: Callable[[PureState], complex]
    element: AlgebraElement | None = None

    def __call__(self, state: PureState) -> complex:
        return complex(self.evaluator(state))

    @property
    def is_gelfand(self) -> bool:
        return self.element is not None

    def conj(self) -> StateFunction:
        if self.element is not None:
            return gelfand(adjoint(self.element))
        f = self.evaluator
        return StateFunction(lambda rho: np.conj(f(rho)))

    def local(self, chart: Chart):
        """``l o beta_inv`` as a function of chart coordinates."""
        return lambda z: self(beta_inv(chart, z))


def gelfand(A: AlgebraElement) -> StateFunction:
    return StateFunction(lambda rho: evaluate(rho, A), A)


def generic(fn: Callable[[PureState], complex]) -> StateFunction:
    return StateFunction(fn)


def constant(c: complex) -> StateFunction:
    return StateFunction(lambda rho: c)


def _mode_for(l: StateFunction, mode: str) -> str:
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")
    if mode == "auto":
        return "analytic" if l.is_gelfand else "fd"
    if mode == "analytic" and not l.is_gelfand:
        raise SerreSwanError("analytic mode needs a Gel'fand function")
    return mode


def local_derivative(l: StateFunction, chart: Chart, z, Y, mode="auto", step=DEFAULT_STEP) -> complex:
    """Holomorphic derivative of ``l o beta_inv`` at ``z`` along ``Y``.

    For ``f_A`` the analytic value is
    ``-w^2 <z|Y> <z+h|A(z+h)> + w <z+h|A Y>``.
    """
    z = np.asarray(z, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    chart.check_tangent(z, Y)
    if _mode_for(l, mode) == "analytic":
        a = l.element.block(chart.block)
        v = z + chart.base
        w = weight(z)
        return complex(-w * w * np.vdot(z, Y) * np.vdot(v, a @ v) + w * np.vdot(v, a @ Y))
    return complex(wirtinger(l.local(chart), z, Y, "holomorphic", step))


def hamiltonian_field(l: StateFunction, chart: Chart, z, mode="auto", step=DEFAULT_STEP) -> np.ndarray:
    """Holomorphic Hamiltonian field X_l at chart point ``z`` (a vector in H_h).

    Defined by ``omega(X_l, Y-bar) = dbar l(Y-bar)``. Gel'fand functions use
    ``-i (A(z+h) - <h|A(z+h)> (z+h))``; otherwise the defining equation is
    solved on an orthonormal basis of H_h with finite-difference dbar.
    """
    z = np.asarray(z, dtype=complex)
    chart.check_tangent(z)
    h = chart.base
    if _mode_for(l, mode) == "analytic":
        a = l.element.block(chart.block)
        v = z + h
        av = a @ v
        return chart.project_tangent(-1j * (av - np.vdot(h, av) * v))

    V = chart.tangent_basis()
    m = V.shape[1]
    if m == 0:
        return np.zeros(chart.dim, dtype=complex)
    f = l.local(chart)
    rhs = np.array([wirtinger(f, z, V[:, j], "antiholomorphic", step) for j in range(m)])
    w = weight(z)
    vz = V.conj().T @ z  # <v_j|z>
    # omega(v_k, v_j-bar) = i g(v_j-bar, v_k)
    M = 1j * (w * np.eye(m) - w * w * np.outer(vz, vz.conj()))
    if np.linalg.cond(M) > 1e12:
        raise SerreSwanError("singular Kähler form system")
    return V @ np.linalg.solve(M, rhs)


def star(l: StateFunction, m: StateFunction, mode="auto", step=DEFAULT_STEP) -> StateFunction:
    """The product ``l * m = l m + i X_m l``, evaluated pointwise.

    ``mode='auto'`` uses analytic fields and derivatives for Gel'fand
    inputs and finite differences otherwise; ``'fd'`` forces finite
    differences everywhere.
    """

    def value(rho: PureState) -> complex:
        chart = Chart.centered_at(rho)
        zero = np.zeros(chart.dim, dtype=complex)
        X = hamiltonian_field(m, chart, zero, mode, step)
        return l(rho) * m(rho) + 1j * local_derivative(l, chart, zero, X, mode, step)

    return StateFunction(value)


def eigen_states(A: AlgebraElement) -> list[PureState]:
    """Per block, the top eigenvector state of ``A_k^* A_k``."""
    out = []
    for k, a in enumerate(A.data, start=1):
        _, vecs = np.linalg.eigh(a.conj().T @ a)
        out.append(PureState.from_vector(k, vecs[:, -1]))
    return out


def star_norm(
    l: StateFunction,
    sampler: Callable[[], PureState],
    n_samples: int,
    augment: bool = True,
    mode="auto",
    step=DEFAULT_STEP,
) -> float:
    """``sup_rho |(conj(l) * l)(rho)|^{1/2}`` over sampled states.

    With ``augment`` and a Gel'fand input the top eigenvector states of
    ``A^* A`` are added, which attain the supremum.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    states = [sampler() for _ in range(n_samples)]
    if augment and l.is_gelfand:
        states += eigen_states(l.element)
    sq = star(l.conj(), l, mode, step)
    return max(float(np.sqrt(abs(sq(rho)))) for rho in states)


class MembershipReport(NamedTuple):
    holomorphic: float
    antiholomorphic: float
    tol: float

    @property
    def residual(self) -> float:
        return max(self.holomorphic, self.antiholomorphic)

    @property
    def member(self) -> bool:
        return self.residual <= self.tol

    def check(self) -> Check:
        return Check(self.residual, self.tol)


def _hessian(f, dim_basis: np.ndarray, kind: str, step: float) -> float:
    z0 = np.zeros(dim_basis.shape[0], dtype=complex)
    m = dim_basis.shape[1]
    worst = 0.0
    for i in range(m):
        for j in range(i, m):
            vj = dim_basis[:, j]
            inner = lambda q, vj=vj: wirtinger(f, q, vj, kind, step)  # noqa: E731
            worst = max(worst, abs(wirtinger(inner, z0, dim_basis[:, i], kind, step)))
    return float(worst)


def ku_membership_check(l: StateFunction, rho: PureState, tol: float = 1e-4, step=1e-3) -> MembershipReport:
    """Pure (2,0) and (0,2) Hessians of ``l`` at the chart center ``rho``.

    At the center the Fubini-Study Christoffel symbols vanish, so these
    equal the covariant second derivatives D^2 l and Dbar^2 l.
    """
    chart = Chart.centered_at(rho)
    V = chart.tangent_basis()
    f = l.local(chart)
    return MembershipReport(
        _hessian(f, V, "holomorphic", step),
        _hessian(f, V, "antiholomorphic", step),
        tol,
    )


def hermitian_basis(n: int) -> list[np.ndarray]:
    """Real basis of the n x n Hermitian matrices (n^2 elements)."""
    basis = []
    for a in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[a, a] = 1
        basis.append(e)
    for a in range(n):
        for b in range(a + 1, n):
            s = np.zeros((n, n), dtype=complex)
            s[a, b] = s[b, a] = 1
            t = np.zeros((n, n), dtype=complex)
            t[a, b], t[b, a] = -1j, 1j
            basis += [s, t]
    return basis


def tomographic_frame(block: int, n: int) -> list[PureState]:
    """n^2 states e_a, (e_a + e_b)/sqrt2, (e_a + i e_b)/sqrt2 spanning Herm(n)."""
    eye = np.eye(n, dtype=complex)
    frame = [PureState(block, eye[a]) for a in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            frame.append(PureState.from_vector(block, eye[a] + eye[b]))
            frame.append(PureState.from_vector(block, eye[a] + 1j * eye[b]))
    return frame


class Reconstruction(NamedTuple):
    element: AlgebraElement
    residual: float


def reconstruct(samples: Iterable[tuple[PureState, complex]], shape: AlgebraShape, rank_tol=1e-10) -> Reconstruction:
    """Least-squares element A with ``rho_i(A) ~ v_i``.

    Real and imaginary parts of the samples determine the Hermitian and
    anti-Hermitian parts of each block separately, both in the basis of
    :func:`hermitian_basis`.
    """
    samples = list(samples)
    by_block: dict[int, list[tuple[PureState, complex]]] = {k: [] for k in range(1, len(shape) + 1)}
    for rho, v in samples:
        if rho.block not in by_block or rho.dim != shape.dim(rho.block):
            raise ShapeError(f"sample state does not belong to algebra {list(shape.blocks)}")
        by_block[rho.block].append((rho, complex(v)))

    blocks: list[np.ndarray] = []
    deficient: list[int] = []
    for k, n in enumerate(shape.blocks, start=1):
        basis = hermitian_basis(n)
        rows = by_block[k]
        if not rows:
            deficient.append(k)
            blocks.append(np.zeros((n, n)))
            continue
        X = np.array([rho.vector for rho, _ in rows])
        Phi = np.stack([np.einsum("ia,ab,ib->i", X.conj(), B, X).real for B in basis], axis=1)
        if np.linalg.matrix_rank(Phi, tol=rank_tol * max(1.0, np.abs(Phi).max())) < n * n:
            deficient.append(k)
            blocks.append(np.zeros((n, n)))
            continue
        vals = np.array([v for _, v in rows])
        re = np.linalg.lstsq(Phi, vals.real, rcond=None)[0]
        im = np.linalg.lstsq(Phi, vals.imag, rcond=None)[0]
        blocks.append(sum((a + 1j * b) * B for a, b, B in zip(re, im, basis)))
    if deficient:
        raise UnderdeterminedError(
            f"samples do not form a tomographic frame on block(s) {deficient}", deficient
        )
    A = AlgebraElement(shape, tuple(blocks))
    residual = max((abs(evaluate(rho, A) - v) for rho, v in samples), default=0.0)
    return Reconstruction(A, float(residual))
