"""The connection ``D = d + A`` on the atomic bundle and the module action it induces.

In the chart at ``h`` the connection coefficient along a holomorphic
direction ``Y`` is the scalar ``-(1/2) <z|Y> / (1 + |z|^2)``. Covariant
derivatives are taken on the trivialized section, usually in the chart
centered at the evaluation point where the coefficient vanishes.
"""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraElement, AlgebraShape
from .bundle import FiberVector, Section, generic_section, local_section
from .errors import ChartError, UnsupportedModeError
from .gelfand import StateFunction, hamiltonian_field, local_derivative
from .hilbert import ModuleElement
from .residual import Check
from .states import (
    CHART_GUARD,
    DEFAULT_STEP,
    Chart,
    PureState,
    beta,
    beta_inv,
    weight,
    wirtinger,
)

__all__ = [
    "coeff",
    "cocycle_check",
    "transport_solver",
    "trivialized_derivative",
    "covariant_derivative",
    "local_covariant_derivative",
    "star_action",
    "section_star",
    "flatness_check",
    "leibniz_check",
]


def coeff(chart: Chart, z, Y) -> complex:
    z = np.asarray(z, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    chart.check_tangent(z, Y)
    return complex(-0.5 * np.vdot(z, Y) * weight(z))


def _pushforward(fn, z, Y, step):
    """Fourth-order central difference of ``fn`` at ``z`` along ``Y``."""
    r = float(np.linalg.norm(Y))
    if r == 0.0:
        return np.zeros_like(z)
    d = step * Y / r
    return r * (8 * (fn(z + d) - fn(z - d)) - (fn(z + 2 * d) - fn(z - 2 * d))) / (12 * step)


def cocycle_check(h: Chart, h2: Chart, rho: PureState, Y, tol=1e-6, step=DEFAULT_STEP) -> Check:
    """Residual of the transition law between the coefficients of two charts.

    ``Y`` is realized on H_{h2} at ``z2 = beta_{h2}(rho)`` and pushed to the
    chart ``h`` through ``beta_h o beta_{h2}^{-1}`` by a finite-difference
    Jacobian (fourth-order stencil; the transition map is steep near the
    edge of the chart ``h``). The law checked is
    ``A^{h2}_Y = -(1/2) <h|Y> / <h|z2 + h2> + A^h_Y``.
    """
    if h.block != h2.block or abs(np.vdot(h.base, h2.base)) <= CHART_GUARD:
        raise ChartError("charts do not overlap")
    if not (h.contains(rho) and h2.contains(rho)):
        raise ChartError("state is not in both chart domains")
    Y = np.asarray(Y, dtype=complex)
    z2 = beta(h2, rho)
    h2.check_tangent(Y)
    Yh = h.project_tangent(_pushforward(lambda q: beta(h, beta_inv(h2, q)), z2, Y, step))
    z = beta(h, rho)
    lhs = coeff(h2, z2, Y)
    rhs = -0.5 * np.vdot(h.base, Y) / np.vdot(h.base, z2 + h2.base) + coeff(h, z, Yh)
    return Check(float(abs(lhs - rhs)), tol)


def transport_solver(shape: AlgebraShape, chart: Chart, z, Y) -> AlgebraElement:
    """Minimal-norm ``K`` in the chart's block with ``K (z + h) = Y``."""
    z = np.asarray(z, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    chart.check_tangent(z, Y)
    v = z + chart.base
    return shape.embed(chart.block, np.outer(Y, v.conj()) / np.vdot(v, v).real)


def trivialized_derivative(xi: ModuleElement, chart: Chart, z, Y, K: AlgebraElement | None = None) -> np.ndarray:
    """Analytic ``d_Y`` of the trivialized constant section ``Psi(xi)`` at ``z``.

    Uses ``sqrt(w) xi_k (K - w <z|Y> / 2)(z + h)`` for any ``K`` solving
    ``K (z + h) = Y``; the result does not depend on which solution.
    """
    z = np.asarray(z, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    chart.check_tangent(z, Y)
    if K is None:
        K = transport_solver(xi.shape.algebra, chart, z, Y)
    k = K.block(chart.block)
    w = weight(z)
    v = z + chart.base
    return np.sqrt(w) * xi.block(chart.block) @ (k @ v - 0.5 * w * np.vdot(z, Y) * v)


def local_covariant_derivative(s: Section, chart: Chart, z, Y, step=DEFAULT_STEP) -> np.ndarray:
    """``(d_Y + A_Y) T`` at chart point ``z`` for the trivialized section ``T``."""
    T = local_section(s, chart)
    return wirtinger(T, z, Y, "holomorphic", step) + coeff(chart, z, Y) * T(np.asarray(z, dtype=complex))


def covariant_derivative(s: Section, rho: PureState, Y, mode="auto", step=DEFAULT_STEP) -> FiberVector:
    """``(D_Y s)(rho)`` with ``Y`` in H_h of the chart centered at ``rho``.

    ``analytic`` (constant sections only) uses the closed form through
    :func:`trivialized_derivative`; ``fd`` differentiates the trivialized
    section numerically.
    """
    if mode == "auto":
        mode = "analytic" if s.is_constant else "fd"
    chart = Chart.centered_at(rho)
    Y = np.asarray(Y, dtype=complex)
    z0 = np.zeros(chart.dim, complex)
    chart.check_tangent(Y)
    if mode == "analytic":
        if not s.is_constant:
            raise UnsupportedModeError("analytic covariant derivative needs a constant section")
        return FiberVector(rho, trivialized_derivative(s.xi, chart, z0, Y))
    if mode == "fd":
        return FiberVector(rho, local_covariant_derivative(s, chart, z0, Y, step))
    raise UnsupportedModeError(f"unknown mode {mode!r}")


def star_action(s: Section, l: StateFunction, rho: PureState, mode="auto", step=DEFAULT_STEP) -> FiberVector:
    """``(s * l)(rho) = s(rho) l(rho) + i (D_{X_l} s)(rho)``."""
    if mode not in ("auto", "analytic", "fd"):
        raise UnsupportedModeError(f"unknown mode {mode!r}")
    chart = Chart.centered_at(rho)
    field_mode = "fd" if mode == "fd" else "auto"
    X = hamiltonian_field(l, chart, np.zeros(chart.dim, complex), field_mode, step)
    D = covariant_derivative(s, rho, X, mode, step)
    return l(rho) * s(rho) + 1j * D


def section_star(s: Section, l: StateFunction, mode="auto", step=DEFAULT_STEP) -> Section:
    return generic_section(s.shape, lambda rho: star_action(s, l, rho, mode, step))


def flatness_check(s: Section, rho: PureState, Y, Z, tol=1e-4, step=DEFAULT_STEP) -> Check:
    """``|D_Y D_Z s - D_Z D_Y s|`` at ``rho`` for constant holomorphic fields.

    Both derivatives use the full off-center coefficient; the inner
    covariant derivative is itself evaluated on the stencil of the outer.
    """
    chart = Chart.centered_at(rho)
    Y = np.asarray(Y, dtype=complex)
    Z = np.asarray(Z, dtype=complex)
    chart.check_tangent(Y, Z)
    z0 = np.zeros(chart.dim, complex)

    def twice(a, b):
        inner = lambda q: local_covariant_derivative(s, chart, q, b, step)  # noqa: E731
        return wirtinger(inner, z0, a, "holomorphic", step) + coeff(chart, z0, a) * inner(z0)

    return Check(float(np.linalg.norm(twice(Y, Z) - twice(Z, Y))), tol)


def leibniz_check(s: Section, l: StateFunction, rho: PureState, Y, tol=1e-5, step=DEFAULT_STEP) -> Check:
    """``|D_Y(s l) - (d_Y l) s - l D_Y s|`` at ``rho``."""
    chart = Chart.centered_at(rho)
    z0 = np.zeros(chart.dim, complex)
    lhs = covariant_derivative(s.times(l), rho, Y, "fd", step)
    rhs = local_derivative(l, chart, z0, Y, "auto", step) * s(rho) + l(rho) * covariant_derivative(s, rho, Y, "auto", step)
    return Check((lhs - rhs).norm(), tol)
