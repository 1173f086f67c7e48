"""Randomized verification routines.

Every routine draws case ``i`` from its own generator seeded with
``(*key, i)`` so that cases are independent and reproducible in any order.
Each returns the worst residual over its cases (or, for lower-bound
checks, the smallest observed value).
"""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from ..algebra import (
    AlgebraShape,
    adjoint,
    mul,
    operator_norm,
    iso_signature,
    make_algebra,
    pauli,
    random_element,
    random_hermitian,
    random_unitary,
)
from ..bundle import (
    constant_section,
    fiber_inner,
    group_act,
    h_function,
    hermitian,
    holomorphy_check,
    project,
    quotient_oracle,
    section_norm,
    trivialize,
    typical_fiber_map,
)
from ..connection import (
    cocycle_check,
    covariant_derivative,
    flatness_check,
    leibniz_check,
    section_star,
    star_action,
    transport_solver,
    trivialized_derivative,
)
from ..errors import UnderdeterminedError
from ..gelfand import (
    gelfand,
    generic,
    ku_membership_check,
    local_derivative,
    reconstruct,
    star,
    star_norm,
    tomographic_frame,
)
from ..hilbert import ModuleShape, act, inner, module_norm, random_module_element
from ..states import (
    DEFAULT_STEP,
    Chart,
    PureState,
    StateSampler,
    beta,
    beta_inv,
    evaluate,
    kahler_form,
    kahler_metric,
    random_state,
    transition_phase,
    wirtinger_derivative,
)


def case_rngs(key: Sequence[int], n: int) -> Iterator[np.random.Generator]:
    for i in range(n):
        yield np.random.default_rng([*key, i])


def pick_block(shape: AlgebraShape, rng, min_dim: int = 2) -> int:
    """Uniform block among those of size >= ``min_dim`` (any block if none)."""
    ids = [k for k, n in enumerate(shape.blocks, start=1) if n >= min_dim] or list(range(1, len(shape) + 1))
    return int(rng.choice(ids))


def random_unit(n: int, rng) -> np.ndarray:
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def random_tangent(chart: Chart, rng) -> np.ndarray:
    return chart.project_tangent(rng.normal(size=chart.dim) + 1j * rng.normal(size=chart.dim))


def random_chart(shape: AlgebraShape, rng, block: int | None = None) -> Chart:
    if block is None:
        block = pick_block(shape, rng)
    return Chart(block, random_unit(shape.dim(block), rng))


# -- algebra ---------------------------------------------------------------


def c_star_identity(shape, key, n=100) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        A = random_element(shape, rng)
        nrm = operator_norm(A)
        worst = max(worst, abs(operator_norm(mul(adjoint(A), A)) - nrm**2) / nrm**2)
    return worst


def submultiplicativity(shape, key, n=100) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        A, B = random_element(shape, rng), random_element(shape, rng)
        worst = max(worst, operator_norm(A @ B) - operator_norm(A) * operator_norm(B))
    return max(worst, 0.0)


def signature_permutation(shape, key, n=20) -> float:
    """Number of block permutations that change the signature."""
    bad = 0
    for rng in case_rngs(key, n):
        perm = rng.permutation(len(shape.blocks))
        other = make_algebra([shape.blocks[i] for i in perm])
        bad += iso_signature(other) != iso_signature(shape)
    return float(bad)


def pauli_product() -> float:
    s = make_algebra([2])
    x, y, z = (s.element(pauli(c)) for c in "xyz")
    return mul(x, y).max_abs_diff(1j * z)


# -- geometry --------------------------------------------------------------


def chart_roundtrip(shape, key, n=100) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        ch = random_chart(shape, rng)
        z = random_tangent(ch, rng)
        worst = max(worst, float(np.linalg.norm(beta(ch, beta_inv(ch, z)) - z)))
    return worst


def chart_compatibility(shape, key, n=100) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        k = pick_block(shape, rng)
        h1, h2 = random_chart(shape, rng, k), random_chart(shape, rng, k)
        rho = random_state(shape, rng, k)
        a = beta_inv(h1, beta(h1, rho))
        b = beta_inv(h2, beta(h2, rho))
        worst = max(worst, float(np.linalg.norm(a.vector - b.vector)), float(np.linalg.norm(a.vector - rho.vector)))
    return worst


def phase_invariance(shape, key, n=100) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        rho = random_state(shape, rng)
        A = random_element(shape, rng)
        c = np.exp(2j * np.pi * rng.random())
        moved = PureState(rho.block, c * rho.vector)
        worst = max(worst, abs(evaluate(moved, A) - evaluate(rho, A)))
    return worst


def metric_positivity(shape, key, n=100) -> float:
    """Smallest ``g_z(u-bar, u) / |u|^2`` (lower-bound check)."""
    low = np.inf
    for rng in case_rngs(key, n):
        ch = random_chart(shape, rng)
        if ch.dim == 1:
            continue
        z, u = random_tangent(ch, rng), random_tangent(ch, rng)
        g = kahler_metric(ch, z, u, u)
        low = min(low, g.real / float(np.vdot(u, u).real))
    return float(low) if np.isfinite(low) else 1.0


def metric_at_center(shape, key, n=100) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        ch = random_chart(shape, rng)
        z0 = np.zeros(ch.dim, complex)
        u, v = random_tangent(ch, rng), random_tangent(ch, rng)
        worst = max(worst, abs(kahler_metric(ch, z0, u, v) - np.vdot(v, u)))
    return worst


def kahler_identity(shape, key, n=100) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        ch = random_chart(shape, rng)
        z, u, v = (random_tangent(ch, rng) for _ in range(3))
        worst = max(worst, abs(kahler_form(ch, z, u, v) + 1j * kahler_metric(ch, z, u, v)))
    return worst


def sup_bound(shape, key, n_elements=5, n_states=10_000) -> tuple[float, float]:
    """(excess of sampled ``rho(A^*A)`` over ``|A|^2``, gap at the top eigenvector)."""
    excess = gap = 0.0
    for rng in case_rngs(key, n_elements):
        A = random_element(shape, rng)
        AA = mul(adjoint(A), A)
        nrm2 = operator_norm(A) ** 2
        sampler = StateSampler(shape, rng)
        top = max(evaluate(sampler(), AA).real for _ in range(n_states))
        excess = max(excess, top - nrm2)
        k = int(np.argmax([np.linalg.eigvalsh(b)[-1] for b in AA.data])) + 1
        vecs = np.linalg.eigh(AA.block(k))[1]
        gap = max(gap, abs(evaluate(PureState.from_vector(k, vecs[:, -1]), AA).real - nrm2))
    return max(excess, 0.0), gap


def wirtinger_vs_analytic(shape, key, n=50, step=DEFAULT_STEP) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        ch = random_chart(shape, rng)
        A = random_element(shape, rng)
        z, Y = 0.5 * random_tangent(ch, rng), random_tangent(ch, rng)
        fa = gelfand(A)
        fd = wirtinger_derivative(fa, ch, z, Y, "holomorphic", step)
        worst = max(worst, abs(fd - local_derivative(fa, ch, z, Y, "analytic")))
    return worst


def transition_phase_modulus(shape, key, n=100) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        ch = random_chart(shape, rng)
        z = random_unit(ch.dim, rng)
        worst = max(worst, abs(abs(transition_phase(ch, z)) - 1.0))
    return worst


# -- gelfand ---------------------------------------------------------------


def star_homomorphism(shape, key, pairs=20, states=200, mode="auto", step=DEFAULT_STEP) -> float:
    """max |(f_A * f_B)(rho) - f_AB(rho)| over random Hermitian pairs."""
    worst = 0.0
    for rng in case_rngs(key, pairs):
        A, B = random_hermitian(shape, rng), random_hermitian(shape, rng)
        prod = star(gelfand(A), gelfand(B), mode, step)
        AB = A @ B
        for _ in range(states):
            rho = random_state(shape, rng)
            worst = max(worst, abs(prod(rho) - evaluate(rho, AB)))
    return worst


def involution(shape, key, n=100) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        A = random_element(shape, rng)
        rho = random_state(shape, rng)
        worst = max(worst, abs(np.conj(gelfand(A)(rho)) - gelfand(adjoint(A))(rho)))
    return worst


def star_norm_gap(shape, key, n=20, samples=200, step=DEFAULT_STEP) -> tuple[float, float]:
    """(|eigen-augmented star norm - |A||, excess of plain sampling over |A|)."""
    gap = excess = 0.0
    for rng in case_rngs(key, n):
        A = random_element(shape, rng)
        fa = gelfand(A)
        nrm = operator_norm(A)
        sampler = StateSampler(shape, rng)
        gap = max(gap, abs(star_norm(fa, sampler, samples, True, step=step) - nrm))
        excess = max(excess, star_norm(fa, sampler, samples, False, step=step) - nrm)
    return gap, max(excess, 0.0)


# Squared gradient |P_perp A x|^2 below which a state counts as near-critical for f_A.
CRITICAL_GRADIENT = 0.1


def gradient_sq(A, rho: PureState) -> float:
    x = rho.vector
    Ax = A.block(rho.block) @ x
    return float(np.linalg.norm(Ax - np.vdot(x, Ax) * x) ** 2)


def generic_state(shape, A, rng, block: int, tries=200) -> PureState:
    """Random state of ``block`` away from the critical set of f_A.

    At a critical point the (2,0) Hessian of f_A^2 is 2 f_A D^2 f_A = 0, so
    the square is locally indistinguishable from a member there.
    """
    for _ in range(tries):
        rho = random_state(shape, rng, block)
        if gradient_sq(A, rho) >= CRITICAL_GRADIENT:
            return rho
    return rho


def ku_membership(shape, key, n=20, step=1e-3) -> tuple[float, float]:
    """(largest Hessian residual of f_A, smallest residual of f_A^2).

    Member probes use uniform states; non-member probes use
    :func:`generic_state`.
    """
    member, nonmember = 0.0, np.inf
    for rng in case_rngs(key, n):
        A = random_hermitian(shape, rng)
        k = pick_block(shape, rng)
        rho = random_state(shape, rng, k)
        fa = gelfand(A)
        member = max(member, ku_membership_check(fa, rho, step=step).residual)
        if rho.dim > 1:
            sq = generic(lambda r, fa=fa: fa(r) ** 2)
            nonmember = min(nonmember, ku_membership_check(sq, generic_state(shape, A, rng, k), step=step).residual)
    return member, float(nonmember)


# -- module ----------------------------------------------------------------


def module_positivity(mshape: ModuleShape, key, n=100) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        xi = random_module_element(mshape, rng)
        lo = min(float(np.linalg.eigvalsh(b)[0]) for b in inner(xi, xi).data)
        worst = max(worst, -lo)
    return worst


def cauchy_schwarz(mshape, key, n=100) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        xi, eta = random_module_element(mshape, rng), random_module_element(mshape, rng)
        rho = random_state(mshape.algebra, rng)
        lhs = abs(evaluate(rho, inner(xi, eta))) ** 2
        rhs = evaluate(rho, inner(xi, xi)).real * evaluate(rho, inner(eta, eta)).real
        worst = max(worst, lhs - rhs)
    return max(worst, 0.0)


def inner_action(mshape, key, n=100) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        xi, eta = random_module_element(mshape, rng), random_module_element(mshape, rng)
        A = random_element(mshape.algebra, rng)
        worst = max(worst, inner(eta, act(xi, A)).max_abs_diff(mul(inner(eta, xi), A)))
    return worst


def inner_symmetry(mshape, key, n=100) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        xi, eta = random_module_element(mshape, rng), random_module_element(mshape, rng)
        worst = max(worst, adjoint(inner(xi, eta)).max_abs_diff(inner(eta, xi)))
    return worst


# -- bundle ----------------------------------------------------------------


def _state_for(mshape, rng, min_dim=1) -> PureState:
    """Random state on a block carrying a nonzero module summand when possible."""
    ids = [k for k, (d, n) in enumerate(zip(mshape.rows, mshape.algebra.blocks), start=1) if d > 0 and n >= min_dim]
    ids = ids or [k for k, d in enumerate(mshape.rows, start=1) if d > 0] or list(range(1, len(mshape.rows) + 1))
    return random_state(mshape.algebra, rng, int(rng.choice(ids)))


def fiber_inner_routes(mshape, key, n=100) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        xi, eta = random_module_element(mshape, rng), random_module_element(mshape, rng)
        rho = _state_for(mshape, rng)
        worst = max(worst, abs(fiber_inner(project(xi, rho), project(eta, rho)) - evaluate(rho, inner(xi, eta))))
    return worst


def hermitian_metric(mshape, key, n=200) -> float:
    """max |H(Psi xi, Psi eta)(rho) - f_<xi|eta>(rho)|."""
    worst = 0.0
    for rng in case_rngs(key, n):
        xi, eta = random_module_element(mshape, rng), random_module_element(mshape, rng)
        rho = _state_for(mshape, rng)
        H = h_function(constant_section(xi), constant_section(eta))
        worst = max(worst, abs(H(rho) - gelfand(inner(xi, eta))(rho)))
    return worst


def section_norm_gap(mshape, key, n=20, samples=200) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        xi = random_module_element(mshape, rng)
        est = section_norm(constant_section(xi), StateSampler(mshape.algebra, rng), samples)
        worst = max(worst, abs(est - module_norm(xi)))
    return worst


def chart_transition(mshape, key, n=50) -> float:
    """Residual of ``T_h = phi_h(x) conj(phi_h'(x)) T_h'`` for Psi(xi)."""
    worst = 0.0
    for rng in case_rngs(key, n):
        xi = random_module_element(mshape, rng)
        rho = _state_for(mshape, rng, 2)
        shape = mshape.algebra
        h1, h2 = random_chart(shape, rng, rho.block), random_chart(shape, rng, rho.block)
        s = constant_section(xi)
        x = np.exp(2j * np.pi * rng.random()) * rho.vector
        twist = transition_phase(h1, x) * np.conj(transition_phase(h2, x))
        worst = max(worst, float(np.linalg.norm(trivialize(s, h1, rho) - twist * trivialize(s, h2, rho))))
    return worst


def orbit_invariance(mshape, key, n=100) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        xi = random_module_element(mshape, rng)
        u = random_unitary(mshape.algebra, rng)
        k = pick_block(mshape.algebra, rng, 1)
        z = random_unit(mshape.algebra.dim(k), rng)
        moved = typical_fiber_map(group_act(u, xi), k, u.block(k) @ z)
        worst = max(worst, float(np.max(np.abs(moved - typical_fiber_map(xi, k, z)), initial=0.0)))
    return worst


def quotient_dimension(mshape, key, n=200) -> float:
    """Number of sampled states where rank(xi -> [xi]_rho) != d_k, or where
    a kernel vector has ``rho(<xi|xi>) != 0``."""
    bad = 0
    for rng in case_rngs(key, n):
        rho = random_state(mshape.algebra, rng)
        q = quotient_oracle(mshape, rho)
        ok = q.rank == mshape.rows[rho.block - 1]
        ok = ok and all(abs(evaluate(rho, inner(e, e))) < 1e-20 + 1e-12 for e in q.kernel)
        bad += not ok
    return float(bad)


def action_compatibility(mshape, key, n=100) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        xi, eta = random_module_element(mshape, rng), random_module_element(mshape, rng)
        rho = _state_for(mshape, rng)
        u = random_unitary(mshape.algebra, rng)
        v, w = project(xi, rho), project(eta, rho)
        before = fiber_inner(v, w)
        after = fiber_inner(group_act(u, v), group_act(u, w))
        A = random_element(mshape.algebra, rng)
        chi = evaluate(group_act(u, rho), A) - evaluate(rho, adjoint(u) @ A @ u)
        worst = max(worst, abs(after - before), abs(chi))
    return worst


def local_pairing(mshape, key, n=100) -> float:
    """``<xi'_k h | T_h(rho)> = sqrt(w) <h| <xi'|xi>_k (z + h)>`` for Psi(xi)."""
    worst = 0.0
    for rng in case_rngs(key, n):
        xi, xi2 = random_module_element(mshape, rng), random_module_element(mshape, rng)
        rho = _state_for(mshape, rng)
        ch = random_chart(mshape.algebra, rng, rho.block)
        z = beta(ch, rho)
        k = rho.block
        lhs = np.vdot(xi2.block(k) @ ch.base, trivialize(constant_section(xi), ch, rho))
        w = 1.0 / (1.0 + np.vdot(z, z).real)
        rhs = np.sqrt(w) * np.vdot(ch.base, inner(xi2, xi).block(k) @ (z + ch.base))
        worst = max(worst, abs(lhs - rhs))
    return worst


def holomorphy(mshape, key, n=20, step=DEFAULT_STEP) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        xi = random_module_element(mshape, rng)
        rho = _state_for(mshape, rng, 2)
        worst = max(worst, holomorphy_check(constant_section(xi), rho, step=step).residual)
    return worst


# -- connection ------------------------------------------------------------


def cocycle(shape, key, n=50, step=DEFAULT_STEP) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        k = pick_block(shape, rng)
        h1, h2 = random_chart(shape, rng, k), random_chart(shape, rng, k)
        rho = random_state(shape, rng, k)
        worst = max(worst, cocycle_check(h1, h2, rho, random_tangent(h2, rng), step=step).residual)
    return worst


def flatness(mshape, key, n=20, step=DEFAULT_STEP) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        xi = random_module_element(mshape, rng)
        rho = _state_for(mshape, rng, 2)
        ch = Chart.centered_at(rho)
        Y, Z = random_tangent(ch, rng), random_tangent(ch, rng)
        worst = max(worst, flatness_check(constant_section(xi), rho, Y, Z, step=step).residual)
    return worst


def leibniz(mshape, key, n=20, step=DEFAULT_STEP) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        xi = random_module_element(mshape, rng)
        A = random_hermitian(mshape.algebra, rng)
        rho = _state_for(mshape, rng, 2)
        Y = random_tangent(Chart.centered_at(rho), rng)
        worst = max(worst, leibniz_check(constant_section(xi), gelfand(A), rho, Y, step=step).residual)
    return worst


def covariant_routes(mshape, key, n=50, step=DEFAULT_STEP) -> float:
    worst = 0.0
    for rng in case_rngs(key, n):
        s = constant_section(random_module_element(mshape, rng))
        rho = _state_for(mshape, rng, 2)
        Y = random_tangent(Chart.centered_at(rho), rng)
        a = covariant_derivative(s, rho, Y, "analytic")
        b = covariant_derivative(s, rho, Y, "fd", step)
        worst = max(worst, (a - b).norm())
    return worst


def transport_independence(mshape, key, n=20) -> float:
    """Two distinct solutions K of ``K(z+h) = Y`` give the same derivative."""
    worst = 0.0
    for rng in case_rngs(key, n):
        xi = random_module_element(mshape, rng)
        shape = mshape.algebra
        ch = random_chart(shape, rng, pick_block(shape, rng))
        z, Y = 0.5 * random_tangent(ch, rng), random_tangent(ch, rng)
        K = transport_solver(shape, ch, z, Y)
        v = z + ch.base
        extra = rng.normal(size=(ch.dim, ch.dim)) + 1j * rng.normal(size=(ch.dim, ch.dim))
        K2 = K + shape.embed(ch.block, extra - np.outer(extra @ v, v.conj()) / np.vdot(v, v).real)
        a = trivialized_derivative(xi, ch, z, Y, K)
        b = trivialized_derivative(xi, ch, z, Y, K2)
        worst = max(worst, float(np.linalg.norm(a - b, ord=np.inf)) if a.size else 0.0)
    return worst


# -- serre-swan ------------------------------------------------------------


def serre_swan(mshape, key, n=200, mode="analytic", step=DEFAULT_STEP) -> float:
    """max |(Psi(xi) * f_A)(rho) - [xi A]_rho|."""
    worst = 0.0
    for rng in case_rngs(key, n):
        xi = random_module_element(mshape, rng)
        A = random_hermitian(mshape.algebra, rng)
        rho = _state_for(mshape, rng)
        got = star_action(constant_section(xi), gelfand(A), rho, mode, step)
        worst = max(worst, (got - project(act(xi, A), rho)).norm())
    return worst


def metric_compatibility(mshape, key, n=50, step=DEFAULT_STEP) -> float:
    """max |H(Psi eta, Psi xi * f_A)(rho) - (f_<eta|xi> * f_A)(rho)|."""
    worst = 0.0
    for rng in case_rngs(key, n):
        xi, eta = random_module_element(mshape, rng), random_module_element(mshape, rng)
        A = random_hermitian(mshape.algebra, rng)
        rho = _state_for(mshape, rng)
        lhs = hermitian(constant_section(eta), section_star(constant_section(xi), gelfand(A)), rho)
        rhs = star(gelfand(inner(eta, xi)), gelfand(A))(rho)
        worst = max(worst, abs(lhs - rhs))
    return worst


# -- reconstruction --------------------------------------------------------


def reconstruction_roundtrip(shape, key, n=20) -> float:
    worst = 0.0
    frame = [rho for k, m in enumerate(shape.blocks, start=1) for rho in tomographic_frame(k, m)]
    for rng in case_rngs(key, n):
        A = random_element(shape, rng)
        rec = reconstruct([(rho, evaluate(rho, A)) for rho in frame], shape)
        worst = max(worst, rec.element.max_abs_diff(A))
    return worst


def underdetermined_detection(shape, key, n=10) -> float:
    """Number of truncated frames NOT rejected as underdetermined."""
    missed = 0
    frame = [rho for k, m in enumerate(shape.blocks, start=1) for rho in tomographic_frame(k, m)]
    for rng in case_rngs(key, n):
        A = random_element(shape, rng)
        drop = int(rng.integers(len(frame)))
        samples = [(rho, evaluate(rho, A)) for i, rho in enumerate(frame) if i != drop]
        try:
            reconstruct(samples, shape)
        except UnderdeterminedError:
            continue
        missed += 1
    return float(missed)
