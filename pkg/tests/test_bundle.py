import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from serreswan import (
    Chart,
    FiberVector,
    PureState,
    StateSampler,
    beta,
    constant_section,
    evaluate,
    fiber_inner,
    gelfand,
    generic_section,
    group_act,
    h_function,
    hermitian,
    holomorphy_check,
    inner,
    make_algebra,
    make_module,
    module_norm,
    pauli,
    project,
    random_element,
    random_module_element,
    random_state,
    random_unitary,
    section_norm,
    trivialize,
    typical_fiber_map,
)
from serreswan.bundle import quotient_oracle
from serreswan.errors import ShapeError, UnitaryError
from serreswan.hilbert import ModuleElement
from serreswan.states import basis_state, omega_vector, transition_phase

S2 = make_algebra([2])
M2 = make_module(S2, [2])
IDENT = ModuleElement(M2, (np.eye(2),))
E1, E2 = basis_state(1, 2, 0), basis_state(1, 2, 1)
SHAPE = make_algebra([2, 3])
M = make_module(SHAPE, [3, 1])
seeds = st.integers(0, 2**32 - 1)


def unit(n, rng):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def test_project_examples():
    assert np.allclose(project(IDENT, E1).value, [1, 0])
    e2e1 = ModuleElement(M2, (np.outer([0, 1], [1, 0]),))
    assert np.allclose(project(e2e1, E1).value, [0, 1])
    e1e2 = ModuleElement(M2, (np.outer([1, 0], [0, 1]),))
    assert np.allclose(project(e1e2, E1).value, 0)
    assert evaluate(E1, inner(e1e2, e1e2)) == 0


def test_fiber_vector_lift_bookkeeping():
    rng = np.random.default_rng(0)
    xi = random_module_element(M, rng)
    rho = random_state(SHAPE, rng, 1)
    v = project(xi, rho)
    c = np.exp(0.4j)
    # the value against the lift c x is xi_k (c x)
    assert np.allclose(v.relative_to(c * rho.vector), xi.block(1) @ (c * rho.vector))


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_fiber_inner_dual_route(seed):
    rng = np.random.default_rng(seed)
    xi, eta = random_module_element(M, rng), random_module_element(M, rng)
    rho = random_state(SHAPE, rng)
    got = fiber_inner(project(xi, rho), project(eta, rho))
    assert abs(got - evaluate(rho, inner(xi, eta))) <= 1e-12 * max(1, module_norm(xi) * module_norm(eta))
    assert fiber_inner(project(M.zero(), rho), project(xi, rho)) == 0


def test_fiber_inner_rejects_different_states():
    with pytest.raises(ShapeError):
        fiber_inner(project(IDENT, E1), project(IDENT, E2))


def test_fiber_inner_lift_independent():
    rng = np.random.default_rng(1)
    xi = random_module_element(M2, rng)
    rho = random_state(S2, rng)
    other = FiberVector(rho, xi.block(1) @ rho.vector)
    assert fiber_inner(project(xi, rho), other) == pytest.approx(evaluate(rho, inner(xi, xi)))


def test_quotient_oracle():
    rng = np.random.default_rng(2)
    for _ in range(30):
        rho = random_state(SHAPE, rng)
        q = quotient_oracle(M, rho)
        assert q.rank == M.rows[rho.block - 1]
        assert len(q.kernel) == M.dim - q.rank
        for e in q.kernel:
            assert abs(evaluate(rho, inner(e, e))) < 1e-20 + 1e-12
            assert np.linalg.norm(project(e, rho).value) < 1e-10


def test_hermitian_examples():
    rng = np.random.default_rng(3)
    xi, eta = random_module_element(M, rng), random_module_element(M, rng)
    s, t = constant_section(xi), constant_section(eta)
    H = h_function(s, t)
    f = gelfand(inner(xi, eta))
    for _ in range(50):
        rho = random_state(SHAPE, rng)
        assert abs(H(rho) - f(rho)) <= 1e-12
        assert hermitian(s, s, rho).real >= 0
        c = 1.5 - 0.5j
        assert hermitian(s, constant_section(c * xi), rho) == pytest.approx(c * hermitian(s, s, rho))
        assert hermitian(constant_section(c * xi), s, rho) == pytest.approx(np.conj(c) * hermitian(s, s, rho))


def test_section_norm_examples():
    samp = StateSampler(S2, 0)
    assert section_norm(constant_section(M2.zero()), samp, 20) == 0
    assert section_norm(constant_section(IDENT), samp, 20) == pytest.approx(1.0)
    rng = np.random.default_rng(4)
    for _ in range(10):
        xi = random_module_element(M, rng)
        assert abs(section_norm(constant_section(xi), StateSampler(SHAPE, rng), 100) - module_norm(xi)) <= 1e-9
    with pytest.raises(ValueError):
        section_norm(constant_section(IDENT), samp, 0)


def test_section_value_shape_checked():
    bad = generic_section(M2, lambda rho: FiberVector(rho, [1, 2, 3]))
    with pytest.raises(ShapeError):
        bad(E1)


def test_section_algebra():
    rng = np.random.default_rng(5)
    xi, eta = random_module_element(M, rng), random_module_element(M, rng)
    s = constant_section(xi) + 2 * constant_section(eta)
    rho = random_state(SHAPE, rng)
    assert np.allclose(s(rho).value, project(xi + 2 * eta, rho).value)
    l = gelfand(random_element(SHAPE, rng))
    assert np.allclose(constant_section(xi).times(l)(rho).value, l(rho) * project(xi, rho).value)


def test_trivialize_examples():
    h = Chart(1, [1, 0])
    rho = PureState.from_vector(1, [1, 1])
    assert np.allclose(trivialize(constant_section(IDENT), Chart.centered_at(E1), E1), [1, 0])
    assert np.allclose(trivialize(constant_section(IDENT), h, rho), np.array([1, 1]) / np.sqrt(2))


def test_trivialize_constant_section_formula():
    rng = np.random.default_rng(6)
    xi = random_module_element(M, rng)
    rho = random_state(SHAPE, rng, 2)
    h = Chart(2, unit(3, rng))
    z = beta(h, rho)
    w = 1 / (1 + np.vdot(z, z).real)
    assert np.allclose(trivialize(constant_section(xi), h, rho), np.sqrt(w) * xi.block(2) @ (z + h.base))
    assert np.allclose(omega_vector(h, rho), np.sqrt(w) * (z + h.base))


def test_local_pairing():
    rng = np.random.default_rng(7)
    for _ in range(50):
        xi, xi2 = random_module_element(M, rng), random_module_element(M, rng)
        rho = random_state(SHAPE, rng, 1)
        h = Chart(1, unit(2, rng))
        z = beta(h, rho)
        w = 1 / (1 + np.vdot(z, z).real)
        lhs = np.vdot(xi2.block(1) @ h.base, trivialize(constant_section(xi), h, rho))
        rhs = np.sqrt(w) * np.vdot(h.base, inner(xi2, xi).block(1) @ (z + h.base))
        assert abs(lhs - rhs) <= 1e-10


def test_chart_transition_law():
    rng = np.random.default_rng(8)
    for _ in range(50):
        xi = random_module_element(M, rng)
        rho = random_state(SHAPE, rng, 2)
        h1, h2 = Chart(2, unit(3, rng)), Chart(2, unit(3, rng))
        x = np.exp(2j * np.pi * rng.random()) * rho.vector
        s = constant_section(xi)
        twist = transition_phase(h1, x) * np.conj(transition_phase(h2, x))
        assert np.linalg.norm(trivialize(s, h1, rho) - twist * trivialize(s, h2, rho)) <= 1e-10


def test_group_act_examples():
    u1 = SHAPE.unit()
    rng = np.random.default_rng(9)
    rho, xi = random_state(SHAPE, rng), random_module_element(M, rng)
    assert group_act(u1, rho).same_as(rho)
    assert group_act(u1, xi).max_abs_diff(xi) == 0
    sx = S2.element(pauli("x"))
    assert group_act(sx, E1).same_as(E2)
    with pytest.raises(UnitaryError):
        group_act(2 * u1, rho)
    with pytest.raises(TypeError):
        group_act(u1, 3.0)


def test_group_act_on_states():
    rng = np.random.default_rng(10)
    for _ in range(100):
        u = random_unitary(SHAPE, rng)
        rho, A = random_state(SHAPE, rng), random_element(SHAPE, rng)
        assert abs(evaluate(group_act(u, rho), A) - evaluate(rho, u.H @ A @ u)) <= 1e-12 * 10


def test_action_compatibility():
    rng = np.random.default_rng(11)
    for _ in range(50):
        xi, eta = random_module_element(M, rng), random_module_element(M, rng)
        rho = random_state(SHAPE, rng)
        u = random_unitary(SHAPE, rng)
        v, w = project(xi, rho), project(eta, rho)
        tv, tw = group_act(u, (v, w))
        assert abs(fiber_inner(tv, tw) - fiber_inner(v, w)) <= 1e-12 * 10
        # t_u [xi]_rho = [xi u^*]_{chi_u rho}
        moved = project(group_act(u, xi), group_act(u, rho))
        assert np.linalg.norm((tv - moved).value) < 1e-12 * 10


def test_typical_fiber_map():
    rng = np.random.default_rng(12)
    assert np.allclose(typical_fiber_map(IDENT, 1, [1, 0]), [1, 0])
    for _ in range(100):
        xi, eta = random_module_element(M, rng), random_module_element(M, rng)
        u = random_unitary(SHAPE, rng)
        k = int(rng.integers(1, 3))
        z = unit(SHAPE.dim(k), rng)
        moved = typical_fiber_map(group_act(u, xi), k, u.block(k) @ z)
        assert np.max(np.abs(moved - typical_fiber_map(xi, k, z)), initial=0) <= 1e-12 * 10
        assert np.allclose(typical_fiber_map(xi + 2 * eta, k, z), typical_fiber_map(xi, k, z) + 2 * typical_fiber_map(eta, k, z))
    with pytest.raises(ShapeError):
        typical_fiber_map(IDENT, 1, [2, 0])


def test_holomorphy():
    rng = np.random.default_rng(13)
    for _ in range(20):
        xi = random_module_element(M, rng)
        rho = random_state(SHAPE, rng, int(rng.integers(1, 3)))
        assert holomorphy_check(constant_section(xi), rho).passed
    assert holomorphy_check(constant_section(M.zero()), rho).residual == 0


def test_holomorphy_counterexample():
    # trivialized value conj(<v|z>) e in the chart centered at rho0: dbar_v = 1
    rho0 = random_state(S2, 14)
    ch = Chart.centered_at(rho0)
    v = ch.tangent_basis()[:, 0]

    def value(rho):
        z = beta(ch, rho)
        lift = omega_vector(ch, rho)
        f = np.conj(np.vdot(v, z)) * np.array([1.0, 0.0])
        return FiberVector(rho, f * np.vdot(lift, rho.vector))

    s = generic_section(M2, value)
    assert holomorphy_check(s, rho0).residual > 0.1
