import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from serreswan import Chart, PureState, StateSampler, beta, beta_inv, evaluate, make_algebra, pauli, random_element
from serreswan.algebra import adjoint, mul, operator_norm
from serreswan.errors import ChartError, EvaluationError, ShapeError
from serreswan.gelfand import gelfand, local_derivative
from serreswan.states import (
    base_point,
    basis_state,
    canonical_phase,
    kahler_form,
    kahler_metric,
    omega_vector,
    random_state,
    transition_phase,
    weight,
    wirtinger,
    wirtinger_derivative,
)

S2 = make_algebra([2])
e1, e2, e3 = np.eye(3, dtype=complex)
seeds = st.integers(0, 2**32 - 1)


def tangent(ch, rng):
    return ch.project_tangent(rng.normal(size=ch.dim) + 1j * rng.normal(size=ch.dim))


def unit(n, rng):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def test_evaluate_examples():
    sz, sx = S2.element(pauli("z")), S2.element(pauli("x"))
    assert evaluate(basis_state(1, 2, 0), sz) == 1
    assert evaluate(basis_state(1, 2, 0), sx) == 0
    plus = PureState.from_vector(1, [1, 1])
    assert evaluate(plus, sx) == pytest.approx(1.0, abs=1e-15)


def test_evaluate_shape_mismatch():
    s = make_algebra([2, 3])
    wrong = PureState.from_vector(1, [1, 0, 0])
    with pytest.raises(ShapeError):
        evaluate(wrong, s.unit())


def test_evaluate_real_for_hermitian():
    s = make_algebra([2, 3])
    rng = np.random.default_rng(0)
    A = random_element(s, rng)
    H = A + adjoint(A)
    for _ in range(20):
        assert abs(evaluate(random_state(s, rng), H).imag) < 1e-14


def test_base_point():
    s = make_algebra([2, 3])
    assert base_point(random_state(s, 0, 1)) == 1
    assert base_point(random_state(s, 0, 2)) == 2
    assert all(base_point(random_state(S2, i)) == 1 for i in range(5))


def test_pure_state_validation():
    with pytest.raises(ShapeError):
        PureState(1, [1.0, 1.0])
    with pytest.raises(ShapeError):
        PureState.from_vector(1, [0, 0])


def test_canonical_phase():
    x = np.array([0.6j, -0.8])
    c = canonical_phase(x)
    assert c[1] == pytest.approx(0.8) and np.isclose(abs(c[0]), 0.6)
    # ties go to the first index
    t = canonical_phase(np.array([1j, 1j]) / np.sqrt(2))
    assert t[0].real > 0 and t[0].imag == 0


def test_same_as_ignores_phase():
    rng = np.random.default_rng(1)
    v = unit(3, rng)
    a, b = PureState(1, v), PureState(1, np.exp(0.7j) * v)
    assert a.same_as(b)
    assert np.allclose(a.vector, b.vector, atol=1e-15)
    assert not a.same_as(PureState(2, v))


def test_beta_examples():
    h = Chart(1, e1[:2])
    assert np.allclose(beta(h, PureState(1, e1[:2])), 0)
    assert np.allclose(beta(h, PureState.from_vector(1, [1, 1])), [0, 1])
    with pytest.raises(ChartError):
        beta(h, PureState(1, e2[:2]))


def test_beta_phase_independent():
    rng = np.random.default_rng(2)
    h = Chart(1, unit(3, rng))
    x = unit(3, rng)
    assert np.allclose(beta(h, PureState(1, x)), beta(h, PureState(1, 1j * x)), atol=1e-14)


def test_beta_inv_examples():
    h = Chart(1, e1[:2])
    assert beta_inv(h, [0, 0]).same_as(PureState(1, e1[:2]))
    assert beta_inv(h, [0, 1]).same_as(PureState.from_vector(1, [1, 1]))
    with pytest.raises(ChartError):
        beta_inv(h, [1, 0])


def test_omega_vector_examples():
    h = Chart(1, e1[:2])
    assert np.allclose(omega_vector(h, PureState(1, e1[:2])), e1[:2])
    r = np.array([1, 1]) / np.sqrt(2)
    assert np.allclose(omega_vector(h, PureState(1, r)), r)
    assert np.allclose(omega_vector(h, PureState(1, -r)), r)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_chart_roundtrip(seed):
    rng = np.random.default_rng(seed)
    h = Chart(1, unit(3, rng))
    z = tangent(h, rng)
    assert np.linalg.norm(beta(h, beta_inv(h, z)) - z) <= 1e-10 * max(1, np.linalg.norm(z))


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_chart_compatibility(seed):
    rng = np.random.default_rng(seed)
    h1, h2 = Chart(1, unit(3, rng)), Chart(1, unit(3, rng))
    rho = PureState(1, unit(3, rng))
    a, b = beta_inv(h1, beta(h1, rho)), beta_inv(h2, beta(h2, rho))
    assert a.same_as(b) and a.same_as(rho)


@settings(max_examples=50, deadline=None)
@given(seeds, st.floats(0, 2 * np.pi))
def test_phase_invariance(seed, t):
    s = make_algebra([2, 3])
    rng = np.random.default_rng(seed)
    rho, A = random_state(s, rng), random_element(s, rng)
    moved = PureState(rho.block, np.exp(1j * t) * rho.vector)
    assert abs(evaluate(moved, A) - evaluate(rho, A)) <= 1e-12 * max(1, operator_norm(A))


def test_kahler_metric_examples():
    h = Chart(1, e1)
    assert kahler_metric(h, 0 * e1, e2, e2) == pytest.approx(1.0)
    # w = 1/2, so 1/2 - 1/4
    assert kahler_metric(h, e2, e2, e2) == pytest.approx(0.25)
    with pytest.raises(ChartError):
        kahler_metric(h, e2, e1, e2)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_metric_positive_and_identity_at_center(seed):
    rng = np.random.default_rng(seed)
    h = Chart(1, unit(4, rng))
    z, u, v = tangent(h, rng), tangent(h, rng), tangent(h, rng)
    assert kahler_metric(h, z, u, u).real > 0
    assert abs(kahler_metric(h, z, u, u).imag) < 1e-12 * np.vdot(u, u).real
    assert kahler_metric(h, 0 * z, u, v) == pytest.approx(np.vdot(v, u), abs=1e-12)
    assert abs(kahler_form(h, z, u, v) + 1j * kahler_metric(h, z, u, v)) < 1e-14 * (1 + abs(kahler_metric(h, z, u, v)))


def test_metric_lower_bound():
    # eigenvalues of w(I - w z z^*) on H_h are w and w^2, so g >= w^2 |u|^2
    rng = np.random.default_rng(3)
    h = Chart(1, unit(3, rng))
    for _ in range(50):
        z, u = tangent(h, rng), tangent(h, rng)
        assert kahler_metric(h, z, u, u).real >= weight(z) ** 2 * np.vdot(u, u).real * (1 - 1e-12)


def test_transition_phase():
    rng = np.random.default_rng(4)
    h = Chart(1, unit(3, rng))
    assert transition_phase(h, h.base) == pytest.approx(1.0)
    assert transition_phase(h, 1j * h.base) == pytest.approx(-1j)
    z, c = unit(3, rng), np.exp(0.3j)
    assert abs(transition_phase(h, z)) == pytest.approx(1.0, abs=1e-15)
    assert transition_phase(h, c * z) == pytest.approx(np.conj(c) * transition_phase(h, z))
    with pytest.raises(ChartError):
        transition_phase(Chart(1, e1), e2)


def test_sup_bound_attained():
    s = make_algebra([2, 3])
    rng = np.random.default_rng(5)
    A = random_element(s, rng)
    AA = mul(adjoint(A), A)
    n2 = operator_norm(A) ** 2
    sampler = StateSampler(s, rng)
    assert max(evaluate(sampler(), AA).real for _ in range(10_000)) <= n2 + 1e-12
    k = 1 + int(np.argmax([np.linalg.eigvalsh(b)[-1] for b in AA.data]))
    top = PureState.from_vector(k, np.linalg.eigh(AA.block(k))[1][:, -1])
    assert evaluate(top, AA).real == pytest.approx(n2, abs=1e-9)


def test_wirtinger_constant_is_zero():
    h = Chart(1, e1)
    assert wirtinger_derivative(lambda r: 3.0, h, 0 * e1, e2) == 0


def test_wirtinger_matches_analytic():
    s = make_algebra([3])
    rng = np.random.default_rng(6)
    for _ in range(10):
        h = Chart(1, unit(3, rng))
        A = random_element(s, rng)
        z, Y = 0.5 * tangent(h, rng), tangent(h, rng)
        f = gelfand(A)
        fd = wirtinger_derivative(f, h, z, Y, "holomorphic")
        assert abs(fd - local_derivative(f, h, z, Y, "analytic")) <= 1e-6


def test_wirtinger_holomorphic_polynomial():
    rng = np.random.default_rng(7)
    a, Y, z = (rng.normal(size=3) + 1j * rng.normal(size=3) for _ in range(3))
    p = lambda q: (a @ q) ** 3 + 2 * (a @ q)  # noqa: E731
    assert abs(wirtinger(p, z, Y, "antiholomorphic")) < 1e-6
    exact = (3 * (a @ z) ** 2 + 2) * (a @ Y)
    assert abs(wirtinger(p, z, Y, "holomorphic") - exact) < 1e-6 * abs(exact)
    with pytest.raises(ValueError):
        wirtinger(p, z, Y, "sideways")


def test_wirtinger_stencil_failure():
    h = Chart(1, e1[:2])
    # (z + h) leaves the chart at z = -h is impossible on H_h, so fail in fn directly
    def bad(rho):
        raise ChartError("boom")
    with pytest.raises(EvaluationError):
        wirtinger_derivative(bad, h, np.zeros(2), e2[:2])


def test_sampler_deterministic():
    s = make_algebra([2, 3])
    a, b = StateSampler(s, 9).sample(5), StateSampler(s, 9).sample(5)
    assert all(x.same_as(y, 0) for x, y in zip(a, b))
    assert {r.block for r in StateSampler(s, 9, block=2).sample(10)} == {2}


def test_tangent_basis_orthonormal():
    rng = np.random.default_rng(10)
    h = Chart(1, unit(4, rng))
    V = h.tangent_basis()
    assert V.shape == (4, 3)
    assert np.allclose(V.conj().T @ V, np.eye(3), atol=1e-12)
    assert np.allclose(h.base.conj() @ V, 0, atol=1e-12)
    assert Chart(1, [1.0]).tangent_basis().shape == (1, 0)
