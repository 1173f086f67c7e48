import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from serreswan import (
    act,
    adjoint,
    evaluate,
    inner,
    make_algebra,
    make_module,
    module_norm,
    mul,
    random_element,
    random_module_element,
    random_state,
)
from serreswan.errors import ShapeError
from serreswan.hilbert import ModuleElement

S2 = make_algebra([2])
M = make_module(make_algebra([2, 3]), [3, 1])
seeds = st.integers(0, 2**32 - 1)


def test_shape_validation():
    with pytest.raises(ShapeError):
        make_module(S2, [1, 1])
    with pytest.raises(ShapeError):
        make_module(S2, [-1])
    z = make_module(make_algebra([2, 3]), [0, 2])
    assert z.dim == 6 and z.zero().block(1).shape == (0, 2)
    with pytest.raises(ShapeError):
        ModuleElement(make_module(S2, [1]), (np.zeros((2, 2)),))


def test_vector_roundtrip():
    xi = random_module_element(M, 0)
    assert M.from_vector(xi.to_vector()).max_abs_diff(xi) == 0
    assert len(xi.to_vector()) == M.dim == 3 * 2 + 1 * 3


def test_inner_examples():
    m = make_module(S2, [1])
    xi = ModuleElement(m, (np.array([[1, 0]]),))
    assert np.array_equal(inner(xi, xi).block(1), [[1, 0], [0, 0]])
    assert inner(xi, m.zero()).max_abs_diff(S2.zero()) == 0


def test_inner_sesquilinear():
    rng = np.random.default_rng(1)
    xi, eta = random_module_element(M, rng), random_module_element(M, rng)
    c = 2 - 3j
    assert inner(c * xi, eta).max_abs_diff(np.conj(c) * inner(xi, eta)) < 1e-12
    assert inner(xi, c * eta).max_abs_diff(c * inner(xi, eta)) < 1e-12


def test_act_unit_and_associativity():
    rng = np.random.default_rng(2)
    xi = random_module_element(M, rng)
    A, B = random_element(M.algebra, rng), random_element(M.algebra, rng)
    assert act(xi, M.algebra.unit()).max_abs_diff(xi) == 0
    assert act(act(xi, A), B).max_abs_diff(act(xi, A @ B)) < 1e-12
    assert (xi * A).max_abs_diff(act(xi, A)) == 0
    with pytest.raises(ShapeError):
        act(xi, S2.unit())


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_inner_action_and_symmetry(seed):
    rng = np.random.default_rng(seed)
    xi, eta = random_module_element(M, rng), random_module_element(M, rng)
    A = random_element(M.algebra, rng)
    assert inner(eta, act(xi, A)).max_abs_diff(mul(inner(eta, xi), A)) < 1e-12 * 10
    assert adjoint(inner(xi, eta)).max_abs_diff(inner(eta, xi)) <= 1e-14


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_positivity_and_cauchy_schwarz(seed):
    rng = np.random.default_rng(seed)
    xi, eta = random_module_element(M, rng), random_module_element(M, rng)
    assert min(np.linalg.eigvalsh(b)[0] for b in inner(xi, xi).data) >= -1e-10
    rho = random_state(M.algebra, rng)
    lhs = abs(evaluate(rho, inner(xi, eta))) ** 2
    rhs = evaluate(rho, inner(xi, xi)).real * evaluate(rho, inner(eta, eta)).real
    assert lhs <= rhs + 1e-10


def test_module_norm_examples():
    assert module_norm(M.zero()) == 0
    m = make_module(S2, [2])
    assert module_norm(ModuleElement(m, (np.eye(2),))) == pytest.approx(1.0)
    xi = random_module_element(M, 3)
    svd = max(np.linalg.svd(b, compute_uv=False)[0] for b in xi.data)
    assert module_norm(xi) == pytest.approx(svd)
    # |xi| = |<xi|xi>|^{1/2}
    from serreswan import operator_norm

    assert module_norm(xi) == pytest.approx(np.sqrt(operator_norm(inner(xi, xi))))
    assert module_norm(make_module(S2, [0]).zero()) == 0
