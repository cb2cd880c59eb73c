import numpy as np
import pytest

from pairmodel.admiss import graph_subspace, model_pair
from pairmodel.charfn import AnalyticFn, CircleGrid
from pairmodel.errors import FactorizationMismatch, IrregularFactorization, NotInner, UnsupportedTheta
from pairmodel.fundamental import CharTriple, GridUnitaries
from pairmodel.invsub import (divide_inner, extracond_residual, inner_subspace, is_inner,
                              solve_Gprime, verify_extracond_general, verify_joint_invariance)
from pairmodel.matcore import Subspace

from conftest import cauchy_taylor

GRID = CircleGrid(256)
ROT = np.array([[1, 1], [-1, 1]]) / np.sqrt(2)


def ambient(space, sub):
    return space.H_basis.basis @ sub.basis


def test_z_divides_z_squared():
    theta = AnalyticFn.monomial(2)
    sp = graph_subspace(theta, GRID)
    Hp = inner_subspace(AnalyticFn.monomial(1), theta, sp)
    assert Hp.dim == 1
    v = ambient(sp, Hp)[:, 0]
    np.testing.assert_allclose(abs(v[1]), 1.0, atol=1e-14)
    tr = CharTriple(np.zeros((1, 1)), np.ones((1, 1)), theta)
    assert verify_joint_invariance(Hp, model_pair(tr, sp))["ok"]


def test_trivial_divisors():
    theta = AnalyticFn.blaschke([0.0, 0.3])
    sp = graph_subspace(theta, GRID)
    assert inner_subspace(theta, theta, sp).dim == 0
    assert inner_subspace(AnalyticFn.constant([[1j]]), theta, sp).dim == sp.dim


def test_blaschke_divisor_matches_kernel_function():
    a, b = 0.3, -0.4j
    theta = AnalyticFn.blaschke([a, b])
    sp = graph_subspace(theta, GRID)
    Hp = inner_subspace(AnalyticFn.blaschke([a]), theta, sp)
    assert Hp.dim == 1
    # b_a(z) / (1 - conj(b) z) spans b_a K_{b_b}
    f = lambda z: np.array([[(z - a) / (1 - np.conj(a) * z) / (1 - np.conj(b) * z)]])
    c = cauchy_taylor(f, sp.N, r=0.9, n=1024)[:, 0, 0]
    c = c / np.linalg.norm(c)
    v = ambient(sp, Hp)[:, 0]
    assert abs(abs(np.vdot(c, v[:sp.N])) - 1) < 1e-9


def test_inner_subspace_errors():
    sp = graph_subspace(AnalyticFn.monomial(2), GRID)
    with pytest.raises(FactorizationMismatch):
        inner_subspace(AnalyticFn.blaschke([0.5]), AnalyticFn.monomial(2), sp)
    half = AnalyticFn.constant([[0.5]])
    with pytest.raises(NotInner):
        inner_subspace(half, half, graph_subspace(half, CircleGrid(32)))


def test_joint_invariance_rejects_random_subspace(rng):
    theta = AnalyticFn.monomial(3)
    sp = graph_subspace(theta, GRID)
    tr = CharTriple(np.zeros((1, 1)), np.ones((1, 1)), theta)
    v = rng.normal(size=(sp.dim, 1))
    rep = verify_joint_invariance(Subspace(v / np.linalg.norm(v)), model_pair(tr, sp))
    assert not rep["ok"]


def test_divide_inner():
    f = divide_inner(AnalyticFn.blaschke([0.0, 0.3, 0.3], 1j), AnalyticFn.blaschke([0.3]))
    assert sorted(abs(np.array(f.zeros))) == pytest.approx([0.0, 0.3])
    assert f.unimodular == pytest.approx(1j)
    with pytest.raises(FactorizationMismatch):
        divide_inner(AnalyticFn.blaschke([0.3]), AnalyticFn.blaschke([0.5]))
    th = AnalyticFn.diag(AnalyticFn.monomial(2), AnalyticFn.monomial(1))
    q = divide_inner(th, AnalyticFn.diag(AnalyticFn.monomial(1), AnalyticFn.constant([[1.0]])))
    np.testing.assert_allclose(q(0.5), np.diag([0.5, 0.5]), atol=1e-15)
    U = np.array([[0, 1], [1, 0]], dtype=complex)
    q = divide_inner(th, AnalyticFn.constant(U))
    np.testing.assert_allclose(U @ q(0.5), th(0.5), atol=1e-15)
    with pytest.raises(UnsupportedTheta):
        divide_inner(AnalyticFn.from_contraction(0.5 * np.eye(2)), AnalyticFn.monomial(1, 2))


def test_is_inner():
    assert is_inner(AnalyticFn.blaschke([0.2, -0.7j]))
    assert not is_inner(AnalyticFn.constant([[0.5]]))


def test_solve_gprime_scalar():
    X, Y, res = solve_Gprime([[0.0]], [[1.0]], AnalyticFn.monomial(1))
    np.testing.assert_allclose(X, [[0.0]], atol=1e-14)
    np.testing.assert_allclose(Y, [[1.0]], atol=1e-14)
    assert res < 1e-14


def test_solve_gprime_matrix_cases():
    z = AnalyticFn.monomial(1)
    divisor = AnalyticFn.diag(z, AnalyticFn.constant([[1.0]]))
    G1 = np.zeros((2, 2))
    _, _, res = solve_Gprime(G1, np.diag([1.0, 1j]), divisor)
    assert res < 1e-12
    _, _, res = solve_Gprime(G1, ROT, divisor)
    assert res > 0.1
    X, Y, res = solve_Gprime(G1, ROT, AnalyticFn.diag(z, z))
    assert res < 1e-12
    np.testing.assert_allclose(Y, ROT, atol=1e-12)
    assert extracond_residual(G1, ROT, divisor, X, Y) > 0.1


def test_extracond_general_inner_case():
    z = AnalyticFn.monomial(1)
    rep = verify_extracond_general([[0.0]], [[1.0]], None, AnalyticFn.monomial(2), z, z,
                                   [[0.0]], [[1.0]], None, CircleGrid(16))
    assert rep["ok"] and rep["delta"] == 0.0


def test_extracond_general_delta_part_and_twist():
    g = CircleGrid(16)
    theta = AnalyticFn.constant([[0.5]])
    one = AnalyticFn.constant([[1.0]])
    w1 = [np.array([[p]]) for p in g.points]
    w2 = [np.eye(1, dtype=complex) for _ in g.points]
    W = GridUnitaries(g, w1, w2)
    zero = [[0.0]]
    rep = verify_extracond_general(zero, zero, W, theta, one, theta, zero, zero,
                                   GridUnitaries(g, list(w1), list(w2)), g)
    assert rep["ok"]
    twisted = list(w1)
    twisted[5] = -twisted[5]
    rep = verify_extracond_general(zero, zero, W, theta, one, theta, zero, zero,
                                   GridUnitaries(g, twisted, list(w2)), g)
    assert not rep["ok"] and int(np.argmax(rep["per_point"])) == 5


def test_irregular_factorization_raises():
    root = AnalyticFn.constant([[np.sqrt(0.5)]])
    with pytest.raises(IrregularFactorization):
        verify_extracond_general([[0.0]], [[0.0]], None, AnalyticFn.constant([[0.5]]), root, root,
                                 [[0.0]], [[0.0]], None, CircleGrid(8))
