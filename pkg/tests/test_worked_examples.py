"""Small worked cases with hand-computed answers, one per operation."""
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pairmodel.admiss import (check_admissible, coincidence_search, coincidence_verify,
                              graph_subspace, model_pair, word_moments)
from pairmodel.ando import (CommutingPair, build_ando_tuple, build_ando_tuple_adjoint,
                            lambda_map, regularity, u0_map)
from pairmodel.charfn import (AnalyticFn, CircleGrid, delta_eval, is_regular_factorization,
                              purely_contractive_split, theta_eval, z_operator)
from pairmodel.contraction import cnu_split, defect, strong_limit_Q
from pairmodel.fixtures import offdiag_pair
from pairmodel.fundamental import CharTriple, char_triple, solve_fundamental
from pairmodel.invsub import inner_subspace, solve_Gprime
from pairmodel.lift import bcl_pair, douglas_ando_lift, schaffer_ando_lift, verify_lift
from pairmodel.matcore import Subspace, complete_to_unitary, range_basis

from conftest import random_contraction, random_matrix

GRID = CircleGrid(256)


@pytest.fixture(scope="module")
def quarter_pair():
    fx = offdiag_pair(0.5, 0.5, 0.5, 0.5)
    return CommutingPair(fx.T1, fx.T2)


# matcore

def test_complete_to_unitary_swaps_the_complements():
    e = np.eye(2)
    U = complete_to_unitary(Subspace(e[:, [1]]), Subspace(e[:, [0]]), [[1.0]])
    assert np.allclose(U, [[0, 1], [1, 0]], atol=1e-14)


def test_complete_to_unitary_three_dims_fixes_the_common_complement():
    e = np.eye(3)
    U = complete_to_unitary(Subspace(e[:, [0]]), Subspace(e[:, [1]]), [[1.0]])
    assert np.allclose(U @ e[:, 0], e[:, 1])
    assert np.allclose(U.conj().T @ U, np.eye(3), atol=1e-14)
    # the complements span{e2, e3} and span{e1, e3} share e3, which is kept fixed
    assert np.allclose(U @ e[:, 2], e[:, 2])


@settings(max_examples=20)
@given(st.integers(0, 2**31 - 1))
def test_range_basis_is_idempotent(seed):
    A = random_matrix(np.random.default_rng(seed), 5, 3) @ random_matrix(np.random.default_rng(seed + 1), 3, 5)
    S = range_basis(A)
    again = range_basis(S.projection)
    assert again.dim == S.dim == 3
    assert np.allclose(again.projection, S.projection, atol=1e-10)


# contraction

@settings(max_examples=20)
@given(st.integers(0, 2**31 - 1))
def test_defect_intertwines_and_Q_is_invariant(seed):
    T = random_contraction(np.random.default_rng(seed), 4, norm=0.95)
    Dt, Ds = defect(T).D, defect(T.conj().T).D
    assert np.allclose(Ds @ T, T @ Dt, atol=1e-10)
    Q = strong_limit_Q(T.conj().T)
    assert np.allclose(T @ Q @ Q @ T.conj().T, Q @ Q, atol=1e-9)


def test_cnu_split_of_unimodular_plus_half():
    s = cnu_split(np.diag([np.exp(0.7j), 0.5]))
    assert s.unitary_part.dim == 1 and s.cnu_part.dim == 1
    assert np.allclose(s.unitary_part.projection, np.diag([1, 0]), atol=1e-10)


# ando

def test_zero_pair_tuple():
    Z = CommutingPair(np.zeros((1, 1)), np.zeros((1, 1)))
    assert np.allclose(lambda_map(Z), [[0], [1]])
    dom, ran, U0 = u0_map(Z)
    assert np.allclose(dom.projection, np.diag([0, 1]))
    assert np.allclose(ran.projection, np.diag([1, 0]))
    t = build_ando_tuple(Z)
    assert np.allclose(t.Lambda, [[0], [1]])
    assert np.allclose(t.P, np.diag([1, 0]))
    assert np.allclose(t.U, [[0, 1], [1, 0]])
    rep = regularity(Z)
    assert not rep.regular_12 and not rep.regular_21


def test_unitary_first_factor_gives_identity_lambda():
    pair = CommutingPair(np.diag([1j, 1.0]), 0.5 * np.eye(2))
    assert np.allclose(build_ando_tuple(pair).Lambda, np.eye(2), atol=1e-12)


def test_self_adjoint_pair_has_equal_adjoint_tuple():
    pair = CommutingPair(np.diag([0.5, 0.2]), np.diag([0.3, 0.4]))
    a, b = build_ando_tuple(pair), build_ando_tuple_adjoint(pair)
    for X, Y in ((a.Lambda, b.Lambda), (a.P, b.P), (a.U, b.U)):
        assert np.allclose(X, Y, atol=1e-12)


# charfn

def test_quarter_pair_characteristic_function(quarter_pair):
    assert np.allclose(quarter_pair.product, 0.25 * np.eye(2))
    for z in (0.0, 0.3, 0.5j, -0.8 + 0.1j, np.exp(2.0j)):
        want = (z - 0.25) / (1 - z / 4) * np.eye(2)
        assert np.allclose(theta_eval(quarter_pair.product, z), want, atol=1e-13)


def test_zero_operator_has_theta_z():
    for z in (0.2, -0.6j, np.exp(1.0j)):
        assert np.allclose(theta_eval(np.zeros((1, 1)), z), [[z]])


def test_delta_of_half():
    assert np.allclose(delta_eval(0.5 * np.eye(2)), np.sqrt(3) / 2 * np.eye(2))


def test_z_operator_onto_examples():
    zero, one = np.zeros((1, 1)), np.ones((1, 1))
    assert z_operator(zero, zero, one).onto
    assert not z_operator(zero, zero, zero).onto


def test_half_times_one_is_regular():
    half, one = AnalyticFn.constant([[0.5]]), AnalyticFn.constant([[1.0]])
    assert is_regular_factorization(half, half, one, CircleGrid(16))[0]


def test_split_of_one_plus_z():
    s = purely_contractive_split(AnalyticFn.diag(AnalyticFn.constant([[1.0]]), AnalyticFn.monomial(1)))
    assert s.dim_unitary == 1
    assert np.allclose(s.unitary_part, [[1.0]])
    for z in (0.3, -0.5j):
        assert np.allclose(s.pure_part(z), [[z]])


# fundamental

def test_quarter_pair_fundamental_operators(quarter_pair):
    G1, G2, res = solve_fundamental(quarter_pair)
    want = np.array([[0, 0.4], [0.4, 0]])
    assert res < 1e-12
    assert np.allclose(G1, want, atol=1e-10) and np.allclose(G2, want, atol=1e-10)


def test_unimodular_times_contraction_satisfies_fundamental_equations(rng):
    w = np.exp(0.9j)
    T = random_contraction(rng, 3, norm=0.7)
    pair = CommutingPair(w * np.eye(3), np.conj(w) * T)
    G1, G2, res = solve_fundamental(pair)
    Ds = pair.d_star.D
    lhs1 = pair.T1.conj().T - pair.T2 @ pair.product.conj().T
    lhs2 = pair.T2.conj().T - pair.T1 @ pair.product.conj().T
    B = pair.d_star.space.basis
    assert res < 1e-10
    assert np.allclose(Ds @ B @ G1 @ B.conj().T @ Ds, lhs1, atol=1e-9)
    assert np.allclose(Ds @ B @ G2 @ B.conj().T @ Ds, lhs2, atol=1e-9)


@settings(max_examples=10)
@given(st.integers(300, 10**6))
def test_fundamental_swap_and_norm(seed):
    from pairmodel.fixtures import gen_commuting_pair
    fx = gen_commuting_pair(seed=seed, dim=3, scale=0.8)
    pair = CommutingPair(fx.T1, fx.T2)
    G1, G2, _ = solve_fundamental(pair)
    H1, H2, _ = solve_fundamental(pair.swapped())
    assert np.allclose(G1, H2, atol=1e-9) and np.allclose(G2, H1, atol=1e-9)
    assert np.linalg.norm(G1, 2) <= 1 + 1e-9 and np.linalg.norm(G2, 2) <= 1 + 1e-9


# lift

def test_bcl_extreme_projections():
    U = np.array([[0, 1], [1, 0]], complex)
    I2, S = np.eye(2), np.diag(np.ones(3), -1)
    B1, B2 = bcl_pair(2, np.zeros((2, 2)), U, 4)
    assert np.allclose(B1, np.kron(np.eye(4), U)) and np.allclose(B2, np.kron(S, U.conj().T))
    B1, B2 = bcl_pair(2, I2, U, 4)
    assert np.allclose(B1, np.kron(S, U)) and np.allclose(B2, np.kron(np.eye(4), U.conj().T))


def test_quarter_pair_lifts(quarter_pair):
    r = verify_lift(schaffer_ando_lift(quarter_pair, N=16), quarter_pair, depth=8)
    assert r.max_dilation <= 1e-10
    r = verify_lift(douglas_ando_lift(quarter_pair, N=24), quarter_pair, depth=4)
    assert max(r.intertwining_interior.values()) <= 1e-10
    assert r.pi_isometry_defect <= 4.0 ** -20


def test_non_unitary_U_is_flagged(quarter_pair):
    t = build_ando_tuple(quarter_pair)
    bad = replace(t, U=t.U + 0.2 * np.eye(t.F_dim))
    r = verify_lift(schaffer_ando_lift(quarter_pair, tup=bad, N=8), quarter_pair, depth=3)
    assert r.isometry_defect_interior > 1e-3


# admiss

def test_zero_pair_with_theta_z_has_zero_model():
    tr = CharTriple(np.zeros((1, 1)), np.zeros((1, 1)), AnalyticFn.monomial(1))
    space = graph_subspace(tr.theta, GRID)
    T1m, T2m, Tm = model_pair(tr, space)
    assert space.dim == 1
    assert np.allclose(T1m, 0) and np.allclose(T2m, 0) and np.allclose(Tm, 0)


@pytest.mark.parametrize("N", [1, 2, 3, 5])
def test_zero_and_unimodular_pair_is_admissible(N):
    tr = CharTriple(np.zeros((1, 1)), np.array([[np.exp(0.4j)]]), AnalyticFn.monomial(N))
    assert check_admissible(tr, graph_subspace(tr.theta, GRID)).verdict


def test_quarter_pair_model_moments(quarter_pair):
    tr = char_triple(quarter_pair, GRID)
    T1m, T2m, _ = model_pair(tr, graph_subspace(tr.theta, GRID))
    a, b = word_moments(quarter_pair.T1, quarter_pair.T2), word_moments(T1m, T2m)
    assert max(abs(a[w] - b[w]) for w in a) < 1e-6


def test_unimodular_block_does_not_change_the_model():
    G1, G2 = np.diag([0.3, 0.0]), np.diag([0.2, 1.0])
    full = CharTriple(G1.astype(complex), G2.astype(complex),
                      AnalyticFn.diag(AnalyticFn.constant([[np.exp(0.5j)]]), AnalyticFn.monomial(2)))
    pure = CharTriple(G1[1:, 1:].astype(complex), G2[1:, 1:].astype(complex), AnalyticFn.monomial(2))
    A = model_pair(full, graph_subspace(full.theta, GRID))[:2]
    B = model_pair(pure, graph_subspace(pure.theta, GRID))[:2]
    a, b = word_moments(*A), word_moments(*B)
    assert max(abs(a[w] - b[w]) for w in a) < 1e-6


def test_triple_coincides_with_itself(quarter_pair):
    tr = char_triple(quarter_pair, GRID)
    assert coincidence_verify(tr, tr, np.eye(2), np.eye(2), GRID)[0]


def test_conjugated_quarter_pair_coincides(quarter_pair, rng):
    from conftest import random_unitary
    V = random_unitary(rng, 2)
    other = CommutingPair(V @ quarter_pair.T1 @ V.conj().T, V @ quarter_pair.T2 @ V.conj().T)
    A, B = char_triple(quarter_pair, GRID), char_triple(other, GRID)
    found = coincidence_search(A, B, GRID)
    assert found is not None
    assert coincidence_verify(A, B, *found, GRID)[0]


# invsub

def test_restricted_pair_triple_matches_quotient_data():
    theta = AnalyticFn.blaschke([0.0, 0.3])
    tr = CharTriple(np.zeros((1, 1), complex), np.ones((1, 1), complex), theta)
    space = graph_subspace(theta, GRID)
    T1m, T2m, _ = model_pair(tr, space)
    div = AnalyticFn.monomial(1)
    Hp = inner_subspace(div, theta, space).basis
    G1p, G2p, res = solve_Gprime(tr.G1, tr.G2, div)
    assert res < 1e-9
    restricted = CommutingPair(Hp.conj().T @ T1m @ Hp, Hp.conj().T @ T2m @ Hp)
    got = char_triple(restricted, GRID)
    want = CharTriple(G1p, G2p, AnalyticFn.blaschke([0.3]))
    found = coincidence_search(got, want, GRID)
    assert found is not None and coincidence_verify(got, want, *found, GRID)[0]


def test_full_divisor_and_unit_divisor():
    theta = AnalyticFn.blaschke([0.0, 0.3])
    space = graph_subspace(theta, GRID)
    assert inner_subspace(AnalyticFn.constant([[1.0]]), theta, space).dim == space.dim
    G1, G2 = np.array([[0.2]]), np.array([[0.5]])
    G1p, G2p, res = solve_Gprime(G1, G2, AnalyticFn.constant([[1.0]]))
    assert res < 1e-10 and np.allclose(G1p, G1) and np.allclose(G2p, G2)


def test_random_G_against_mixed_divisor_is_incompatible(rng):
    b = AnalyticFn.blaschke([0.4])
    div = AnalyticFn.diag(b, AnalyticFn.constant([[1.0]]))
    G1, G2 = random_matrix(rng, 2, 2), random_matrix(rng, 2, 2)
    assert solve_Gprime(G1, G2, div)[2] > 1e-3
    # a scalar divisor commutes with everything, so the same data are compatible there
    assert solve_Gprime(G1, G2, AnalyticFn.diag(b, b))[2] < 1e-9
