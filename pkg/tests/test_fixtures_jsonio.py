import json

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from pairmodel.ando import CommutingPair
from pairmodel.charfn import AnalyticFn, CircleGrid, probe_points
from pairmodel.errors import ConstraintViolation, DimensionMismatch, UnsupportedTheta
from pairmodel.fixtures import PairFixture, gen_commuting_pair, offdiag_pair, truncated_hardy_pair
from pairmodel.fundamental import CharTriple, GridUnitaries, char_triple
from pairmodel.jsonio import (matrix_from_json, matrix_to_json, pair_from_json, pair_to_json,
                              theta_from_json, theta_to_json, triple_from_json, triple_to_json)

from conftest import seeds

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def roundtrip(obj):
    return json.loads(json.dumps(obj))


@given(arrays(np.float64, st.tuples(st.integers(1, 4), st.integers(1, 4)), elements=finite),
       arrays(np.float64, st.tuples(st.integers(1, 4), st.integers(1, 4)), elements=finite))
def test_matrix_roundtrip_is_bit_exact(re, im):
    if re.shape != im.shape:
        im = np.resize(im, re.shape)
    A = re + 1j * im
    B = matrix_from_json(roundtrip(matrix_to_json(A)))
    assert B.shape == A.shape
    assert np.array_equal(B.real.view(np.int64), A.real.view(np.int64))
    assert np.array_equal(B.imag.view(np.int64), A.imag.view(np.int64))


def test_matrix_json_validates_size():
    with pytest.raises(DimensionMismatch):
        matrix_from_json({"rows": 2, "cols": 2, "re": [1.0]})


@given(seeds, st.integers(1, 6))
def test_random_polynomial_pairs_commute(seed, dim):
    fx = gen_commuting_pair(seed, dim)
    assert fx.commutator <= 1e-14
    assert np.linalg.norm(fx.T1, 2) < 1 and np.linalg.norm(fx.T2, 2) < 1
    again = gen_commuting_pair(seed, dim)
    assert np.array_equal(fx.T1, again.T1)
    back = pair_from_json(roundtrip(pair_to_json(fx)))
    assert np.array_equal(back.T1, fx.T1) and np.array_equal(back.T2, fx.T2)


def test_offdiag_pair_constraint():
    fx = offdiag_pair(0.5, 0.3, 0.5, 0.3)
    assert fx.provenance == "paper_example" and fx.commutator < 1e-15
    with pytest.raises(ConstraintViolation):
        offdiag_pair(0.5, 0.3, 0.3, 0.5)
    with pytest.raises(ConstraintViolation):
        offdiag_pair(1.0, 0.5, 0.5, 0.25)


def test_truncated_hardy_pair():
    fx = truncated_hardy_pair(4)
    assert fx.T1.shape == (8, 8) and fx.commutator == 0.0
    assert gen_commuting_pair(0, 4, "truncated_hardy").name == fx.name


def test_generator_argument_errors():
    with pytest.raises(DimensionMismatch):
        gen_commuting_pair(0, 3, "paper_example")
    with pytest.raises(DimensionMismatch):
        gen_commuting_pair(0, 0)
    with pytest.raises(ValueError):
        gen_commuting_pair(0, 2, "nonsense")
    with pytest.raises(ValueError):
        PairFixture("x", [[0]], [[0]], "unknown")


@pytest.mark.parametrize("theta", [
    AnalyticFn.monomial(2, 2),
    AnalyticFn.blaschke([0.3, -0.2j], 1j),
    AnalyticFn.constant([[0.5, 0.1]]),
    AnalyticFn.polynomial([[[0.1]], [[0.2]], [[0.3]]]),
    AnalyticFn.from_contraction(np.array([[0.2, 0.5], [0.0, 0.3]])),
    AnalyticFn.diag(AnalyticFn.monomial(1), AnalyticFn.blaschke([0.5])),
    AnalyticFn.monomial(1) @ AnalyticFn.blaschke([0.4]),
])
def test_theta_roundtrip(theta):
    back = theta_from_json(roundtrip(theta_to_json(theta)))
    for z in probe_points(CircleGrid(16)):
        np.testing.assert_allclose(back(z), theta(z), atol=1e-15)


def test_unknown_theta_kind():
    with pytest.raises(UnsupportedTheta):
        theta_from_json({"kind": "bessel"})


def test_triple_roundtrip_with_and_without_w():
    fx = offdiag_pair()
    tr = char_triple(CommutingPair(fx.T1, fx.T2), CircleGrid(16))
    back = triple_from_json(roundtrip(triple_to_json(tr)))
    assert np.array_equal(back.G1, tr.G1) and back.W is None
    g = CircleGrid(4)
    W = GridUnitaries(g, [np.array([[p]]) for p in g.points], [np.eye(1)] * 4)
    tw = CharTriple([[0.0]], [[0.0]], AnalyticFn.constant([[0.5]]), W)
    back = triple_from_json(roundtrip(triple_to_json(tw)))
    assert back.W.grid.M == 4
    np.testing.assert_array_equal(back.W.w1[1], W.w1[1])
