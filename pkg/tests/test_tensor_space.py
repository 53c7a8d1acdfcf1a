from fractions import Fraction
import random

import pytest

from indefkahler.curvature import CurvatureTensor, model_tensor, validate_symmetries
from indefkahler.linalg import Space
from indefkahler.tensor_space import (
    Echelon,
    check_basis,
    coordinates,
    float_rank_oracle,
    kaehler_basis,
    kaehler_basis_reordered,
    model_coordinates,
    nullspace,
    rank,
    span_contains,
)

import oracles
from conftest import all_signatures, random_rational

# Frozen after agreement between the exact solver (two elimination orders)
# and the float SVD reference in oracles.py.
KAEHLER_DIMENSIONS = {1: 1, 2: 9, 3: 36}


def _times(M, v):
    return [sum(Fraction(a) * b for a, b in zip(row, v)) for row in M]


def test_nullspace_small_examples():
    assert nullspace([[1, 0], [0, 1]]) == []
    assert len(nullspace([[0, 0, 0]] * 3)) == 3
    (v,) = nullspace([[1, 1], [2, 2]])
    assert v == [-1, 1] or v == [1, -1]
    assert rank([[1, 2, 3], [2, 4, 6], [1, 0, 1]]) == 2


def test_nullspace_random_rational_matrices():
    rng = random.Random(0)
    for _ in range(40):
        rows, cols = rng.randint(1, 6), rng.randint(1, 7)
        M = [[random_rational(rng, -3, 3, 3) for _ in range(cols)] for _ in range(rows)]
        if rng.random() < 0.5 and rows > 1:
            M[-1] = [a + 2 * b for a, b in zip(M[0], M[1 % rows])]
        null = nullspace(M)
        assert len(null) + rank(M) == cols
        for v in null:
            assert all(x == 0 for x in _times(M, v))


def test_echelon_add_reports_independence():
    ech = Echelon(3)
    assert ech.add([1, 2, 0])
    assert not ech.add([2, 4, 0])
    assert ech.add({2: 5})
    assert ech.rank == 2 and ech.free_columns() == [1]


@pytest.mark.parametrize("m", [1, 2, 3])
def test_kaehler_dimension_agrees_with_independent_references(m):
    s = Space.from_signature("+" * m)
    assert kaehler_basis(s).dimension == KAEHLER_DIMENSIONS[m]
    assert kaehler_basis_reordered(s).dimension == KAEHLER_DIMENSIONS[m]
    assert s.dim**4 - float_rank_oracle(s) == KAEHLER_DIMENSIONS[m]


@pytest.mark.parametrize("m", [1, 2])
def test_kaehler_dimension_against_svd_oracle(m):
    assert oracles.kaehler_dimension_float(m) == KAEHLER_DIMENSIONS[m]


@pytest.mark.slow
def test_kaehler_dimension_against_svd_oracle_m3():
    assert oracles.kaehler_dimension_float(3) == KAEHLER_DIMENSIONS[3]


@pytest.mark.parametrize("sig", all_signatures(2))
def test_dimension_is_signature_independent(sig):
    assert kaehler_basis(Space.from_signature(sig)).dimension == KAEHLER_DIMENSIONS[2]


@pytest.mark.parametrize("sig", ["+-", "+-+"])
def test_basis_elements_are_valid_and_independent(sig):
    basis = kaehler_basis(Space.from_signature(sig))
    assert check_basis(basis)
    for B in basis.elements:
        assert validate_symmetries(B).passed


def test_two_orders_span_the_same_space():
    s = Space.from_signature("-+")
    a, b = kaehler_basis(s), kaehler_basis_reordered(s)
    assert span_contains(a, b.elements)
    assert span_contains(b, a.elements)


def test_coordinates_round_trip():
    s = Space.from_signature("+-")
    basis = kaehler_basis(s)
    rng = random.Random(2)
    for _ in range(10):
        c = [random_rational(rng) for _ in range(basis.dimension)]
        assert coordinates(basis, basis.combine(c)) == c


def test_coordinates_outside_span():
    s = Space.from_signature("++")
    R = CurvatureTensor.from_entries(s, {(0, 1, 2, 3): 1})
    assert coordinates(kaehler_basis(s), R) is None


def test_model_lies_in_span():
    s = Space.from_signature("+--")
    basis = kaehler_basis(s)
    c = model_coordinates(basis)
    assert basis.combine(c) == model_tensor(s, 4)
    assert span_contains(basis, [model_tensor(s, Fraction(-1, 3))])
