from fractions import Fraction
import itertools
import random

import numpy as np
import pytest

from indefkahler.curvature import (
    SYMMETRY_NAMES,
    CurvatureTensor,
    evaluate,
    holomorphic_sectional,
    is_constant_hsc,
    model_tensor,
    pi1,
    pi2,
    require_valid,
    sectional,
    validate_symmetries,
)
from indefkahler.errors import DegeneratePlane, DimensionMismatch, InvalidTensor, NullVector
from indefkahler.linalg import SignatureClass, Space, Vector, apply_J, inner, sample_pair
from indefkahler.tensor_space import kaehler_basis

import oracles
from conftest import all_signatures, random_rational, random_vector


def test_pi_values_on_basis():
    s = Space.from_signature("+-")
    e0, f0, e1 = s.e(0), s.f(0), s.e(1)
    assert pi1(s, e0, f0, f0, e0) == 1
    assert pi2(s, e0, f0, f0, e0) == 3
    assert pi1(s, e0, e1, e1, e0) == -1
    assert pi2(s, e0, e1, e1, e0) == 0
    x = 2 * e0 + f0
    assert pi2(s, x, apply_J(s, x), apply_J(s, x), x) == 3 * inner(s, x, x) ** 2


@pytest.mark.parametrize("sig", ["+-", "-+", "+-+"])
def test_pi_against_oracle(sig):
    s = Space.from_signature(sig)
    G, J = oracles.metric_matrix(s.eps), oracles.complex_structure(s.m)
    rng = random.Random(1)
    for _ in range(30):
        vs = [random_vector(s, rng) for _ in range(4)]
        raw = [list(v.coords) for v in vs]
        assert pi1(s, *vs) == oracles.pi1(G, *raw)
        assert pi2(s, *vs) == oracles.pi2(G, J, *raw)


@pytest.mark.parametrize("sig", ["+", "-", "+-", "--", "-++"])
def test_model_components_against_oracle(sig):
    s = Space.from_signature(sig)
    mu = Fraction(-7, 3)
    R = model_tensor(s, mu)
    expected = oracles.model_components(s.eps, mu)
    assert all(R.components[idx] == expected[idx] for idx in np.ndindex(expected.shape))


def test_model_component_example():
    s = Space.from_signature("+-")
    R = model_tensor(s, 4)
    assert R[0, 2, 2, 0] == 4  # R(e0, f0, f0, e0)
    assert holomorphic_sectional(R, s.e(0)) == 4
    assert holomorphic_sectional(R, s.e(1)) == 4
    # antiholomorphic (+,-) plane: (mu/4) * pi1 / pi1
    assert sectional(R, s.e(0), s.e(1)) == 1


def test_evaluate_matches_oracle_contraction():
    s = Space.from_signature("+-")
    rng = random.Random(3)
    R = model_tensor(s, Fraction(5, 2))
    comps = oracles.model_components(s.eps, Fraction(5, 2))
    for _ in range(20):
        vs = [random_vector(s, rng) for _ in range(4)]
        assert float(evaluate(R, *vs)) == pytest.approx(oracles.contract(comps, *[v.coords for v in vs]))


def test_evaluate_is_multilinear():
    s = Space.from_signature("-+")
    rng = random.Random(4)
    R = model_tensor(s, 3) + model_tensor(s, 1)
    for _ in range(20):
        x, x2, y, z, u = (random_vector(s, rng) for _ in range(5))
        a, b = random_rational(rng), random_rational(rng)
        assert evaluate(R, a * x + b * x2, y, z, u) == a * evaluate(R, x, y, z, u) + b * evaluate(R, x2, y, z, u)
        assert evaluate(R, x, y, z, u) == -evaluate(R, y, x, z, u)
        assert evaluate(R, x, y, z, u) == evaluate(R, z, u, x, y)


def test_sectional_and_holomorphic_errors():
    s = Space.from_signature("+-")
    R = model_tensor(s, 1)
    null = s.e(0) + s.e(1)
    with pytest.raises(DegeneratePlane):
        sectional(R, null, s.f(0) + s.f(1))
    with pytest.raises(DegeneratePlane):
        sectional(R, s.e(0), 2 * s.e(0))
    with pytest.raises(NullVector):
        holomorphic_sectional(R, null)
    with pytest.raises(DimensionMismatch):
        sectional(R, Vector([1, 0]), Vector([0, 1]))


def test_sectional_is_plane_invariant():
    s = Space.from_signature("+-+")
    rng = random.Random(5)
    R = kaehler_basis(s).combine([random_rational(rng) for _ in range(36)])
    checked = 0
    while checked < 30:
        x, y = random_vector(s, rng), random_vector(s, rng)
        if pi1(s, x, y, y, x) == 0:
            continue
        a, b, c, d = (random_rational(rng) for _ in range(4))
        if a * d - b * c == 0:
            continue
        assert sectional(R, x, y) == sectional(R, a * x + b * y, c * x + d * y)
        checked += 1


def test_pi2_vanishes_on_antiholomorphic_pairs():
    s = Space.from_signature("+--")
    for seed in range(30):
        x, y = sample_pair(s, SignatureClass.POS_NEG, True, seed)
        assert pi2(s, x, y, y, x) == 0


def test_validate_single_entry_tensor_fails():
    s = Space.from_signature("++")
    R = CurvatureTensor.from_entries(s, {(0, 1, 2, 3): 1})
    report = validate_symmetries(R)
    assert not report.passed
    assert set(report.status()) == set(SYMMETRY_NAMES)
    assert not report.status()["antisym12"]
    with pytest.raises(InvalidTensor):
        require_valid(R)
    with pytest.raises(InvalidTensor):
        is_constant_hsc(R)


def test_riemannian_but_not_kaehler_tensor_fails_only_j():
    # pi1 alone satisfies every Riemannian symmetry but is not J-invariant
    s = Space.from_signature("+-")
    n = s.dim
    entries = {}
    basis = s.basis()
    for idx in itertools.product(range(n), repeat=4):
        v = pi1(s, *(basis[k] for k in idx))
        if v:
            entries[idx] = v
    status = validate_symmetries(CurvatureTensor.from_entries(s, entries)).status()
    assert status == {"antisym12": True, "bianchi": True, "antisym34": True, "j_invariance": False, "pair_symmetry": True}


def test_model_tensor_constant_hsc_random_mu():
    rng = random.Random(6)
    for sig in ("+", "+-", "-++"):
        s = Space.from_signature(sig)
        for _ in range(10):
            mu = random_rational(rng)
            R = model_tensor(s, mu)
            assert validate_symmetries(R).passed
            v = is_constant_hsc(R)
            assert v.constant and v.mu == mu


def test_not_constant_has_witness():
    s = Space.from_signature("+-")
    basis = kaehler_basis(s)
    found = 0
    for B in basis.elements:
        verdict = is_constant_hsc(B)
        if verdict.constant:
            continue
        found += 1
        idx, value = verdict.component_witness
        assert value != 0
        b, mu, v, h = verdict.plane_witness
        assert holomorphic_sectional(B, b) == mu and holomorphic_sectional(B, v) == h != mu
    assert found == basis.dimension


def test_model_identity_on_sampled_vectors():
    # R(x,y,z,u) = (mu/4)(pi1 + pi2) holds as a multilinear identity
    s = Space.from_signature("-+-")
    rng = random.Random(7)
    mu = Fraction(-9, 5)
    R = model_tensor(s, mu)
    for _ in range(200):
        vs = [random_vector(s, rng) for _ in range(4)]
        assert evaluate(R, *vs) == mu / 4 * (pi1(s, *vs) + pi2(s, *vs))


def test_tensor_arithmetic_and_immutability():
    s = Space.from_signature("+")
    A, B = model_tensor(s, 2), model_tensor(s, 3)
    assert A + B == model_tensor(s, 5)
    assert A - A == CurvatureTensor.zero(s)
    assert (A * Fraction(3, 2)) == model_tensor(s, 3)
    assert -A == model_tensor(s, -2)
    with pytest.raises(ValueError):
        A.components[0, 0, 0, 0] = 1
    with pytest.raises(TypeError):
        CurvatureTensor.from_entries(s, {(0, 1, 1, 0): 0.5})
