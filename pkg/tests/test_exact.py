import math
import random
from fractions import Fraction

import numpy as np
import pytest

from meetpd.exact import char_poly, quadratic_form, symmetric_elimination


def random_symmetric(rng, n, lo=-6, hi=6):
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = Fraction(rng.randint(lo, hi))
            rows[i][j] = rows[j][i] = v
    return rows


def numpy_inertia(rows, tol=1e-8):
    eigs = np.linalg.eigvalsh(np.array([[float(v) for v in r] for r in rows]))
    scale = max(1.0, float(np.max(np.abs(eigs))))
    pos = int(np.sum(eigs > tol * scale))
    neg = int(np.sum(eigs < -tol * scale))
    return pos, neg, len(eigs) - pos - neg


def test_inertia_matches_float_eigenvalues_on_random_matrices():
    rng = random.Random(41)
    for _ in range(120):
        n = rng.randint(1, 7)
        rows = random_symmetric(rng, n)
        inertia = symmetric_elimination(rows).inertia
        assert inertia.as_tuple() == numpy_inertia(rows)


def test_zero_matrix_is_psd():
    rows = [[Fraction(0)] * 3 for _ in range(3)]
    fact = symmetric_elimination(rows)
    assert fact.is_psd
    assert fact.inertia.as_tuple() == (0, 0, 3)
    assert fact.negative_direction is None


def test_hyperbolic_block_inertia():
    rows = [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]]
    fact = symmetric_elimination(rows)
    assert fact.inertia.as_tuple() == (1, 1, 0)
    assert not fact.is_psd
    v = fact.negative_direction
    assert quadratic_form(rows, v) == fact.negative_value < 0


def test_negative_direction_replays_negative():
    rng = random.Random(53)
    found = 0
    while found < 60:
        n = rng.randint(2, 8)
        rows = random_symmetric(rng, n)
        fact = symmetric_elimination(rows)
        if fact.is_psd:
            continue
        value = quadratic_form(rows, fact.negative_direction)
        assert value == fact.negative_value
        assert value < 0
        found += 1


def test_gcd_matrices_are_positive_definite():
    for n in [1, 2, 5, 10]:
        rows = [[Fraction(math.gcd(i, j)) for j in range(1, n + 1)] for i in range(1, n + 1)]
        fact = symmetric_elimination(rows)
        assert fact.inertia.as_tuple() == (n, 0, 0)


def test_rank_deficient_psd():
    # outer product of (1, 2, 3) with itself: rank 1, PSD
    v = [1, 2, 3]
    rows = [[Fraction(a * b) for b in v] for a in v]
    fact = symmetric_elimination(rows)
    assert fact.is_psd
    assert fact.inertia.as_tuple() == (1, 0, 2)


def test_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        symmetric_elimination([[1, 2], [3, 4]])


def test_rejects_nonsquare():
    with pytest.raises(ValueError):
        symmetric_elimination([[1, 2, 3], [2, 1, 1]])


def test_char_poly_known_cases():
    assert char_poly([[Fraction(5)]]) == (1, -5)
    # identity 2x2: (lambda - 1)^2
    assert char_poly([[1, 0], [0, 1]]) == (1, -2, 1)
    # [[2, 1], [1, 2]]: lambda^2 - 4 lambda + 3
    assert char_poly([[2, 1], [1, 2]]) == (1, -4, 3)


def test_char_poly_matches_numpy():
    rng = random.Random(67)
    for _ in range(40):
        n = rng.randint(1, 6)
        rows = random_symmetric(rng, n, -4, 4)
        coeffs = char_poly(rows)
        expected = np.poly(np.array([[float(v) for v in r] for r in rows]))
        assert np.allclose([float(c) for c in coeffs], expected, atol=1e-6)
