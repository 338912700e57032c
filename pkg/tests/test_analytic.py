import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from pwprank.analytic import (CrossingPoint, circuit_indirect, circuit_scores,
                              crossing_consecutive, exp_poly, half_size, importance_coefficients,
                              linear_importance, linear_importance_numerator, linear_influence)
from pwprank.graph import circuit_graph, linear_graph
from pwprank.rankings import indirect_scores
from pwprank.series import pwp_transform


def path_count_coefficients(n, j):
    """Walks of length m on L_n that start or end at j (1-based), by matrix powers
    over the integers: the m-th coefficient of e_+^lam * I_j."""
    d = [[1 if i == k + 1 else 0 for k in range(n)] for i in range(n)]
    p = [row[:] for row in d]
    out = []
    for _ in range(1, n):
        out.append(sum(p[j - 1]) + sum(p[i][j - 1] for i in range(n)))
        p = [[sum(p[i][k] * d[k][l] for k in range(n)) for l in range(n)] for i in range(n)]
    return out


@pytest.mark.parametrize("n", range(2, 16))
def test_coefficients_against_walk_counts(n):
    for j in range(1, n + 1):
        assert importance_coefficients(n, j) == path_count_coefficients(n, j)


def fraction_importance(n, j, lam):
    """Exact e_+^lam * I_j as a Fraction for rational lam."""
    total = Fraction(0)
    for m, c in enumerate(path_count_coefficients(n, j), 1):
        total += c * lam ** m / math.factorial(m)
    return total


@pytest.mark.parametrize("n,j", [(5, 2), (6, 3), (7, 4), (9, 1), (10, 7)])
def test_numerator_against_fractions(n, j):
    for lam in (Fraction(1, 3), Fraction(2), Fraction(7, 2)):
        want = float(fraction_importance(n, j, lam))
        assert linear_importance_numerator(n, j, float(lam)) == pytest.approx(want, rel=1e-15)


def test_examples():
    for lam in (0.5, 1.0, 3.0):
        assert linear_importance(2, 1, lam) == pytest.approx(lam / math.expm1(lam), rel=1e-15)
    assert linear_importance(3, 2, 2.0) == pytest.approx(4 / math.expm1(2.0), rel=1e-15)
    want = float(Fraction(2) + Fraction(1, 2) + Fraction(1, 6) + Fraction(1, 24)) / math.expm1(1)
    assert linear_importance(6, 2, 1.0) == pytest.approx(want, rel=1e-15)
    assert linear_influence(6, 6, 3.0) == 0.0
    assert linear_influence(3, 1, 1.0) == pytest.approx(1.5 / math.expm1(1), rel=1e-15)
    assert linear_influence(6, 5, 2.0) == pytest.approx(2 / math.expm1(2), rel=1e-15)


def test_bad_indices():
    with pytest.raises(IndexError):
        linear_importance(5, 0, 1.0)
    with pytest.raises(IndexError):
        linear_importance(1, 1, 1.0)
    with pytest.raises(IndexError):
        crossing_consecutive(6, 3)
    with pytest.raises(ValueError):
        CrossingPoint(2, 1, 1.0)


@pytest.mark.parametrize("n", range(2, 13))
@pytest.mark.parametrize("lam", [0.1, 0.5, 1, 2, 5, 10])
def test_agreement_with_series(n, lam):
    t = pwp_transform(linear_graph(n).d, lam)
    imp = indirect_scores(t, "importance").values
    inf = indirect_scores(t, "influence").values
    for j in range(1, n + 1):
        assert linear_importance(n, j, lam) == pytest.approx(imp[j - 1], rel=1e-10)
        assert linear_influence(n, j, lam) == pytest.approx(inf[j - 1], rel=1e-10, abs=0)


@pytest.mark.parametrize("n", range(2, 25))
def test_symmetry_across_cases(n):
    for j in range(1, n + 1):
        for lam in (0.3, 2.0, 11.0):
            a, b = linear_importance(n, j, lam), linear_importance(n, n + 1 - j, lam)
            assert a == pytest.approx(b, rel=1e-14)


def test_crossing_spot_values():
    assert crossing_consecutive(3, 1).lambda_star == pytest.approx(2.0, abs=1e-14)
    assert crossing_consecutive(5, 2).lambda_star == pytest.approx(3.0, abs=1e-12)
    assert crossing_consecutive(6, 2).lambda_star == pytest.approx(math.sqrt(12), abs=1e-12)
    assert crossing_consecutive(6, 1).lambda_star == pytest.approx(120 ** 0.25, abs=1e-12)


@pytest.mark.parametrize("k", range(2, 15))
def test_extreme_crossing_closed_forms(k):
    for n in (2 * k, 2 * k - 1):
        last = crossing_consecutive(n, k - 1).lambda_star
        if n == 2 * k:
            assert last == pytest.approx(math.sqrt(k * (k + 1)), rel=1e-13)
        else:
            assert last == pytest.approx(k, rel=1e-13)
    first = crossing_consecutive(2 * k, 1).lambda_star
    assert first == pytest.approx(math.factorial(2 * k - 1) ** (1 / (2 * k - 2)), rel=1e-13)


@pytest.mark.parametrize("n", range(3, 21))
def test_crossings_are_roots(n):
    mpmath.mp.dps = 40
    for i in range(1, half_size(n)):
        c = crossing_consecutive(n, i).lambda_star
        gap = linear_importance(n, i, c) - linear_importance(n, i + 1, c)
        assert abs(gap) < 1e-10
        # independent check: the difference polynomial changes sign there
        diff = [a - b for a, b in zip(importance_coefficients(n, i),
                                      importance_coefficients(n, i + 1))]
        f = lambda x: sum(d * mpmath.mpf(x) ** m / mpmath.factorial(m)
                          for m, d in enumerate(diff, 1))
        assert f(c * (1 - 1e-9)) * f(c * (1 + 1e-9)) < 0


@pytest.mark.parametrize("n", range(3, 61))
def test_crossing_order(n):
    cs = [crossing_consecutive(n, i).lambda_star for i in range(1, half_size(n))]
    assert all(a < b for a, b in zip(cs, cs[1:]))


@pytest.mark.parametrize("n", range(3, 13))
def test_small_and_large_lambda(n):
    k = half_size(n)
    small = [linear_importance(n, j, 0.01) for j in range(1, k + 1)]
    large = [linear_importance(n, j, 100.0) for j in range(1, k + 1)]
    assert all(a < b for a, b in zip(small, small[1:]))
    assert all(a > b for a, b in zip(large, large[1:]))


@pytest.mark.parametrize("n", [3, 6, 11])
def test_decay(n):
    for j in range(1, n + 1):
        a, b = linear_importance(n, j, 100.0), linear_importance(n, j, 200.0)
        assert b < a < 1e-10
        vals = [linear_importance(n, j, lam) for lam in np.linspace(n, 3 * n, 30)]
        assert all(x > y for x, y in zip(vals, vals[1:]))


def test_huge_lambda_log_domain():
    v = linear_importance(6, 1, 1000.0)
    want = float(sum(mpmath.mpf(1000) ** m / mpmath.factorial(m) for m in range(1, 6))
                 / mpmath.expm1(1000))
    assert v == pytest.approx(want, rel=1e-12)


def test_exp_poly():
    assert exp_poly([1, 1, 1], 1.0) == pytest.approx(1 + 1 / 2 + 1 / 6)
    assert exp_poly([], 3.0) == 0.0


def test_circuit_indirect_example():
    want = math.fsum(1 / math.factorial(m) for m in range(1, 40, 3)) / math.expm1(1)
    assert circuit_indirect(3, 1, 1.0) == pytest.approx(want, rel=1e-15)


@pytest.mark.parametrize("n", range(2, 11))
@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0, 5.0, 30.0])
def test_circuit_rows_sum_to_one(n, lam):
    assert math.fsum(circuit_indirect(n, k, lam) for k in range(1, n + 1)) == \
        pytest.approx(1.0, rel=1e-13)


@pytest.mark.parametrize("n", range(2, 11))
@pytest.mark.parametrize("lam", [0.5, 1.0, 1.9])
def test_circuit_strict_order(n, lam):
    ts = [circuit_indirect(n, k, lam) for k in range(1, n + 1)]
    assert all(a > b for a, b in zip(ts, ts[1:]))


@pytest.mark.parametrize("n", [3, 5, 6, 9])
@pytest.mark.parametrize("lam", [0.1, 1.0, 4.0])
def test_circuit_against_series(n, lam):
    imp, inf = circuit_scores(n, lam)
    t = pwp_transform(circuit_graph(n).d, lam)
    assert np.allclose(indirect_scores(t, "importance").values, imp.values, rtol=1e-9)
    assert np.allclose(indirect_scores(t, "influence").values, inf.values, rtol=1e-9)
    # T[j + k, j] = T_k on the cycle 1 -> 2 -> ... -> n -> 1
    for k in range(1, n):
        assert t.t[k, 0] == pytest.approx(circuit_indirect(n, k, lam), rel=1e-9)
    assert t.t[0, 0] == pytest.approx(circuit_indirect(n, n, lam), rel=1e-9)
