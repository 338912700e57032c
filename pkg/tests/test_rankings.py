import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from pwprank.graph import circuit_graph, linear_graph
from pwprank.rankings import (Ranking, ScoreVector, direct_scores, indirect_scores,
                              pair_relation, parse_ranking, ranking_equal, ranking_from_scores,
                              refines, score_values)
from pwprank.series import pwp_rescaled, pwp_transform


def ranks(d, lam, kind="importance", tie_tol=1e-9):
    return ranking_from_scores(indirect_scores(pwp_transform(d, lam), kind), tie_tol)


def test_direct_scores_l3():
    d = linear_graph(3).d
    assert direct_scores(d, "importance").values.tolist() == [1, 2, 1]
    assert direct_scores(d, "influence").values.tolist() == [1, 1, 0]
    assert direct_scores(d, "dependence").values.tolist() == [0, 1, 1]
    assert not direct_scores(np.zeros((4, 4)), "importance").values.any()


@given(arrays(float, (5, 5), elements=st.floats(0, 100)))
def test_importance_is_exact_sum(d):
    imp = direct_scores(d, "importance").values
    assert np.array_equal(imp, direct_scores(d, "dependence").values
                          + direct_scores(d, "influence").values)


@pytest.mark.parametrize("lam", [0.3, 1.0, 5.0])
def test_l2_importance(lam):
    v = indirect_scores(pwp_transform(linear_graph(2).d, lam), "importance").values
    assert v == pytest.approx([lam / math.expm1(lam)] * 2, rel=1e-14)


def test_l3_at_two():
    # All three importances coincide at lam = 2: I_1 = (2 lam + lam^2)/2 = 4
    # and I_2 = 2 lam = 4, both over e_+^2.
    v = indirect_scores(pwp_transform(linear_graph(3).d, 2.0), "importance").values
    want = 4 / math.expm1(2.0)
    assert want == pytest.approx(0.626070, abs=1e-6)
    assert v == pytest.approx([want] * 3, rel=1e-14)
    assert ranking_from_scores(v).groups == ((0, 1, 2),)


def test_l6_influence_polynomials():
    lam = 1.7
    v = indirect_scores(pwp_transform(linear_graph(6).d, lam), "influence").values
    want = [sum(lam ** m / math.factorial(m) for m in range(1, 6 - i)) / math.expm1(lam)
            for i in range(6)]
    assert v == pytest.approx(want, rel=1e-14, abs=1e-300)
    assert all(a > b for a, b in zip(v, v[1:]))


def test_ranking_examples():
    assert ranking_from_scores(np.array([1.0, 1.0, 2.0])).groups == ((2,), (0, 1))
    l6 = linear_graph(6).d
    assert ranking_from_scores(direct_scores(l6, "importance")).format() == "2,3,4,5 > 1,6"
    assert ranks(l6, 1.0).format() == "3,4 > 2,5 > 1,6"


def test_ranking_equal():
    a = parse_ranking("1 > 2")
    assert ranking_equal(a, parse_ranking("1>2"))
    assert not ranking_equal(a, parse_ranking("2 > 1"))
    assert not ranking_equal(parse_ranking("1,2"), a)
    with pytest.raises(ValueError):
        ranking_equal(a, parse_ranking("1>2>3"))


def test_parse_and_format():
    r = parse_ranking("3,4 > 2,5 > 1,6")
    assert r.groups == ((2, 3), (1, 4), (0, 5))
    assert r.format() == "3,4 > 2,5 > 1,6"
    assert r.format(list("abcdef")) == "c,d > b,e > a,f"
    assert r.to_json(list("abcdef")) == [["c", "d"], ["b", "e"], ["a", "f"]]
    assert parse_ranking("b > a", ["a", "b"]).groups == ((1,), (0,))
    with pytest.raises(ValueError):
        parse_ranking("1 > 3")


@given(arrays(float, st.integers(1, 8), elements=st.floats(-1e3, 1e3)),
       st.floats(0, 1e-3))
def test_ranking_invariants(values, tol):
    r = ranking_from_scores(values, tol)
    flat = sorted(v for g in r.groups for v in g)
    assert flat == list(range(len(values)))
    scale = np.max(np.abs(values))
    for g, h in zip(r.groups, r.groups[1:]):
        # the gap between consecutive groups exceeds the threshold
        assert min(values[list(g)]) - max(values[list(h)]) > tol * scale
    assert parse_ranking(r.format()) == r


@given(arrays(float, 6, elements=st.floats(-1e3, 1e3)), st.floats(1e-3, 1e3))
def test_positive_scaling_preserves_ranking(values, c):
    assert ranking_from_scores(values * c, 0.0) == ranking_from_scores(values, 0.0) or \
        len(set(values * c)) != len(set(values))


def test_pair_relation():
    v = np.array([3.0, 1.0, 3.0])
    assert pair_relation(v, 0, 1, 1e-9) == 1
    assert pair_relation(v, 1, 0, 1e-9) == -1
    assert pair_relation(v, 0, 2, 1e-9) == 0


def test_refines():
    assert refines(parse_ranking("1 > 2 > 3"), parse_ranking("1,2 > 3"))
    assert not refines(parse_ranking("2 > 1 > 3"), parse_ranking("1 > 2,3"))


@pytest.mark.parametrize("n", [2, 3, 4, 6, 9, 12])
@pytest.mark.parametrize("lam", [0.1, 1.0, 2.0, 7.5, 30.0])
def test_linear_influence_order(n, lam):
    strict = tuple((i,) for i in range(n))
    v = indirect_scores(pwp_transform(linear_graph(n).d, lam), "influence").values
    assert np.all(np.diff(v) <= 0)
    smallest_gap = lam ** (n - 1) / math.factorial(n - 1) / math.expm1(lam)
    if smallest_gap > 1e-13 * v[0]:
        assert ranks(linear_graph(n).d, lam, "influence", tie_tol=0.0).groups == strict
    if lam >= 0.5:
        # below that, F_1 - F_2 ~ lam^(n-1)/(n-1)! drops under the default tie tolerance
        assert ranks(linear_graph(n).d, lam, "influence").groups == strict


@pytest.mark.parametrize("n", [4, 6, 9, 12])
@pytest.mark.parametrize("lam", [0.2, 1.0, 4.0, 15.0])
def test_linear_importance_symmetry(n, lam):
    v = indirect_scores(pwp_transform(linear_graph(n).d, lam), "importance").values
    assert np.allclose(v, v[::-1], rtol=1e-12, atol=0)


def test_circuit_all_tied():
    assert ranks(circuit_graph(6).d, 1.0).format() == "1,2,3,4,5,6"


@given(st.integers(0, 2**32 - 1), st.sampled_from([0.5, 2.0, 10.0]), st.floats(0.1, 2.0))
def test_scale_ranking_equivalence(seed, c, lam):
    rng = np.random.default_rng(seed)
    d = rng.random((5, 5)) * (rng.random((5, 5)) < 0.7)
    a = ranking_from_scores(indirect_scores(pwp_rescaled(d, c, lam), "importance"), 0.0)
    b = ranking_from_scores(indirect_scores(pwp_transform(d, c * lam), "importance"), 0.0)
    va = score_values(pwp_rescaled(d, c, lam).t, "importance")
    # rounding may split near-ties differently; compare only where the gaps are clear
    gaps = np.diff(np.sort(va))
    if len(gaps) and gaps.min() > 1e-9 * np.abs(va).max():
        assert a == b


def test_score_vector_validation():
    with pytest.raises(ValueError):
        ScoreVector("bogus", np.zeros(2))
    with pytest.raises(ValueError):
        ScoreVector("importance", np.array([np.nan]))
    with pytest.raises(ValueError):
        ranking_from_scores(np.zeros(2), -1.0)


def test_ranking_hash_ignores_tolerance():
    assert hash(Ranking(((0,),), 0.0)) == hash(Ranking(((0,),), 1e-3))
