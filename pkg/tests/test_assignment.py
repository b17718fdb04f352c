from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairstream.assignment import (_lexicographic_hungarian, max_weight_assignment)


def test_simple_square():
    w = [[3, 1], [1, 3]]
    assert max_weight_assignment(w) == [0, 1]
    w = [[1, 3], [3, 1]]
    assert max_weight_assignment(w) == [1, 0]


def test_all_indifferent_picks_lexicographically_smallest():
    w = [[1, 1, 1]] * 3
    assert max_weight_assignment(w) == [0, 1, 2]


def test_rectangular_leaves_someone_out():
    w = [[5], [7], [7]]
    # agents 2 and 3 tie on the single good; lex order leaves agent 2 matched
    assert max_weight_assignment(w, 1) == [None, 0, None]


def test_more_goods_than_agents_rejected():
    with pytest.raises(ValueError):
        max_weight_assignment([[1, 2]], 2)


def test_tie_resolution_prefers_small_goods_for_small_agents():
    w = [[2, 2], [2, 2]]
    assert max_weight_assignment(w) == [0, 1]


@st.composite
def weight_problems(draw):
    n = draw(st.integers(1, 5))
    k = draw(st.integers(1, n))
    num = st.integers(0, 12)
    rows = [[Fraction(draw(num), draw(st.integers(1, 4))) for _ in range(k)]
            for _ in range(n)]
    return rows, k


@given(weight_problems())
@settings(max_examples=120, deadline=None)
def test_hungarian_path_matches_exhaustive(problem):
    rows, k = problem
    exhaustive = max_weight_assignment(rows, k)
    hungarian = _lexicographic_hungarian(rows, len(rows), k)
    assert exhaustive == hungarian


def test_large_instance_matches_brute_force():
    from fairstream.assignment import _exhaustive

    n = 8  # above the exhaustive cutoff inside max_weight_assignment
    w = [[(i * 7 + j * 3) % 11 for j in range(n)] for i in range(n)]
    result = max_weight_assignment(w)
    assert sorted(result) == list(range(n))
    assert result == _exhaustive(w, n, n)
