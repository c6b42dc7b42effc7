import math
from fractions import Fraction

import pytest

from lllmatch.bounds import ClassNotExclusive, quotient_events
from lllmatch.oracle import avoid_probability_exact
from lllmatch.perm_latin import (
    BadParams,
    InvalidRectangle,
    LatinRectangle,
    TooLarge,
    all_latin_rectangles,
    derangements,
    k_cycle_event_family,
    k_cycle_free_brute,
    k_cycle_free_count,
    k_cycle_free_inclusion_exclusion,
    latin_bounds,
    latin_count_backtrack,
    latin_count_exact,
    permanent,
    row_extension_family,
)


def test_k_cycle_family_examples():
    f = k_cycle_event_family(5, 2)
    assert len(f) == 10 and f.stats.mu == Fraction(1, 2)
    assert len(k_cycle_event_family(3, 3)) == 2
    fixed = k_cycle_event_family(4, 1)
    assert len(fixed) == 4 and fixed.stats.mu == 1
    with pytest.raises(BadParams):
        k_cycle_event_family(3, 4)


@pytest.mark.parametrize("n,k", [(6, 3), (7, 2), (5, 4)])
def test_k_cycle_family_mu_and_count(n, k):
    f = k_cycle_event_family(n, k)
    assert len(f) == math.comb(n, k) * math.factorial(k - 1)
    assert f.stats.mu == Fraction(1, k)


def test_k_cycle_free_examples():
    assert k_cycle_free_count(4, 2) == 15
    assert k_cycle_free_count(4, 1) == 9
    assert k_cycle_free_count(5, 5) == 96


def test_k_cycle_free_matches_oracle():
    for n, k in [(4, 2), (5, 3), (5, 1)]:
        f = k_cycle_event_family(n, k)
        assert avoid_probability_exact(f) == Fraction(k_cycle_free_count(n, k), math.factorial(n))


def test_python_and_compiled_brute_force_agree():
    for n in range(1, 8):
        for k in range(1, n + 1):
            assert k_cycle_free_brute(n, k, "python") == k_cycle_free_inclusion_exclusion(n, k)


def test_permanent():
    assert permanent([[1, 1], [1, 1]]) == 2
    assert permanent([[1] * 4] * 4) == 24
    assert permanent([[0, 1, 1], [1, 0, 1], [1, 1, 0]]) == 2
    assert permanent([]) == 1
    assert permanent([[2, 3], [5, 7]]) == 29


def test_latin_examples():
    assert all(latin_count_exact(1, n) == math.factorial(n) for n in range(1, 7))
    assert latin_count_exact(2, 3) == 12 == 6 * derangements(3)
    assert latin_count_exact(3, 3) == 12
    assert latin_count_exact(4, 4) == 576
    assert latin_count_exact(5, 5) == 161280
    with pytest.raises(TooLarge):
        latin_count_exact(5, 8)


def test_latin_dp_matches_backtracking():
    for n in range(1, 6):
        for k in range(1, n + 1):
            assert latin_count_exact(k, n) == latin_count_backtrack(k, n)


def test_latin_bounds_examples():
    b = latin_bounds(2, 3)
    assert b.lower_lat2 == Fraction(32, 3)
    assert b.upper_felso3 is None and not b.felso3_applicable
    b = latin_bounds(2, 9)
    exact = latin_count_exact(2, 9)
    assert exact == math.factorial(9) * derangements(9)
    assert b.lower_lat2 == Fraction(math.factorial(9)) ** 2 * Fraction(8, 9) ** 9
    assert b.lower_lat2 <= exact <= b.upper_felso3


def test_rectangle_validation():
    LatinRectangle(((1, 2, 3), (2, 3, 1)))
    with pytest.raises(InvalidRectangle):
        LatinRectangle(((1, 2, 3), (1, 3, 2)))
    with pytest.raises(InvalidRectangle):
        LatinRectangle(((1, 1, 3),))


def test_row_extension_family():
    f, classes = row_extension_family(LatinRectangle(((1, 2, 3),)))
    assert len(f) == 3 and classes == [[0], [1], [2]]
    rect = LatinRectangle(((1, 2, 3, 4), (2, 1, 4, 3)))
    f, classes = row_extension_family(rect)
    assert len(f) == 8
    adj, probs = quotient_events(f, classes)
    assert all(p == Fraction(2, 4) for p in probs)
    # columns sharing a used symbol conflict through that symbol
    assert 1 in adj[0]


def test_row_extension_counts_match_oracle():
    for n in (3, 4):
        for t in (1, 2):
            total = 0
            count = 0
            for rect in all_latin_rectangles(t, n):
                f, _ = row_extension_family(rect)
                total += math.factorial(n) * avoid_probability_exact(f)
                count += 1
            assert count == latin_count_exact(t, n)
            assert total == latin_count_exact(t + 1, n)


def test_quotient_rejects_non_exclusive_class():
    f, _ = row_extension_family(LatinRectangle(((1, 2, 3),)))
    with pytest.raises(ClassNotExclusive):
        quotient_events(f, [[0, 1], [2]])
