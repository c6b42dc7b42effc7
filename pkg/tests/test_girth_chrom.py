import math
from fractions import Fraction
from itertools import combinations

import pytest

from lllmatch.girth_chrom import (
    BadParams,
    Empty,
    CONDITIONS_FAIL,
    INDETERMINATE,
    degree_stats,
    existence_certificate,
    max_independent_volume,
    traversal_asymptotic,
    traversal_probability,
)
from lllmatch.matching import MatchingSpace
from lllmatch.oracle import perfect_matchings


def test_traversal_examples():
    assert traversal_probability(4, 2) == Fraction(2, 3)
    assert traversal_probability(10, 0) == 1
    assert traversal_probability(6, 3) == Fraction(2, 5)
    assert traversal_probability(8, 5) == 0
    with pytest.raises(BadParams):
        traversal_probability(5, 1)


def test_traversal_monotone():
    for N in range(2, 31, 2):
        vals = [traversal_probability(N, s) for s in range(N + 1)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_traversal_brute_force_n8():
    pms = list(perfect_matchings(MatchingSpace.complete(8)))
    for s in range(9):
        S = set(range(1, s + 1))
        good = sum(1 for pm in pms if not any(a in S and b in S for a, b in pm.edges))
        assert Fraction(good, len(pms)) == traversal_probability(8, s)


def test_traversal_asymptotic():
    est = traversal_asymptotic(1000, 0.1)
    assert est.leading == pytest.approx(math.exp(-5))
    assert est.exact is not None
    assert math.exp(-3) < est.ratio < math.exp(3)
    assert traversal_asymptotic(400, 0.25).log_leading == pytest.approx(-12.5)
    with pytest.raises(BadParams):
        traversal_asymptotic(100, 0.5)
    # fixed xN, growing N: exact / leading -> 1
    ratios = [traversal_asymptotic(N, 10 / N).ratio for N in (200, 2000, 20000)]
    assert all(abs(b - 1) < abs(a - 1) for a, b in zip(ratios, ratios[1:]))


def test_degree_stats():
    s = degree_stats((3, 3, 3, 3))
    assert s.dbar == s.dtilde == s.Delta == 3
    s = degree_stats((1, 2, 3))
    assert (s.total_volume, s.dbar, s.dtilde, s.Delta) == (6, 2, Fraction(7, 3), 3)
    assert s.vol([1, 3]) == 4
    s = degree_stats((1, 1, 2))
    assert s.dbar == Fraction(4, 3) < s.dtilde == Fraction(3, 2) < s.Delta
    with pytest.raises(Empty):
        degree_stats(())


def test_certificate_examples():
    small = existence_certificate((3,) * 100, 3, 5)
    assert small.verdict == CONDITIONS_FAIL
    kas = small.conditions[1]
    assert (kas.lhs, kas.rhs, kas.holds) == (2304, 300, False)
    big = existence_certificate((3,) * 3334, 3, 5)
    assert all(c.holds for c in big.conditions)
    assert big.epsilon == pytest.approx(0.0964, abs=1e-4) and big.epsilon < 0.125
    # the finite-size factor N^ell/(N-2ell+1)^ell is kept, hence -76.69 rather than -76.4
    assert big.log_girth_bound == pytest.approx(-76.685, abs=1e-3)
    assert big.verdict == INDETERMINATE


def test_independent_volume():
    edges = [(a, b) for a, b in combinations(range(1, 5), 2)]
    assert max_independent_volume(4, edges, (3, 3, 3, 3)) == 3
    assert max_independent_volume(3, [(1, 2)], (1, 1, 5)) == 6
