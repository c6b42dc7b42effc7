from fractions import Fraction
from pathlib import Path

import pytest

from lllmatch.matching import EventFamily, MatchingSpace, canonical_form, read_family
from lllmatch.oracle import (
    TooLarge,
    avoid_count_exact,
    avoid_probability_exact,
    check_near_positive,
    check_negative_dependency,
    occurrence_histogram,
    perfect_matching_count,
    perfect_matchings,
)

FIXTURES = Path(__file__).parent / "fixtures"


def fam(space, *members):
    return EventFamily(space, tuple(canonical_form(m) for m in members))


@pytest.mark.parametrize("n,count", [(2, 1), (4, 3), (6, 15), (8, 105)])
def test_complete_matching_counts(n, count):
    space = MatchingSpace.complete(n)
    listed = list(perfect_matchings(space))
    assert len(listed) == count == perfect_matching_count(space)
    assert len(set(listed)) == count


def test_bipartite_counts():
    space = MatchingSpace.bipartite(4, 3)
    assert len(list(perfect_matchings(space))) == 24 == perfect_matching_count(space)


def test_c6_has_two_perfect_matchings():
    with open(FIXTURES / "c6.jsonl") as fh:
        f = read_family(fh)
    assert len(list(perfect_matchings(f.space))) == 2


def test_avoid_probability_examples():
    k4 = MatchingSpace.complete(4)
    assert avoid_probability_exact(fam(k4, [[1, 2]])) == Fraction(2, 3)
    # permutations of [4] without a 2-cycle: 15 of 24
    k44 = MatchingSpace.bipartite(4)
    members = [[[a, -b], [b, -a]] for a in range(1, 5) for b in range(a + 1, 5)]
    assert avoid_probability_exact(fam(k44, *members)) == Fraction(15, 24)


def test_avoid_count_matches_histogram():
    space = MatchingSpace.complete(8)
    f = fam(space, [[1, 2]], [[3, 4], [5, 6]], [[1, 3]], [[2, 7], [4, 8]])
    hist, total = occurrence_histogram(f)
    assert total == 105
    assert avoid_count_exact(f) == hist[0]


def test_too_large():
    with pytest.raises(TooLarge):
        list(perfect_matchings(MatchingSpace.complete(18)))
    with pytest.raises(TooLarge):
        avoid_count_exact(fam(MatchingSpace.bipartite(11), [[1, -1]]))


def test_c6_violation_is_exact():
    with open(FIXTURES / "c6.jsonl") as fh:
        f = read_family(fh)
    rep = check_negative_dependency(f)
    assert not rep.passed
    v = rep.violations[0]
    assert (v.lhs, v.rhs) == (Fraction(1), Fraction(1, 2))
    assert rep.to_json()["violations"][0]["lhs"] == "1/1"


def test_conflicting_pair_is_exclusive():
    # {12} and {13} conflict, so only exclusivity is tested
    space = MatchingSpace.complete(6)
    f = fam(space, [[1, 2]], [[1, 3]])
    assert check_near_positive(f, 0).passed
    assert check_negative_dependency(f).passed


def test_max_subset_truncation_flag():
    space = MatchingSpace.complete(8)
    f = fam(space, [[1, 2]], [[3, 4]], [[5, 6]], [[7, 8]])
    rep = check_negative_dependency(f, max_subset=1)
    assert rep.truncated
    full = check_negative_dependency(f)
    assert not full.truncated and full.checked_pairs > rep.checked_pairs
