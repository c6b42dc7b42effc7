from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from lllmatch.matching import (
    BadVertex,
    DuplicateMember,
    EmptyFamily,
    EventFamily,
    Matching,
    MatchingError,
    MatchingSpace,
    NotAMatching,
    SizeTooLarge,
    canonical_form,
    conflict_graph,
    event_probability,
    family_stats,
    in_conflict,
    read_family,
    write_family,
)


def M(*pairs):
    return canonical_form([list(p) for p in pairs])


def test_canonical_form_examples():
    assert M((3, 1), (2, 4)).edges == ((1, 3), (2, 4))
    assert M().size == 0
    with pytest.raises(NotAMatching):
        M((1, 2), (2, 3))


def test_canonical_form_rejects_outside_vertex():
    with pytest.raises(BadVertex):
        canonical_form([[1, 9]], MatchingSpace.complete(6))


def test_space_invariants():
    with pytest.raises(MatchingError):
        MatchingSpace.complete(5)
    with pytest.raises(MatchingError):
        MatchingSpace.bipartite(3, 4)
    assert MatchingSpace.bipartite(4, 3).vertices[-1] == -3


def test_in_conflict_examples():
    assert in_conflict(M((1, 2)), M((1, 3)))
    assert not in_conflict(M((1, 2)), M((1, 2), (3, 4)))
    assert in_conflict(M((1, 2), (3, 4)), M((3, 5)))


def test_conflict_graph_examples():
    fam = EventFamily(MatchingSpace.complete(6), (M((1, 2)), M((1, 3)), M((4, 5))))
    assert conflict_graph(fam) == [{1}, {0}, set()]
    single = EventFamily(MatchingSpace.complete(4), (M((1, 2)),))
    assert conflict_graph(single) == [set()]
    edges = [M(e) for e in combinations(range(1, 5), 2)]
    g = conflict_graph(EventFamily(MatchingSpace.complete(4), tuple(edges)))
    for i, j in combinations(range(6), 2):
        shares = bool(set(edges[i].edges[0]) & set(edges[j].edges[0]))
        assert (j in g[i]) == shares
    assert 5 not in g[0]  # {12} and {34}


def test_event_probability_examples():
    assert event_probability(MatchingSpace.complete(6), M((1, 2))) == Fraction(1, 5)
    assert event_probability(MatchingSpace.bipartite(4, 3), M((1, -1), (2, -2))) == Fraction(1, 12)
    assert event_probability(MatchingSpace.complete(4), M((1, 2), (3, 4))) == Fraction(1, 3)
    with pytest.raises(SizeTooLarge):
        event_probability(MatchingSpace.bipartite(4, 1), M((1, -1), (2, -2)))


def test_family_stats_examples():
    fam = EventFamily(MatchingSpace.complete(10), (M((1, 2)),))
    s = fam.stats
    assert (s.r, s.sizes, s.d[1], s.mu) == (1, (1,), 1, Fraction(1, 9))
    with pytest.raises(EmptyFamily):
        family_stats(EventFamily(MatchingSpace.complete(4), ()))


def test_duplicates_rejected():
    with pytest.raises(DuplicateMember):
        EventFamily(MatchingSpace.complete(4), (M((1, 2)), M((2, 1))))


def test_family_file_round_trip():
    fam = EventFamily(MatchingSpace.bipartite(5, 5), (M((1, -2)), M((2, -1), (3, -3))))
    text = write_family(fam)
    assert read_family(text.splitlines()) == fam
    with pytest.raises(MatchingError):
        read_family(text.splitlines(), MatchingSpace.bipartite(6, 6))


pairs = st.lists(st.tuples(st.integers(1, 12), st.integers(1, 12)), max_size=6)


def _try(edges):
    try:
        return canonical_form([list(e) for e in edges])
    except MatchingError:
        return None


@given(pairs)
def test_canonical_form_idempotent(edges):
    m = _try(edges)
    if m is not None:
        assert canonical_form(m.edges) == m


@given(pairs, pairs)
def test_in_conflict_symmetric_irreflexive(a, b):
    ma, mb = _try(a), _try(b)
    if ma is None or mb is None:
        return
    assert in_conflict(ma, mb) == in_conflict(mb, ma)
    assert not in_conflict(ma, ma)


@given(st.lists(pairs, min_size=1, max_size=6))
def test_mu_is_sum_of_probabilities(raw):
    space = MatchingSpace.complete(12)
    members = []
    for edges in raw:
        m = _try(edges)
        if m is not None and m.size and m not in members:
            members.append(m)
    if not members:
        return
    fam = EventFamily(space, tuple(members))
    assert fam.stats.mu == sum(event_probability(space, m) for m in members)
