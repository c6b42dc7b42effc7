"""Brute-force ground truth: perfect-matching enumeration and exact checks.

Everything here is exact rational arithmetic over complete enumerations, so
it is only usable on desk-sized spaces (guarded by ``TooLarge``).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import perm, prod
from typing import Iterator

from .matching import (
    BIPARTITE,
    COMPLETE,
    GENERAL,
    EventFamily,
    Matching,
    MatchingSpace,
)


class TooLarge(ValueError):
    pass


DEFAULT_LIMITS = {COMPLETE: 16, BIPARTITE: 10, GENERAL: 16}
DEFAULT_MAX_SUBSET = 12


def _check_size(space: MatchingSpace, limit: int | None) -> None:
    cap = DEFAULT_LIMITS[space.kind] if limit is None else limit
    if space.n > cap:
        raise TooLarge(f"{space.kind} space with N={space.n} exceeds the oracle cap {cap}")


def double_factorial(n: int) -> int:
    return prod(range(n, 0, -2)) if n > 0 else 1


def perfect_matching_count(space: MatchingSpace, limit: int | None = None) -> int:
    """Closed forms for K_N and K_{N,M}; enumeration for general graphs."""
    if space.kind == COMPLETE:
        return double_factorial(space.n - 1)
    if space.kind == BIPARTITE:
        return perm(space.n, space.m)
    return sum(1 for _ in perfect_matchings(space, limit))


def _order_and_candidates(space: MatchingSpace):
    """Vertices to saturate in processing order, and each one's sorted partner list."""
    if space.kind == COMPLETE:
        order = list(space.vertices)
        cands = {v: [w for w in order if w > v] for v in order}
        return order, cands, True
    if space.kind == BIPARTITE:
        order = list(range(-1, -space.m - 1, -1))
        left = list(range(1, space.n + 1))
        return order, {v: left for v in order}, False
    order = list(space.vertices)
    cands = {v: [] for v in order}
    for a, b in space.edges:
        cands[a].append(b)
        cands[b].append(a)
    for v in order:
        cands[v].sort()
    return order, cands, True


def perfect_matchings(space: MatchingSpace, limit: int | None = None) -> Iterator[Matching]:
    """Every perfect matching once, in a deterministic order.

    In K_N and general graphs the smallest uncovered vertex is matched first,
    to partners in increasing order.  In K_{N,M} the second-class vertices
    ``-1, -2, ...`` are saturated in turn.
    """
    _check_size(space, limit)
    order, cands, both_sides = _order_and_candidates(space)
    covered: set[int] = set()
    edges: list[tuple[int, int]] = []
    need = len(order) // 2 if both_sides else len(order)

    def rec(pos: int):
        if len(edges) == need:
            yield Matching(tuple(sorted(edges)))
            return
        while order[pos] in covered:
            pos += 1
        a = order[pos]
        for b in cands[a]:
            if b in covered:
                continue
            covered.add(a)
            covered.add(b)
            edges.append((a, b) if a < b else (b, a))
            yield from rec(pos + 1)
            edges.pop()
            covered.discard(a)
            covered.discard(b)

    if both_sides and len(order) % 2:
        return
    if need == 0:
        yield Matching(())
        return
    yield from rec(0)


def _avoid_count(space: MatchingSpace, members: tuple[Matching, ...]) -> int:
    """Number of perfect matchings containing no member, with dead-member pruning."""
    order, cands, both_sides = _order_and_candidates(space)
    nmem = len(members)
    size = [m.size for m in members]
    inc: dict[int, list[tuple[int, int]]] = {}
    for idx, m in enumerate(members):
        for a, b in m.edges:
            inc.setdefault(a, []).append((idx, b))
            inc.setdefault(b, []).append((idx, a))
    hits = [0] * nmem
    dead = [False] * nmem
    covered: set[int] = set()
    state = {"alive": nmem}
    need = len(order) // 2 if both_sides else len(order)

    def completions(placed: int) -> int:
        if space.kind == COMPLETE:
            return double_factorial(space.n - 2 * placed - 1)
        return perm(space.n - placed, space.m - placed)

    def rec(pos: int, placed: int) -> int:
        if placed == need:
            return 1
        if state["alive"] == 0 and space.kind != GENERAL:
            return completions(placed)
        while order[pos] in covered:
            pos += 1
        a = order[pos]
        total = 0
        for b in cands[a]:
            if b in covered:
                continue
            occurs = False
            hit, killed = [], []
            for mi, p in inc.get(a, ()):
                if dead[mi]:
                    continue
                if p == b:
                    hits[mi] += 1
                    hit.append(mi)
                    if hits[mi] == size[mi]:
                        occurs = True
                else:
                    dead[mi] = True
                    killed.append(mi)
            for mi, p in inc.get(b, ()):
                if not dead[mi] and p != a:
                    dead[mi] = True
                    killed.append(mi)
            if not occurs:
                state["alive"] -= len(killed)
                covered.add(a)
                covered.add(b)
                total += rec(pos + 1, placed + 1)
                covered.discard(a)
                covered.discard(b)
                state["alive"] += len(killed)
            for mi in hit:
                hits[mi] -= 1
            for mi in killed:
                dead[mi] = False
        return total

    if any(m.size == 0 for m in members) or (both_sides and len(order) % 2):
        return 0
    return rec(0, 0)


def avoid_count_exact(family: EventFamily, limit: int | None = None) -> int:
    _check_size(family.space, limit)
    return _avoid_count(family.space, family.members)


def avoid_probability_exact(family: EventFamily, limit: int | None = None) -> Fraction:
    """Fraction of perfect matchings extending no member of the family."""
    total = perfect_matching_count(family.space, limit)
    if total == 0:
        raise ValueError("space has no perfect matching")
    return Fraction(avoid_count_exact(family, limit), total)


def occurrence_histogram(family: EventFamily, limit: int | None = None) -> tuple[Counter, int]:
    """Map bitmask-of-occurring-members -> number of perfect matchings."""
    hist: Counter = Counter()
    total = 0
    members = [(m.edges, 1 << i) for i, m in enumerate(family.members)]
    for pm in perfect_matchings(family.space, limit):
        have = set(pm.edges)
        mask = 0
        for edges, bit in members:
            if all(e in have for e in edges):
                mask |= bit
        hist[mask] += 1
        total += 1
    if total == 0:
        raise ValueError("space has no perfect matching")
    return hist, total


@dataclass(frozen=True)
class Violation:
    index: int
    subset: tuple[int, ...]
    lhs: Fraction
    rhs: Fraction

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "subset": list(self.subset),
            "lhs": f"{self.lhs.numerator}/{self.lhs.denominator}",
            "rhs": f"{self.rhs.numerator}/{self.rhs.denominator}",
        }


@dataclass(frozen=True)
class DependencyCheckReport:
    kind: str
    checked_pairs: int
    violations: tuple[Violation, ...] = field(default=())
    truncated: bool = False

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "checked_pairs": self.checked_pairs,
            "passed": self.passed,
            "truncated": self.truncated,
            "violations": [v.to_json() for v in self.violations],
        }


def _subsets(pool: list[int], max_subset: int):
    for k in range(min(len(pool), max_subset) + 1):
        yield from combinations(pool, k)


def _conditional_scan(family, max_subset, limit, accept):
    """Shared driver: ``accept(i, lhs, p_i)`` returns (holds, rhs)."""
    hist, total = occurrence_histogram(family, limit)
    masks = list(hist.items())
    n = len(family)
    p = [Fraction(sum(c for m, c in masks if m >> i & 1), total) for i in range(n)]
    adj = family.conflicts
    checked = 0
    truncated = False
    violations = []
    for i in range(n):
        pool = [j for j in range(n) if j != i and j not in adj[i]]
        if len(pool) > max_subset:
            truncated = True
        bit_i = 1 << i
        for S in _subsets(pool, max_subset):
            smask = 0
            for j in S:
                smask |= 1 << j
            not_s = both = 0
            for m, c in masks:
                if not m & smask:
                    not_s += c
                    if m & bit_i:
                        both += c
            if not_s == 0:
                continue
            checked += 1
            lhs = Fraction(both, not_s)
            holds, rhs = accept(lhs, p[i])
            if not holds:
                violations.append(Violation(i, S, lhs, rhs))
    return hist, checked, truncated, violations


def check_negative_dependency(
    family: EventFamily, max_subset: int = DEFAULT_MAX_SUBSET, limit: int | None = None
) -> DependencyCheckReport:
    """Exhaustively test Pr(A_i | no A_j, j in S) <= Pr(A_i) over non-neighbour sets S."""
    _, checked, truncated, violations = _conditional_scan(
        family, max_subset, limit, lambda lhs, pi: (lhs <= pi, pi)
    )
    return DependencyCheckReport("negative", checked, tuple(violations), truncated)


def check_near_positive(
    family: EventFamily,
    epsilon,
    max_subset: int = DEFAULT_MAX_SUBSET,
    limit: int | None = None,
) -> DependencyCheckReport:
    """Exhaustive check of both near-positive conditions for the conflict graph.

    Conflicting members must never co-occur; for non-neighbour sets T the
    conditional probability must stay at least ``(1 - epsilon) Pr(A_i)``.
    """
    eps = Fraction(epsilon)
    factor = 1 - eps
    hist, checked, truncated, violations = _conditional_scan(
        family, max_subset, limit, lambda lhs, pi: (lhs >= factor * pi, factor * pi)
    )
    total = sum(hist.values())
    for i, nbrs in enumerate(family.conflicts):
        for j in sorted(nbrs):
            if j <= i:
                continue
            both = sum(c for m, c in hist.items() if m >> i & 1 and m >> j & 1)
            checked += 1
            if both:
                violations.append(Violation(i, (j,), Fraction(both, total), Fraction(0)))
    return DependencyCheckReport("near_positive", checked, tuple(violations), truncated)
