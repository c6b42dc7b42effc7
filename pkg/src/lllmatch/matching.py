"""Canonical matchings, conflicts, event probabilities and family statistics.

Vertices of ``K_N`` are ``1..N``.  In ``K_{N,M}`` the first class is
``1..N`` and the second class is ``-1..-M``, so one pair type serves both
spaces.  All probabilities here are exact :class:`fractions.Fraction`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

Edge = tuple[int, int]


class MatchingError(ValueError):
    """Base class for invalid matching input."""


class NotAMatching(MatchingError):
    pass


class BadVertex(MatchingError):
    pass


class SizeTooLarge(MatchingError):
    pass


class EmptyFamily(MatchingError):
    pass


class DuplicateMember(MatchingError):
    pass


class UnsupportedSpace(MatchingError):
    pass


COMPLETE = "complete"
BIPARTITE = "bipartite"
GENERAL = "general"


@dataclass(frozen=True)
class MatchingSpace:
    """Uniform space of perfect matchings of ``K_N``, ``K_{N,M}`` or a small graph."""

    kind: str
    n: int = 0
    m: int = 0
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.kind == COMPLETE:
            if self.n <= 0 or self.n % 2:
                raise MatchingError(f"complete space needs a positive even N, got {self.n}")
        elif self.kind == BIPARTITE:
            if self.n <= 0 or self.m <= 0 or self.m > self.n:
                raise MatchingError(f"bipartite space needs 0 < M <= N, got N={self.n} M={self.m}")
        elif self.kind == GENERAL:
            norm = tuple(sorted({_sorted_pair(a, b) for a, b in self.edges}))
            if any(a == b for a, b in norm):
                raise MatchingError("general graph must be simple")
            object.__setattr__(self, "edges", norm)
            verts = {v for e in norm for v in e}
            object.__setattr__(self, "n", len(verts))
        else:
            raise MatchingError(f"unknown space kind {self.kind!r}")

    @classmethod
    def complete(cls, n: int) -> MatchingSpace:
        return cls(COMPLETE, n)

    @classmethod
    def bipartite(cls, n: int, m: int | None = None) -> MatchingSpace:
        return cls(BIPARTITE, n, n if m is None else m)

    @classmethod
    def general(cls, edges: Iterable[Sequence[int]]) -> MatchingSpace:
        return cls(GENERAL, edges=tuple(tuple(e) for e in edges))

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        if self.kind == COMPLETE:
            return tuple(range(1, self.n + 1))
        if self.kind == BIPARTITE:
            return tuple(range(1, self.n + 1)) + tuple(range(-1, -self.m - 1, -1))
        return tuple(sorted({v for e in self.edges for v in e}))

    @cached_property
    def _edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def has_edge(self, a: int, b: int) -> bool:
        if self.kind == COMPLETE:
            return a != b and 1 <= a <= self.n and 1 <= b <= self.n
        if self.kind == BIPARTITE:
            lo, hi = min(a, b), max(a, b)
            return -self.m <= lo <= -1 and 1 <= hi <= self.n
        return _sorted_pair(a, b) in self._edge_set

    def with_n(self, n: int) -> MatchingSpace:
        """Same kind of space with a different first-class size."""
        if self.kind == COMPLETE:
            return MatchingSpace.complete(n)
        if self.kind == BIPARTITE:
            return MatchingSpace.bipartite(n, self.m + (n - self.n))
        raise UnsupportedSpace("general spaces cannot be resized")

    def to_header(self) -> dict:
        if self.kind == COMPLETE:
            return {"space": COMPLETE, "n": self.n}
        if self.kind == BIPARTITE:
            return {"space": BIPARTITE, "n": self.n, "m": self.m}
        return {"space": GENERAL, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_header(cls, header: dict) -> MatchingSpace:
        kind = header.get("space")
        if kind == COMPLETE:
            return cls.complete(int(header["n"]))
        if kind == BIPARTITE:
            return cls.bipartite(int(header["n"]), int(header.get("m", header["n"])))
        if kind == GENERAL:
            return cls.general(header["edges"])
        raise MatchingError(f"unknown space kind {kind!r}")


def _sorted_pair(a: int, b: int) -> Edge:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True, order=True)
class Matching:
    edges: tuple[Edge, ...]

    @property
    def size(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    @cached_property
    def vertices(self) -> frozenset:
        return frozenset(v for e in self.edges for v in e)

    @cached_property
    def partner(self) -> dict[int, int]:
        out = {}
        for a, b in self.edges:
            out[a] = b
            out[b] = a
        return out

    def issubset(self, other: Matching) -> bool:
        return set(self.edges) <= set(other.edges)

    def __sub__(self, other: Matching) -> Matching:
        drop = set(other.edges)
        return Matching(tuple(e for e in self.edges if e not in drop))

    def to_json(self) -> list:
        return [list(e) for e in self.edges]


def canonical_form(edges: Iterable[Sequence[int]], space: MatchingSpace | None = None) -> Matching:
    """Sort each pair and the pair list; reject repeated vertices.

    >>> canonical_form([[3, 1], [2, 4]]).edges
    ((1, 3), (2, 4))
    """
    pairs = []
    seen = set()
    covered = set()
    for e in edges:
        if len(e) != 2:
            raise NotAMatching(f"edge {e!r} is not a pair")
        a, b = int(e[0]), int(e[1])
        if a == b:
            raise NotAMatching(f"edge {e!r} is a loop")
        pair = _sorted_pair(a, b)
        if pair in seen:
            # repeated identical edge is still a set of edges
            continue
        for v in pair:
            if v in covered:
                raise NotAMatching(f"vertex {v} covered twice")
        covered.update(pair)
        seen.add(pair)
        pairs.append(pair)
    m = Matching(tuple(sorted(pairs)))
    if space is not None:
        validate(m, space)
    return m


def validate(m: Matching, space: MatchingSpace) -> None:
    for a, b in m.edges:
        if not space.has_edge(a, b):
            raise BadVertex(f"edge ({a}, {b}) is not an edge of the {space.kind} space")


def in_conflict(m1: Matching, m2: Matching) -> bool:
    """True iff ``m1 | m2`` is not a matching after merging shared edges."""
    p1, p2 = m1.partner, m2.partner
    if len(p1) > len(p2):
        p1, p2 = p2, p1
    for v, w in p1.items():
        u = p2.get(v)
        if u is not None and u != w:
            return True
    return False


def p_value(kind: str, n: int, i: int) -> Fraction:
    """Probability that a fixed size-``i`` matching lies in a uniform perfect matching.

    ``n`` is the (possibly shrunk) first-class size.  Raises ``SizeTooLarge``
    when the falling product reaches a nonpositive factor.
    """
    den = 1
    if kind == COMPLETE:
        for t in range(1, i + 1):
            f = n - 2 * t + 1
            if f <= 0:
                raise SizeTooLarge(f"size {i} matching does not fit in K_{n}")
            den *= f
    elif kind == BIPARTITE:
        for t in range(i):
            f = n - t
            if f <= 0:
                raise SizeTooLarge(f"size {i} matching does not fit in K_{{{n},*}}")
            den *= f
    else:
        raise UnsupportedSpace("closed-form probabilities exist only for complete spaces")
    return Fraction(1, den)


def shrink_n(kind: str, n: int, t: int) -> int:
    """First-class size after fixing ``t`` edges (``N-2t`` in K_N, ``N-t`` in K_{N,M})."""
    return n - 2 * t if kind == COMPLETE else n - t


def event_probability(space: MatchingSpace, m: Matching) -> Fraction:
    if space.kind == COMPLETE and 2 * m.size > space.n:
        raise SizeTooLarge(f"|M|={m.size} exceeds N/2 in K_{space.n}")
    if space.kind == BIPARTITE and m.size > space.m:
        raise SizeTooLarge(f"|M|={m.size} exceeds M={space.m}")
    return p_value(space.kind, space.n, m.size)


@dataclass(frozen=True)
class FamilyStats:
    r: int
    sizes: tuple[int, ...]
    counts: dict[int, int]
    d: dict[int, int]
    mu: Fraction
    regular: bool


@dataclass(frozen=True)
class EventFamily:
    space: MatchingSpace
    members: tuple[Matching, ...] = field(default=())

    def __post_init__(self):
        members = tuple(
            m if isinstance(m, Matching) else canonical_form(m) for m in self.members
        )
        for m in members:
            validate(m, self.space)
        if len(set(members)) != len(members):
            raise DuplicateMember("family contains a repeated matching")
        object.__setattr__(self, "members", members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @cached_property
    def stats(self) -> FamilyStats:
        return family_stats(self)

    @cached_property
    def conflicts(self) -> list[set[int]]:
        return conflict_graph(self)

    def probability(self, idx: int) -> Fraction:
        return event_probability(self.space, self.members[idx])

    def embed(self, space: MatchingSpace) -> EventFamily:
        return EventFamily(space, self.members)


def conflict_graph(family: EventFamily) -> list[set[int]]:
    """Adjacency sets over member indices; an edge for each conflicting pair."""
    members = family.members
    adj: list[set[int]] = [set() for _ in members]
    by_vertex: dict[int, list[int]] = {}
    for idx, m in enumerate(members):
        for v in m.vertices:
            by_vertex.setdefault(v, []).append(idx)
    for v, idxs in by_vertex.items():
        for a, b in combinations(idxs, 2):
            if b in adj[a]:
                continue
            if members[a].partner[v] != members[b].partner[v]:
                adj[a].add(b)
                adj[b].add(a)
    return adj


def family_stats(family: EventFamily) -> FamilyStats:
    if not family.members:
        raise EmptyFamily("statistics need at least one member")
    space = family.space
    counts: dict[int, int] = {}
    incid: dict[int, dict[int, int]] = {}
    for m in family.members:
        counts[m.size] = counts.get(m.size, 0) + 1
        per_v = incid.setdefault(m.size, {})
        for v in m.vertices:
            per_v[v] = per_v.get(v, 0) + 1
    sizes = tuple(sorted(counts))
    d = {i: max(incid[i].values()) for i in sizes}

    if space.kind == GENERAL:
        mu = Fraction(0)
    else:
        mu = sum((counts[i] * p_value(space.kind, space.n, i) for i in sizes), Fraction(0))

    verts = space.vertices
    regular = space.kind != GENERAL and all(
        len(incid[i]) == len(verts) and len(set(incid[i].values())) == 1 for i in sizes
    )
    if regular and space.kind == COMPLETE:
        for i in sizes:
            assert d[i] * space.n == 2 * i * counts[i]
    return FamilyStats(max(sizes), sizes, counts, d, mu, regular)


def read_family(lines: Iterable[str], space: MatchingSpace | None = None) -> EventFamily:
    """Parse the line-oriented family format.

    The first nonblank line may be a header object such as
    ``{"space":"complete","n":12}``; every other line is a JSON array of
    vertex pairs.  A header and an explicit ``space`` must agree.
    """
    members = []
    header_space = None
    for lineno, raw in enumerate(lines):
        line = raw.strip()
        if not line:
            continue
        obj = json.loads(line)
        if isinstance(obj, dict):
            if header_space is not None or members:
                raise MatchingError(f"line {lineno + 1}: header must come first")
            header_space = MatchingSpace.from_header(obj)
            continue
        members.append(canonical_form(obj))
    if header_space is not None and space is not None and header_space != space:
        raise MatchingError("family header disagrees with the requested space")
    space = space or header_space
    if space is None:
        raise MatchingError("no space declared (header line or explicit space required)")
    return EventFamily(space, tuple(members))


def write_family(family: EventFamily) -> str:
    lines = [json.dumps(family.space.to_header(), separators=(",", ":"))]
    lines += [json.dumps(m.to_json(), separators=(",", ":")) for m in family.members]
    return "\n".join(lines) + "\n"
