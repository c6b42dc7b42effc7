"""Random family generators shared by the unit and acceptance tests."""

from __future__ import annotations

import random

from lllmatch.matching import EventFamily, Matching, MatchingSpace


def random_matching(space: MatchingSpace, size: int, rng: random.Random) -> Matching:
    if space.kind == "complete":
        verts = rng.sample(range(1, space.n + 1), 2 * size)
        pairs = [(verts[2 * i], verts[2 * i + 1]) for i in range(size)]
    else:
        left = rng.sample(range(1, space.n + 1), size)
        right = rng.sample(range(1, space.m + 1), size)
        pairs = [(a, -b) for a, b in zip(left, right)]
    return Matching(tuple(sorted((min(a, b), max(a, b)) for a, b in pairs)))


def max_size(space: MatchingSpace) -> int:
    return space.n // 2 if space.kind == "complete" else space.m


def random_family(space: MatchingSpace, count: int, rng: random.Random, sizes=None) -> EventFamily:
    top = max_size(space)
    sizes = sizes or range(1, top + 1)
    members: list[Matching] = []
    seen = set()
    attempts = 0
    while len(members) < count and attempts < 50 * count:
        attempts += 1
        m = random_matching(space, rng.choice(list(sizes)), rng)
        if m not in seen:
            seen.add(m)
            members.append(m)
    return EventFamily(space, tuple(members))


def sparse_candidates(n: int, rng: random.Random, tries: int):
    """Random families in K_n that are plausible delta-sparse candidates."""
    from lllmatch.bounds import delta_sparseness

    space = MatchingSpace.complete(n)
    for _ in range(tries):
        size = rng.choice((1, 2))
        fam = random_family(space, rng.randint(1, 5), rng, sizes=(size,))
        if delta_sparseness(fam).holds:
            yield fam


# criterion number -> (passed, detail); filled by test_acceptance, printed by conftest
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def record(number: int, passed: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS[number] = (passed, detail)
    assert passed, f"criterion {number}: {detail}"


def format_results() -> list[str]:
    return [
        f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        for n, (ok, detail) in sorted(ACCEPTANCE_RESULTS.items())
    ]
