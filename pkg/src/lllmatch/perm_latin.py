"""k-cycle-free permutations and Latin rectangles.

Permutations of [n] are perfect matchings of K_{n,n} (``i -> -pi(i)``), so a
k-cycle is a size-k matching and "no k-cycle" is an avoidance event.  Latin
rectangles are built row by row, each new row being a matching that avoids
the symbols already used in every column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from . import kernels
from .bounds import Inapplicable
from .matching import EventFamily, Matching, MatchingSpace
from .oracle import TooLarge

BRUTE_MAX_N = 11
LATIN_MAX_N = 8
BACKTRACK_MAX_N = 6


class BadParams(ValueError):
    pass


class InvalidRectangle(ValueError):
    pass


# -- permutations -----------------------------------------------------------


def _check_nk(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise BadParams(f"need 1 <= k <= n, got k={k}, n={n}")


def k_cycle_event_family(n: int, k: int) -> EventFamily:
    """Every k-cycle on a k-subset of [n], as a size-k matching of K_{n,n}."""
    _check_nk(n, k)
    members = []
    for subset in combinations(range(1, n + 1), k):
        head, rest = subset[0], subset[1:]
        for order in permutations(rest):
            cyc = (head,) + order
            edges = [(cyc[j], -cyc[(j + 1) % k]) for j in range(k)]
            members.append(Matching(tuple(sorted((min(a, b), max(a, b)) for a, b in edges))))
    return EventFamily(MatchingSpace.bipartite(n), tuple(members))


def k_cycle_free_inclusion_exclusion(n: int, k: int) -> int:
    _check_nk(n, k)
    f = math.factorial(n)
    return sum((-1) ** j * f // (math.factorial(j) * k**j) for j in range(n // k + 1))


@lru_cache(maxsize=None)
def _cycle_mask_histogram(n: int, backend: str | None = None) -> tuple[int, ...]:
    if n > BRUTE_MAX_N:
        raise TooLarge(f"brute force over {n}! permutations exceeds the cap n <= {BRUTE_MAX_N}")
    hist = np.zeros(1 << (n + 1), dtype=np.int64)
    kernels.get_backend(backend).cycle_mask_histogram(n, hist)
    return tuple(int(x) for x in hist)


def k_cycle_free_brute(n: int, k: int, backend: str | None = None) -> int:
    _check_nk(n, k)
    hist = _cycle_mask_histogram(n, backend)
    return sum(c for mask, c in enumerate(hist) if c and not mask >> k & 1)


def k_cycle_free_count(n: int, k: int, cross_check: bool = True) -> int:
    """Permutations of [n] with no k-cycle.

    Inclusion-exclusion always; when n is in brute-force range the count is
    also taken over all permutations and the two must agree.
    """
    count = k_cycle_free_inclusion_exclusion(n, k)
    if cross_check and n <= BRUTE_MAX_N:
        brute = k_cycle_free_brute(n, k)
        if brute != count:
            raise AssertionError(f"brute force {brute} != inclusion-exclusion {count}")
    return count


# -- permanents and Latin rectangles ----------------------------------------


def permanent(rows) -> int:
    """Ryser's formula with Gray-code updates; rows are int sequences."""
    n = len(rows)
    if n == 0:
        return 1
    if any(len(r) != n for r in rows):
        raise BadParams("permanent needs a square matrix")
    cols = [[rows[i][j] for i in range(n)] for j in range(n)]
    sums = [0] * n
    total = 0
    prev = 0
    for g in range(1, 1 << n):
        gray = g ^ (g >> 1)
        diff = gray ^ prev
        j = diff.bit_length() - 1
        sign = 1 if gray & diff else -1
        col = cols[j]
        for i in range(n):
            sums[i] += sign * col[i]
        prev = gray
        term = 1
        for s in sums:
            term *= s
            if not term:
                break
        total += -term if (n - bin(gray).count("1")) % 2 else term
    return total


def _perm_from_masks(avail: list[int], n: int) -> int:
    return permanent([[mask >> s & 1 for s in range(n)] for mask in avail])


def _extensions(used: tuple[int, ...], n: int):
    """Yield every row (as a tuple of symbols 0..n-1) compatible with ``used``."""
    row = [0] * n
    taken = 0

    def rec(j: int):
        nonlocal taken
        if j == n:
            yield tuple(row)
            return
        free = ~(used[j] | taken) & ((1 << n) - 1)
        while free:
            low = free & -free
            s = low.bit_length() - 1
            row[j] = s
            taken |= low
            yield from rec(j + 1)
            taken &= ~low
            free ^= low

    yield from rec(0)


def _normal_state(masks, n: int) -> tuple[int, ...]:
    """Sort columns, relabel symbols by their column signature, sort again.

    Each step maps the state to an isomorphic one, so equal keys always mean
    equal completion counts even though the form is not fully canonical.
    """
    cols = sorted(masks)
    for _ in range(2):
        sig = sorted(range(n), key=lambda s: [c >> s & 1 for c in cols])
        remap = [0] * n
        for new, old in enumerate(sig):
            remap[old] = new
        cols = sorted(sum(1 << remap[s] for s in range(n) if c >> s & 1) for c in cols)
    return tuple(cols)


def latin_count_exact(k: int, n: int) -> int:
    """L(k, n) by a row-extension DP over column-usage states.

    The first row is fixed to the identity (factor n!).  States are the
    per-column sets of used symbols up to column and symbol relabelling.
    The last row is a permanent.
    """
    _check_nk(n, k)
    if k == 2 and n > LATIN_MAX_N:
        return math.factorial(n) * derangements(n)
    if n > LATIN_MAX_N or (n == LATIN_MAX_N and k > 4):
        raise TooLarge(f"L({k},{n}) is beyond the DP range")
    fact = math.factorial(n)
    if k == 1:
        return fact
    states = {tuple(sorted(1 << j for j in range(n))): 1}
    for _ in range(k - 2):
        nxt: dict[tuple[int, ...], int] = {}
        for used, mult in states.items():
            for row in _extensions(used, n):
                key = _normal_state([used[j] | 1 << row[j] for j in range(n)], n)
                nxt[key] = nxt.get(key, 0) + mult
        states = nxt
    full = (1 << n) - 1
    total = 0
    for used, mult in states.items():
        total += mult * _perm_from_masks([full & ~u for u in used], n)
    return fact * total


def latin_count_backtrack(k: int, n: int) -> int:
    """Independent count: first row identity, first column increasing below it."""
    _check_nk(n, k)
    if n > BACKTRACK_MAX_N:
        raise TooLarge(f"backtracking is capped at n <= {BACKTRACK_MAX_N}")
    used = [1 << j for j in range(n)]

    def rows(r: int, prev_first: int) -> int:
        if r == k:
            return 1
        total = 0
        for row in _extensions(tuple(used), n):
            if row[0] <= prev_first:
                continue
            for j in range(n):
                used[j] |= 1 << row[j]
            total += rows(r + 1, row[0])
            for j in range(n):
                used[j] &= ~(1 << row[j])
        return total

    return math.factorial(n) * math.factorial(k - 1) * rows(1, 0)


def derangements(n: int) -> int:
    a, b = 1, 0
    if n == 0:
        return 1
    for m in range(2, n + 1):
        a, b = b, (m - 1) * (a + b)
    return b


@dataclass(frozen=True)
class LatinBounds:
    k: int
    n: int
    lower_lat2: Fraction
    upper_felso3: Fraction | None
    log_lower: float
    log_upper: float | None
    log_stein: float
    felso3_applicable: bool

    def to_json(self) -> dict:
        return {
            "lower": self.lower_lat2,
            "log_lower": self.log_lower,
            "upper": self.upper_felso3,
            "log_upper": self.log_upper,
            "log_stein": self.log_stein,
            "stein": math.exp(self.log_stein) if self.log_stein < 700 else None,
            "felso3_applicable": self.felso3_applicable,
        }


def _log_fraction(q: Fraction) -> float:
    return math.log(q.numerator) - math.log(q.denominator)


def latin_bounds(k: int, n: int) -> LatinBounds:
    _check_nk(n, k)
    base = Fraction(math.factorial(n)) ** k
    lower = base
    for t in range(1, k):
        lower *= (1 - Fraction(t, n)) ** n
    applicable = 8 * (k - 1) < n
    upper = None
    if applicable:
        upper = base
        for t in range(1, k):
            upper *= (1 - Fraction(t, n) + Fraction(4 * t * t, n * n)) ** n
    log_stein = k * math.lgamma(n + 1) - math.comb(k, 2) - k**3 / (6 * n)
    return LatinBounds(
        k,
        n,
        lower,
        upper,
        _log_fraction(lower),
        None if upper is None else _log_fraction(upper),
        log_stein,
        applicable,
    )


def felso3_upper(k: int, n: int) -> Fraction:
    b = latin_bounds(k, n)
    if b.upper_felso3 is None:
        raise Inapplicable(f"8(k-1)/n = {8 * (k - 1)}/{n} >= 1")
    return b.upper_felso3


@dataclass(frozen=True)
class LatinRectangle:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows:
            raise InvalidRectangle("need at least one row")
        n = len(rows[0])
        full = set(range(1, n + 1))
        for r in rows:
            if len(r) != n or set(r) != full:
                raise InvalidRectangle(f"row {r} is not a permutation of 1..{n}")
        for j in range(n):
            col = [r[j] for r in rows]
            if len(set(col)) != len(col):
                raise InvalidRectangle(f"column {j + 1} repeats a symbol")

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])


def row_extension_family(rect: LatinRectangle) -> tuple[EventFamily, list[list[int]]]:
    """Forbidden single edges (column j -> used symbol) and their column classes."""
    if rect.k >= rect.n:
        raise InvalidRectangle("a full Latin square has no further row")
    members, classes = [], []
    for j in range(1, rect.n + 1):
        cls = []
        for row in rect.rows:
            cls.append(len(members))
            members.append(Matching(((j, -row[j - 1]),)))
        classes.append(cls)
    return EventFamily(MatchingSpace.bipartite(rect.n), tuple(members)), classes


def all_latin_rectangles(k: int, n: int):
    """Every k x n Latin rectangle (tiny n only)."""
    if n > 5:
        raise TooLarge("rectangle enumeration is capped at n <= 5")
    used = [0] * n
    acc: list[tuple[int, ...]] = []

    def rec():
        if len(acc) == k:
            yield LatinRectangle(tuple(tuple(s + 1 for s in r) for r in acc))
            return
        for row in _extensions(tuple(used), n):
            for j in range(n):
                used[j] |= 1 << row[j]
            acc.append(row)
            yield from rec()
            acc.pop()
            for j in range(n):
                used[j] &= ~(1 << row[j])

    yield from rec()
