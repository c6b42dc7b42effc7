"""Configuration model: degree sequences, projection, girth, and estimates.

Mini-vertices are labelled 1..N and vertex ``v`` (1-based) owns a contiguous
block of ``d_v`` of them.  Random perfect matchings come from a pool sampler
driven by a counter-based Philox stream, so results depend only on the seed
and the trial index, never on how work is split across threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import comb, lgamma, prod

import numpy as np

from . import kernels
from .matching import EventFamily, Matching, MatchingSpace
from .oracle import TooLarge, double_factorial

BLOCK = 1024
EXACT_MAX_N = 16
SEED_BITS = 64


class OddSum(ValueError):
    pass


class OddProduct(ValueError):
    pass


class NotPerfect(ValueError):
    pass


class BadParams(ValueError):
    pass


@dataclass(frozen=True)
class DegreeSequence:
    degrees: tuple[int, ...]

    def __post_init__(self):
        degs = tuple(int(d) for d in self.degrees)
        object.__setattr__(self, "degrees", degs)
        if not degs:
            raise BadParams("degree sequence must be nonempty")
        if any(d < 1 for d in degs):
            raise BadParams("degrees must be positive")
        if sum(degs) % 2:
            raise OddSum(f"degree sum {sum(degs)} is odd")

    @classmethod
    def regular(cls, n: int, d: int) -> DegreeSequence:
        if n < 1 or d < 1:
            raise BadParams("need n >= 1 and d >= 1")
        if n * d % 2:
            raise OddSum(f"n*d = {n * d} is odd")
        return cls((d,) * n)

    @property
    def n(self) -> int:
        return len(self.degrees)

    @property
    def N(self) -> int:
        return sum(self.degrees)

    @property
    def is_regular(self) -> bool:
        return len(set(self.degrees)) == 1

    def partition(self) -> MiniVertexPartition:
        return MiniVertexPartition.from_degrees(self.degrees)


@dataclass(frozen=True)
class MiniVertexPartition:
    """``vertex_of[x-1]`` is the (1-based) vertex owning mini-vertex ``x``."""

    vertex_of: tuple[int, ...]

    @classmethod
    def from_degrees(cls, degrees) -> MiniVertexPartition:
        return cls(tuple(v + 1 for v, d in enumerate(degrees) for _ in range(d)))

    @property
    def N(self) -> int:
        return len(self.vertex_of)

    @property
    def n(self) -> int:
        return self.vertex_of[-1] if self.vertex_of else 0

    def block(self, v: int) -> range:
        lo = self.vertex_of.index(v) + 1
        hi = lo
        while hi <= self.N and self.vertex_of[hi - 1] == v:
            hi += 1
        return range(lo, hi)

    def blocks(self) -> list[range]:
        out, start = [], 1
        for v in range(1, self.n + 1):
            end = start
            while end <= self.N and self.vertex_of[end - 1] == v:
                end += 1
            out.append(range(start, end))
            start = end
        return out

    def zero_based(self) -> np.ndarray:
        return np.asarray(self.vertex_of, dtype=np.int32) - 1


@dataclass(frozen=True)
class MultiGraph:
    """Edge multiset on vertices 1..n; loops are ``(v, v)``."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        norm = tuple(sorted((a, b) if a <= b else (b, a) for a, b in self.edges))
        object.__setattr__(self, "edges", norm)

    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for a, b in self.edges:
            deg[a - 1] += 1
            deg[b - 1] += 1
        return tuple(deg)


def _as_dseq(dseq) -> DegreeSequence:
    return dseq if isinstance(dseq, DegreeSequence) else DegreeSequence(tuple(dseq))


def project(matching: Matching, partition: MiniVertexPartition) -> MultiGraph:
    N = partition.N
    covered = matching.vertices
    if len(covered) != N or any(not 1 <= x <= N for x in covered):
        raise NotPerfect("matching must cover every mini-vertex 1..N exactly once")
    vo = partition.vertex_of
    return MultiGraph(partition.n, tuple((vo[a - 1], vo[b - 1]) for a, b in matching.edges))


def girth(g: MultiGraph) -> int | float:
    """Shortest cycle length; ``math.inf`` for forests."""
    val = kernels._kernels_py.girth_of_edges([(a - 1, b - 1) for a, b in g.edges], g.n)
    return math.inf if val == 0 else val


# -- sampling ---------------------------------------------------------------


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 1 << SEED_BITS:
        raise BadParams("seed must be a 64-bit unsigned integer")
    return seed


def _block_choices(seed: int, block: int, N: int) -> np.ndarray:
    """Pool-sampler choices for the ``BLOCK`` trials of one block.

    Block ``b`` owns its own Philox key, so any thread can produce it.
    """
    gen = np.random.Generator(np.random.Philox(key=seed | (block << SEED_BITS)))
    highs = np.arange(N - 1, 0, -2, dtype=np.int64)
    return gen.integers(0, highs, size=(BLOCK, N // 2), dtype=np.int64)


def _matching_from_choices(row, N: int) -> Matching:
    pool = list(range(1, N + 1))
    m = N
    edges = []
    for j in row:
        a = pool[m - 1]
        b = pool[int(j)]
        pool[int(j)] = pool[m - 2]
        m -= 2
        edges.append((a, b) if a < b else (b, a))
    return Matching(tuple(sorted(edges)))


def sample_matching(N: int, seed: int, trial: int = 0) -> Matching:
    """Uniform perfect matching of mini-vertices 1..N for the given trial."""
    if N % 2:
        raise OddSum("N must be even")
    seed = _check_seed(seed)
    block, row = divmod(trial, BLOCK)
    return _matching_from_choices(_block_choices(seed, block, N)[row], N)


def sample_multigraph(dseq, seed: int, trial: int = 0) -> MultiGraph:
    dseq = _as_dseq(dseq)
    return project(sample_matching(dseq.N, seed, trial), dseq.partition())


@dataclass(frozen=True)
class McResult:
    estimate: float
    stderr: float
    trials: int
    seed: int
    girths: np.ndarray

    def to_json(self) -> dict:
        return {
            "estimate": self.estimate,
            "stderr": self.stderr,
            "trials": self.trials,
            "seed": self.seed,
        }


def sample_girths(dseq, trials: int, seed: int, threads: int = 1, backend=None) -> np.ndarray:
    """Girth of each trial's projection (0 means acyclic), in trial order."""
    dseq = _as_dseq(dseq)
    if trials < 1:
        raise BadParams("trials must be >= 1")
    if threads < 1:
        raise BadParams("threads must be >= 1")
    seed = _check_seed(seed)
    kern = kernels.get_backend(backend)
    vertex_of = np.ascontiguousarray(dseq.partition().zero_based())
    N, n = dseq.N, dseq.n
    nblocks = -(-trials // BLOCK)

    def run(block: int) -> np.ndarray:
        choices = _block_choices(seed, block, N)
        take = min(BLOCK, trials - block * BLOCK)
        choices = np.ascontiguousarray(choices[:take])
        out = np.zeros(take, dtype=np.int32)
        kern.sample_girths(choices, vertex_of, n, out)
        return out

    if threads == 1 or nblocks == 1:
        parts = [run(b) for b in range(nblocks)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, range(nblocks)))
    return np.concatenate(parts)


def mc_girth_at_least(
    dseq, g: int, trials: int, seed: int = 0, threads: int = 1, backend=None
) -> McResult:
    """Monte Carlo estimate of Pr(girth >= g) with its binomial standard error."""
    girths = sample_girths(dseq, trials, seed, threads, backend)
    hits = int(np.count_nonzero((girths == 0) | (girths >= g)))
    p = hits / trials
    return McResult(p, math.sqrt(p * (1 - p) / trials), trials, int(seed), girths)


# -- exact enumeration ------------------------------------------------------


def exact_girth_histogram(dseq, threads: int = 1, backend=None) -> dict[int | float, int]:
    """Number of perfect matchings of [N] whose projection has each girth."""
    dseq = _as_dseq(dseq)
    N, n = dseq.N, dseq.n
    if N > EXACT_MAX_N:
        raise TooLarge(f"N={N} exceeds the exact enumeration cap {EXACT_MAX_N}")
    kern = kernels.get_backend(backend)
    vertex_of = np.ascontiguousarray(dseq.partition().zero_based())

    def run(first: int) -> np.ndarray:
        hist = np.zeros(N + 1, dtype=np.int64)
        kern.girth_histogram(vertex_of, n, first, hist)
        return hist

    firsts = range(1, N)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, firsts))
    else:
        parts = [run(f) for f in firsts]
    total = np.sum(parts, axis=0)
    return {(math.inf if g == 0 else g): int(c) for g, c in enumerate(total) if c}


def exact_girth_probability(dseq, g: int, threads: int = 1, backend=None) -> Fraction:
    hist = exact_girth_histogram(dseq, threads, backend)
    total = sum(hist.values())
    return Fraction(sum(c for gg, c in hist.items() if gg >= g), total)


# -- cycle event family -----------------------------------------------------


def _cycle_members(blocks: list[range], length: int):
    n = len(blocks)
    if length == 1:
        for blk in blocks:
            for a, b in combinations(blk, 2):
                yield ((a, b),)
        return
    if length == 2:
        for u, v in combinations(range(n), 2):
            for a1, a2 in combinations(blocks[u], 2):
                for b1, b2 in permutations(blocks[v], 2):
                    yield (a1, b1), (a2, b2)
        return
    # v1 is the smallest vertex on the cycle and v2 < v_last fixes the direction.
    for first in range(n):
        rest = range(first + 1, n)
        for tail in permutations(rest, length - 1):
            if tail[0] > tail[-1]:
                continue
            cyc = (first,) + tail
            ends = [list(permutations(blocks[v], 2)) for v in cyc]
            for pick in _product(ends):
                yield tuple(
                    (pick[j][1], pick[(j + 1) % length][0]) for j in range(length)
                )


def _product(lists):
    if not lists:
        yield ()
        return
    for head in lists[0]:
        for rest in _product(lists[1:]):
            yield (head,) + rest


def cycle_family_size(dseq, i: int) -> int:
    """Number of mini-vertex matchings projecting onto an i-cycle."""
    dseq = _as_dseq(dseq)
    degs = dseq.degrees
    if i == 1:
        return sum(comb(d, 2) for d in degs)
    if i == 2:
        return sum(2 * comb(a, 2) * comb(b, 2) for a, b in combinations(degs, 2))
    w = [d * (d - 1) for d in degs]
    # sum over i-subsets of prod(w), times (i-1)!/2 cyclic orders
    e = [1] + [0] * i
    for x in w:
        for j in range(i, 0, -1):
            e[j] += e[j - 1] * x
    return e[i] * math.factorial(i - 1) // 2


def cycle_event_family(dseq, g: int, max_members: int = 200_000) -> EventFamily:
    """Matchings on [N] whose projection is a cycle of length 1..g-1."""
    dseq = _as_dseq(dseq)
    if g < 2:
        raise BadParams("g must be >= 2")
    size = sum(cycle_family_size(dseq, i) for i in range(1, g))
    if size > max_members:
        raise TooLarge(f"cycle family would have {size} members (cap {max_members})")
    if size == 0:
        raise BadParams("no cycles of the requested lengths exist")
    blocks = dseq.partition().blocks()
    members = []
    for i in range(1, g):
        for edges in _cycle_members(blocks, i):
            members.append(Matching(tuple(sorted((a, b) if a < b else (b, a) for a, b in edges))))
    return EventFamily(MatchingSpace.complete(dseq.N), tuple(members))


def cycle_degree_formula(n: int, d: int, i: int) -> int:
    """Closed-form d_i of the cycle family for d-regular sequences."""
    if i == 1:
        return d - 1
    return prod(range(n - i + 1, n)) * d ** (i - 1) * (d - 1) ** i


# -- predictions and counts -------------------------------------------------


def _cycle_exponent(d: int, g: int) -> Fraction:
    return sum((Fraction((d - 1) ** i, 2 * i) for i in range(1, g)), Fraction(0))


def girth_prediction(d: int, g: int) -> float:
    if d < 3 or g < 3:
        raise BadParams("need d >= 3 and g >= 3")
    return math.exp(-_cycle_exponent(d, g))


def condition_ratio(n: int, d: int, g: int) -> float:
    """g^3 d^(2g-3) / n; small values mean the asymptotic regime."""
    return g**3 * d ** (2 * g - 3) / n


def _log_pairings_over_labels(n: int, d: int) -> float:
    """log of (dn)! / ((dn/2)! 2^(dn/2) (d!)^n)."""
    N = n * d
    return lgamma(N + 1) - lgamma(N // 2 + 1) - (N // 2) * math.log(2) - n * lgamma(d + 1)


def regular_count_estimates(n: int, d: int, g: int = 3) -> dict:
    """Asymptotic counts of labelled d-regular graphs (simple, and girth >= g)."""
    if n < 1 or d < 1 or g < 3:
        raise BadParams("need n >= 1, d >= 1, g >= 3")
    if n * d % 2:
        raise OddProduct(f"n*d = {n * d} is odd")
    base = _log_pairings_over_labels(n, d)
    log_os = base + float(Fraction(1 - d * d, 4))
    log_faktor = base - float(_cycle_exponent(d, g))
    return {
        "log_bollobas_os": log_os,
        "bollobas_os": math.exp(log_os),
        "log_wormald_faktor": log_faktor,
        "wormald_faktor": math.exp(log_faktor),
    }


def exact_regular_count(n: int, d: int) -> int:
    """Labelled simple d-regular graphs on n vertices, by pruned brute force."""
    if n < 1 or d < 0:
        raise BadParams("need n >= 1 and d >= 0")
    cap = 8 if d >= 3 else 14
    if n > cap:
        raise TooLarge(f"n={n} exceeds the brute-force cap {cap} for d={d}")
    if d == 0:
        return 1
    if d >= n or n * d % 2:
        return 0
    rem = [d] * n

    def rec(v: int) -> int:
        while v < n and rem[v] == 0:
            v += 1
        if v == n:
            return 1
        need = rem[v]
        cands = [w for w in range(v + 1, n) if rem[w] > 0]
        if len(cands) < need:
            return 0
        total = 0
        rem[v] = 0
        for chosen in combinations(cands, need):
            for w in chosen:
                rem[w] -= 1
            total += rec(v + 1)
            for w in chosen:
                rem[w] += 1
        rem[v] = need
        return total

    return rec(0)


def pairing_count(dseq) -> int:
    return double_factorial(_as_dseq(dseq).N - 1)
