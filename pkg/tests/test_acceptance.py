"""Acceptance criteria 1-11, each at its stated tolerance.

Each test records one pass/fail line (printed in the pytest summary, or by
running this file directly) and then asserts it, so a red criterion is a
red test.
"""

from __future__ import annotations

import functools
import io
import math
import random
import time
from fractions import Fraction
from pathlib import Path

from helpers import ACCEPTANCE_RESULTS, format_results, random_family, record, sparse_candidates
from lllmatch.bounds import l5_lower_bound, near_positive_epsilon, upper_bound
from lllmatch.cli import main as cli_main
from lllmatch.config_model import (
    DegreeSequence,
    cycle_event_family,
    exact_girth_probability,
    exact_regular_count,
    mc_girth_at_least,
    regular_count_estimates,
)
from lllmatch.girth_chrom import traversal_probability
from lllmatch.matching import EventFamily, MatchingSpace, canonical_form, read_family
from lllmatch.oracle import (
    avoid_probability_exact,
    check_near_positive,
    check_negative_dependency,
    double_factorial,
    perfect_matchings,
)
from lllmatch.perm_latin import (
    derangements,
    k_cycle_event_family,
    k_cycle_free_brute,
    k_cycle_free_inclusion_exclusion,
    latin_bounds,
    latin_count_exact,
)

FIXTURES = Path(__file__).parent / "fixtures"


def criterion(number: int):
    """Turn an unexpected exception into a recorded FAIL line."""

    def wrap(fn):
        @functools.wraps(fn)
        def run():
            try:
                fn()
            except Exception as exc:
                if number not in ACCEPTANCE_RESULTS:
                    record(number, False, f"raised {type(exc).__name__}: {exc}")
                raise

        return run

    return wrap


@criterion(1)
def test_criterion_01_negative_dependency():
    start = time.perf_counter()
    rng = random.Random(20240101)
    spaces = [MatchingSpace.complete(n) for n in (4, 6, 8)] + [
        MatchingSpace.bipartite(3),
        MatchingSpace.bipartite(4),
    ]
    families = violations = 0
    for space in spaces:
        for _ in range(45):
            fam = random_family(space, rng.randint(1, 6), rng)
            rep = check_negative_dependency(fam)
            families += 1
            violations += len(rep.violations)
    with open(FIXTURES / "c6.jsonl") as fh:
        c6 = check_negative_dependency(read_family(fh))
    c6_exact = bool(c6.violations) and all(
        v.lhs == 1 and v.rhs == Fraction(1, 2) and len(v.subset) == 1 for v in c6.violations
    )
    elapsed = time.perf_counter() - start
    ok = families >= 200 and violations == 0 and c6_exact and elapsed < 300
    record(
        1,
        ok,
        f"{families} families, {violations} violations; C6: "
        f"{[(v.index, v.subset, str(v.lhs), str(v.rhs)) for v in c6.violations]}; {elapsed:.1f}s",
    )


@criterion(2)
def test_criterion_02_sandwich():
    instances = []
    for N in range(10, 17, 2):
        instances.append((f"K{N} singleton", EventFamily(MatchingSpace.complete(N), (canonical_form([[1, 2]]),))))
    for n in range(1, 8):
        for k in range(1, n + 1):
            instances.append((f"{k}-cycles n={n}", k_cycle_event_family(n, k)))
    for g in (2, 3):
        instances.append((f"3-reg n=4 g={g}", cycle_event_family(DegreeSequence.regular(4, 3), g)))
    rng = random.Random(7)
    for n in (10, 12):
        for fam in list(sparse_candidates(n, rng, 60))[:15]:
            instances.append((f"sparse K{n}", fam))
    lower_checked = upper_checked = 0
    failures = []
    for name, fam in instances:
        lo = l5_lower_bound(fam).lower
        up = upper_bound(fam).upper
        if lo is None and up is None:
            continue
        exact = avoid_probability_exact(fam)
        if lo is not None:
            lower_checked += 1
            if not lo <= exact:
                failures.append((name, "lower", lo, float(exact)))
        if up is not None:
            upper_checked += 1
            if not exact <= up:
                failures.append((name, "upper", up, float(exact)))
    ok = not failures and lower_checked > 0 and upper_checked > 0
    record(
        2,
        ok,
        f"{len(instances)} instances, {lower_checked} lower and {upper_checked} upper "
        f"inequalities applicable and checked, failures={failures}",
    )


@criterion(3)
def test_criterion_03_l1_monotone():
    rng = random.Random(3)
    checked = bad = 0
    for n in (4, 6, 8):
        space = MatchingSpace.complete(n)
        for _ in range(50):
            fam = random_family(space, rng.randint(1, 5), rng)
            small = avoid_probability_exact(fam)
            big = avoid_probability_exact(fam.embed(space.with_n(n + 2)))
            checked += 1
            bad += big < small
    record(3, bad == 0 and checked >= 50, f"{checked} families, {bad} decreases")


@criterion(4)
def test_criterion_04_permutations():
    mismatches = []
    for n in range(1, 11):
        for k in range(1, n + 1):
            if k_cycle_free_brute(n, k) != k_cycle_free_inclusion_exclusion(n, k):
                mismatches.append((n, k))
    devs = {}
    for k in (1, 2, 3):
        p = k_cycle_free_inclusion_exclusion(12, k) / math.factorial(12)
        devs[k] = abs(p - math.exp(-1 / k))
    ok = not mismatches and all(d <= 0.02 for d in devs.values())
    record(4, ok, f"brute vs IE mismatches={mismatches}; n=12 deviations={ {k: f'{d:.2e}' for k, d in devs.items()} }")


@criterion(5)
def test_criterion_05_latin():
    problems = []
    upper_checked = 0
    for n in range(1, 8):
        for k in range(1, n + 1):
            L = latin_count_exact(k, n)
            b = latin_bounds(k, n)
            if not b.lower_lat2 <= L:
                problems.append(("lat2", k, n))
            if 8 * (k - 1) < n:
                upper_checked += 1
                if not L <= b.upper_felso3:
                    problems.append(("felso3", k, n))
    for n in range(2, 9):
        if latin_count_exact(2, n) != math.factorial(n) * derangements(n):
            problems.append(("L2", n))
    # beyond n <= 7 the upper bound first bites at k = 2, n >= 9
    extra = 0
    for n in range(9, 21):
        b = latin_bounds(2, n)
        L = math.factorial(n) * derangements(n)
        extra += 1
        if not b.lower_lat2 <= L <= b.upper_felso3:
            problems.append(("bracket", 2, n))
    record(
        5,
        not problems,
        f"problems={problems}; upper bound applicable for {upper_checked} (k,n) pairs with n<=7 "
        f"(k=1 only), plus {extra} brackets at k=2, n=9..20",
    )


def _regular_sequences(max_N: int):
    for d in range(1, max_N + 1):
        for n in range(1, max_N // d + 1):
            if n * d % 2 == 0:
                yield n, d


@criterion(6)
def test_criterion_06_config_exact():
    base = exact_girth_probability(DegreeSequence.regular(4, 3), 3)
    bad = []
    checked = 0
    for n, d in _regular_sequences(14):
        dseq = DegreeSequence.regular(n, d)
        lhs = exact_girth_probability(dseq, 3) * double_factorial(dseq.N - 1)
        rhs = exact_regular_count(n, d) * math.factorial(d) ** n
        checked += 1
        if lhs != rhs:
            bad.append((n, d, lhs, rhs))
    ok = base == Fraction(1296, 10395) and not bad
    record(6, ok, f"P(girth>=3 | n=4,d=3) = {base}; identity over {checked} regular sequences, mismatches={bad}")


@criterion(7)
def test_criterion_07_config_statistical():
    start = time.perf_counter()
    dseq = DegreeSequence.regular(100, 3)
    r3 = mc_girth_at_least(dseq, 3, 100_000, seed=7, threads=4)
    r4 = mc_girth_at_least(dseq, 4, 100_000, seed=7, threads=4)
    elapsed = time.perf_counter() - start
    e3 = abs(r3.estimate - math.exp(-2))
    e4 = abs(r4.estimate - math.exp(-10 / 3))
    ok = e3 <= 0.01 and e4 <= 0.01 and elapsed < 120
    record(
        7,
        ok,
        f"g=3: {r3.estimate:.5f} (|diff| {e3:.4f}); g=4: {r4.estimate:.5f} (|diff| {e4:.4f}); {elapsed:.1f}s",
    )


@criterion(8)
def test_criterion_08_regular_counts():
    ratios = {}
    for n in (4, 6):
        est = regular_count_estimates(n, 3)["bollobas_os"]
        ratios[n] = est / exact_regular_count(n, 3)
    ok = all(0.8 <= r <= 1.3 for r in ratios.values())
    record(8, ok, "formula/exact ratios " + ", ".join(f"n={n}: {r:.4f}" for n, r in ratios.items()) + " (bracket [0.8, 1.3])")


@criterion(9)
def test_criterion_09_traversal():
    mismatches = []
    for N in range(2, 13, 2):
        pms = list(perfect_matchings(MatchingSpace.complete(N)))
        for s in range(N + 1):
            inside = set(range(1, s + 1))
            good = sum(1 for pm in pms if not any(a in inside and b in inside for a, b in pm.edges))
            if Fraction(good, len(pms)) != traversal_probability(N, s):
                mismatches.append((N, s))
    record(9, not mismatches, f"even N<=12, all s: mismatches={mismatches}")


@criterion(10)
def test_criterion_10_near_positive():
    rng = random.Random(10)
    checked = 0
    failed = []
    for n in (10, 12):
        for fam in list(sparse_candidates(n, rng, 120))[:40]:
            eps = near_positive_epsilon(fam)
            rep = check_near_positive(fam, Fraction(eps))
            checked += 1
            if not rep.passed:
                failed.append([m.edges for m in fam.members])
    ok = checked > 0 and not failed
    record(10, ok, f"{checked} delta-sparse families in K10/K12, failures={failed}")


CLI_CASES = [
    ["regular", "--n", "60", "--d", "3", "--g", "4", "--trials", "5000", "--seed", "11"],
    ["regular", "--n", "30", "--d", "3", "--g", "5", "--trials", "3000", "--format", "csv"],
    ["regular", "--n", "4", "--d", "3", "--g", "3", "--exact"],
    ["verify", "--family", str(FIXTURES / "c6.jsonl")],
    ["bounds", "--family", str(FIXTURES / "k6_edges.jsonl"), "--exact"],
    ["permutations", "--n", "9", "--k", "2", "--bounds"],
    ["latin", "--k", "3", "--n", "6", "--exact"],
    ["girthchrom", "--regular", "3,3334", "--k", "3", "--ell", "5", "--spot-check", "20"],
]


def _cli(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli_main(argv, out, err)
    return code, out.getvalue().encode()


@criterion(11)
def test_criterion_11_determinism():
    differing = []
    for case in CLI_CASES:
        outputs = {_cli(["--threads", str(t)] + case) for t in (1, 4, 8)}
        outputs.add(_cli(case + ["--threads", "4"]))
        if len(outputs) != 1:
            differing.append(case[0])
    record(11, not differing, f"{len(CLI_CASES)} invocations x threads 1/4/8 (+ repeat); differing={differing}")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
    print("\n".join(format_results()))
