"""Traversal probabilities, degree statistics and the girth/colour certificate.

A vertex set S is traversed by a perfect matching when no matching edge lies
inside S.  The certificate weighs a lower bound on Pr(girth > ell) against an
upper bound on Pr(some independent set has volume >= N/k); if the first wins,
a graph with both large girth and chromatic number >= k exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .config_model import DegreeSequence, sample_multigraph, girth

LEADING_TERM = "LeadingTerm"
POLICIES = (LEADING_TERM,)
HOLDS, CONDITIONS_FAIL, INDETERMINATE = "Holds", "ConditionsFail", "Indeterminate"


class BadParams(ValueError):
    pass


class Empty(ValueError):
    pass


def traversal_probability(N: int, s: int) -> Fraction:
    """Pr(no edge of a uniform perfect matching of K_N lies inside a fixed s-set)."""
    if N < 0 or N % 2:
        raise BadParams("N must be a non-negative even integer")
    if not 0 <= s <= N:
        raise BadParams("need 0 <= s <= N")
    return Fraction(2**s * comb(N // 2, s), comb(N, s))


def _entropy(x: float) -> float:
    if x <= 0 or x >= 1:
        return 0.0
    return -x * math.log(x) - (1 - x) * math.log(1 - x)


@dataclass(frozen=True)
class TraversalEstimate:
    N: int
    x: float
    leading: float
    log_leading: float
    log_entropy: float
    exact: Fraction | None
    in_regime: bool

    @property
    def ratio(self) -> float | None:
        """exact / leading, when the exact value is available."""
        if self.exact is None:
            return None
        if self.exact == 0:
            return 0.0
        log_exact = math.log(self.exact.numerator) - math.log(self.exact.denominator)
        return math.exp(log_exact - self.log_leading)


def traversal_asymptotic(N: int, x: float) -> TraversalEstimate:
    """Leading term exp(-N x^2 / 2) next to the exact and entropy forms."""
    if N <= 0 or N % 2:
        raise BadParams("N must be a positive even integer")
    if not 0 < x < 0.5:
        raise BadParams("x must lie in (0, 1/2)")
    log_lead = -N * x * x / 2
    s = x * N
    log_ent = s * math.log(2) + (N / 2) * _entropy(2 * x) - N * _entropy(x)
    exact = None
    s_int = round(s)
    if abs(s - s_int) < 1e-9:
        exact = traversal_probability(N, s_int)
    lo = math.log(N) ** 2 / N ** (1 / 3)
    return TraversalEstimate(N, x, math.exp(log_lead), log_lead, log_ent, exact, lo <= x <= 0.25)


@dataclass(frozen=True)
class DegreeStats:
    degrees: tuple[int, ...]
    Delta: int
    dbar: Fraction
    dtilde: Fraction

    @property
    def total_volume(self) -> int:
        return sum(self.degrees)

    def vol(self, S) -> int:
        return sum(self.degrees[i - 1] for i in S)


def degree_stats(dseq) -> DegreeStats:
    degs = tuple(dseq.degrees if isinstance(dseq, DegreeSequence) else dseq)
    if not degs:
        raise Empty("degree sequence is empty")
    total = sum(degs)
    return DegreeStats(
        degs,
        max(degs),
        Fraction(total, len(degs)),
        Fraction(sum(d * d for d in degs), total),
    )


@dataclass(frozen=True)
class Condition:
    name: str
    lhs: float
    rhs: float
    holds: bool

    def to_json(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


@dataclass(frozen=True)
class ExistenceCertificate:
    n: int
    N: int
    k: int
    ell: int
    policy: str
    conditions: tuple[Condition, ...]
    epsilon: float | None
    inflation: float | None
    log_girth_bound: float | None
    log_color_bound: float
    verdict: str
    reasons: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "k": self.k,
            "ell": self.ell,
            "policy": self.policy,
            "conditions": [c.to_json() for c in self.conditions],
            "epsilon": self.epsilon,
            "inflation": self.inflation,
            "log_girth_bound": self.log_girth_bound,
            "log_color_bound": self.log_color_bound,
            "verdict": self.verdict,
            "reasons": list(self.reasons),
        }


def existence_certificate(
    dseq, k: int, ell: int, policy: str = LEADING_TERM, margin: float = 0.1
) -> ExistenceCertificate:
    """Check the three density conditions and compare the two log-bounds.

    ``inflation`` is N^ell / (N - 2 ell + 1)^ell, the finite-size factor that
    the asymptotic statement absorbs into its unspecified ell_0.
    """
    if policy not in POLICIES:
        raise BadParams(f"unknown policy {policy!r}")
    if k < 2 or ell < 1:
        raise BadParams("need k >= 2 and ell >= 1")
    st = degree_stats(dseq)
    n, N, Delta = len(st.degrees), st.total_volume, st.Delta
    dt1 = float(st.dtilde) - 1
    conds = (
        Condition("suru", float(st.dtilde), 3.0, st.dtilde >= 3),
        Condition("kas", 8 * k * k * dt1**ell, float(N), 8 * k * k * dt1**ell < N),
        Condition(
            "deltas",
            4 * ell * Delta * dt1 ** (ell - 1),
            N / 10,
            40 * ell * Delta * dt1 ** (ell - 1) < N,
        ),
    )
    log_color = n * math.log(2) - N / (2 * k * k)
    reasons = [f"condition {c.name} fails" for c in conds if not c.holds]
    eps = infl = log_girth = None
    if N - 2 * ell + 1 <= 0:
        reasons.append("N - 2 ell + 1 must be positive")
    else:
        infl = math.exp(ell * (math.log(N) - math.log(N - 2 * ell + 1)))
        eps = 4 * ell * Delta / N * dt1 ** (ell - 1) * infl
        log_girth = -(1 + 2 * eps) * 2 * dt1**ell * infl
        if eps >= 0.125:
            reasons.append("epsilon >= 1/8")
    if reasons:
        verdict = CONDITIONS_FAIL
    else:
        gap = log_girth - log_color
        scale = min(abs(log_girth), abs(log_color))
        if gap > margin * scale:
            verdict = HOLDS
        else:
            verdict = INDETERMINATE
            reasons.append(
                "girth bound does not clear the colour bound by the margin"
                if gap > 0
                else "colour bound exceeds girth bound"
            )
    return ExistenceCertificate(
        n, N, k, ell, policy, conds, eps, infl, log_girth, log_color, verdict, tuple(reasons)
    )


# -- demonstration spot check (not part of any guarantee) --------------------


def max_independent_volume(n: int, edges, degrees) -> int:
    """Largest total degree of an independent vertex set; exponential, n <= 24."""
    if n > 24:
        raise BadParams("exact independent-set search is capped at n <= 24")
    nbr = [0] * n
    loop = 0
    for a, b in edges:
        a -= 1
        b -= 1
        if a == b:
            loop |= 1 << a
        else:
            nbr[a] |= 1 << b
            nbr[b] |= 1 << a
    best = 0

    def rec(cand: int, vol: int):
        nonlocal best
        if vol > best:
            best = vol
        if not cand:
            return
        rest = sum(degrees[i] for i in range(n) if cand >> i & 1)
        if vol + rest <= best:
            return
        v = (cand & -cand).bit_length() - 1
        rec(cand & ~(1 << v) & ~nbr[v], vol + degrees[v])
        rec(cand & ~(1 << v), vol)

    rec(((1 << n) - 1) & ~loop, 0)
    return best


def spot_check(dseq, k: int, ell: int, trials: int, seed: int = 0) -> dict:
    """Sample graphs; count those with girth > ell and no independent set of volume >= N/k."""
    dseq = dseq if isinstance(dseq, DegreeSequence) else DegreeSequence(tuple(dseq))
    high_girth = witnesses = 0
    for t in range(trials):
        g = sample_multigraph(dseq, seed, t)
        if girth(g) <= ell:
            continue
        high_girth += 1
        if k * max_independent_volume(dseq.n, g.edges, dseq.degrees) < dseq.N:
            witnesses += 1
    return {"trials": trials, "seed": seed, "girth_above_ell": high_girth, "witnesses": witnesses}
