"""Local-lemma lower bounds, near-positive upper bounds and the asymptotic bracket.

Hypotheses are checked in exact rational arithmetic.  The bounds themselves
involve square roots and long products, so they are evaluated in 113-bit
interval arithmetic and converted to floats with directed rounding: lower
bounds round toward zero, upper bounds toward one.  A reported bracket is
therefore never tighter than the true one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from mpmath import libmp
from mpmath.ctx_iv import MPIntervalContext

from .matching import (
    GENERAL,
    EventFamily,
    MatchingError,
    SizeTooLarge,
    UnsupportedSpace,
    in_conflict,
    p_value,
    shrink_n,
)

_iv = MPIntervalContext()
_iv.prec = 113

AUTO = "auto"
SIMPLE_EPSILON_MAX = Fraction(14, 100)


class Inapplicable(ValueError):
    """A bound's hypotheses fail for this family."""


class Infeasible(ValueError):
    def __init__(self, index: int, lhs, rhs):
        super().__init__(f"local lemma condition fails at index {index}: {lhs} > {rhs}")
        self.index = index
        self.lhs = lhs
        self.rhs = rhs


class DimensionMismatch(ValueError):
    pass


class BadEpsilon(ValueError):
    pass


class NotRegular(ValueError):
    pass


class BadPartition(ValueError):
    pass


class ClassNotExclusive(ValueError):
    pass


# --- interval helpers -------------------------------------------------------


def _ivq(q) -> object:
    q = Fraction(q)
    return _iv.mpf(q.numerator) / _iv.mpf(q.denominator)


def _floor(x) -> float:
    return libmp.to_float(x._mpi_[0], rnd=libmp.round_floor)


def _ceil(x) -> float:
    return libmp.to_float(x._mpi_[1], rnd=libmp.round_ceiling)


def _clamp01(v: float) -> float:
    return min(1.0, max(0.0, v))


def _log_product(factors: Iterable[tuple[object, int]]):
    """Enclosure of sum(count * log(factor)); None when some factor can be <= 0."""
    total = _iv.mpf(0)
    for factor, count in factors:
        if count == 0:
            continue
        if factor.a <= 0:
            return None
        total += count * _iv.log(factor)
    return total


def _fmt(v) -> str | None:
    if v is None:
        return None
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    return format(float(v), ".17g")


# --- reports ----------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    """One named hypothesis: ``lhs <relation> rhs`` evaluated exactly."""

    name: str
    lhs: object
    rhs: object
    holds: bool

    def to_json(self) -> dict:
        return {"name": self.name, "lhs": _fmt(self.lhs), "rhs": _fmt(self.rhs), "holds": self.holds}


@dataclass(frozen=True)
class BoundReport:
    lower: float | None = None
    upper: float | None = None
    asymptotic: float | None = None
    validity: tuple[Check, ...] = ()
    extras: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "lower": _fmt(self.lower),
            "upper": _fmt(self.upper),
            "asymptotic": _fmt(self.asymptotic),
            "validity": [c.to_json() for c in self.validity],
        }
        for key in sorted(self.extras):
            out[key] = _fmt(self.extras[key])
        return out


@dataclass(frozen=True)
class SparsenessReport:
    delta: Fraction
    delta_min_cond3: Fraction
    worst_member: int | None
    cond1_holds: bool
    cond2: Check
    cond3: Check
    cond4: Check

    @property
    def cond2_holds(self) -> bool:
        return self.cond2.holds

    @property
    def cond4_holds(self) -> bool:
        return self.cond4.holds

    @property
    def holds(self) -> bool:
        return self.cond1_holds and self.cond2.holds and self.cond3.holds and self.cond4.holds

    def checks(self) -> tuple[Check, ...]:
        return (
            Check("no_member_contains_another", self.cond1_holds, True, self.cond1_holds),
            self.cond2,
            self.cond3,
            self.cond4,
        )

    def to_json(self) -> dict:
        return {
            "delta": _fmt(self.delta),
            "delta_min_cond3": _fmt(self.delta_min_cond3),
            "holds": self.holds,
            "checks": [c.to_json() for c in self.checks()],
        }


# --- generic local lemma ----------------------------------------------------


def lll_lower_bound(
    probabilities: Sequence, graph: Sequence[Iterable[int]], x: Sequence
) -> Fraction:
    """Exact local-lemma bound prod(1 - x_i) once every condition is verified.

    ``graph[i]`` lists the neighbours of event ``i``.  Floats in ``x`` are
    taken at their exact binary value.
    """
    if not (len(probabilities) == len(graph) == len(x)):
        raise DimensionMismatch(
            f"{len(probabilities)} probabilities, {len(graph)} vertices, {len(x)} weights"
        )
    xs = [Fraction(v) for v in x]
    if any(not (0 <= v < 1) for v in xs):
        raise ValueError("weights must lie in [0, 1)")
    for i, p in enumerate(probabilities):
        rhs = xs[i]
        for j in graph[i]:
            rhs *= 1 - xs[j]
        if Fraction(p) > rhs:
            raise Infeasible(i, Fraction(p), rhs)
    out = Fraction(1)
    for v in xs:
        out *= 1 - v
    return out


def _require_closed_form(family: EventFamily) -> None:
    if family.space.kind == GENERAL:
        raise UnsupportedSpace("bounds need a complete or complete bipartite space")


def simple_lower_bound(family: EventFamily, epsilon) -> BoundReport:
    """exp(-(1+3 eps) mu) when every probability and neighbour sum is below eps."""
    eps = Fraction(epsilon)
    if not (0 < eps < SIMPLE_EPSILON_MAX):
        raise BadEpsilon(f"epsilon must lie in (0, 0.14), got {epsilon}")
    _require_closed_form(family)
    if not family.members:
        return BoundReport(lower=1.0, validity=(), extras={"mu": Fraction(0)})
    probs = [family.probability(i) for i in range(len(family))]
    adj = family.conflicts
    max_p = max(probs)
    max_nb = max(sum((probs[j] for j in adj[i]), Fraction(0)) for i in range(len(probs)))
    checks = (
        Check("max_probability_below_epsilon", max_p, eps, max_p < eps),
        Check("max_neighbour_sum_below_epsilon", max_nb, eps, max_nb < eps),
    )
    mu = family.stats.mu
    lower = None
    if all(c.holds for c in checks):
        lower = _clamp01(_floor(_iv.exp(-(1 + 3 * _ivq(eps)) * _ivq(mu))))
    return BoundReport(lower=lower, validity=checks, extras={"mu": mu})


def _degree_sum(family: EventFamily, n: int, d: dict[int, int] | None = None) -> Fraction:
    """sum_j d_j p_{n,j}; raises SizeTooLarge when p is undefined at n."""
    st = family.stats
    d = st.d if d is None else d
    kind = family.space.kind
    return sum((d[j] * p_value(kind, n, j) for j in st.sizes), Fraction(0))


def l5_lower_bound(family: EventFamily, d: dict[int, int] | None = None) -> BoundReport:
    """Product lower bound with x_i = y p_{N,i}, y the largest root of 1 = y(1 - 2 r y S)."""
    _require_closed_form(family)
    if not family.members:
        return BoundReport(lower=1.0)
    st = family.stats
    s = _degree_sum(family, family.space.n, d)
    lhs = 8 * st.r * s
    check = Check("discriminant_nonnegative", lhs, Fraction(1), lhs <= 1)
    if not check.holds:
        return BoundReport(validity=(check,), extras={"degree_sum": s})
    root = _iv.sqrt(1 - _ivq(lhs))
    kind, n = family.space.kind, family.space.n
    factors = [(1 - 2 * _ivq(p_value(kind, n, i)) / (1 + root), st.counts[i]) for i in st.sizes]
    logp = _log_product(factors)
    lower = 0.0 if logp is None else _clamp01(_floor(_iv.exp(logp)))
    return BoundReport(lower=lower, validity=(check,), extras={"degree_sum": s})


def l6_ratio_factor(family: EventFamily) -> tuple[float, float]:
    """Enclosure of 2/(1+sqrt(1-8 r sum d_i p_{N,i})), the N -> N+2 growth cap."""
    st = family.stats
    lhs = 8 * st.r * _degree_sum(family, family.space.n)
    if lhs > 1:
        raise Inapplicable("negative discriminant")
    val = 2 / (1 + _iv.sqrt(1 - _ivq(lhs)))
    return _floor(val), _ceil(val)


# --- sparseness, near-positive epsilon, upper bound ------------------------


def _edge_index(family: EventFamily) -> dict[tuple[int, int], list[int]]:
    by_edge: dict[tuple[int, int], list[int]] = {}
    for idx, m in enumerate(family.members):
        for e in m.edges:
            by_edge.setdefault(e, []).append(idx)
    return by_edge


def _has_nested_pair(family: EventFamily) -> bool:
    members = family.members
    by_edge = _edge_index(family)
    for a in members:
        for j in by_edge[a.edges[0]]:
            b = members[j]
            if a.size < b.size and a.issubset(b):
                return True
    return False


def _cond3(family: EventFamily) -> tuple[Fraction, int | None]:
    members = family.members
    kind, n = family.space.kind, family.space.n
    by_edge = _edge_index(family)
    best, worst = Fraction(0), None
    for fi, f in enumerate(members):
        touching = {j for e in f.edges for j in by_edge[e] if j != fi}
        reduced = {members[j] - f for j in touching if not in_conflict(f, members[j])}
        total = sum((p_value(kind, n, m.size) for m in reduced), Fraction(0))
        if worst is None or total > best:
            best, worst = total, fi
    return best, worst


def delta_sparseness(family: EventFamily, delta=AUTO) -> SparsenessReport:
    """Evaluate the four sparseness conditions; ``delta='auto'`` uses the condition-3 minimum."""
    _require_closed_form(family)
    if not family.members:
        zero = Fraction(0)
        ok = Check("trivial", zero, zero, True)
        return SparsenessReport(zero, zero, None, True, ok, ok, ok)
    st = family.stats
    r = st.r
    cond1 = not _has_nested_pair(family)
    dmin, worst = _cond3(family)
    dl = dmin if delta == AUTO else Fraction(delta)
    try:
        s2 = _degree_sum(family, shrink_n(family.space.kind, family.space.n, r - 1))
        rhs2 = Fraction(1, 8 * r) - dl
        cond2 = Check("degree_sum_below_one_over_8r_minus_delta", s2, rhs2, s2 < rhs2)
    except SizeTooLarge:
        cond2 = Check("degree_sum_below_one_over_8r_minus_delta", None, None, False)
    cond3 = Check("overlap_sum_at_most_delta", dmin, dl, dmin <= dl)
    cond4 = Check("sixteen_r_delta_below_one", 16 * r * dl, Fraction(1), 16 * r * dl < 1)
    return SparsenessReport(dl, dmin, worst, cond1, cond2, cond3, cond4)


def _near_positive_factor(family: EventFamily, delta: Fraction):
    """Interval for (1 - 2 delta) prod_i (1 + sqrt(disc_i)) / 2."""
    st = family.stats
    kind, n = family.space.kind, family.space.n
    q = 1 - 2 * _ivq(delta)
    for i in range(st.r):
        try:
            lhs = 8 * st.r * _degree_sum(family, shrink_n(kind, n, i))
        except SizeTooLarge as exc:
            raise Inapplicable(str(exc)) from exc
        if lhs > 1:
            raise Inapplicable(f"negative discriminant at shrink step {i}")
        q *= (1 + _iv.sqrt(1 - _ivq(lhs))) / 2
    return q


def _resolve_delta(family: EventFamily, delta) -> Fraction:
    if delta == AUTO:
        return _cond3(family)[0] if family.members else Fraction(0)
    return Fraction(delta)


def near_positive_epsilon(family: EventFamily, delta=AUTO) -> float:
    """Near-positive epsilon for a sparse family, rounded upward."""
    _require_closed_form(family)
    if not family.members:
        return 0.0
    q = _near_positive_factor(family, _resolve_delta(family, delta))
    return _clamp01(_ceil(1 - q))


def upper_bound(family: EventFamily, delta=AUTO) -> BoundReport:
    """prod_M (1 - (1-eps) Pr(A_M)) for a delta-sparse family, rounded upward."""
    _require_closed_form(family)
    if not family.members:
        return BoundReport(upper=1.0, extras={"delta": Fraction(0), "epsilon": 0.0})
    sp = delta_sparseness(family, delta)
    checks = sp.checks()
    extras = {"delta": sp.delta}
    if not sp.holds:
        return BoundReport(validity=checks, extras=extras)
    try:
        q = _near_positive_factor(family, sp.delta)
    except Inapplicable:
        return BoundReport(validity=checks, extras=extras)
    st = family.stats
    kind, n = family.space.kind, family.space.n
    factors = [(1 - q * _ivq(p_value(kind, n, i)), st.counts[i]) for i in st.sizes]
    logp = _log_product(factors)
    upper = 0.0 if logp is None else _clamp01(_ceil(_iv.exp(logp)))
    extras["epsilon"] = _clamp01(_ceil(1 - q))
    return BoundReport(upper=upper, validity=checks, extras=extras)


def asymptotic_bracket(family: EventFamily) -> BoundReport:
    """Lower, upper and exp(-mu) for a regular family, with regime ratios.

    The asymptotic hypotheses are growth conditions, so instead of pass/fail
    flags the report carries ``mu r^1.5 / sqrt(N)`` and ``delta mu``.
    """
    _require_closed_form(family)
    if not family.members:
        return BoundReport(lower=1.0, upper=1.0, asymptotic=1.0)
    st = family.stats
    if not st.regular:
        raise NotRegular("asymptotic bracket needs a regular family")
    lo = l5_lower_bound(family)
    up = upper_bound(family, AUTO)
    mu = st.mu
    delta = up.extras["delta"]
    extras = {
        "mu": mu,
        "delta": delta,
        "regime_ratio": float(mu) * st.r**1.5 / math.sqrt(family.space.n),
        "delta_mu": float(delta * mu),
    }
    if "epsilon" in up.extras:
        extras["epsilon"] = up.extras["epsilon"]
    return BoundReport(
        lower=lo.lower,
        upper=up.upper,
        asymptotic=math.exp(-float(mu)),
        validity=lo.validity + up.validity,
        extras=extras,
    )


# --- quotient ---------------------------------------------------------------


def quotient_events(
    family: EventFamily, partition: Sequence[Iterable[int]]
) -> tuple[list[set[int]], list[Fraction]]:
    """Quotient conflict graph over classes of pairwise-exclusive members.

    Classes J, K are adjacent when some member of J conflicts with some member
    of K.  Returns the class adjacency and each class's probability sum.
    """
    classes = [sorted(set(c)) for c in partition]
    n = len(family)
    seen = sorted(i for c in classes for i in c)
    if seen != list(range(n)) or any(not c for c in classes):
        raise BadPartition("partition must cover every member exactly once with nonempty classes")
    adj = family.conflicts
    for c in classes:
        for a in c:
            for b in c:
                if a < b and b not in adj[a]:
                    raise ClassNotExclusive(f"members {a} and {b} share a class but do not conflict")
    owner = {i: k for k, c in enumerate(classes) for i in c}
    qadj: list[set[int]] = [set() for _ in classes]
    for i in range(n):
        for j in adj[i]:
            ci, cj = owner[i], owner[j]
            if ci != cj:
                qadj[ci].add(cj)
                qadj[cj].add(ci)
    _require_closed_form(family)
    probs = [sum((family.probability(i) for i in c), Fraction(0)) for c in classes]
    return qadj, probs


__all__ = [
    "AUTO",
    "BadEpsilon",
    "BadPartition",
    "BoundReport",
    "Check",
    "ClassNotExclusive",
    "DimensionMismatch",
    "Inapplicable",
    "Infeasible",
    "MatchingError",
    "NotRegular",
    "SparsenessReport",
    "asymptotic_bracket",
    "delta_sparseness",
    "l5_lower_bound",
    "l6_ratio_factor",
    "lll_lower_bound",
    "near_positive_epsilon",
    "quotient_events",
    "simple_lower_bound",
    "upper_bound",
]
