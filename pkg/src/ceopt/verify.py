"""Independent certification of claimed equilibrium distributions.

Everything here is recomputed from the game representation and the raw
support; nothing is trusted from solver state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ResourceLimitError
from .games import (
    GameInstance,
    PureProfile,
    count_vector,
    deviation_utility,
    profiles_with_counts,
    utility,
)

EXPANSION_CAP_DEFAULT = 10**5

PROB_SUM_TOL = 1e-9


@dataclass(frozen=True)
class VerificationReport:
    """Residuals of one distribution against one game.

    Constraint minima are taken over rows that the support can actually
    violate; for CE that means recommendation actions the distribution
    plays with positive probability.
    """

    prob_sum_residual: float
    min_ce_constraint: float
    min_cce_constraint: float
    expected_utilities: tuple[float, ...]
    objective: float

    def within(self, tol: float, concept: str = "ce") -> bool:
        if self.prob_sum_residual > PROB_SUM_TOL + tol:
            return False
        value = (
            self.min_cce_constraint if concept == "cce" else self.min_ce_constraint
        )
        return value >= -tol


def _checked_support(game: GameInstance, dist) -> list[tuple[PureProfile, float]]:
    support = []
    seen = set()
    total = 0.0
    for s, prob in dist.support:
        s = tuple(int(a) for a in s)
        game.validate_profile(s)
        if s in seen:
            raise ValueError(f"profile {s} appears twice in the support")
        seen.add(s)
        if prob < 0.0:
            raise ValueError(f"negative probability {prob} at {s}")
        total += prob
        support.append((s, float(prob)))
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"probabilities sum to {total}, not 1")
    return support


def expected_utilities(game: GameInstance, dist) -> tuple[float, ...]:
    support = _checked_support(game, dist)
    out = [0.0] * game.players
    for s, prob in support:
        for p in range(game.players):
            out[p] += prob * utility(game, p, s)
    return tuple(out)


def _report(game, support, weights=None) -> VerificationReport:
    n = game.players
    exp_u = [0.0] * n
    for s, prob in support:
        for p in range(n):
            exp_u[p] += prob * utility(game, p, s)

    # CE rows (p, i, j): restricted to supported recommendations i
    min_ce = None
    for p in range(n):
        m = game.action_counts[p]
        by_action: dict[int, list[tuple[PureProfile, float]]] = {}
        for s, prob in support:
            by_action.setdefault(s[p], []).append((s, prob))
        for i, rows in by_action.items():
            for j in range(m):
                if j == i:
                    continue
                val = sum(
                    prob * (utility(game, p, s) - deviation_utility(game, p, s, j))
                    for s, prob in rows
                )
                if min_ce is None or val < min_ce:
                    min_ce = val

    # CCE rows (p, j): every profile contributes to every target
    min_cce = None
    for p in range(n):
        for j in range(game.action_counts[p]):
            val = sum(
                prob * (utility(game, p, s) - deviation_utility(game, p, s, j))
                for s, prob in support
            )
            if min_cce is None or val < min_cce:
                min_cce = val

    if weights is None:
        objective = sum(exp_u)
    else:
        objective = sum(w * u for w, u in zip(weights, exp_u))
    return VerificationReport(
        prob_sum_residual=abs(sum(prob for _, prob in support) - 1.0),
        min_ce_constraint=0.0 if min_ce is None else float(min_ce),
        min_cce_constraint=0.0 if min_cce is None else float(min_cce),
        expected_utilities=tuple(exp_u),
        objective=float(objective),
    )


def check_ce(game: GameInstance, dist, weights: Sequence[float] | None = None) -> VerificationReport:
    """Recompute every reachable CE incentive constraint over the support."""
    return _report(game, _checked_support(game, dist), weights)


def check_cce(game: GameInstance, dist, weights: Sequence[float] | None = None) -> VerificationReport:
    """Recompute every unconditional-deviation constraint over the support."""
    return _report(game, _checked_support(game, dist), weights)


def expand_exchangeable(
    game: GameInstance, dist, cap: int = EXPANSION_CAP_DEFAULT
):
    """Spread each count class's probability uniformly over its profiles.

    Returns a CorrelatedDistribution; the number of expanded profiles must
    stay within ``cap``.
    """
    from .colgen import CorrelatedDistribution  # cycle-free at call time

    k = game.action_counts[0]
    total_profiles = 0
    classes = []
    for counts, prob in dist.support:
        counts = tuple(int(c) for c in counts)
        if len(counts) != k or sum(counts) != game.players:
            raise ValueError(f"count vector {counts} does not fit the game")
        size = profiles_with_counts(counts)
        total_profiles += size
        classes.append((counts, float(prob), size))
    if total_profiles > cap:
        raise ResourceLimitError(
            f"expansion needs {total_profiles} profiles, cap is {cap}"
        )
    support = []
    for counts, prob, size in classes:
        share = prob / size
        for s in _profiles_for_counts(counts, game.players):
            support.append((s, share))
    return CorrelatedDistribution(tuple(support))


def _profiles_for_counts(counts: tuple[int, ...], n: int):
    """All profiles whose action tally equals ``counts``, lexicographically."""
    k = len(counts)

    def rec(prefix, remaining):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for a in range(k):
            if remaining[a] > 0:
                remaining[a] -= 1
                prefix.append(a)
                yield from rec(prefix, remaining)
                prefix.pop()
                remaining[a] += 1

    yield from rec([], list(counts))


def exchangeable_constraint_values(game: GameInstance, dist) -> tuple[float, ...]:
    """Per-target CCE constraint values computed purely in count space.

    Entry j equals the constraint value of row (p, j) for any player p under
    the expanded distribution; used to cross-check the expansion.
    """
    rep = game.rep
    f = getattr(rep, "payoffs", None)
    if f is None:
        raise ValueError("count-space constraints need a singleton congestion game")
    n = game.players
    k = rep.num_actions
    out = [0.0] * k
    for counts, prob in dist.support:
        counts = tuple(int(c) for c in counts)
        for j in range(k):
            others = sum(
                counts[a] * f[a, counts[a] - 1] for a in range(k) if a != j and counts[a]
            )
            leave = (n - counts[j]) * f[j, counts[j]] if counts[j] < n else 0.0
            out[j] += prob * (others - leave) / n
    return tuple(out)
