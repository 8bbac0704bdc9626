"""Pricing / separation oracles built on deviation-adjusted welfare.

The pricing subproblem behind the optimal-equilibrium solvers asks: given
nonnegative prices on the incentive constraints (a *deviation plan*) and a
threshold t, is there a pure profile whose welfare, adjusted by the priced
incentive gaps, exceeds t?  Three solvers are provided:

* a generic brute-force oracle over all profiles (vectorized),
* a message-passing dynamic program for polymatrix games on forests,
* a count-vector dynamic program for singleton congestion games under
  player-symmetric coarse prices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import UnsupportedStructureError
from .games import (
    CountVector,
    GameInstance,
    PolymatrixEdge,
    PolymatrixGame,
    PureProfile,
    SingletonCongestionGame,
    deviation_utility,
    utility,
)

PRICING_EPS_DEFAULT = 1e-7


def _validated_prices(items, label: str) -> dict:
    out = {}
    for key, v in items:
        v = float(v)
        if v < 0.0:
            raise ValueError(f"{label} price at {key} is negative ({v})")
        out[key] = v
    return out


@dataclass(frozen=True)
class DeviationPlan:
    """Nonnegative prices on CE incentive rows, keyed by (player, i, j), i != j.

    Missing keys are implicitly zero.
    """

    y: Mapping[tuple[int, int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        for (p, i, j) in self.y:
            if i == j:
                raise ValueError(f"deviation plan key ({p},{i},{j}) has i == j")
        object.__setattr__(self, "y", _validated_prices(self.y.items(), "deviation"))

    def __getitem__(self, key) -> float:
        return self.y.get(key, 0.0)

    def items(self):
        return self.y.items()


@dataclass(frozen=True)
class CoarseDeviationPlan:
    """Nonnegative prices on CCE incentive rows, keyed by (player, j)."""

    y: Mapping[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "y", _validated_prices(self.y.items(), "coarse"))

    def __getitem__(self, key) -> float:
        return self.y.get(key, 0.0)

    def items(self):
        return self.y.items()

    def is_symmetric(self, atol: float = 0.0) -> bool:
        """True iff the price for target j is the same for every player."""
        by_target: dict[int, float] = {}
        for (_, j), v in self.y.items():
            ref = by_target.setdefault(j, v)
            if abs(v - ref) > atol:
                return False
        return True


Plan = Union[DeviationPlan, CoarseDeviationPlan]


@dataclass(frozen=True)
class OracleAnswer:
    """Outcome of one pricing query: the best profile (or count vector for
    the symmetric oracle), its adjusted welfare, and whether it beats the
    threshold."""

    found: bool
    witness: Union[PureProfile, CountVector]
    value: float


# Single-profile evaluations ----------------------------------------------


def dasw_value(game: GameInstance, plan: DeviationPlan, s: Sequence[int]) -> float:
    """Deviation-adjusted social welfare at s: welfare plus the priced
    incentive gaps of the recommended actions."""
    game.validate_profile(s)
    base = [utility(game, p, s) for p in range(game.players)]
    adj = [0.0] * game.players
    for (p, i, j), yv in plan.items():
        if i == s[p]:
            adj[p] += yv * (base[p] - deviation_utility(game, p, s, j))
    return sum(base[p] + adj[p] for p in range(game.players))


def weighted_dasw_value(
    game: GameInstance,
    plan: DeviationPlan,
    weights: Sequence[float],
    s: Sequence[int],
) -> float:
    """Like ``dasw_value`` but the base utility of player p is scaled by
    ``weights[p]`` (the incentive terms are not scaled)."""
    if len(weights) != game.players:
        raise ValueError(f"need {game.players} weights, got {len(weights)}")
    game.validate_profile(s)
    base = [utility(game, p, s) for p in range(game.players)]
    adj = [0.0] * game.players
    for (p, i, j), yv in plan.items():
        if i == s[p]:
            adj[p] += yv * (base[p] - deviation_utility(game, p, s, j))
    return sum(weights[p] * base[p] + adj[p] for p in range(game.players))


def coarse_dasw_value(
    game: GameInstance, plan: CoarseDeviationPlan, s: Sequence[int]
) -> float:
    """Coarse deviation-adjusted social welfare at s (unconditional targets)."""
    game.validate_profile(s)
    base = [utility(game, p, s) for p in range(game.players)]
    adj = [0.0] * game.players
    for (p, j), yv in plan.items():
        adj[p] += yv * (base[p] - deviation_utility(game, p, s, j))
    return sum(base[p] + adj[p] for p in range(game.players))


def coarse_to_ce_plan(game: GameInstance, plan: CoarseDeviationPlan) -> DeviationPlan:
    """Lift coarse prices to CE form by copying each (p, j) price onto every
    recommended action i != j; adjusted welfares coincide."""
    y: dict[tuple[int, int, int], float] = {}
    for (p, j), yv in plan.items():
        game.validate_player(p)
        for i in range(game.action_counts[p]):
            if i != j:
                y[(p, i, j)] = yv
    return DeviationPlan(y)


# Brute-force oracle -------------------------------------------------------


def pricing_values(
    game: GameInstance,
    weights: Sequence[float],
    plan: Plan | None,
    cap: int | None = None,
) -> np.ndarray:
    """Adjusted objective value of every profile, in profile-index order."""
    kwargs = {} if cap is None else {"cap": cap}
    u = game.dense_utilities(**kwargs)
    sp = game.player_actions_by_index()
    radices = game.radices
    vals = np.asarray(weights, dtype=float) @ u
    if plan is None:
        return vals
    idx = np.arange(game.profile_count)
    if isinstance(plan, CoarseDeviationPlan):
        for (p, j), yv in plan.items():
            if yv == 0.0:
                continue
            dev = idx + (j - sp[p]) * radices[p]
            vals = vals + yv * (u[p] - u[p, dev])
    else:
        for (p, i, j), yv in plan.items():
            if yv == 0.0:
                continue
            mask = sp[p] == i
            dev = idx[mask] + (j - i) * radices[p]
            vals[mask] += yv * (u[p, mask] - u[p, dev])
    return vals


def oracle_bruteforce(
    game: GameInstance,
    weights: Sequence[float],
    plan: Plan | None,
    t: float,
    eps: float = PRICING_EPS_DEFAULT,
    cap: int | None = None,
) -> OracleAnswer:
    """Enumerate all profiles; report the adjusted-welfare maximizer.

    Ties break to the lexicographically first profile.  ``found`` is True
    only for a strict improvement beyond the eps slack.
    """
    vals = pricing_values(game, weights, plan, cap)
    best = int(np.argmax(vals))
    value = float(vals[best])
    return OracleAnswer(value > t + eps, game.profile_from_index(best), value)


# Polymatrix: adjusted game + tree dynamic program --------------------------


def _require_polymatrix(game: GameInstance) -> PolymatrixGame:
    if not isinstance(game.rep, PolymatrixGame):
        raise ValueError("operation requires a polymatrix game")
    return game.rep


def polymatrix_adjust(
    game: GameInstance, weights: Sequence[float], plan: DeviationPlan
) -> GameInstance:
    """Fold weights and deviation prices into the edge matrices so that the
    adjusted game's social welfare equals the weighted deviation-adjusted
    welfare of the original at every profile."""
    rep = _require_polymatrix(game)
    if len(weights) != game.players:
        raise ValueError(f"need {game.players} weights, got {len(weights)}")
    price_mat = [
        np.zeros((m, m)) for m in game.action_counts
    ]  # price_mat[p][i, j] = y^p_{i,j}
    for (p, i, j), yv in plan.items():
        game.validate_player(p)
        m = game.action_counts[p]
        if not (0 <= i < m and 0 <= j < m):
            raise ValueError(f"plan key ({p},{i},{j}) out of range")
        price_mat[p][i, j] = yv

    def adjust(a: np.ndarray, p: int) -> np.ndarray:
        w = price_mat[p]
        row_scale = weights[p] + w.sum(axis=1)
        return row_scale[:, None] * a - w @ a

    edges = tuple(
        PolymatrixEdge(e.p, e.q, adjust(e.a_pq, e.p), adjust(e.a_qp, e.q))
        for e in rep.edges
    )
    return GameInstance(PolymatrixGame(game.action_counts, edges))


def _forest_adjacency(game: GameInstance) -> list[list[tuple[int, np.ndarray, np.ndarray]]]:
    """Adjacency lists (q, A_pq, A_qp) with rows of A_pq indexed by p's
    actions; raises if the edge graph has a cycle."""
    rep = _require_polymatrix(game)
    adj: list[list[tuple[int, np.ndarray, np.ndarray]]] = [
        [] for _ in range(game.players)
    ]
    for e in rep.edges:
        adj[e.p].append((e.q, e.a_pq, e.a_qp))
        adj[e.q].append((e.p, e.a_qp, e.a_pq))
    # cycle check via iterative DFS
    seen = [False] * game.players
    for root in range(game.players):
        if seen[root]:
            continue
        stack = [(root, -1)]
        seen[root] = True
        while stack:
            node, parent = stack.pop()
            for q, _, _ in adj[node]:
                if q == parent:
                    continue
                if seen[q]:
                    raise UnsupportedStructureError(
                        "polymatrix edge graph contains a cycle"
                    )
                seen[q] = True
                stack.append((q, node))
    return adj


def is_forest(game: GameInstance) -> bool:
    if not isinstance(game.rep, PolymatrixGame):
        return False
    try:
        _forest_adjacency(game)
    except UnsupportedStructureError:
        return False
    return True


def tree_polymatrix_opt(
    game: GameInstance, direction: str = "max"
) -> tuple[PureProfile, float]:
    """Optimal-social-welfare profile of a forest polymatrix game by passing
    per-action subtree values from the leaves to each root.

    Ties break to the smallest action index at every choice.
    """
    if direction not in ("max", "min"):
        raise ValueError(f"direction must be 'max' or 'min', got {direction!r}")
    if direction == "min":
        rep = _require_polymatrix(game)
        flipped = GameInstance(
            PolymatrixGame(
                game.action_counts,
                tuple(
                    PolymatrixEdge(e.p, e.q, -e.a_pq, -e.a_qp) for e in rep.edges
                ),
            )
        )
        s, v = tree_polymatrix_opt(flipped, "max")
        return s, -v

    adj = _forest_adjacency(game)
    n = game.players
    visited = [False] * n
    best_action = [0] * n
    total = 0.0
    for root in range(n):
        if visited[root]:
            continue
        # iterative post-order over the component rooted at `root`
        order: list[tuple[int, int]] = []
        stack = [(root, -1)]
        visited[root] = True
        while stack:
            node, parent = stack.pop()
            order.append((node, parent))
            for q, _, _ in adj[node]:
                if q != parent:
                    visited[q] = True
                    stack.append((q, node))
        subtree_value: list[np.ndarray | None] = [None] * n
        # choice[child] maps the parent's action to the child's best reply
        choice: dict[int, np.ndarray] = {}
        for node, parent in reversed(order):
            value = np.zeros(game.action_counts[node])
            for q, a_pq, a_qp in adj[node]:
                if q == parent:
                    continue
                # cand[s_node, s_q]: child subtree value plus both payoff
                # directions of the connecting edge
                cand = subtree_value[q][None, :] + a_pq + a_qp.T
                value += cand.max(axis=1)
                choice[q] = cand.argmax(axis=1)
            subtree_value[node] = value
        root_vals = subtree_value[root]
        best_action[root] = int(np.argmax(root_vals))
        total += float(root_vals[best_action[root]])
        for node, parent in order:
            if parent >= 0:
                best_action[node] = int(choice[node][best_action[parent]])
    return tuple(best_action), total


def oracle_tree_polymatrix(
    game: GameInstance,
    weights: Sequence[float],
    plan: Plan | None,
    t: float,
    eps: float = PRICING_EPS_DEFAULT,
) -> OracleAnswer:
    """Polynomial pricing for forest polymatrix games: fold the prices into
    the matrices, then run the tree optimum."""
    if isinstance(plan, CoarseDeviationPlan):
        plan = coarse_to_ce_plan(game, plan)
    if plan is None:
        plan = DeviationPlan()
    adjusted = polymatrix_adjust(game, weights, plan)
    witness, value = tree_polymatrix_opt(adjusted, "max")
    return OracleAnswer(value > t + eps, witness, value)


# Singleton congestion: count-vector dynamic program ------------------------


def _require_scg(game: GameInstance) -> SingletonCongestionGame:
    if not isinstance(game.rep, SingletonCongestionGame):
        raise ValueError("operation requires a singleton congestion game")
    return game.rep


def _scg_contributions(
    payoffs: np.ndarray, n: int, y: np.ndarray, objective_scale: float
) -> np.ndarray:
    """contrib[a, c]: the adjusted-welfare contribution of action a when
    exactly c players choose it.  The f(c+1) term is skipped at c = n where
    its coefficient vanishes, so the table is never read out of range."""
    k = payoffs.shape[0]
    y_sum = float(y.sum())
    contrib = np.zeros((k, n + 1))
    for a in range(k):
        for c in range(n + 1):
            v = 0.0
            if c >= 1:
                f_c = payoffs[a, c - 1]
                v += objective_scale * c * f_c + c * f_c * (y_sum - y[a])
            if c < n:
                v -= (n - c) * payoffs[a, c] * y[a]
            contrib[a, c] = v
    return contrib


def _count_dp(contrib: np.ndarray, n: int) -> tuple[CountVector, float]:
    """Maximize the sum of per-action contributions over count vectors that
    assign all n players; lexicographically smallest maximizer."""
    k = contrib.shape[0]
    best = np.full((k + 1, n + 1), -np.inf)
    best[k, 0] = 0.0
    for a in range(k - 1, -1, -1):
        for r in range(n + 1):
            best[a, r] = max(
                contrib[a, c] + best[a + 1, r - c] for c in range(r + 1)
            )
    counts = []
    r = n
    for a in range(k):
        for c in range(r + 1):
            # best[a, r] is the max of exactly these sums, so one matches
            if contrib[a, c] + best[a + 1, r - c] == best[a, r]:
                counts.append(c)
                r -= c
                break
    return tuple(counts), float(best[0, n])


def scg_pricing_opt(
    game: GameInstance, y: Sequence[float], objective_scale: float = 1.0
) -> tuple[CountVector, float]:
    """Maximize ``objective_scale * welfare(c) + priced coarse gaps`` over
    count vectors, given one shared price per target action."""
    rep = _require_scg(game)
    y_arr = np.asarray(y, dtype=float)
    if y_arr.shape != (rep.num_actions,):
        raise ValueError(
            f"need {rep.num_actions} symmetric prices, got shape {y_arr.shape}"
        )
    if np.any(y_arr < 0.0):
        raise ValueError("prices must be nonnegative")
    contrib = _scg_contributions(rep.payoffs, game.players, y_arr, objective_scale)
    return _count_dp(contrib, game.players)


def scg_coarse_opt(
    game: GameInstance, y: Sequence[float], direction: str = "max"
) -> tuple[CountVector, float]:
    """Optimal coarse deviation-adjusted welfare over count vectors for a
    singleton congestion game with player-symmetric prices.

    ``direction='min'`` negates the payoff table (the value is linear in it)
    and reuses the maximization path.
    """
    if direction not in ("max", "min"):
        raise ValueError(f"direction must be 'max' or 'min', got {direction!r}")
    if direction == "min":
        rep = _require_scg(game)
        flipped = GameInstance(SingletonCongestionGame(rep.players, -rep.payoffs))
        counts, value = scg_pricing_opt(flipped, y)
        return counts, -value
    return scg_pricing_opt(game, y)
