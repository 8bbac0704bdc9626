"""Optimal CE / CCE / max-min solvers by column generation.

The huge equilibrium LPs (one variable per pure profile) are solved by
growing a restricted master: each round reads the master's duals, asks a
deviation-adjusted-welfare oracle for a profile whose adjusted value beats
the normalization dual t, and adds that profile as a new column.  When the
oracle finds nothing above t + eps, the duals certify optimality.

Feasibility before enough columns exist comes from penalized slacks on the
incentive rows (big-M, doubled when slacks refuse to leave the basis).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import (
    NonconvergenceError,
    ParseError,
    PenaltyFailureError,
    UndefinedRatioError,
    UnsupportedStructureError,
)
from .games import (
    CountVector,
    GameInstance,
    PureProfile,
    SingletonCongestionGame,
    cce_column,
    ce_column,
    enumerate_profiles,
    utility,
    utility_range,
)
from .lp import EQ, GE, LpProblem, solve_lp
from .oracles import (
    CoarseDeviationPlan,
    DeviationPlan,
    OracleAnswer,
    is_forest,
    oracle_bruteforce,
    oracle_tree_polymatrix,
    scg_pricing_opt,
)
from . import verify as _verify

PROB_TOL = 1e-9
SLACK_TOL = 1e-8
SUPPORT_DROP = 1e-12

CONCEPTS = ("ce", "cce", "maxmin")


@dataclass(frozen=True)
class ObjectiveSpec:
    """Linear objective over players' expected utilities.

    ``weights=None`` means all-ones (social welfare); ``direction='min'``
    asks for the worst equilibrium instead of the best.
    """

    weights: tuple[float, ...] | None = None
    direction: str = "max"

    def __post_init__(self):
        if self.direction not in ("max", "min"):
            raise ValueError(f"direction must be 'max' or 'min', got {self.direction!r}")
        if self.weights is not None:
            w = tuple(float(v) for v in self.weights)
            if not all(math.isfinite(v) for v in w):
                raise ValueError("objective weights must be finite")
            object.__setattr__(self, "weights", w)

    def resolve(self, players: int) -> np.ndarray:
        if self.weights is None:
            return np.ones(players)
        if len(self.weights) != players:
            raise ValueError(
                f"objective has {len(self.weights)} weights for {players} players"
            )
        return np.asarray(self.weights, dtype=float)

    @property
    def sign(self) -> float:
        return 1.0 if self.direction == "max" else -1.0


@dataclass(frozen=True)
class CorrelatedDistribution:
    """Finite-support distribution over pure profiles."""

    support: tuple[tuple[PureProfile, float], ...]

    def __post_init__(self):
        support = tuple((tuple(s), float(p)) for s, p in self.support)
        object.__setattr__(self, "support", support)
        if any(p < 0.0 for _, p in support):
            raise ValueError("probabilities must be nonnegative")
        if len({s for s, _ in support}) != len(support):
            raise ValueError("support profiles must be distinct")
        total = sum(p for _, p in support)
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"probabilities sum to {total}, not 1")

    def __len__(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class ExchangeableDistribution:
    """Player-symmetric distribution given by count-vector classes."""

    support: tuple[tuple[CountVector, float], ...]

    def __post_init__(self):
        support = tuple((tuple(c), float(p)) for c, p in self.support)
        object.__setattr__(self, "support", support)
        if any(p < 0.0 for _, p in support):
            raise ValueError("probabilities must be nonnegative")
        if len({c for c, _ in support}) != len(support):
            raise ValueError("count vectors must be distinct")
        total = sum(p for _, p in support)
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"probabilities sum to {total}, not 1")
        sums = {sum(c) for c, _ in support}
        if len(sums) > 1:
            raise ValueError("count vectors assign different player totals")

    def __len__(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class RunConfig:
    """Knobs for the solvers; defaults match the documented tolerances."""

    pricing_eps: float = 1e-7
    master_tol: float = 1e-8
    max_iterations: int | None = None  # default: 10 * number of master rows
    penalty_doublings: int = 6
    profile_cap: int = 10**6
    expansion_cap: int = 10**5
    method: str = "colgen"  # "colgen" | "full"
    oracle: str = "auto"  # "auto" | "bruteforce" | "tree" | "scg-symmetric"
    seed: int | None = None

    def __post_init__(self):
        if self.pricing_eps <= 0 or self.master_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("iteration cap must be at least 1")
        if self.penalty_doublings < 0:
            raise ValueError("penalty doublings must be nonnegative")
        if self.method not in ("colgen", "full"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.oracle not in ("auto", "bruteforce", "tree", "scg-symmetric"):
            raise ValueError(f"unknown oracle {self.oracle!r}")


@dataclass(frozen=True)
class SolveReport:
    """Solver output: certified value, the distribution, and run diagnostics."""

    concept: str
    objective: ObjectiveSpec
    value: float
    distribution: CorrelatedDistribution | ExchangeableDistribution
    iterations: int
    oracle_calls: int
    penalty: float
    max_violation: float
    duality_gap: float
    method: str

    def to_dict(self) -> dict:
        support = []
        counts_based = isinstance(self.distribution, ExchangeableDistribution)
        for entry, prob in self.distribution.support:
            key = "counts" if counts_based else "profile"
            support.append({key: list(entry), "p": prob})
        return {
            "concept": self.concept,
            "objective": {
                "weights": None
                if self.objective.weights is None
                else list(self.objective.weights),
                "direction": self.objective.direction,
            },
            "value": self.value,
            "support": support,
            "report": {
                "iterations": self.iterations,
                "oracle_calls": self.oracle_calls,
                "penalty": self.penalty,
                "max_violation": self.max_violation,
                "duality_gap": self.duality_gap,
                "method": self.method,
                "support_size": len(self.distribution),
            },
        }


def distribution_from_dict(doc: Mapping):
    """Parse the 'support' list of a solution document."""
    try:
        entries = doc["support"]
        if entries and "counts" in entries[0]:
            return ExchangeableDistribution(
                tuple((tuple(e["counts"]), float(e["p"])) for e in entries)
            )
        return CorrelatedDistribution(
            tuple((tuple(e["profile"]), float(e["p"])) for e in entries)
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad solution support: {exc}") from exc


# Pricing oracle resolution -------------------------------------------------

Pricer = Callable[[Sequence[float], object, float, float], OracleAnswer]


def resolve_pricer(game: GameInstance, cfg: RunConfig) -> tuple[str, Pricer]:
    """Pick the pricing oracle: the tree DP where the game is a forest
    polymatrix, brute force otherwise.  Explicit names are honored or fail."""
    name = cfg.oracle
    if name == "auto":
        name = "tree" if is_forest(game) else "bruteforce"
    if name == "tree":

        def tree_pricer(weights, plan, t, eps):
            return oracle_tree_polymatrix(game, weights, plan, t, eps)

        # fail fast on unsupported structure instead of mid-run
        if not is_forest(game):
            raise UnsupportedStructureError(
                "tree oracle needs a forest-structured polymatrix game"
            )
        return "tree", tree_pricer
    if name == "bruteforce":

        def brute_pricer(weights, plan, t, eps):
            return oracle_bruteforce(game, weights, plan, t, eps, cap=cfg.profile_cap)

        return "bruteforce", brute_pricer
    raise UnsupportedStructureError(
        f"oracle {name!r} cannot price {type(game.rep).__name__} columns"
    )


# Restricted master assembly ------------------------------------------------


def _ce_row_keys(game: GameInstance) -> list[tuple[int, int, int]]:
    return [
        (p, i, j)
        for p in range(game.players)
        for i in range(game.action_counts[p])
        for j in range(game.action_counts[p])
        if i != j
    ]


def _cce_row_keys(game: GameInstance) -> list[tuple[int, int]]:
    return [
        (p, j) for p in range(game.players) for j in range(game.action_counts[p])
    ]


def _incentive_column(game, s, row_index, coarse: bool) -> np.ndarray:
    col = np.zeros(len(row_index))
    entries = cce_column(game, s) if coarse else ce_column(game, s)
    for key, val in entries.items():
        col[row_index[key]] = val
    return col


def _initial_penalty(game: GameInstance, incentive_rows: int) -> float:
    lo, hi = utility_range(game)
    return 1.0 + (incentive_rows + 1) * (hi - lo)


@dataclass
class _MasterState:
    profiles: list[PureProfile] = field(default_factory=list)
    seen: set = field(default_factory=set)
    columns: list[np.ndarray] = field(default_factory=list)  # incentive rows
    objectives: list[float] = field(default_factory=list)
    player_utils: list[np.ndarray] = field(default_factory=list)  # maxmin only

    def add(self, game, s, row_index, coarse, theta, maxmin):
        s = tuple(s)
        if s in self.seen:
            return False
        self.seen.add(s)
        self.profiles.append(s)
        self.columns.append(_incentive_column(game, s, row_index, coarse))
        u = np.array([utility(game, p, s) for p in range(game.players)])
        self.player_utils.append(u)
        self.objectives.append(float(theta @ u) if not maxmin else 0.0)
        return True


def _build_master(state: _MasterState, n_rows: int, penalty: float, maxmin: bool, players: int) -> LpProblem:
    k = len(state.profiles)
    extra = 2 if maxmin else 0  # split free max-min level into r+ - r-
    player_rows = players if maxmin else 0
    m = player_rows + n_rows + 1
    n_vars = k + extra + n_rows
    a = np.zeros((m, n_vars))
    b = np.zeros(m)
    relations = [GE] * (m - 1) + [EQ]
    obj = np.zeros(n_vars)
    for c, col in enumerate(state.columns):
        a[player_rows : player_rows + n_rows, c] = col
        obj[c] = state.objectives[c]
    if maxmin:
        for c, u in enumerate(state.player_utils):
            a[:players, c] = u
        a[:players, k] = -1.0
        a[:players, k + 1] = 1.0
        obj[k] = 1.0
        obj[k + 1] = -1.0
    for r in range(n_rows):
        a[player_rows + r, k + extra + r] = 1.0
        obj[k + extra + r] = -penalty
    a[m - 1, :k] = 1.0
    b[m - 1] = 1.0
    return LpProblem(objective=obj, sense="max", a=a, relations=tuple(relations), b=b)


def _extract_distribution(xs: np.ndarray, profiles: list[PureProfile]) -> CorrelatedDistribution:
    pairs = [
        (s, float(x)) for s, x in zip(profiles, xs) if x > SUPPORT_DROP
    ]
    pairs.sort(key=lambda item: item[0])
    return CorrelatedDistribution(tuple(pairs))


def _colgen(
    game: GameInstance,
    concept: str,
    objective: ObjectiveSpec,
    pricer: Pricer,
    cfg: RunConfig,
) -> SolveReport:
    n = game.players
    maxmin = concept == "maxmin"
    coarse = concept == "cce"
    if maxmin and objective.direction != "max":
        raise ValueError("maxmin is inherently a max problem")
    theta = objective.sign * objective.resolve(n)
    keys = _cce_row_keys(game) if coarse else _ce_row_keys(game)
    row_index = {key: r for r, key in enumerate(keys)}
    n_rows = len(keys)
    player_rows = n if maxmin else 0
    total_rows = player_rows + n_rows + 1
    max_iter = cfg.max_iterations or 10 * total_rows
    penalty = _initial_penalty(game, n_rows)
    doublings = 0

    zero_plan = CoarseDeviationPlan() if coarse else DeviationPlan()
    seed_theta = np.full(n, 1.0 / n) if maxmin else theta
    seed = pricer(seed_theta, zero_plan, -math.inf, cfg.pricing_eps)
    oracle_calls = 1

    state = _MasterState()
    state.add(game, seed.witness, row_index, coarse, theta, maxmin)

    iterations = 0
    while True:
        iterations += 1
        if iterations > max_iter:
            raise NonconvergenceError(
                f"{concept} column generation exceeded {max_iter} iterations "
                f"({len(state.profiles)} columns, penalty {penalty})"
            )
        problem = _build_master(state, n_rows, penalty, maxmin, n)
        sol = solve_lp(problem, feas_tol=cfg.master_tol)
        if sol.status != "optimal":
            raise NonconvergenceError(f"restricted master came back {sol.status}")
        duals = sol.duals
        t = float(duals[-1])
        y = np.clip(-duals[player_rows : player_rows + n_rows], 0.0, None)
        plan_entries = {
            key: float(v) for key, v in zip(keys, y) if v > 0.0
        }
        plan = (
            CoarseDeviationPlan(plan_entries) if coarse else DeviationPlan(plan_entries)
        )
        if maxmin:
            v = np.clip(-duals[:n], 0.0, None)
            total = float(v.sum())
            v = v / total if total > 1e-12 else np.full(n, 1.0 / n)
            price_weights: Sequence[float] = v
        else:
            price_weights = theta
        answer = pricer(price_weights, plan, t, cfg.pricing_eps)
        oracle_calls += 1
        if answer.found and state.add(game, answer.witness, row_index, coarse, theta, maxmin):
            continue
        # dual-feasible (or numerically stalled on a duplicate): check slacks
        k = len(state.profiles)
        extra = 2 if maxmin else 0
        slacks = sol.x[k + extra :]
        if n_rows and float(slacks.max(initial=0.0)) > SLACK_TOL:
            if doublings >= cfg.penalty_doublings:
                raise PenaltyFailureError(
                    f"slacks stuck at {float(slacks.max()):.3g} after "
                    f"{doublings} penalty doublings"
                )
            penalty *= 2.0
            doublings += 1
            continue
        break

    xs = np.clip(sol.x[: len(state.profiles)], 0.0, None)
    dist = _extract_distribution(xs, state.profiles)
    if maxmin:
        value_signed = float(sol.x[len(state.profiles)] - sol.x[len(state.profiles) + 1])
    else:
        value_signed = float(np.dot(xs, state.objectives))
    value = objective.sign * value_signed

    report = _verify.check_ce(game, dist) if not coarse else _verify.check_cce(game, dist)
    min_row = report.min_cce_constraint if coarse else report.min_ce_constraint
    return SolveReport(
        concept=concept,
        objective=objective,
        value=value,
        distribution=dist,
        iterations=iterations,
        oracle_calls=oracle_calls,
        penalty=penalty,
        max_violation=max(0.0, -min_row),
        duality_gap=abs(value_signed - t),
        method="colgen",
    )


def solve_optimal_ce(
    game: GameInstance,
    objective: ObjectiveSpec = ObjectiveSpec(),
    oracle: str | Pricer | None = None,
    cfg: RunConfig = RunConfig(),
) -> SolveReport:
    """Best (or worst) linear-objective correlated equilibrium."""
    pricer = _as_pricer(game, oracle, cfg)
    return _colgen(game, "ce", objective, pricer, cfg)


def solve_optimal_cce(
    game: GameInstance,
    objective: ObjectiveSpec = ObjectiveSpec(),
    oracle: str | Pricer | None = None,
    cfg: RunConfig = RunConfig(),
) -> SolveReport:
    """Best (or worst) linear-objective coarse correlated equilibrium."""
    pricer = _as_pricer(game, oracle, cfg)
    return _colgen(game, "cce", objective, pricer, cfg)


def solve_maxmin_ce(
    game: GameInstance,
    oracle: str | Pricer | None = None,
    cfg: RunConfig = RunConfig(),
) -> SolveReport:
    """CE maximizing the expected utility of the worst-off player."""
    pricer = _as_pricer(game, oracle, cfg)
    return _colgen(game, "maxmin", ObjectiveSpec(), pricer, cfg)


def _as_pricer(game, oracle, cfg: RunConfig) -> Pricer:
    if callable(oracle):
        return oracle
    if isinstance(oracle, str):
        cfg = replace(cfg, oracle=oracle)
    return resolve_pricer(game, cfg)[1]


# Symmetric solver for singleton congestion CCE ------------------------------


def _scg_welfare(f: np.ndarray, counts: Sequence[int]) -> float:
    return float(sum(c * f[a, c - 1] for a, c in enumerate(counts) if c))


def _scg_row_value(f: np.ndarray, n: int, counts: Sequence[int], j: int) -> float:
    """Row coefficient g_j(c): n times the cyclic average of the (p, j)
    unconditional-deviation column entries over the count class."""
    others = sum(c * f[a, c - 1] for a, c in enumerate(counts) if c and a != j)
    leave = (n - counts[j]) * f[j, counts[j]] if counts[j] < n else 0.0
    return float(others - leave)


def solve_scg_cce_symmetric(
    game: GameInstance,
    objective: ObjectiveSpec = ObjectiveSpec(),
    cfg: RunConfig = RunConfig(),
) -> SolveReport:
    """Optimal-social-welfare CCE of a singleton congestion game via the
    player-symmetric master over count-vector columns.

    The master has one incentive row per action, so duals are symmetric by
    construction and the count-vector DP prices columns in polynomial time.
    The result is an exchangeable distribution (uniform within each class).
    """
    rep = game.rep
    if not isinstance(rep, SingletonCongestionGame):
        raise UnsupportedStructureError(
            "symmetric CCE solver needs a singleton congestion game"
        )
    weights = objective.resolve(game.players)
    if np.ptp(weights) > 1e-12:
        raise UnsupportedStructureError(
            "symmetric CCE solver needs one shared player weight"
        )
    scale = float(weights[0]) * objective.sign
    f = rep.payoffs
    n = game.players
    k = rep.num_actions
    max_iter = cfg.max_iterations or 10 * (k + 1)
    penalty = _initial_penalty(game, k)
    doublings = 0

    counts_list: list[CountVector] = []
    seen: set[CountVector] = set()
    seed_counts, _ = scg_pricing_opt(game, np.zeros(k), objective_scale=scale)
    counts_list.append(seed_counts)
    seen.add(seed_counts)
    oracle_calls = 1

    iterations = 0
    while True:
        iterations += 1
        if iterations > max_iter:
            raise NonconvergenceError(
                f"symmetric CCE master exceeded {max_iter} iterations"
            )
        m = len(counts_list)
        a = np.zeros((k + 1, m + k))
        obj = np.zeros(m + k)
        for c, counts in enumerate(counts_list):
            for j in range(k):
                a[j, c] = _scg_row_value(f, n, counts, j)
            obj[c] = scale * _scg_welfare(f, counts)
        for j in range(k):
            a[j, m + j] = 1.0
            obj[m + j] = -penalty
        a[k, :m] = 1.0
        b = np.zeros(k + 1)
        b[k] = 1.0
        problem = LpProblem(
            objective=obj,
            sense="max",
            a=a,
            relations=tuple([GE] * k + [EQ]),
            b=b,
        )
        sol = solve_lp(problem, feas_tol=cfg.master_tol)
        if sol.status != "optimal":
            raise NonconvergenceError(f"restricted master came back {sol.status}")
        t = float(sol.duals[-1])
        y = np.clip(-sol.duals[:k], 0.0, None)
        witness, value = scg_pricing_opt(game, y, objective_scale=scale)
        oracle_calls += 1
        if value > t + cfg.pricing_eps and witness not in seen:
            seen.add(witness)
            counts_list.append(witness)
            continue
        slacks = sol.x[m:]
        if float(slacks.max(initial=0.0)) > SLACK_TOL:
            if doublings >= cfg.penalty_doublings:
                raise PenaltyFailureError(
                    f"slacks stuck at {float(slacks.max()):.3g} after "
                    f"{doublings} penalty doublings"
                )
            penalty *= 2.0
            doublings += 1
            continue
        break

    xs = np.clip(sol.x[: len(counts_list)], 0.0, None)
    pairs = [
        (c, float(x)) for c, x in zip(counts_list, xs) if x > SUPPORT_DROP
    ]
    pairs.sort(key=lambda item: item[0])
    dist = ExchangeableDistribution(tuple(pairs))
    value_signed = float(
        sum(scale * _scg_welfare(f, c) * prob for c, prob in pairs)
    )
    value = objective.sign * value_signed
    row_values = _verify.exchangeable_constraint_values(game, dist)
    return SolveReport(
        concept="cce",
        objective=objective,
        value=value,
        distribution=dist,
        iterations=iterations,
        oracle_calls=oracle_calls,
        penalty=penalty,
        max_violation=max(0.0, -min(row_values)),
        duality_gap=abs(value_signed - t),
        method="colgen",
    )


# Full LPs over all profiles (the verification oracle) -----------------------


def solve_full_lp(
    game: GameInstance,
    objective: ObjectiveSpec = ObjectiveSpec(),
    concept: str = "ce",
    cfg: RunConfig = RunConfig(),
) -> SolveReport:
    """Materialize the whole equilibrium LP over every pure profile.

    Exponential in the player count; this is the independent reference the
    column-generation solvers are tested against.
    """
    if concept not in CONCEPTS:
        raise ValueError(f"unknown concept {concept!r}")
    maxmin = concept == "maxmin"
    if maxmin and objective.direction != "max":
        raise ValueError("maxmin is inherently a max problem")
    coarse = concept == "cce"
    theta = objective.sign * objective.resolve(game.players)
    keys = _cce_row_keys(game) if coarse else _ce_row_keys(game)
    row_index = {key: r for r, key in enumerate(keys)}
    n_rows = len(keys)
    profiles = list(enumerate_profiles(game, cfg.profile_cap))
    n = game.players
    k = len(profiles)
    extra = 2 if maxmin else 0
    player_rows = n if maxmin else 0
    m = player_rows + n_rows + 1
    a = np.zeros((m, k + extra))
    obj = np.zeros(k + extra)
    for c, s in enumerate(profiles):
        a[player_rows : player_rows + n_rows, c] = _incentive_column(
            game, s, row_index, coarse
        )
        u = np.array([utility(game, p, s) for p in range(n)])
        if maxmin:
            a[:n, c] = u
        else:
            obj[c] = float(theta @ u)
    if maxmin:
        a[:n, k] = -1.0
        a[:n, k + 1] = 1.0
        obj[k] = 1.0
        obj[k + 1] = -1.0
    a[m - 1, :k] = 1.0
    b = np.zeros(m)
    b[m - 1] = 1.0
    problem = LpProblem(
        objective=obj,
        sense="max",
        a=a,
        relations=tuple([GE] * (m - 1) + [EQ]),
        b=b,
    )
    sol = solve_lp(problem, feas_tol=cfg.master_tol)
    if sol.status != "optimal":
        raise NonconvergenceError(f"full LP came back {sol.status}")
    xs = np.clip(sol.x[:k], 0.0, None)
    dist = _extract_distribution(xs, profiles)
    if maxmin:
        value_signed = float(sol.x[k] - sol.x[k + 1])
    else:
        value_signed = float(np.dot(xs, obj[:k]))
    value = objective.sign * value_signed
    report = _verify.check_cce(game, dist) if coarse else _verify.check_ce(game, dist)
    min_row = report.min_cce_constraint if coarse else report.min_ce_constraint
    return SolveReport(
        concept=concept,
        objective=objective,
        value=value,
        distribution=dist,
        iterations=1,
        oracle_calls=0,
        penalty=0.0,
        max_violation=max(0.0, -min_row),
        duality_gap=abs(value_signed - float(sol.duals[-1])),
        method="full",
    )


# Outcomes, dispatch, price of anarchy ---------------------------------------


def optimal_outcome(
    game: GameInstance,
    objective: ObjectiveSpec = ObjectiveSpec(),
    cfg: RunConfig = RunConfig(),
) -> tuple[PureProfile, float]:
    """Best (or worst) pure profile for a linear objective: the pricing
    oracle at zero prices."""
    theta = objective.sign * objective.resolve(game.players)
    if is_forest(game):
        answer = oracle_tree_polymatrix(game, theta, None, -math.inf, cfg.pricing_eps)
    elif isinstance(game.rep, SingletonCongestionGame) and np.ptp(theta) <= 1e-12:
        counts, value = scg_pricing_opt(
            game, np.zeros(game.rep.num_actions), objective_scale=float(theta[0])
        )
        profile = tuple(
            a for a, c in enumerate(counts) for _ in range(c)
        )
        return profile, objective.sign * value
    else:
        answer = oracle_bruteforce(
            game, theta, None, -math.inf, cfg.pricing_eps, cap=cfg.profile_cap
        )
    return answer.witness, objective.sign * answer.value


def dispatch_solve(
    game: GameInstance,
    concept: str,
    objective: ObjectiveSpec = ObjectiveSpec(),
    cfg: RunConfig = RunConfig(),
) -> SolveReport:
    """Route a solve request: full LP if asked, the symmetric master for
    singleton-congestion CCE under auto/scg-symmetric, colgen otherwise."""
    if concept not in CONCEPTS:
        raise ValueError(f"unknown concept {concept!r}")
    if concept == "maxmin" and objective.direction != "max":
        raise ValueError("maxmin is inherently a max problem")
    if cfg.method == "full":
        return solve_full_lp(game, objective, concept, cfg)
    is_scg = isinstance(game.rep, SingletonCongestionGame)
    uniform = objective.weights is None or np.ptp(objective.resolve(game.players)) <= 1e-12
    if cfg.oracle == "scg-symmetric" or (cfg.oracle == "auto" and is_scg and concept == "cce" and uniform):
        if concept != "cce":
            raise UnsupportedStructureError(
                "the symmetric oracle only solves the CCE problem"
            )
        return solve_scg_cce_symmetric(game, objective, cfg)
    if concept == "maxmin":
        return solve_maxmin_ce(game, oracle=None, cfg=cfg)
    if concept == "ce":
        return solve_optimal_ce(game, objective, oracle=None, cfg=cfg)
    return solve_optimal_cce(game, objective, oracle=None, cfg=cfg)


def price_of_anarchy(
    game: GameInstance, concept: str = "ce", cfg: RunConfig = RunConfig()
) -> dict:
    """Best-outcome welfare over worst-equilibrium welfare."""
    if concept not in ("ce", "cce"):
        raise ValueError("price of anarchy is defined for 'ce' or 'cce'")
    _, best = optimal_outcome(game, ObjectiveSpec(direction="max"), cfg)
    worst_report = dispatch_solve(game, concept, ObjectiveSpec(direction="min"), cfg)
    worst = worst_report.value
    if worst <= 0.0:
        raise UndefinedRatioError(
            f"worst {concept} welfare is {worst}; the ratio is undefined"
        )
    return {
        "concept": concept,
        "best_outcome_welfare": best,
        "worst_equilibrium_welfare": worst,
        "ratio": best / worst,
    }
