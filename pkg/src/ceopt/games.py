"""Game representations, profile indexing, and incentive-constraint columns.

Three representations are supported behind one uniform utility query:

* normal form        -- a dense utility tensor, one value per (player, profile)
* polymatrix         -- bilateral matrix games along edges of a player graph
* singleton congestion -- symmetric games where payoff depends on the chosen
                          action and how many players chose it

Profiles are tuples of 0-based action indices.  The flat profile index is
mixed-radix with player 0 most significant, so ``enumerate_profiles`` yields
profiles in lexicographic order and index arithmetic can jump to unilateral
deviations of a profile.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import ParseError, ResourceLimitError

PureProfile = tuple[int, ...]
CountVector = tuple[int, ...]

PROFILE_CAP_DEFAULT = 10**6


def _freeze(a: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class NormalFormGame:
    """Dense game: ``utilities[p, idx]`` is player p's payoff at profile idx."""

    action_counts: tuple[int, ...]
    utilities: np.ndarray  # shape (n, M)

    def __post_init__(self):
        n = len(self.action_counts)
        if n == 0 or any(m <= 0 for m in self.action_counts):
            raise ValueError("every player needs at least one action")
        m_total = int(np.prod(self.action_counts))
        u = np.asarray(self.utilities, dtype=float)
        if u.shape != (n, m_total):
            raise ValueError(
                f"utility tensor has shape {u.shape}, expected {(n, m_total)}"
            )
        if not np.all(np.isfinite(u)):
            raise ValueError("utilities must be finite")
        object.__setattr__(self, "utilities", _freeze(u))

    @property
    def players(self) -> int:
        return len(self.action_counts)


@dataclass(frozen=True)
class PolymatrixEdge:
    """One unordered player pair {p, q} with both directed payoff matrices.

    ``a_pq[i, j]`` is p's payoff when p plays i and q plays j; ``a_qp`` is
    the reverse direction.  Stored once per pair (p < q) so utilities are
    never double counted.
    """

    p: int
    q: int
    a_pq: np.ndarray
    a_qp: np.ndarray

    def __post_init__(self):
        if self.p == self.q:
            raise ValueError("self-edges are not allowed")
        if self.p > self.q:
            raise ValueError("edges must be stored with p < q")
        object.__setattr__(self, "a_pq", _freeze(np.atleast_2d(self.a_pq)))
        object.__setattr__(self, "a_qp", _freeze(np.atleast_2d(self.a_qp)))
        if not (np.all(np.isfinite(self.a_pq)) and np.all(np.isfinite(self.a_qp))):
            raise ValueError("edge matrices must be finite")


@dataclass(frozen=True)
class PolymatrixGame:
    """Player p's utility is the sum of ``a_pq[s_p, s_q]`` over incident edges."""

    action_counts: tuple[int, ...]
    edges: tuple[PolymatrixEdge, ...]

    def __post_init__(self):
        n = len(self.action_counts)
        if n == 0 or any(m <= 0 for m in self.action_counts):
            raise ValueError("every player needs at least one action")
        seen = set()
        for e in self.edges:
            if not (0 <= e.p < n and 0 <= e.q < n):
                raise ValueError(f"edge ({e.p},{e.q}) references unknown player")
            if (e.p, e.q) in seen:
                raise ValueError(f"duplicate edge ({e.p},{e.q})")
            seen.add((e.p, e.q))
            want = (self.action_counts[e.p], self.action_counts[e.q])
            if e.a_pq.shape != want or e.a_qp.shape != want[::-1]:
                raise ValueError(
                    f"edge ({e.p},{e.q}) matrices {e.a_pq.shape}/{e.a_qp.shape} "
                    f"do not match action counts {want}"
                )

    @property
    def players(self) -> int:
        return len(self.action_counts)

    def incident(self, p: int) -> list[tuple[int, np.ndarray]]:
        """Neighbors of p with the matrix oriented so rows are p's actions."""
        out = []
        for e in self.edges:
            if e.p == p:
                out.append((e.q, e.a_pq))
            elif e.q == p:
                out.append((e.p, e.a_qp))
        return out


@dataclass(frozen=True)
class SingletonCongestionGame:
    """Symmetric game given by a payoff table ``payoffs[a, c-1]`` for c users
    on action a (c ranges over 1..n)."""

    players: int
    payoffs: np.ndarray  # shape (k, n)

    def __post_init__(self):
        if self.players <= 0:
            raise ValueError("need at least one player")
        f = np.asarray(self.payoffs, dtype=float)
        if f.ndim != 2 or f.shape[1] != self.players or f.shape[0] < 1:
            raise ValueError(
                f"payoff table has shape {f.shape}, expected (k, {self.players})"
            )
        if not np.all(np.isfinite(f)):
            raise ValueError("payoff table must be finite")
        object.__setattr__(self, "payoffs", _freeze(f))

    @property
    def num_actions(self) -> int:
        return int(self.payoffs.shape[0])

    @property
    def action_counts(self) -> tuple[int, ...]:
        return (self.num_actions,) * self.players


Representation = Union[NormalFormGame, PolymatrixGame, SingletonCongestionGame]


@dataclass(frozen=True)
class GameInstance:
    """A representation plus cached size counts.

    Immutable after construction; safe for concurrent reads.  ``ce_rows``
    counts all (p, i, j) pairs including i = j, matching the row count of
    the full incentive-constraint matrix.
    """

    rep: Representation
    players: int = field(init=False)
    action_counts: tuple[int, ...] = field(init=False)
    profile_count: int = field(init=False)
    ce_rows: int = field(init=False)
    cce_rows: int = field(init=False)
    _dense: dict = field(init=False, repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        counts = tuple(int(m) for m in self.rep.action_counts)
        object.__setattr__(self, "players", len(counts))
        object.__setattr__(self, "action_counts", counts)
        object.__setattr__(self, "profile_count", int(np.prod(counts)))
        object.__setattr__(self, "ce_rows", sum(m * m for m in counts))
        object.__setattr__(self, "cce_rows", sum(counts))

    # Mixed-radix helpers ------------------------------------------------

    @property
    def radices(self) -> tuple[int, ...]:
        """Place value of each player's action in the flat profile index."""
        r = self._dense.get("radices")
        if r is None:
            counts = self.action_counts
            r = [1] * len(counts)
            for p in range(len(counts) - 2, -1, -1):
                r[p] = r[p + 1] * counts[p + 1]
            r = tuple(r)
            self._dense["radices"] = r
        return r

    def profile_index(self, s: Sequence[int]) -> int:
        self.validate_profile(s)
        return sum(a * r for a, r in zip(s, self.radices))

    def profile_from_index(self, idx: int) -> PureProfile:
        return tuple(
            int(idx // r) % m for r, m in zip(self.radices, self.action_counts)
        )

    def validate_profile(self, s: Sequence[int]) -> None:
        if len(s) != self.players:
            raise ValueError(f"profile length {len(s)} != {self.players} players")
        for p, a in enumerate(s):
            if not 0 <= a < self.action_counts[p]:
                raise ValueError(
                    f"action {a} out of range for player {p} "
                    f"(has {self.action_counts[p]} actions)"
                )

    def validate_player(self, p: int) -> None:
        if not 0 <= p < self.players:
            raise ValueError(f"player {p} out of range (n={self.players})")

    # Dense caches used by the vectorized brute-force oracle --------------

    def player_actions_by_index(self) -> np.ndarray:
        """Array of shape (n, M): the action of each player at each index."""
        sp = self._dense.get("sp")
        if sp is None:
            idx = np.arange(self.profile_count)
            sp = np.stack(
                [
                    (idx // r) % m
                    for r, m in zip(self.radices, self.action_counts)
                ]
            )
            sp.setflags(write=False)
            self._dense["sp"] = sp
        return sp

    def dense_utilities(self, cap: int = PROFILE_CAP_DEFAULT) -> np.ndarray:
        """Utility tensor of shape (n, M); computed once and cached."""
        u = self._dense.get("u")
        if u is not None:
            return u
        if self.profile_count > cap:
            raise ResourceLimitError(
                f"{self.profile_count} profiles exceed the cap of {cap}"
            )
        rep = self.rep
        sp = self.player_actions_by_index()
        if isinstance(rep, NormalFormGame):
            u = rep.utilities
        elif isinstance(rep, PolymatrixGame):
            u = np.zeros((self.players, self.profile_count))
            for e in rep.edges:
                u[e.p] += e.a_pq[sp[e.p], sp[e.q]]
                u[e.q] += e.a_qp[sp[e.q], sp[e.p]]
            u = _freeze(u)
        else:
            k = rep.num_actions
            counts = np.stack([(sp == a).sum(axis=0) for a in range(k)])
            cols = np.arange(self.profile_count)
            u = np.stack(
                [rep.payoffs[sp[p], counts[sp[p], cols] - 1] for p in range(self.players)]
            )
            u = _freeze(u)
        self._dense["u"] = u
        return u


def utility(game: GameInstance, p: int, s: Sequence[int]) -> float:
    """Player p's payoff at pure profile s."""
    game.validate_player(p)
    game.validate_profile(s)
    rep = game.rep
    if isinstance(rep, NormalFormGame):
        return float(rep.utilities[p, game.profile_index(s)])
    if isinstance(rep, PolymatrixGame):
        return float(sum(a[s[p], s[q]] for q, a in rep.incident(p)))
    c = sum(1 for a in s if a == s[p])
    return float(rep.payoffs[s[p], c - 1])


def social_welfare(game: GameInstance, s: Sequence[int]) -> float:
    return sum(utility(game, p, s) for p in range(game.players))


def weighted_welfare(
    game: GameInstance, weights: Sequence[float], s: Sequence[int]
) -> float:
    """Sum of ``weights[p] * utility(p, s)``; all-ones recovers social welfare."""
    if len(weights) != game.players:
        raise ValueError(f"need {game.players} weights, got {len(weights)}")
    return sum(w * utility(game, p, s) for p, w in enumerate(weights))


def deviation_utility(game: GameInstance, p: int, s: Sequence[int], j: int) -> float:
    """Player p's payoff if they unilaterally switch to action j at s."""
    if not 0 <= j < game.action_counts[p]:
        raise ValueError(f"action {j} out of range for player {p}")
    if j == s[p]:
        return utility(game, p, s)
    s_dev = list(s)
    s_dev[p] = j
    return utility(game, p, s_dev)


def ce_column(game: GameInstance, s: Sequence[int]) -> dict[tuple[int, int, int], float]:
    """Column of the CE constraint matrix at s, keyed by (player, i, j).

    Only the rows with i = s_p and j != i are stored; all others are zero.
    """
    game.validate_profile(s)
    col: dict[tuple[int, int, int], float] = {}
    for p in range(game.players):
        u_p = utility(game, p, s)
        for j in range(game.action_counts[p]):
            if j == s[p]:
                continue
            col[(p, s[p], j)] = u_p - deviation_utility(game, p, s, j)
    return col


def cce_column(game: GameInstance, s: Sequence[int]) -> dict[tuple[int, int], float]:
    """Column of the CCE constraint matrix at s, keyed by (player, j)."""
    game.validate_profile(s)
    col: dict[tuple[int, int], float] = {}
    for p in range(game.players):
        u_p = utility(game, p, s)
        for j in range(game.action_counts[p]):
            col[(p, j)] = u_p - deviation_utility(game, p, s, j)
    return col


def enumerate_profiles(
    game: GameInstance, cap: int = PROFILE_CAP_DEFAULT
) -> Iterator[PureProfile]:
    """All pure profiles in lexicographic order (player 0 most significant)."""
    if game.profile_count > cap:
        raise ResourceLimitError(
            f"{game.profile_count} profiles exceed the cap of {cap}"
        )
    return itertools.product(*(range(m) for m in game.action_counts))


def count_vector(s: Sequence[int], k: int) -> CountVector:
    """Per-action tally of a profile over a shared k-action set."""
    c = [0] * k
    for a in s:
        if not 0 <= a < k:
            raise ValueError(f"action {a} out of range for {k} actions")
        c[a] += 1
    return tuple(c)


def profiles_with_counts(c: Sequence[int]) -> int:
    """Number of profiles inducing count vector c (a multinomial)."""
    if any(x < 0 for x in c):
        raise ValueError("counts must be nonnegative")
    n = sum(c)
    out = math.factorial(n)
    for x in c:
        out //= math.factorial(x)
    return out


def utility_range(game: GameInstance) -> tuple[float, float]:
    """Cheap bounds (lo, hi) on any single player's utility."""
    rep = game.rep
    if isinstance(rep, NormalFormGame):
        return float(rep.utilities.min()), float(rep.utilities.max())
    if isinstance(rep, SingletonCongestionGame):
        return float(rep.payoffs.min()), float(rep.payoffs.max())
    lo = hi = 0.0
    for p in range(game.players):
        inc = rep.incident(p)
        lo = min(lo, sum(float(a.min()) for _, a in inc))
        hi = max(hi, sum(float(a.max()) for _, a in inc))
    return lo, hi


def expand_to_normal_form(
    game: GameInstance, cap: int = PROFILE_CAP_DEFAULT
) -> GameInstance:
    """Materialize any representation as an explicit normal-form game."""
    u = game.dense_utilities(cap)
    return GameInstance(NormalFormGame(game.action_counts, np.array(u)))


# JSON schema ------------------------------------------------------------
#
# {"type": "normal_form" | "polymatrix" | "singleton_congestion",
#  "players": n, "actions": [m_0, ...], <payload>}
#
# normal_form payload:  "utilities": M rows of n payoffs, lexicographic order
# polymatrix payload:   "edges": [{"p", "q", "A_pq", "A_qp"}, ...]
# singleton_congestion: "f": k rows, row a = [f^a(1), ..., f^a(n)]


def game_from_dict(doc: Mapping) -> GameInstance:
    try:
        kind = doc["type"]
        n = int(doc["players"])
        actions = [int(m) for m in doc["actions"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad game header: {exc}") from exc
    if len(actions) != n:
        raise ParseError(f"'actions' lists {len(actions)} players, header says {n}")
    try:
        if kind == "normal_form":
            rows = doc["utilities"]
            m_total = int(np.prod(actions))
            if len(rows) != m_total:
                raise ParseError(
                    f"'utilities' has {len(rows)} rows, expected {m_total}"
                )
            u = np.asarray(rows, dtype=float).T
            rep: Representation = NormalFormGame(tuple(actions), u)
        elif kind == "polymatrix":
            edges = []
            for e in doc.get("edges", []):
                p, q = int(e["p"]), int(e["q"])
                a_pq = np.asarray(e["A_pq"], dtype=float)
                a_qp = np.asarray(e["A_qp"], dtype=float)
                if p > q:
                    p, q, a_pq, a_qp = q, p, a_qp, a_pq
                edges.append(PolymatrixEdge(p, q, a_pq, a_qp))
            rep = PolymatrixGame(tuple(actions), tuple(edges))
        elif kind == "singleton_congestion":
            if any(m != actions[0] for m in actions):
                raise ParseError("singleton congestion players must share one action set")
            rep = SingletonCongestionGame(n, np.asarray(doc["f"], dtype=float))
        else:
            raise ParseError(f"unknown game type {kind!r}")
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad {kind} payload: {exc}") from exc
    game = GameInstance(rep)
    if game.players != n:
        raise ParseError(f"payload implies {game.players} players, header says {n}")
    return game


def game_to_dict(game: GameInstance) -> dict:
    rep = game.rep
    doc: dict = {"players": game.players, "actions": list(game.action_counts)}
    if isinstance(rep, NormalFormGame):
        doc["type"] = "normal_form"
        doc["utilities"] = rep.utilities.T.tolist()
    elif isinstance(rep, PolymatrixGame):
        doc["type"] = "polymatrix"
        doc["edges"] = [
            {"p": e.p, "q": e.q, "A_pq": e.a_pq.tolist(), "A_qp": e.a_qp.tolist()}
            for e in rep.edges
        ]
    else:
        doc["type"] = "singleton_congestion"
        doc["f"] = rep.payoffs.tolist()
    return doc


def load_game(path: str) -> GameInstance:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read game file {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"game file {path} is not a JSON object")
    return game_from_dict(doc)
