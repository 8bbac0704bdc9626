"""Deterministic random game generators for fixtures and stress tests.

All payoffs are uniform on [0, 1]; tree polymatrix graphs attach each new
player to a uniformly random earlier one.  The same seed always yields the
same instance.
"""

from __future__ import annotations

import numpy as np

from .games import (
    GameInstance,
    NormalFormGame,
    PolymatrixEdge,
    PolymatrixGame,
    SingletonCongestionGame,
)

KINDS = ("normal-form", "tree-polymatrix", "singleton-congestion")


def gen_normal_form(seed: int, players: int = 3, actions: int = 3) -> GameInstance:
    rng = np.random.default_rng(seed)
    counts = (actions,) * players
    m_total = int(np.prod(counts))
    return GameInstance(
        NormalFormGame(counts, rng.uniform(size=(players, m_total)))
    )


def gen_tree_polymatrix(seed: int, players: int = 4, actions: int = 2) -> GameInstance:
    rng = np.random.default_rng(seed)
    counts = (actions,) * players
    edges = []
    for q in range(1, players):
        p = int(rng.integers(0, q))
        edges.append(
            PolymatrixEdge(
                p,
                q,
                rng.uniform(size=(actions, actions)),
                rng.uniform(size=(actions, actions)),
            )
        )
    return GameInstance(PolymatrixGame(counts, tuple(edges)))


def gen_singleton_congestion(seed: int, players: int = 3, actions: int = 2) -> GameInstance:
    rng = np.random.default_rng(seed)
    return GameInstance(
        SingletonCongestionGame(players, rng.uniform(size=(actions, players)))
    )


def generate(kind: str, seed: int, players: int, actions: int) -> GameInstance:
    if kind == "normal-form":
        return gen_normal_form(seed, players, actions)
    if kind == "tree-polymatrix":
        return gen_tree_polymatrix(seed, players, actions)
    if kind == "singleton-congestion":
        return gen_singleton_congestion(seed, players, actions)
    raise ValueError(f"unknown kind {kind!r}; choose from {KINDS}")
