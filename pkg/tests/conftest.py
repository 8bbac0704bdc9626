import pathlib

import pytest

from ceopt.games import game_from_dict

GAMES_DIR = pathlib.Path(__file__).resolve().parent.parent / "games"

# Prisoner's dilemma, actions 0=cooperate, 1=defect.  Defection strictly
# dominates, so the unique CE is the point mass on (1, 1).
PD_DOC = {
    "type": "normal_form",
    "players": 2,
    "actions": [2, 2],
    "utilities": [[3, 3], [0, 5], [5, 0], [1, 1]],
}

# Chicken, actions 0=chicken (yield), 1=dare.  The welfare-optimal CE mixes
# (0,0) at 1/2 with the two asymmetric profiles at 1/4 each, value 10.5.
CHICKEN_DOC = {
    "type": "normal_form",
    "players": 2,
    "actions": [2, 2],
    "utilities": [[6, 6], [2, 7], [7, 2], [0, 0]],
}

# Two players, two routes: route 0 pays 3 alone but congests to 1,
# route 1 pays 2 regardless.
SCG2_DOC = {
    "type": "singleton_congestion",
    "players": 2,
    "actions": [2, 2],
    "f": [[3, 1], [2, 2]],
}

# Single-edge polymatrix game used across the oracle tests.
EDGE_DOC = {
    "type": "polymatrix",
    "players": 2,
    "actions": [2, 2],
    "edges": [{"p": 0, "q": 1, "A_pq": [[1, 0], [0, 2]], "A_qp": [[0, 0], [0, 1]]}],
}


@pytest.fixture
def pd():
    return game_from_dict(PD_DOC)


@pytest.fixture
def chicken():
    return game_from_dict(CHICKEN_DOC)


@pytest.fixture
def scg2():
    return game_from_dict(SCG2_DOC)


@pytest.fixture
def edge_game():
    return game_from_dict(EDGE_DOC)


@pytest.fixture
def games_dir():
    return GAMES_DIR
