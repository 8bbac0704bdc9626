"""Optimal correlated and coarse correlated equilibria of compact games.

Core workflow: build a :class:`~ceopt.games.GameInstance` (or load one from
JSON), then call :func:`~ceopt.colgen.dispatch_solve` and certify the result
with :mod:`ceopt.verify`.  The ``ceopt`` CLI and the FastAPI service in
:mod:`ceopt.service` wrap the same calls.
"""

__version__ = "0.1.0"

from .colgen import (
    CorrelatedDistribution,
    ExchangeableDistribution,
    ObjectiveSpec,
    RunConfig,
    SolveReport,
    dispatch_solve,
    optimal_outcome,
    price_of_anarchy,
    solve_full_lp,
    solve_maxmin_ce,
    solve_optimal_ce,
    solve_optimal_cce,
    solve_scg_cce_symmetric,
)
from .errors import (
    CeoptError,
    NonconvergenceError,
    ParseError,
    PenaltyFailureError,
    ResourceLimitError,
    UndefinedRatioError,
    UnsupportedStructureError,
)
from .games import (
    GameInstance,
    NormalFormGame,
    PolymatrixEdge,
    PolymatrixGame,
    SingletonCongestionGame,
    game_from_dict,
    game_to_dict,
    load_game,
)
from .oracles import (
    CoarseDeviationPlan,
    DeviationPlan,
    OracleAnswer,
    coarse_dasw_value,
    coarse_to_ce_plan,
    dasw_value,
    oracle_bruteforce,
    oracle_tree_polymatrix,
    polymatrix_adjust,
    scg_coarse_opt,
    tree_polymatrix_opt,
    weighted_dasw_value,
)
from .verify import (
    VerificationReport,
    check_ce,
    check_cce,
    expand_exchangeable,
    expected_utilities,
)

__all__ = [name for name in dir() if not name.startswith("_")]
