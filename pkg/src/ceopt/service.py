"""HTTP facade over the solver: one long-running process serving solve,
verify, price-of-anarchy, and instance-generation requests.

Domain errors surface as JSON bodies with a stable ``error_kind`` field so
clients (including the bundled CLI) can react without string matching.
"""

from __future__ import annotations

from typing import Literal, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .colgen import (
    ObjectiveSpec,
    RunConfig,
    dispatch_solve,
    distribution_from_dict,
    price_of_anarchy,
)
from .errors import (
    NonconvergenceError,
    ParseError,
    ResourceLimitError,
    UndefinedRatioError,
    UnsupportedStructureError,
)
from .games import GameInstance, game_from_dict, game_to_dict
from .gen import KINDS, generate
from .verify import check_ce, check_cce, expand_exchangeable
from .colgen import ExchangeableDistribution


class EdgeDocument(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    p: int
    q: int
    a_pq: list[list[float]] = Field(alias="A_pq")
    a_qp: list[list[float]] = Field(alias="A_qp")


class GameDocument(BaseModel):
    """Wire form of a game, matching the on-disk JSON schema."""

    type: Literal["normal_form", "polymatrix", "singleton_congestion"]
    players: int
    actions: list[int]
    utilities: Optional[list[list[float]]] = None
    edges: Optional[list[EdgeDocument]] = None
    f: Optional[list[list[float]]] = None

    def to_instance(self) -> GameInstance:
        return game_from_dict(self.model_dump(exclude_none=True, by_alias=True))

    @classmethod
    def from_instance(cls, game: GameInstance) -> "GameDocument":
        return cls.model_validate(game_to_dict(game))


class SolverOptions(BaseModel):
    method: Literal["colgen", "full"] = "colgen"
    oracle: Literal["auto", "bruteforce", "tree", "scg-symmetric"] = "auto"
    tol: float = Field(default=1e-7, gt=0, description="pricing slack")
    master_tol: float = Field(default=1e-8, gt=0)
    max_iterations: Optional[int] = Field(default=None, ge=1)
    penalty_doublings: int = Field(default=6, ge=0)
    profile_cap: int = Field(default=10**6, ge=1)
    expansion_cap: int = Field(default=10**5, ge=1)

    def to_config(self) -> RunConfig:
        return RunConfig(
            pricing_eps=self.tol,
            master_tol=self.master_tol,
            max_iterations=self.max_iterations,
            penalty_doublings=self.penalty_doublings,
            profile_cap=self.profile_cap,
            expansion_cap=self.expansion_cap,
            method=self.method,
            oracle=self.oracle,
        )


class SolveRequest(BaseModel):
    game: GameDocument
    concept: Literal["ce", "cce", "maxmin"]
    direction: Literal["max", "min"] = "max"
    weights: Optional[list[float]] = None
    options: SolverOptions = SolverOptions()


class ObjectiveModel(BaseModel):
    weights: Optional[list[float]] = None
    direction: Literal["max", "min"] = "max"


class SupportEntry(BaseModel):
    profile: Optional[list[int]] = None
    counts: Optional[list[int]] = None
    p: float


class RunStats(BaseModel):
    iterations: int
    oracle_calls: int
    penalty: float
    max_violation: float
    duality_gap: float
    method: str
    support_size: int


class SolveResponse(BaseModel):
    concept: str
    objective: ObjectiveModel
    value: float
    support: list[SupportEntry]
    report: RunStats


class SolutionDocument(BaseModel):
    model_config = ConfigDict(extra="allow")

    concept: Literal["ce", "cce", "maxmin"]
    support: list[SupportEntry]


class VerifyRequest(BaseModel):
    game: GameDocument
    solution: SolutionDocument
    tol: float = Field(default=1e-7, gt=0)
    expansion_cap: int = Field(default=10**5, ge=1)


class VerifyResponse(BaseModel):
    ok: bool
    tol: float
    prob_sum_residual: float
    min_ce_constraint: float
    min_cce_constraint: float
    expected_utilities: list[float]
    objective: float


class PoaRequest(BaseModel):
    game: GameDocument
    concept: Literal["ce", "cce"] = "ce"
    options: SolverOptions = SolverOptions()


class PoaResponse(BaseModel):
    concept: str
    best_outcome_welfare: float
    worst_equilibrium_welfare: float
    ratio: float


class GenerateRequest(BaseModel):
    kind: Literal["normal-form", "tree-polymatrix", "singleton-congestion"]
    seed: int = 0
    players: int = Field(default=3, ge=1)
    actions: int = Field(default=2, ge=1)


_ERROR_KINDS = [
    (ParseError, 400, "parse-error"),
    (UnsupportedStructureError, 400, "unsupported-structure"),
    (NonconvergenceError, 409, "nonconvergence"),
    (ResourceLimitError, 413, "resource-limit"),
    (UndefinedRatioError, 409, "undefined-ratio"),
    (ValueError, 400, "invalid-argument"),
]


def create_app() -> FastAPI:
    app = FastAPI(
        title="ceopt",
        version=__version__,
        description="Optimal correlated / coarse correlated equilibria of "
        "compactly represented games",
    )

    for exc_type, status, kind in _ERROR_KINDS:

        def handler(request: Request, exc: Exception, *, _s=status, _k=kind):
            return JSONResponse(
                status_code=_s, content={"error_kind": _k, "detail": str(exc)}
            )

        app.add_exception_handler(exc_type, handler)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/solve", response_model=SolveResponse, response_model_exclude_none=True)
    def solve(req: SolveRequest) -> SolveResponse:
        game = req.game.to_instance()
        objective = ObjectiveSpec(
            weights=None if req.weights is None else tuple(req.weights),
            direction=req.direction,
        )
        report = dispatch_solve(game, req.concept, objective, req.options.to_config())
        return SolveResponse.model_validate(report.to_dict())

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        game = req.game.to_instance()
        dist = distribution_from_dict(req.solution.model_dump(exclude_none=True))
        concept = req.solution.concept
        if isinstance(dist, ExchangeableDistribution):
            dist = expand_exchangeable(game, dist, cap=req.expansion_cap)
        checker = check_cce if concept == "cce" else check_ce
        report = checker(game, dist)
        return VerifyResponse(
            ok=report.within(req.tol, concept),
            tol=req.tol,
            prob_sum_residual=report.prob_sum_residual,
            min_ce_constraint=report.min_ce_constraint,
            min_cce_constraint=report.min_cce_constraint,
            expected_utilities=list(report.expected_utilities),
            objective=report.objective,
        )

    @app.post("/poa", response_model=PoaResponse)
    def poa(req: PoaRequest) -> PoaResponse:
        game = req.game.to_instance()
        out = price_of_anarchy(game, req.concept, req.options.to_config())
        return PoaResponse.model_validate(out)

    @app.post("/generate", response_model=GameDocument, response_model_exclude_none=True)
    def gen(req: GenerateRequest) -> GameDocument:
        if req.kind not in KINDS:
            raise ParseError(f"unknown kind {req.kind!r}")
        game = generate(req.kind, req.seed, req.players, req.actions)
        return GameDocument.from_instance(game)

    return app


app = create_app()
