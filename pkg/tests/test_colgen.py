import numpy as np
import pytest

from ceopt.colgen import (
    CorrelatedDistribution,
    ExchangeableDistribution,
    ObjectiveSpec,
    RunConfig,
    SolveReport,
    dispatch_solve,
    distribution_from_dict,
    optimal_outcome,
    price_of_anarchy,
    solve_full_lp,
    solve_maxmin_ce,
    solve_optimal_ce,
    solve_optimal_cce,
    solve_scg_cce_symmetric,
)
from ceopt.errors import (
    NonconvergenceError,
    UndefinedRatioError,
    UnsupportedStructureError,
)
from ceopt.games import GameInstance, NormalFormGame, SingletonCongestionGame
from ceopt.gen import gen_normal_form, gen_singleton_congestion, gen_tree_polymatrix
from ceopt.verify import check_ce, check_cce, expected_utilities


def test_pd_fixtures(pd):
    report = solve_optimal_ce(pd)
    assert report.value == pytest.approx(2.0, abs=1e-9)
    assert report.distribution.support == (((1, 1), 1.0),)
    assert solve_optimal_cce(pd).value == pytest.approx(2.0, abs=1e-9)
    assert solve_maxmin_ce(pd).value == pytest.approx(1.0, abs=1e-9)


def test_chicken_fixtures(chicken):
    report = solve_optimal_ce(chicken)
    assert report.value == pytest.approx(10.5, abs=1e-9)
    probs = dict(report.distribution.support)
    assert probs[(0, 0)] == pytest.approx(0.5, abs=1e-9)
    assert probs[(0, 1)] == pytest.approx(0.25, abs=1e-9)
    assert probs[(1, 0)] == pytest.approx(0.25, abs=1e-9)
    worst = solve_optimal_ce(chicken, ObjectiveSpec(direction="min"))
    full = solve_full_lp(chicken, ObjectiveSpec(direction="min"), "ce")
    assert worst.value <= 10.5
    assert worst.value == pytest.approx(full.value, abs=1e-6)


def test_solution_is_certified(chicken):
    report = solve_optimal_ce(chicken)
    assert report.duality_gap <= 1e-6
    assert report.max_violation <= 1e-7
    assert check_ce(chicken, report.distribution).min_ce_constraint >= -1e-7


def test_random_agreement_all_concepts():
    for seed in range(12):
        game = gen_normal_form(seed, 3, 3)
        for concept in ("ce", "cce", "maxmin"):
            got = dispatch_solve(game, concept)
            want = solve_full_lp(game, ObjectiveSpec(), concept)
            assert got.value == pytest.approx(want.value, abs=1e-6), (concept, seed)
            assert got.max_violation <= 1e-7
            assert got.duality_gap <= 1e-6


def test_support_bounds():
    for seed in range(6):
        game = gen_normal_form(seed, 3, 3)
        ce = solve_optimal_ce(game)
        assert len(ce.distribution) <= game.ce_rows + 1
        cce = solve_optimal_cce(game)
        assert len(cce.distribution) <= game.cce_rows + 1


def test_output_distribution_feasible():
    for seed in range(6):
        game = gen_normal_form(seed + 40, 3, 2)
        report = solve_optimal_ce(game)
        total = sum(p for _, p in report.distribution.support)
        assert abs(total - 1.0) <= 1e-9
        assert all(p >= 0 for _, p in report.distribution.support)


def test_cce_relaxes_ce():
    for seed in range(10):
        game = gen_normal_form(seed + 60, 3, 2)
        ce = solve_optimal_ce(game).value
        cce = solve_optimal_cce(game).value
        assert cce >= ce - 1e-6
        ce_min = solve_optimal_ce(game, ObjectiveSpec(direction="min")).value
        cce_min = solve_optimal_cce(game, ObjectiveSpec(direction="min")).value
        assert cce_min <= ce_min + 1e-6


def test_maxmin_dominates_max_welfare_ce_minimum():
    for seed in range(10):
        game = gen_normal_form(seed + 80, 3, 2)
        best = solve_optimal_ce(game)
        floor = min(expected_utilities(game, best.distribution))
        assert solve_maxmin_ce(game).value >= floor - 1e-6


def test_maxmin_rejects_min_direction(pd):
    with pytest.raises(ValueError):
        dispatch_solve(pd, "maxmin", ObjectiveSpec(direction="min"))


def test_weighted_objective_agreement():
    rng = np.random.default_rng(5)
    for seed in range(6):
        game = gen_normal_form(seed + 100, 3, 2)
        weights = tuple(float(w) for w in rng.uniform(-1, 2, size=3))
        for direction in ("max", "min"):
            spec = ObjectiveSpec(weights, direction)
            got = solve_optimal_ce(game, spec)
            want = solve_full_lp(game, spec, "ce")
            assert got.value == pytest.approx(want.value, abs=1e-6)


def test_tree_oracle_end_to_end():
    for seed in range(6):
        game = gen_tree_polymatrix(seed, 5, 3)
        got = solve_optimal_ce(game, cfg=RunConfig(oracle="tree"))
        want = solve_full_lp(game, ObjectiveSpec(), "ce")
        assert got.value == pytest.approx(want.value, abs=1e-6), seed


def test_auto_oracle_picks_tree():
    game = gen_tree_polymatrix(0, 4, 2)
    report = dispatch_solve(game, "ce")
    want = solve_full_lp(game, ObjectiveSpec(), "ce")
    assert report.value == pytest.approx(want.value, abs=1e-6)


def test_tree_oracle_refuses_cycles():
    from ceopt.games import game_from_dict

    eye = [[1, 0], [0, 1]]
    game = game_from_dict(
        {
            "type": "polymatrix",
            "players": 3,
            "actions": [2, 2, 2],
            "edges": [
                {"p": 0, "q": 1, "A_pq": eye, "A_qp": eye},
                {"p": 1, "q": 2, "A_pq": eye, "A_qp": eye},
                {"p": 0, "q": 2, "A_pq": eye, "A_qp": eye},
            ],
        }
    )
    with pytest.raises(UnsupportedStructureError):
        solve_optimal_ce(game, cfg=RunConfig(oracle="tree"))
    # auto falls back to brute force on the same game
    got = dispatch_solve(game, "ce")
    want = solve_full_lp(game, ObjectiveSpec(), "ce")
    assert got.value == pytest.approx(want.value, abs=1e-6)


def test_scg_symmetric_example(scg2):
    report = solve_scg_cce_symmetric(scg2)
    want = solve_full_lp(scg2, ObjectiveSpec(), "cce")
    assert report.value == pytest.approx(want.value, abs=1e-6)
    assert isinstance(report.distribution, ExchangeableDistribution)


def test_scg_symmetric_constant_game():
    game = GameInstance(SingletonCongestionGame(3, np.full((2, 3), 1.0)))
    report = solve_scg_cce_symmetric(game)
    assert report.value == pytest.approx(3.0)
    assert report.iterations == 1
    assert len(report.distribution) == 1


def test_scg_symmetric_random_agreement():
    for seed in range(10):
        n, k = 2 + seed % 4, 2 + seed % 2
        game = gen_singleton_congestion(seed, n, k)
        got = solve_scg_cce_symmetric(game)
        want = solve_full_lp(game, ObjectiveSpec(), "cce")
        assert got.value == pytest.approx(want.value, abs=1e-6), seed
        assert got.max_violation <= 1e-7


def test_scg_dispatch_uses_symmetric_solver(scg2):
    report = dispatch_solve(scg2, "cce")
    assert isinstance(report.distribution, ExchangeableDistribution)
    brute = dispatch_solve(scg2, "cce", cfg=RunConfig(oracle="bruteforce"))
    assert isinstance(brute.distribution, CorrelatedDistribution)
    assert report.value == pytest.approx(brute.value, abs=1e-6)


def test_scg_symmetric_wrong_game(pd):
    with pytest.raises(UnsupportedStructureError):
        solve_scg_cce_symmetric(pd)
    with pytest.raises(UnsupportedStructureError):
        dispatch_solve(pd, "ce", cfg=RunConfig(oracle="scg-symmetric"))


def test_full_lp_one_player():
    game = GameInstance(NormalFormGame((3,), np.array([[2.0, 5.0, 1.0]])))
    report = solve_full_lp(game, ObjectiveSpec(), "ce")
    assert report.value == pytest.approx(5.0)
    assert report.distribution.support == (((1,), 1.0),)


def test_optimal_outcome(pd, chicken):
    assert optimal_outcome(pd) == ((0, 0), pytest.approx(6.0))
    assert optimal_outcome(chicken) == ((0, 0), pytest.approx(12.0))
    worst_profile, worst = optimal_outcome(chicken, ObjectiveSpec(direction="min"))
    assert worst == pytest.approx(0.0)
    assert worst_profile == (1, 1)


def test_optimal_outcome_specialized_paths():
    tree = gen_tree_polymatrix(3, 5, 2)
    s, v = optimal_outcome(tree)
    brute, bv = optimal_outcome(
        GameInstance(NormalFormGame(tree.action_counts, tree.dense_utilities()))
    )
    assert v == pytest.approx(bv, abs=1e-9)
    scg = gen_singleton_congestion(3, 4, 2)
    s, v = optimal_outcome(scg)
    dense = GameInstance(NormalFormGame(scg.action_counts, scg.dense_utilities()))
    _, bv = optimal_outcome(dense)
    assert v == pytest.approx(bv, abs=1e-9)
    assert tuple(sorted(s)) == s  # count-class witness is lexicographically packed


def test_poa(pd):
    out = price_of_anarchy(pd, "ce")
    assert out["ratio"] == pytest.approx(3.0, abs=1e-6)
    assert out["best_outcome_welfare"] == pytest.approx(6.0)
    assert out["worst_equilibrium_welfare"] == pytest.approx(2.0, abs=1e-6)


def test_poa_constant_game_is_one():
    game = GameInstance(NormalFormGame((2, 2), np.full((2, 4), 1.0)))
    assert price_of_anarchy(game, "ce")["ratio"] == pytest.approx(1.0, abs=1e-6)
    assert price_of_anarchy(game, "cce")["ratio"] == pytest.approx(1.0, abs=1e-6)


def test_poa_undefined_for_nonpositive_welfare():
    game = GameInstance(NormalFormGame((2, 2), np.zeros((2, 4))))
    with pytest.raises(UndefinedRatioError):
        price_of_anarchy(game, "ce")


def test_iteration_cap_raises(chicken):
    with pytest.raises(NonconvergenceError):
        solve_optimal_ce(chicken, cfg=RunConfig(max_iterations=1))


def test_determinism(chicken):
    a = solve_optimal_ce(chicken)
    b = solve_optimal_ce(chicken)
    assert a == b


def test_report_roundtrip(chicken):
    report = solve_optimal_ce(chicken)
    doc = report.to_dict()
    dist = distribution_from_dict(doc)
    assert dist == report.distribution
    assert doc["report"]["support_size"] == len(report.distribution)
    sym = solve_scg_cce_symmetric(gen_singleton_congestion(1, 3, 2))
    doc = sym.to_dict()
    assert isinstance(distribution_from_dict(doc), ExchangeableDistribution)


def test_injected_pricer_is_used(chicken):
    calls = []

    def pricer(weights, plan, t, eps):
        from ceopt.oracles import oracle_bruteforce

        calls.append(t)
        return oracle_bruteforce(chicken, weights, plan, t, eps)

    report = solve_optimal_ce(chicken, oracle=pricer)
    assert report.value == pytest.approx(10.5, abs=1e-9)
    assert report.oracle_calls == len(calls)
