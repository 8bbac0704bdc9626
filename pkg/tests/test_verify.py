import numpy as np
import pytest

from ceopt.colgen import CorrelatedDistribution, ExchangeableDistribution
from ceopt.errors import ResourceLimitError
from ceopt.games import enumerate_profiles, utility
from ceopt.gen import gen_singleton_congestion
from ceopt.verify import (
    check_ce,
    check_cce,
    exchangeable_constraint_values,
    expand_exchangeable,
    expected_utilities,
)

CHICKEN_OPT = CorrelatedDistribution((((0, 0), 0.5), ((0, 1), 0.25), ((1, 0), 0.25)))


def test_pd_point_mass(pd):
    report = check_ce(pd, CorrelatedDistribution((((1, 1), 1.0),)))
    assert report.min_ce_constraint == pytest.approx(1.0)
    assert report.prob_sum_residual == 0.0
    assert report.expected_utilities == (1.0, 1.0)
    assert report.within(1e-7)


def test_chicken_optimal_is_tight(chicken):
    report = check_ce(chicken, CHICKEN_OPT)
    assert report.min_ce_constraint == pytest.approx(0.0, abs=1e-12)
    assert report.expected_utilities == pytest.approx((5.25, 5.25))
    assert report.objective == pytest.approx(10.5)


def test_non_equilibrium_flagged(chicken):
    # all mass on (dare, dare) is far from any equilibrium of chicken
    report = check_ce(chicken, CorrelatedDistribution((((1, 1), 1.0),)))
    assert report.min_ce_constraint < -1.0
    assert not report.within(1e-7)


def test_uniform_constant_game():
    from ceopt.games import GameInstance, NormalFormGame

    game = GameInstance(NormalFormGame((2, 2), np.ones((2, 4))))
    uniform = CorrelatedDistribution(tuple((s, 0.25) for s in enumerate_profiles(game)))
    report = check_ce(game, uniform)
    assert report.min_ce_constraint == 0.0
    assert report.min_cce_constraint == 0.0


def test_uniform_chicken_expectations(chicken):
    uniform = CorrelatedDistribution(
        tuple((s, 0.25) for s in enumerate_profiles(chicken))
    )
    assert expected_utilities(chicken, uniform) == pytest.approx((3.75, 3.75))


def test_expected_utilities_sum_matches_objective(chicken):
    report = check_ce(chicken, CHICKEN_OPT)
    assert sum(report.expected_utilities) == pytest.approx(report.objective, abs=1e-9)


def test_cce_minimum_over_all_targets(pd):
    report = check_cce(pd, CorrelatedDistribution((((1, 1), 1.0),)))
    # rows (p, defect) are exactly zero for the point mass on (1, 1)
    assert report.min_cce_constraint == pytest.approx(0.0, abs=1e-12)


def test_expand_point_class():
    game = gen_singleton_congestion(0, 2, 2)
    out = expand_exchangeable(game, ExchangeableDistribution((((1, 1), 1.0),)))
    assert out.support == (((0, 1), 0.5), ((1, 0), 0.5))
    out = expand_exchangeable(game, ExchangeableDistribution((((2, 0), 1.0),)))
    assert out.support == (((0, 0), 1.0),)


def test_expand_three_player_class():
    game = gen_singleton_congestion(0, 3, 2)
    out = expand_exchangeable(game, ExchangeableDistribution((((2, 1), 1.0),)))
    assert len(out.support) == 3
    assert all(p == pytest.approx(1 / 3) for _, p in out.support)
    assert {s for s, _ in out.support} == {(0, 0, 1), (0, 1, 0), (1, 0, 0)}


def test_expand_cap():
    game = gen_singleton_congestion(0, 6, 2)
    dist = ExchangeableDistribution((((3, 3), 1.0),))
    with pytest.raises(ResourceLimitError):
        expand_exchangeable(game, dist, cap=10)


def test_count_space_matches_expansion():
    for seed in range(6):
        n, k = 3 + seed % 3, 2 + seed % 2
        game = gen_singleton_congestion(seed, n, k)
        rng = np.random.default_rng(seed)
        counts = [c for c in _all_counts(n, k)]
        probs = rng.uniform(0.1, 1, size=len(counts))
        probs /= probs.sum()
        dist = ExchangeableDistribution(
            tuple((c, float(p)) for c, p in zip(counts, probs))
        )
        count_vals = exchangeable_constraint_values(game, dist)
        expanded = expand_exchangeable(game, dist)
        for j in range(k):
            for p in range(n):
                direct = sum(
                    prob
                    * (utility(game, p, s) - _deviation(game, p, s, j))
                    for s, prob in expanded.support
                )
                assert direct == pytest.approx(count_vals[j], abs=1e-9)


def _all_counts(n, k):
    import itertools

    for c in itertools.product(range(n + 1), repeat=k):
        if sum(c) == n:
            yield c


def _deviation(game, p, s, j):
    s2 = list(s)
    s2[p] = j
    return utility(game, p, s2)


def test_invalid_distributions_rejected(pd):
    with pytest.raises(ValueError):
        CorrelatedDistribution((((0, 0), 0.5), ((0, 0), 0.5)))
    with pytest.raises(ValueError):
        CorrelatedDistribution((((0, 0), -0.1), ((0, 1), 1.1)))
    with pytest.raises(ValueError):
        CorrelatedDistribution((((0, 0), 0.7),))
    with pytest.raises(ValueError):
        check_ce(pd, CorrelatedDistribution((((0, 5), 1.0),)))
