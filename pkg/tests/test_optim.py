"""Tests for the five optimizers and their shared selection machinery."""

import numpy as np
import pytest

from evenfront.core import nondominated_indices, write_trace_csv
from evenfront.indicators import hv_contributions_2d, hypervolume_2d
from evenfront.optim import (
    ALGORITHM_IDS,
    IMPLEMENTED_ALGORITHMS,
    RESERVED_ALGORITHMS,
    OptimizerConfig,
    binary_tournament,
    crowding_distance,
    fast_nondominated_sort,
    make_rng,
    nsga2_survival,
    polynomial_mutation,
    run,
    run_mo_cma_es,
    run_naive_midea,
    run_nsga2,
    run_scd_nsga2,
    run_sms_emoa,
    sbx_pair,
    scd_truncate,
    sms_survival,
)
from evenfront.optim.midea import leader_cluster, midea_select
from evenfront.optim.mo_cma_es import (
    _Strategy,
    default_rates,
    update_path_and_cov,
    updated_sigma,
    updated_success_prob,
)
from evenfront.problems import get_problem, true_front_points

RUNNERS = {
    "NSGA2": run_nsga2,
    "SCD-NSGA2": run_scd_nsga2,
    "SMS-EMOA": run_sms_emoa,
    "NAIVE-MIDEA": run_naive_midea,
    "MO-CMA-ES": run_mo_cma_es,
}


def cfg_for(algorithm, mu=10, budget=65, seed=99, **params):
    return OptimizerConfig(algorithm=algorithm, mu=mu, budget=budget,
                           seed=seed, params=dict(params))


class TestConfig:
    def test_population_too_small(self):
        with pytest.raises(ValueError, match=">= 2"):
            OptimizerConfig(algorithm="NSGA2", mu=1, budget=100, seed=0)

    def test_budget_below_population(self):
        with pytest.raises(ValueError, match="budget"):
            OptimizerConfig(algorithm="NSGA2", mu=10, budget=9, seed=0)


class TestFastNondominatedSort:
    def test_single_front_when_mutually_nondominated(self):
        F = np.array([[0, 3], [1, 2], [2, 1], [3, 0]])
        fronts = fast_nondominated_sort(F)
        assert len(fronts) == 1
        np.testing.assert_array_equal(fronts[0], [0, 1, 2, 3])

    def test_chain_gives_singleton_fronts(self):
        F = np.array([[i, i] for i in range(5)])
        fronts = fast_nondominated_sort(F)
        assert [list(f) for f in fronts] == [[0], [1], [2], [3], [4]]

    def test_matches_peeling_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            F = rng.uniform(0, 1, (100, 2))
            fronts = fast_nondominated_sort(F)
            remaining = np.arange(len(F))
            for front in fronts:
                peel = remaining[nondominated_indices(F[remaining])]
                np.testing.assert_array_equal(np.sort(front), np.sort(peel))
                remaining = np.setdiff1d(remaining, peel)
            assert len(remaining) == 0


class TestCrowdingDistance:
    def test_two_points_both_infinite(self):
        cd = crowding_distance(np.array([[0, 1], [1, 0]]))
        assert np.all(np.isinf(cd))

    def test_single_point_infinite(self):
        assert np.isinf(crowding_distance(np.array([[0.5, 0.5]]))[0])

    def test_middle_of_three_evenly_spaced(self):
        F = np.array([[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]])
        cd = crowding_distance(F)
        assert np.isinf(cd[0]) and np.isinf(cd[2])
        assert cd[1] == pytest.approx(2.0, abs=1e-15)

    def test_extremes_always_infinite(self):
        rng = np.random.default_rng(5)
        x = np.sort(rng.uniform(0, 1, 10))
        F = np.column_stack([x, 1 - x])
        cd = crowding_distance(F)
        assert np.isinf(cd[0]) and np.isinf(cd[-1])
        assert np.all(np.isfinite(cd[1:-1]))


class TestScdTruncate:
    def test_identity_at_target_size(self):
        F = np.array([[0, 2], [1, 1], [2, 0]])
        np.testing.assert_array_equal(scd_truncate(F, 3), [0, 1, 2])

    def test_four_points_keep_extremes(self):
        t = np.array([0.0, 1 / 3, 2 / 3, 1.0])
        F = np.column_stack([t, 1 - t])
        kept = scd_truncate(F, 3)
        assert 0 in kept and 3 in kept
        assert len(kept) == 3

    def test_cluster_pair_keeps_far_point(self):
        F = np.array([[0.0, 1.0], [0.01, 0.99], [1.0, 0.0]])
        kept = scd_truncate(F, 2)
        np.testing.assert_array_equal(kept, [0, 2])

    def test_too_small_population(self):
        with pytest.raises(ValueError, match="truncate"):
            scd_truncate(np.array([[0, 1], [1, 0]]), 3)

    def test_better_fronts_survive_whole(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            F = rng.uniform(0, 1, (12, 2))
            mu = int(rng.integers(2, 12))
            kept = scd_truncate(F, mu)
            assert len(kept) == mu
            fronts = fast_nondominated_sort(F)
            taken = set(kept.tolist())
            for front in fronts:
                ids = set(front.tolist())
                if ids <= taken:
                    taken -= ids
                    continue
                assert taken <= ids
                break

    def test_differs_from_oneshot_by_recomputation(self):
        # Twin points at 0.4/0.41: one-shot truncation drops both twins at
        # once, while sequential removal lets the surviving twin's crowding
        # recover, so a different interior point goes instead.
        t = np.array([0.0, 0.4, 0.41, 0.7, 1.0])
        F = np.column_stack([t, 1 - t])
        one_shot = set(nsga2_survival(F, 3).tolist())
        sequential = set(scd_truncate(F, 3).tolist())
        assert one_shot == {0, 3, 4}
        assert sequential == {0, 1, 4}


class TestVariationOperators:
    def test_sbx_within_bounds_and_deterministic(self):
        lower, upper = np.array([-1.0, -1.0]), np.array([1.0, 1.0])
        p1, p2 = np.array([-0.9, 0.2]), np.array([0.8, -0.4])
        a1, a2 = sbx_pair(make_rng(5), p1, p2, lower, upper, 1.0, 20.0)
        b1, b2 = sbx_pair(make_rng(5), p1, p2, lower, upper, 1.0, 20.0)
        np.testing.assert_array_equal(a1, b1)
        np.testing.assert_array_equal(a2, b2)
        for child in (a1, a2):
            assert np.all(child >= lower) and np.all(child <= upper)

    def test_sbx_zero_probability_copies_parents(self):
        lower, upper = np.zeros(2), np.ones(2)
        p1, p2 = np.array([0.2, 0.3]), np.array([0.8, 0.7])
        c1, c2 = sbx_pair(make_rng(1), p1, p2, lower, upper, 0.0, 20.0)
        np.testing.assert_array_equal(c1, p1)
        np.testing.assert_array_equal(c2, p2)

    def test_mutation_within_bounds(self):
        lower, upper = np.array([-2.0, -2.0]), np.array([2.0, 2.0])
        rng = make_rng(9)
        for _ in range(200):
            x = rng.uniform(lower, upper)
            y = polynomial_mutation(rng, x, lower, upper, 1.0, 20.0)
            assert np.all(y >= lower) and np.all(y <= upper)

    def test_mutation_zero_probability_is_identity(self):
        x = np.array([0.1, -0.5])
        y = polynomial_mutation(make_rng(2), x, np.full(2, -1.0), np.ones(2),
                                0.0, 20.0)
        np.testing.assert_array_equal(y, x)

    def test_tournament_prefers_rank_then_crowding(self):
        rng = make_rng(11)
        rank = np.array([0, 1])
        crowd = np.array([0.0, 0.0])
        # P(return 0) = 3/4: only the (i=1, j=1) draw keeps index 1
        wins = [binary_tournament(rng, rank, crowd) for _ in range(200)]
        assert wins.count(0) > 125
        rank = np.array([0, 0])
        crowd = np.array([5.0, 1.0])
        wins = [binary_tournament(rng, rank, crowd) for _ in range(200)]
        assert wins.count(0) > 125


class TestSmsSurvival:
    def test_dominated_point_removed_first(self):
        F = np.array([[0.0, 1.0], [1.0, 0.0], [2.0, 2.0]])
        assert sms_survival(F, (3, 3)) == 2

    def test_smallest_exclusive_contribution_removed(self):
        F = np.array([[0.0, 1.0], [0.45, 0.55], [1.0, 0.0]])
        contrib = hv_contributions_2d(F, (3, 3))
        assert int(np.argmin(contrib)) == 1
        assert sms_survival(F, (3, 3)) == 1

    def test_tie_breaks_to_first_index(self):
        F = np.array([[0.0, 2.0], [1.0, 1.0], [2.0, 0.0]])
        contrib = hv_contributions_2d(F, (3, 3))
        assert contrib[0] == contrib[1] == contrib[2]
        assert sms_survival(F, (3, 3)) == 0


class TestRunContracts:
    @pytest.mark.parametrize("algorithm", IMPLEMENTED_ALGORITHMS)
    def test_trace_and_final_population(self, algorithm):
        spec = get_problem("SPHERE")
        cfg = cfg_for(algorithm)
        result = RUNNERS[algorithm](spec, cfg)
        assert len(result.trace) == cfg.budget
        assert result.trace.problem_id == "SPHERE"
        assert result.trace.run_seed == cfg.seed
        assert len(result.final_population) == cfg.mu
        by_index = {s.eval_index: s for s in result.trace.solutions}
        for member in result.final_population:
            assert by_index[member.eval_index] is member
        X = np.array([s.x for s in result.trace.solutions])
        assert np.all(X >= spec.lower) and np.all(X <= spec.upper)
        assert result.wall_time >= 0.0

    @pytest.mark.parametrize("algorithm", IMPLEMENTED_ALGORITHMS)
    def test_trace_objectives_match_reevaluation(self, algorithm):
        spec = get_problem("DENT")
        result = RUNNERS[algorithm](spec, cfg_for(algorithm, budget=47))
        X = np.array([s.x for s in result.trace.solutions])
        F = np.array([tuple(s.f) for s in result.trace.solutions])
        np.testing.assert_array_equal(spec.evaluate_batch(X), F)

    @pytest.mark.parametrize("algorithm", IMPLEMENTED_ALGORITHMS)
    def test_budget_equal_mu_returns_initial_population(self, algorithm):
        spec = get_problem("SPHERE")
        result = RUNNERS[algorithm](spec, cfg_for(algorithm, mu=10, budget=10))
        assert len(result.trace) == 10
        assert [s.eval_index for s in result.final_population] == list(range(10))

    @pytest.mark.parametrize("algorithm", IMPLEMENTED_ALGORITHMS)
    def test_same_seed_bit_identical_csv(self, algorithm, tmp_path):
        spec = get_problem("SPHERE")
        first = RUNNERS[algorithm](spec, cfg_for(algorithm, budget=43, seed=7))
        second = RUNNERS[algorithm](spec, cfg_for(algorithm, budget=43, seed=7))
        pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
        write_trace_csv(first.trace, pa)
        write_trace_csv(second.trace, pb)
        assert pa.read_bytes() == pb.read_bytes()
        assert [s.eval_index for s in first.final_population] == \
            [s.eval_index for s in second.final_population]

    @pytest.mark.parametrize("algorithm,b_small,b_big", [
        ("NSGA2", 30, 50),
        ("SCD-NSGA2", 30, 50),
        ("SMS-EMOA", 30, 50),
        ("NAIVE-MIDEA", 24, 38),
        ("MO-CMA-ES", 30, 50),
    ])
    def test_smaller_budget_is_trace_prefix(self, algorithm, b_small, b_big):
        spec = get_problem("SPHERE")
        small = RUNNERS[algorithm](spec, cfg_for(algorithm, budget=b_small, seed=3))
        big = RUNNERS[algorithm](spec, cfg_for(algorithm, budget=b_big, seed=3))
        for s, b in zip(small.trace.solutions, big.trace.solutions):
            assert s.x == b.x
            assert tuple(s.f) == tuple(b.f)

    def test_different_seeds_differ(self):
        spec = get_problem("SPHERE")
        a = run_nsga2(spec, cfg_for("NSGA2", seed=1))
        b = run_nsga2(spec, cfg_for("NSGA2", seed=2))
        assert any(
            sa.x != sb.x for sa, sb in zip(a.trace.solutions, b.trace.solutions)
        )


class TestDispatch:
    def test_reserved_identifiers(self):
        spec = get_problem("SPHERE")
        cfg = cfg_for("NSGA2")
        for name in RESERVED_ALGORITHMS:
            assert name in ALGORITHM_IDS
            with pytest.raises(NotImplementedError, match=name):
                run(name, spec, cfg)

    def test_unknown_algorithm(self):
        with pytest.raises(ValueError, match="unknown algorithm"):
            run("NOPE", get_problem("SPHERE"), cfg_for("NSGA2"))

    def test_dispatch_matches_direct_call(self):
        spec = get_problem("SPHERE")
        direct = run_sms_emoa(spec, cfg_for("SMS-EMOA", budget=25, seed=4))
        routed = run("SMS-EMOA", spec, cfg_for("NSGA2", budget=25, seed=4))
        for s, b in zip(direct.trace.solutions, routed.trace.solutions):
            assert s.x == b.x

    def test_ids_are_distinct(self):
        assert len(set(ALGORITHM_IDS.values())) == len(ALGORITHM_IDS)


class TestNsga2Convergence:
    @pytest.mark.parametrize("runner", [run_nsga2, run_scd_nsga2])
    def test_sphere_hypervolume_bound(self, runner):
        spec = get_problem("SPHERE")
        cfg = OptimizerConfig(algorithm="NSGA2", mu=20, budget=2000, seed=2015)
        result = runner(spec, cfg)
        final_F = np.array([tuple(s.f) for s in result.final_population])
        analytic = true_front_points(spec, 1000)
        hv_front = hypervolume_2d(analytic, (4.0, 4.0))
        hv_final = hypervolume_2d(final_F, (4.0, 4.0))
        assert hv_final >= 0.95 * hv_front


class TestSmsEmoaReplay:
    def test_steady_state_replay_and_hv_monotonicity(self):
        spec = get_problem("SPHERE")
        cfg = cfg_for("SMS-EMOA", mu=10, budget=300, seed=17)
        result = run_sms_emoa(spec, cfg)
        F = np.array([tuple(s.f) for s in result.trace.solutions])
        pop = list(range(cfg.mu))
        hv_prev = hypervolume_2d(F[pop], spec.hv_ref)
        for t in range(cfg.mu, cfg.budget):
            pop.append(t)
            drop = sms_survival(F[pop], spec.hv_ref)
            del pop[drop]
            hv_now = hypervolume_2d(F[pop], spec.hv_ref)
            assert hv_now >= hv_prev - 1e-12
            hv_prev = hv_now
        assert pop == [s.eval_index for s in result.final_population]


class TestMidea:
    def test_select_whole_groups_by_domination_count(self):
        F = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
        np.testing.assert_array_equal(midea_select(F, 2), [0, 1])

    def test_select_boundary_group_farthest_point(self):
        F = np.array([[0.0, 1.0], [0.02, 0.98], [1.0, 0.0]])
        chosen = midea_select(F, 2)
        assert set(chosen.tolist()) == {0, 2}

    def test_select_count_validation(self):
        F = np.array([[0.0, 1.0], [1.0, 0.0]])
        with pytest.raises(ValueError, match="select"):
            midea_select(F, 0)
        with pytest.raises(ValueError, match="select"):
            midea_select(F, 3)

    def test_leader_two_separated_clusters(self):
        points = np.array([[0.0, 0.0], [0.05, 0.0], [1.0, 1.0], [0.95, 1.0]])
        clusters = leader_cluster(points, threshold=0.1, max_clusters=3)
        assert [c.tolist() for c in clusters] == [[0, 1], [2, 3]]

    def test_leader_cap_merges_to_nearest(self):
        points = np.array([[0.0, 0.0], [1.0, 1.0], [0.9, 0.9]])
        clusters = leader_cluster(points, threshold=0.1, max_clusters=2)
        assert [c.tolist() for c in clusters] == [[0], [1, 2]]

    def test_leader_partitions_input(self):
        rng = np.random.default_rng(13)
        points = rng.uniform(0, 1, (40, 2))
        clusters = leader_cluster(points, threshold=0.2, max_clusters=5)
        assert len(clusters) <= 5
        all_ids = sorted(i for c in clusters for i in c.tolist())
        assert all_ids == list(range(40))

    def test_tiny_population_variance_floor_run(self):
        # floor(0.3 * 3) = 0 -> one selected individual -> degenerate cluster;
        # the variance floor keeps sampling finite and clipping keeps bounds
        spec = get_problem("SPHERE")
        result = run_naive_midea(spec, cfg_for("NAIVE-MIDEA", mu=3, budget=15))
        X = np.array([s.x for s in result.trace.solutions])
        assert np.all(X >= spec.lower) and np.all(X <= spec.upper)
        assert len(result.final_population) == 3


class TestMoCmaEs:
    def test_default_rates_for_dimension_two(self):
        rates = default_rates(2)
        assert rates["d"] == 2.0
        assert rates["p_target"] == 0.181
        assert rates["c_p"] == pytest.approx(0.181 / 2.181, abs=1e-15)
        assert rates["c_c"] == 0.5
        assert rates["c_cov"] == 0.2
        assert rates["p_thresh"] == 0.44

    def test_sigma_fixed_point_at_target_rate(self):
        assert updated_sigma(0.7, 0.181, d=2.0, p_target=0.181) == 0.7

    def test_sigma_moves_with_success_rate(self):
        assert updated_sigma(1.0, 0.5, d=2.0, p_target=0.181) > 1.0
        assert updated_sigma(1.0, 0.05, d=2.0, p_target=0.181) < 1.0

    def test_success_probability_smoothing(self):
        c_p = 0.2
        up = updated_success_prob(0.5, True, c_p)
        down = updated_success_prob(0.5, False, c_p)
        assert up == pytest.approx(0.6, abs=1e-15)
        assert down == pytest.approx(0.4, abs=1e-15)

    def test_path_update_below_threshold_includes_step(self):
        c_c, c_cov = 0.5, 0.2
        p_c = np.zeros(2)
        C = np.eye(2)
        step = np.array([1.0, 0.0])
        p_new, C_new = update_path_and_cov(p_c, C, step, p_succ=0.1,
                                           c_c=c_c, c_cov=c_cov, p_thresh=0.44)
        expected_p = np.sqrt(c_c * (2 - c_c)) * step
        np.testing.assert_allclose(p_new, expected_p, atol=1e-15)
        expected_C = (1 - c_cov) * np.eye(2) + c_cov * np.outer(expected_p, expected_p)
        np.testing.assert_allclose(C_new, expected_C, atol=1e-15)

    def test_path_update_at_threshold_omits_step(self):
        c_c, c_cov = 0.5, 0.2
        p_c = np.array([0.3, -0.2])
        C = np.eye(2)
        step = np.array([100.0, 100.0])
        p_new, C_new = update_path_and_cov(p_c, C, step, p_succ=0.44,
                                           c_c=c_c, c_cov=c_cov, p_thresh=0.44)
        np.testing.assert_allclose(p_new, (1 - c_c) * p_c, atol=1e-15)
        expected_C = (1 - c_cov) * C + c_cov * (
            np.outer(p_new, p_new) + c_c * (2 - c_c) * C
        )
        np.testing.assert_allclose(C_new, expected_C, atol=1e-15)
        assert not np.any(np.abs(p_new) > 1.0)  # the huge step never leaked in

    def test_covariance_reset_on_indefinite_matrix(self, caplog):
        bad = np.array([[1.0, 2.0], [2.0, 1.0]])  # eigenvalues 3 and -1
        with caplog.at_level("WARNING"):
            st = _Strategy(sigma=1.0, p_succ=0.2, p_c=np.zeros(2), C=bad.copy())
        assert "positive definiteness" in caplog.text
        np.testing.assert_array_equal(st.C, np.eye(2))

    def test_rates_overridable_via_params(self):
        spec = get_problem("SPHERE")
        result = run_mo_cma_es(
            spec, cfg_for("MO-CMA-ES", budget=30, sigma0=0.5, d=3.0))
        assert len(result.trace) == 30
