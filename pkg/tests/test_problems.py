import math

import numpy as np
import pytest
from conftest import arc_positions

from evenfront.core import dominates, nondominated_indices
from evenfront.problems import (
    PROBLEM_IDS,
    get_problem,
    load_true_front,
    true_front_points,
)


class TestRegistry:
    def test_ids(self):
        assert PROBLEM_IDS == ("SPHERE", "DENT", "ZDT3", "WFG1")

    def test_unknown_problem(self):
        with pytest.raises(ValueError, match="NOPE"):
            get_problem("NOPE")

    def test_shapes_and_bounds(self):
        expected = {
            "SPHERE": (2, [-2, -2], [2, 2], (4, 4)),
            "DENT": (2, [-2, -2], [2, 2], (5, 5)),
            "ZDT3": (20, [0] * 20, [1] * 20, (1, 7)),
            "WFG1": (6, [0] * 6, [2, 4, 6, 8, 10, 12], (3, 5)),
        }
        for pid, (n, lo, hi, hv) in expected.items():
            spec = get_problem(pid)
            assert spec.n == n
            assert spec.m == 2
            assert spec.lower.tolist() == [float(v) for v in lo]
            assert spec.upper.tolist() == [float(v) for v in hi]
            assert tuple(spec.hv_ref) == hv


class TestEvaluate:
    def test_sphere_hand_values(self):
        spec = get_problem("SPHERE")
        assert tuple(spec.evaluate([0.0, 0.0])) == (0.0, 2.0)
        assert tuple(spec.evaluate([1.0, 1.0])) == (2.0, 0.0)

    def test_zdt3_hand_values(self):
        spec = get_problem("ZDT3")
        x = np.zeros(20)
        assert tuple(spec.evaluate(x)) == (0.0, 1.0)
        x[0] = 1.0
        f1, f2 = spec.evaluate(x)
        assert f1 == 1.0
        assert f2 == pytest.approx(1 - 1 - math.sin(10 * math.pi), abs=1e-12)

    def test_dent_symmetry(self):
        # swapping x1 and x2 flips u, which swaps the objectives
        spec = get_problem("DENT")
        f = spec.evaluate([0.7, -0.3])
        g = spec.evaluate([-0.3, 0.7])
        assert tuple(f) == (g[1], g[0])

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            get_problem("SPHERE").evaluate([0.0, 0.0, 0.0])

    def test_batch_matches_single(self):
        rng = np.random.default_rng(21)
        for pid in PROBLEM_IDS:
            spec = get_problem(pid)
            X = rng.uniform(spec.lower, spec.upper, (40, spec.n))
            batch = spec.evaluate_batch(X)
            for i in range(len(X)):
                assert tuple(spec.evaluate(X[i])) == tuple(batch[i])

    def test_pure_bitwise(self):
        rng = np.random.default_rng(22)
        for pid in PROBLEM_IDS:
            spec = get_problem(pid)
            x = rng.uniform(spec.lower, spec.upper)
            assert tuple(spec.evaluate(x)) == tuple(spec.evaluate(x.copy()))

    def test_finite_on_bounds_corners(self):
        for pid in PROBLEM_IDS:
            spec = get_problem(pid)
            for corner in (spec.lower, spec.upper):
                assert np.all(np.isfinite(np.asarray(spec.evaluate(corner))))

    def test_clip(self):
        spec = get_problem("SPHERE")
        clipped = spec.clip(np.array([[5.0, -5.0]]))
        assert clipped.tolist() == [[2.0, -2.0]]


class TestTrueFrontPoints:
    def test_k_below_two_rejected(self):
        with pytest.raises(ValueError):
            true_front_points(get_problem("SPHERE"), 1)

    def test_sphere_points_on_curve(self):
        pts = true_front_points(get_problem("SPHERE"), 200)
        # curve: f1 = 2t^2, f2 = 2(1-t)^2 with t recovered from f1
        t = np.sqrt(pts[:, 0] / 2.0)
        resid = np.abs(pts[:, 1] - 2.0 * (1.0 - t) ** 2)
        assert resid.max() < 1e-9

    def test_zdt3_points_on_curve_and_nondominated(self):
        pts = true_front_points(get_problem("ZDT3"), 500)
        f1, f2 = pts[:, 0], pts[:, 1]
        resid = np.abs(f2 - (1 - np.sqrt(f1) - f1 * np.sin(10 * np.pi * f1)))
        assert resid.max() < 1e-9
        assert len(nondominated_indices(pts)) == len(pts)

    def test_spacing_sphere_dent(self):
        for pid in ("SPHERE", "DENT"):
            spec = get_problem(pid)
            k = 40
            pts = true_front_points(spec, k)
            pos, total = arc_positions(spec, pts)
            gaps = np.diff(pos)
            target = total / k
            assert np.all(np.abs(gaps - target) / target < 0.005)
            assert abs(pos[0] - target / 2) / (target / 2) < 0.005
            assert abs((total - pos[-1]) - target / 2) / (target / 2) < 0.005

    def test_dent_k2_quartile_points(self):
        spec = get_problem("DENT")
        pts = true_front_points(spec, 2)
        pos, total = arc_positions(spec, pts)
        assert pos[0] == pytest.approx(total / 4, rel=1e-3)
        assert pos[1] == pytest.approx(3 * total / 4, rel=1e-3)

    def test_wfg1_front_is_nondominated_selection(self):
        pts = true_front_points(get_problem("WFG1"), 60)
        assert pts.shape == (60, 2)
        assert len(nondominated_indices(pts)) == 60
        assert np.all(pts[:, 0] >= 0) and np.all(pts[:, 0] <= 2.0 + 1e-9)
        assert np.all(pts[:, 1] <= 4.0 + 1e-9)

    def test_random_points_never_dominate_front(self):
        rng = np.random.default_rng(23)
        for pid in PROBLEM_IDS:
            spec = get_problem(pid)
            front = true_front_points(spec, 100)
            X = rng.uniform(spec.lower, spec.upper, (1000, spec.n))
            F = spec.evaluate_batch(X)
            margin = F - 1e-9
            for fp in front:
                beats = np.all(margin <= fp, axis=1) & np.any(margin < fp, axis=1)
                assert not beats.any(), f"{pid}: sampled point dominates front"


class TestLoadTrueFront:
    def test_cache_roundtrip(self, tmp_path):
        spec = get_problem("SPHERE")
        first = load_true_front(spec, 50, cache_dir=tmp_path)
        path = tmp_path / "SPHERE_k50.csv"
        assert path.exists()
        again = load_true_front(spec, 50, cache_dir=tmp_path)
        assert np.array_equal(first, again)

    def test_corrupt_cache_regenerated(self, tmp_path):
        spec = get_problem("SPHERE")
        path = tmp_path / "SPHERE_k50.csv"
        path.write_text("f_0,f_1\n0.0,0.0\n")
        pts = load_true_front(spec, 50, cache_dir=tmp_path)
        assert pts.shape == (50, 2)
