"""Model-level behavior: Gaussian grades, grid structure, inference,
initialization, parameter layout, and checkpoint round trips."""

import math

import numpy as np
import pytest

from tskfuzzy import (
    SIGMA_MIN,
    DropMask,
    GaussianMF,
    RuleGrid,
    TskModel,
    firing_levels,
    flatten,
    init_model,
    load_model,
    param_count,
    predict,
    rule_outputs,
    save_model,
    unflatten,
)
from tskfuzzy.errors import ConstantFeature, LengthMismatch


def random_model(num_inputs, mfs_per_input, rng):
    grid = RuleGrid(num_inputs, mfs_per_input)
    return TskModel(
        grid,
        rng.standard_normal((num_inputs, mfs_per_input)),
        rng.uniform(0.5, 2.0, (num_inputs, mfs_per_input)),
        rng.standard_normal((grid.num_rules, num_inputs + 1)),
    )


class TestMembership:
    def test_one_at_center(self):
        assert GaussianMF(0.0, 1.0).grade(0.0) == 1.0

    def test_unit_offset(self):
        # exp(-0.5), evaluated independently
        assert abs(GaussianMF(0.0, 1.0).grade(1.0) - 0.6065306597126334) < 1e-15

    def test_half_width_offset(self):
        # (3-2)^2 / (2 * 0.25) = 2, so the grade is exp(-2)
        assert abs(GaussianMF(2.0, 0.5).grade(3.0) - 0.1353352832366127) < 1e-15

    def test_decreasing_in_distance(self):
        mf = GaussianMF(1.0, 0.7)
        grades = mf.grade(1.0 + np.linspace(0.0, 4.0, 30))
        assert np.all(np.diff(grades) < 0)
        assert np.all(grades > 0) and np.all(grades <= 1.0)

    def test_rejects_nonpositive_sigma(self):
        with pytest.raises(ValueError):
            GaussianMF(0.0, 0.0)
        with pytest.raises(ValueError):
            GaussianMF(0.0, -1.0)


class TestRuleGrid:
    def test_full_grid(self):
        grid = RuleGrid(3, 2)
        assert grid.num_rules == 8
        combos = {tuple(row) for row in grid.antecedents}
        assert len(combos) == 8  # every combination exactly once

    def test_rules_using_partitions_rules(self):
        grid = RuleGrid(3, 2)
        for m in range(3):
            seen = []
            for i in range(2):
                members = grid.rules_using(m, i)
                assert members.size == 2 ** (3 - 1)
                seen.extend(members.tolist())
            assert sorted(seen) == list(range(grid.num_rules))


class TestFiringLevels:
    def test_one_at_rule_centers(self):
        rng = np.random.default_rng(0)
        model = random_model(2, 2, rng)
        # place x exactly at the MFs of rule 0
        a = model.grid.antecedents[0]
        x = np.array([model.centers[m, a[m]] for m in range(2)])
        f = firing_levels(model, x)
        assert f[0] == 1.0
        assert np.all(f > 0) and np.all(f <= 1.0)

    def test_rule_mask_zeroes_dropped(self):
        rng = np.random.default_rng(1)
        model = random_model(2, 2, rng)
        x = rng.standard_normal(2)
        keep = np.array([False, True, True, True])
        masked = firing_levels(model, x, DropMask("rule", keep))
        unmasked = firing_levels(model, x)
        assert masked[0] == 0.0
        assert np.array_equal(masked[1:], unmasked[1:])

    def test_mf_mask_substitutes_one(self):
        """Dropping one shared MF replaces its grade by 1 in every rule
        using it; verified against brute-force enumeration of the grid."""
        grades = np.array([[0.5, 0.2], [0.8, 0.1]])  # input x MF
        centers = np.sqrt(-2.0 * np.log(grades))  # grade at x = 0 with sigma 1
        grid = RuleGrid(2, 2)
        model = TskModel(grid, centers, np.ones((2, 2)), np.zeros((4, 3)))
        keep = np.array([[False, True], [True, True]])  # drop MF (m=0, i=0)
        f = firing_levels(model, np.zeros(2), DropMask("mf", keep))
        expected = np.empty(4)
        for r, a in enumerate(grid.antecedents):
            val = 1.0
            for m in range(2):
                val *= 1.0 if not keep[m, a[m]] else grades[m, a[m]]
            expected[r] = val
        np.testing.assert_allclose(f, expected, rtol=1e-15)
        assert abs(f[0] - 0.8) < 1e-15  # rule (0, 0) keeps only its second factor

    def test_membership_mask_touches_one_rule(self):
        rng = np.random.default_rng(2)
        model = random_model(2, 2, rng)
        x = rng.standard_normal(2)
        keep = np.ones((4, 2), dtype=bool)
        keep[0, 0] = False
        masked = firing_levels(model, x, DropMask("membership", keep))
        unmasked = firing_levels(model, x)
        assert masked[0] != unmasked[0]
        assert np.array_equal(masked[1:], unmasked[1:])

    def test_all_slots_dropped_gives_one(self):
        rng = np.random.default_rng(3)
        model = random_model(2, 2, rng)
        keep = np.ones((4, 2), dtype=bool)
        keep[2] = False  # empty product for rule 2
        f = firing_levels(model, rng.standard_normal(2), DropMask("membership", keep))
        assert f[2] == 1.0


class TestPredict:
    def test_single_rule_returns_its_output(self):
        grid = RuleGrid(1, 1)
        model = TskModel(grid, [[0.2]], [[1.3]], [[0.3, 1.7]])
        for x in (-2.0, 0.0, 1.5):
            assert predict(model, [x]) == 0.3 + 1.7 * x

    def test_equal_consequents_ignore_firing(self):
        rng = np.random.default_rng(4)
        model = random_model(2, 2, rng)
        model.consequents[:] = np.array([1.0, 2.0, -0.5])
        for _ in range(5):
            x = rng.standard_normal(2)
            want = 1.0 + 2.0 * x[0] - 0.5 * x[1]
            assert abs(predict(model, x) - want) < 1e-12 * max(1.0, abs(want))

    def test_symmetric_two_mf_average(self):
        # equal firing on consequents 0 and 1 averages to exactly 0.5
        grid = RuleGrid(1, 2)
        model = TskModel(grid, [[-1.0, 1.0]], [[1.0, 1.0]], [[0.0, 0.0], [1.0, 0.0]])
        f = firing_levels(model, [0.0])
        assert abs(f[0] - math.exp(-0.5)) < 1e-15 and f[0] == f[1]
        assert abs(predict(model, [0.0]) - 0.5) < 1e-15

    def test_underflow_falls_back_to_mean(self):
        grid = RuleGrid(1, 2)
        model = TskModel(
            grid, [[0.0, 1.0]], [[SIGMA_MIN, SIGMA_MIN]], [[4.0, 0.0], [8.0, 0.0]]
        )
        x = np.array([1e3])  # every grade underflows to exactly zero
        assert np.all(firing_levels(model, x) == 0.0)
        assert predict(model, x) == 6.0

    def test_scale_invariant_weighting(self):
        rng = np.random.default_rng(5)
        model = random_model(3, 2, rng)
        x = rng.standard_normal(3)
        f = firing_levels(model, x)
        out = rule_outputs(model, x)
        for c in (3.7, 0.004, 250.0):
            scaled = (c * f) @ out / (c * f).sum()
            assert abs(scaled - predict(model, x)) < 1e-12 * max(1.0, abs(scaled))

    def test_normalized_firing_sums_to_one(self):
        rng = np.random.default_rng(6)
        model = random_model(2, 3, rng)
        for _ in range(10):
            f = firing_levels(model, rng.standard_normal(2))
            assert abs(f.sum() / f.sum() - 1.0) == 0.0
            assert abs((f / f.sum()).sum() - 1.0) < 1e-12


class TestInitModel:
    def test_two_mf_centers_at_extremes(self):
        model = init_model([0.0], [10.0], [3.0], 2)
        np.testing.assert_array_equal(model.centers, [[0.0, 10.0]])
        np.testing.assert_array_equal(model.sigmas, [[3.0, 3.0]])

    def test_three_mf_centers_evenly_spaced(self):
        model = init_model([0.0], [10.0], [3.0], 3)
        np.testing.assert_array_equal(model.centers, [[0.0, 5.0, 10.0]])

    def test_consequents_start_at_zero(self):
        model = init_model([0.0, -1.0], [1.0, 4.0], [0.5, 2.0], 2)
        assert model.consequents.shape == (4, 3)
        assert np.all(model.consequents == 0.0)

    def test_rejects_constant_feature(self):
        with pytest.raises(ConstantFeature):
            init_model([1.0, 2.0], [1.0, 3.0], [0.5, 0.5], 2)


class TestParamCount:
    def test_reference_grids(self):
        assert param_count(5, 2) == 212
        assert param_count(4, 2) == 96
        assert param_count(1, 1) == 4

    def test_matches_flatten_length(self):
        rng = np.random.default_rng(7)
        for m, mm in [(1, 2), (2, 2), (3, 2), (2, 3), (1, 1)]:
            model = random_model(m, mm, rng)
            assert flatten(model).size == param_count(m, mm)

    def test_overflow_guard(self):
        with pytest.raises(OverflowError):
            param_count(50, 3)


class TestFlatten:
    def test_round_trip_identity(self):
        rng = np.random.default_rng(8)
        model = random_model(2, 3, rng)
        back = unflatten(flatten(model), 2, 3)
        np.testing.assert_array_equal(back.centers, model.centers)
        np.testing.assert_array_equal(back.sigmas, model.sigmas)
        np.testing.assert_array_equal(back.consequents, model.consequents)

    def test_bias_offsets(self):
        rng = np.random.default_rng(9)
        m, mm = 2, 2
        model = random_model(m, mm, rng)
        vec = flatten(model)
        for r in range(model.num_rules):
            assert vec[2 * m * mm + r * (m + 1)] == model.consequents[r, 0]

    def test_wrong_length_rejected(self):
        with pytest.raises(LengthMismatch):
            unflatten(np.zeros(11), 2, 2)


class TestCheckpoint:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(10)
        model = random_model(3, 2, rng)
        path = tmp_path / "model.txt"
        save_model(model, path)
        back = load_model(path)
        assert back.num_inputs == 3 and back.mfs_per_input == 2
        np.testing.assert_array_equal(flatten(back), flatten(model))

    def test_header_format(self, tmp_path):
        model = init_model([0.0], [1.0], [0.5], 2)
        path = tmp_path / "model.txt"
        save_model(model, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "M=1" and lines[1] == "Mm=2"
        assert len(lines) == 2 + param_count(1, 2)

    def test_truncated_file_rejected(self, tmp_path):
        model = init_model([0.0], [1.0], [0.5], 2)
        path = tmp_path / "model.txt"
        save_model(model, path)
        lines = path.read_text().splitlines()
        path.write_text("\n".join(lines[:-2]) + "\n")
        with pytest.raises(LengthMismatch):
            load_model(path)
