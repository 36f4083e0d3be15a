"""Heatmap binning, Spearman correlation, prevalence."""

import numpy as np
import pytest
from scipy import stats as scipy_stats

from conftest import build_dataset, questionnaire

from symcohort.errors import NoReporters, TooFewReporters
from symcohort.stats import (
    BIN_NAMES,
    HEATMAP_SYMPTOM_ORDER,
    heatmap,
    prevalence,
    rating_bin,
    spearman,
    spearman_matrix,
)
from symcohort.symptoms import CORE_SYMPTOMS, HNC_SYMPTOMS, INTERFERENCE_SYMPTOMS
from symcohort.timegrid import TIME_GRID


class TestBins:
    def test_bin_boundaries(self):
        assert rating_bin(0) == "zero"
        assert rating_bin(1) == "one_to_five"
        assert rating_bin(5) == "one_to_five"
        assert rating_bin(6) == "six_to_nine"
        assert rating_bin(9) == "six_to_nine"
        assert rating_bin(10) == "ten"

    def test_every_rating_maps_to_exactly_one_bin(self):
        for v in range(11):
            assert sum(rating_bin(v) == b for b in BIN_NAMES) == 1


class TestHeatmap:
    def _four_reporters(self):
        cells = []
        for i, value in enumerate((0, 3, 7, 10)):
            pid = f"p{i + 1}"
            cells += questionnaire(pid, 0, {"pain": value})
            cells += questionnaire(pid, 1, {"pain": value})
        return build_dataset(cells)

    def test_quartered_bins(self):
        ds = self._four_reporters()
        cell = next(c for c in heatmap(ds) if c.symptom_id == "pain" and c.timepoint_index == 0)
        assert cell.bin_fractions == {
            "zero": 0.25,
            "one_to_five": 0.25,
            "six_to_nine": 0.25,
            "ten": 0.25,
        }
        assert cell.reporting_fraction == 1.0

    def test_unreported_timepoint_all_zero(self):
        ds = self._four_reporters()
        cell = next(c for c in heatmap(ds) if c.symptom_id == "pain" and c.timepoint_index == 5)
        assert all(v == 0.0 for v in cell.bin_fractions.values())
        assert cell.reporting_fraction == 0.0

    def test_shape_and_category_order(self):
        ds = self._four_reporters()
        cells = heatmap(ds)
        assert len(cells) == 28 * 12
        order = [c.symptom_id for c in cells[:: len(TIME_GRID)]]
        assert tuple(order) == CORE_SYMPTOMS + HNC_SYMPTOMS + INTERFERENCE_SYMPTOMS

    def test_fractions_sum_to_one_where_reported(self):
        ds = self._four_reporters()
        for cell in heatmap(ds):
            total = sum(cell.bin_fractions.values())
            if cell.reporting_fraction > 0:
                assert total == pytest.approx(1.0, abs=1e-9)
            else:
                assert total == 0.0


class TestSpearman:
    def test_self_correlation_is_one(self):
        assert spearman([1, 2, 3, 7], [1, 2, 3, 7]) == pytest.approx(1.0)

    def test_perfect_reversal(self):
        assert spearman([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_tied_ranks_aligned(self):
        # hand ranks: a -> 1, 2.5, 2.5, 4 ; b -> 1, 2.5, 2.5, 4
        assert spearman([1, 2, 2, 4], [1, 3, 3, 5]) == pytest.approx(1.0)

    def test_zero_variance_undefined(self):
        assert spearman([2, 2, 2], [1, 5, 9]) is None

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_scipy_with_ties(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 40))
        a = rng.integers(0, 11, n)
        b = rng.integers(0, 11, n)
        ours = spearman(a, b)
        ref = scipy_stats.spearmanr(a, b).statistic
        if ours is None:
            assert np.isnan(ref)
        else:
            assert ours == pytest.approx(ref, abs=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_invariant_under_monotone_transform(self, seed):
        rng = np.random.default_rng(50 + seed)
        a = rng.integers(0, 11, 20)
        b = rng.integers(0, 11, 20)
        stretched = 3.0 * a.astype(float) ** 2 + 1.0  # strictly increasing on 0..10
        r1, r2 = spearman(a, b), spearman(stretched, b)
        if r1 is None:
            assert r2 is None
        else:
            assert r1 == pytest.approx(r2, abs=1e-12)


class TestSpearmanMatrix:
    def _dataset(self):
        cells = []
        ratings = {"p1": (1, 3), "p2": (2, 2), "p3": (3, 1), "p4": (5, 0)}
        for pid, (fatigue, mood) in ratings.items():
            cells += questionnaire(pid, 0, {"fatigue": fatigue, "mood": mood})
            cells += questionnaire(pid, 1)
        return build_dataset(cells)

    def test_symmetry_diagonal_and_range(self):
        entries = spearman_matrix(self._dataset(), TIME_GRID[0])
        assert len(entries) == 28 * 29 // 2
        by_pair = {(e.symptom_a, e.symptom_b): e for e in entries}
        fatigue_mood = by_pair[("fatigue", "mood")]
        assert fatigue_mood.rho == pytest.approx(-1.0)
        assert fatigue_mood.n == 4
        diag = by_pair[("fatigue", "fatigue")]
        assert diag.rho == pytest.approx(1.0)
        constant = by_pair[("pain", "pain")]  # all zeros -> undefined
        assert constant.rho is None
        for e in entries:
            if e.rho is not None:
                assert -1.0 - 1e-12 <= e.rho <= 1.0 + 1e-12

    def test_too_few_reporters(self):
        cells = questionnaire("p1", 0) + questionnaire("p1", 1)
        ds = build_dataset(cells)
        with pytest.raises(TooFewReporters):
            spearman_matrix(ds, TIME_GRID[5])


class TestPrevalence:
    def _dataset(self):
        cells = []
        for pid, value in zip(("p1", "p2", "p3", "p4"), (0, 0, 5, 7)):
            cells += questionnaire(pid, 0, {"mucus": value})
            cells += questionnaire(pid, 3)
        return build_dataset(cells)

    def test_counts_reporters_at_threshold(self):
        assert prevalence(self._dataset(), "mucus", TIME_GRID[0], 1) == 0.5

    def test_all_present(self):
        cells = []
        for pid in ("p1", "p2"):
            cells += questionnaire(pid, 0, {"mucus": 3}) + questionnaire(pid, 1, {"mucus": 2})
        ds = build_dataset(cells)
        assert prevalence(ds, "mucus", TIME_GRID[0], 1) == 1.0

    def test_threshold_ten_unreached(self):
        assert prevalence(self._dataset(), "mucus", TIME_GRID[0], 10) == 0.0

    def test_monotone_in_threshold(self):
        ds = self._dataset()
        values = [prevalence(ds, "mucus", TIME_GRID[0], t) for t in range(1, 11)]
        assert values == sorted(values, reverse=True)

    def test_no_reporters(self):
        with pytest.raises(NoReporters):
            prevalence(self._dataset(), "mucus", TIME_GRID[7], 1)
