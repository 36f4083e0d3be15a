"""Synthetic cohort generator: determinism and planted structure."""

import numpy as np
import pytest

from symcohort.model import THERAPIES, eligible_patients, parse_dataset
from symcohort.symptoms import ALL_SYMPTOMS
from symcohort.synth import generate_cohort, write_cohort
from symcohort.timegrid import Phase


class TestDeterminism:
    def test_same_seed_same_bytes(self):
        a = generate_cohort(40, seed=9)
        b = generate_cohort(40, seed=9)
        assert a.patients_csv == b.patients_csv
        assert a.ratings_csv == b.ratings_csv
        assert a.planted_groups == b.planted_groups

    def test_different_seed_differs(self):
        a = generate_cohort(40, seed=1)
        b = generate_cohort(40, seed=2)
        assert a.ratings_csv != b.ratings_csv

    def test_write_cohort_round_trips(self, tmp_path):
        cohort = generate_cohort(10, seed=3)
        p, r = write_cohort(cohort, tmp_path / "c")
        assert p.read_text() == cohort.patients_csv
        assert r.read_text() == cohort.ratings_csv
        assert (tmp_path / "c" / "planted.json").exists()


class TestStructure:
    def test_parses_cleanly_and_keeps_everyone(self):
        cohort = generate_cohort(60, seed=4)
        ds = parse_dataset(cohort.patients_csv, cohort.ratings_csv)
        assert len(ds.patients) == 60  # every patient has >= 2 questionnaires

    def test_full_questionnaires(self):
        cohort = generate_cohort(12, seed=5)
        ds = parse_dataset(cohort.patients_csv, cohort.ratings_csv)
        assert ds.partial_questionnaires == 0

    def test_all_four_therapies_present(self):
        cohort = generate_cohort(80, seed=6)
        ds = parse_dataset(cohort.patients_csv, cohort.ratings_csv)
        assert {p.therapy for p in ds.patients} == set(THERAPIES)

    def test_baseline_always_reported(self):
        cohort = generate_cohort(30, seed=7)
        ds = parse_dataset(cohort.patients_csv, cohort.ratings_csv)
        for pid in ds.patient_ids():
            assert 0 in ds.reported_timepoints(pid)

    def test_late_phase_dropout_exists(self):
        cohort = generate_cohort(120, seed=8)
        ds = parse_dataset(cohort.patients_csv, cohort.ratings_csv)
        late = eligible_patients(ds, Phase.LATE)
        assert 0 < len(late) < 120  # some but not all reach the late phase

    def test_planted_gap_visible_in_baseline_means(self):
        cohort = generate_cohort(150, seed=9, burden_gap=4.0, noise_sigma=1.0)
        ds = parse_dataset(cohort.patients_csv, cohort.ratings_csv)
        means = {"low": [], "high": []}
        for pid in ds.patient_ids():
            vals = [ds.series[(pid, s)].values[0] for s in ALL_SYMPTOMS]
            means[cohort.planted_groups[pid]].append(np.mean(vals))
        gap = np.mean(means["high"]) - np.mean(means["low"])
        assert gap > 3.0  # rounding and clipping nibble at the planted 4.0

    def test_minimal_cohort(self):
        cohort = generate_cohort(2, seed=10)
        ds = parse_dataset(cohort.patients_csv, cohort.ratings_csv)
        assert len(ds.patients) == 2

    def test_rejects_tiny_n(self):
        with pytest.raises(ValueError):
            generate_cohort(1, seed=0)
