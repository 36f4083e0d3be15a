"""Shared fixtures: compact CSV builders for hand-made cohorts."""

import pytest

from symcohort.model import parse_dataset
from symcohort.symptoms import ALL_SYMPTOMS
from symcohort.timegrid import TIME_GRID

PATIENT_HEADER = "patient_id,age,gender,t_category,therapy,total_dose"
RATING_HEADER = "patient_id,timepoint,symptom,rating"

DEFAULT_META = ("55", "M", "T2", "Radiation", "66.0")


def patients_csv(pids, meta=None):
    """One row per pid; meta maps pid -> (age, gender, t_cat, therapy, dose)."""
    meta = meta or {}
    rows = [PATIENT_HEADER]
    for pid in pids:
        rows.append(",".join([pid, *meta.get(pid, DEFAULT_META)]))
    return "\n".join(rows) + "\n"


def ratings_csv(cells):
    """cells: iterable of (pid, timepoint label or index, symptom, rating)."""
    rows = [RATING_HEADER]
    for pid, tp, sym, rating in cells:
        rows.append(f"{pid},{tp},{sym},{rating}")
    return "\n".join(rows) + "\n"


def questionnaire(pid, tp, overrides=None, default=0):
    """Full 28-symptom questionnaire cells with per-symptom overrides."""
    overrides = overrides or {}
    label = TIME_GRID[tp].label if isinstance(tp, int) else tp
    return [(pid, label, sym, overrides.get(sym, default)) for sym in ALL_SYMPTOMS]


def build_dataset(cells, pids=None, meta=None):
    """Parse a cohort from rating cells; pids defaults to those appearing."""
    if pids is None:
        pids = sorted({c[0] for c in cells})
    return parse_dataset(patients_csv(pids, meta), ratings_csv(cells))


@pytest.fixture
def two_patient_dataset():
    """p1 reports wk0..wk2 (fatigue ramping), p2 reports wk0 and post6m."""
    cells = []
    cells += questionnaire("p1", 0, {"fatigue": 2, "pain": 1})
    cells += questionnaire("p1", 1, {"fatigue": 5, "pain": 3})
    cells += questionnaire("p1", 2, {"fatigue": 8, "pain": 0})
    cells += questionnaire("p2", 0, {"mucus": 4})
    cells += questionnaire("p2", 9, {"mucus": 7})
    return build_dataset(cells)
