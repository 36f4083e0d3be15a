"""Cohort-context statistics: percentile-heatmap cells, Spearman
correlations, per-timepoint prevalence.

All three use reported (raw) values only; carried-forward imputation fills
are ignored so distributional summaries reflect what patients actually
answered. They therefore accept either a raw or an imputed dataset (the
`reported` flags and reported values survive imputation untouched).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoReporters, TooFewReporters, UnknownSymptom
from .model import CohortDataset
from .symptoms import (
    CORE_SYMPTOMS,
    HNC_SYMPTOMS,
    INTERFERENCE_SYMPTOMS,
    SYMPTOM_SET,
)
from .timegrid import N_TIMEPOINTS, TimePoint

# Heatmap rows keep the category blocks in manifest order.
HEATMAP_SYMPTOM_ORDER = CORE_SYMPTOMS + HNC_SYMPTOMS + INTERFERENCE_SYMPTOMS

BIN_ZERO = "zero"
BIN_ONE_TO_FIVE = "one_to_five"
BIN_SIX_TO_NINE = "six_to_nine"
BIN_TEN = "ten"
BIN_NAMES = (BIN_ZERO, BIN_ONE_TO_FIVE, BIN_SIX_TO_NINE, BIN_TEN)


def rating_bin(value: int) -> str:
    """Partition of the 0..10 scale into (0, 1-5, 6-9, 10)."""
    if value == 0:
        return BIN_ZERO
    if value <= 5:
        return BIN_ONE_TO_FIVE
    if value <= 9:
        return BIN_SIX_TO_NINE
    return BIN_TEN


@dataclass(frozen=True)
class HeatmapCell:
    symptom_id: str
    timepoint_index: int
    bin_fractions: dict  # bin name -> fraction of reporting patients
    reporting_fraction: float  # reporters / full cohort


@dataclass(frozen=True)
class CorrelationEntry:
    symptom_a: str
    symptom_b: str
    rho: float | None  # None when undefined (zero variance or < 2 pairs)
    n: int


def heatmap(dataset: CohortDataset):
    """All 28 x 12 cells, rows in category order, columns by timepoint."""
    cohort_size = len(dataset.patients)
    cells = []
    for sym in HEATMAP_SYMPTOM_ORDER:
        for t in range(N_TIMEPOINTS):
            counts = dict.fromkeys(BIN_NAMES, 0)
            reporters = 0
            for pid in dataset.patient_ids():
                s = dataset.series[(pid, sym)]
                if s.reported[t]:
                    reporters += 1
                    counts[rating_bin(s.values[t])] += 1
            if reporters:
                fractions = {b: counts[b] / reporters for b in BIN_NAMES}
            else:
                fractions = dict.fromkeys(BIN_NAMES, 0.0)
            cells.append(
                HeatmapCell(
                    sym,
                    t,
                    fractions,
                    reporters / cohort_size if cohort_size else 0.0,
                )
            )
    return cells


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """Average fractional ranks (1-based); tied values share the mean rank."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=float)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(a, b):
    """Spearman rho of two paired vectors: Pearson correlation of their
    average ranks. None when either side has zero variance or n < 2."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(a) < 2:
        return None
    ra, rb = _average_ranks(a), _average_ranks(b)
    da, db = ra - ra.mean(), rb - rb.mean()
    va, vb = float(da @ da), float(db @ db)
    if va == 0.0 or vb == 0.0:
        return None
    return float(da @ db) / (va * vb) ** 0.5


def spearman_matrix(dataset: CohortDataset, tp: TimePoint):
    """Triangular list of CorrelationEntry for all symptom pairs at `tp`.

    Each pair is correlated over the patients reporting both symptoms at
    the timepoint. Requires >= 2 patients reporting anything at `tp`.
    """
    reporters_any = {
        pid for pid in dataset.patient_ids() if tp.index in dataset.reported_timepoints(pid)
    }
    if len(reporters_any) < 2:
        raise TooFewReporters(f"fewer than 2 patients reported at {tp.label}")

    pids = sorted(reporters_any)
    columns = {}
    for sym in HEATMAP_SYMPTOM_ORDER:
        vals, mask = [], []
        for pid in pids:
            s = dataset.series[(pid, sym)]
            mask.append(s.reported[tp.index])
            vals.append(s.values[tp.index] if s.reported[tp.index] else 0)
        columns[sym] = (np.array(vals, dtype=float), np.array(mask, dtype=bool))

    entries = []
    for i, sa in enumerate(HEATMAP_SYMPTOM_ORDER):
        va, ma = columns[sa]
        for sb in HEATMAP_SYMPTOM_ORDER[i:]:
            vb, mb = columns[sb]
            both = ma & mb
            n = int(both.sum())
            rho = spearman(va[both], vb[both]) if n >= 2 else None
            entries.append(CorrelationEntry(sa, sb, rho, n))
    return entries


def prevalence(
    dataset: CohortDataset, symptom_id: str, tp: TimePoint, presence_threshold: int = 1
) -> float:
    """Fraction of reporters at `tp` rating the symptom >= threshold."""
    if symptom_id not in SYMPTOM_SET:
        raise UnknownSymptom(f"unknown symptom id: {symptom_id!r}")
    reporters = 0
    present = 0
    for pid in dataset.patient_ids():
        s = dataset.series[(pid, symptom_id)]
        if s.reported[tp.index]:
            reporters += 1
            if s.values[tp.index] >= presence_threshold:
                present += 1
    if reporters == 0:
        raise NoReporters(f"no patient reported {symptom_id} at {tp.label}")
    return present / reporters
