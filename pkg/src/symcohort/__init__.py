"""Longitudinal symptom-cohort analytics engine.

Mines symptom association rules from questionnaire transactions, clusters
patients by symptom burden per timepoint, and computes the trajectory and
summary geometry (filament polylines, percentile heatmaps, correlation
matrices) behind a coordinated-view explorer UI.
"""

__version__ = "0.1.0"

from .model import CohortDataset, PatientRecord, RatingSeries, parse_dataset, impute
from .timegrid import Phase, TimePoint, TIME_GRID, phase_of

__all__ = [
    "CohortDataset",
    "PatientRecord",
    "RatingSeries",
    "parse_dataset",
    "impute",
    "Phase",
    "TimePoint",
    "TIME_GRID",
    "phase_of",
]
