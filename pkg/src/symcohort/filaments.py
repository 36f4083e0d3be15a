"""Filament-plot geometry for symptom trajectories.

A filament starts at a root and grows left to right, one segment per grid
step up to the owner's last reported timepoint. Each segment is the
horizontal stride for that step rotated about its start vertex by an angle
proportional to the rating change, so rising ratings bend the filament up
(y-up convention here; the UI flips the axis) and falling ratings bend it
down. Segment lengths grow with elapsed calendar time, which spaces the
late follow-ups wider than the weekly on-treatment points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DeltaOutOfRange,
    NonAdjacentTimepoints,
    UnimputedDataset,
    UnimputedSeries,
    UnknownSymptom,
)
from .model import CohortDataset, RatingSeries
from .symptoms import SYMPTOM_SET
from .timegrid import N_TIMEPOINTS, TIME_GRID, TimePoint

# Layout-unit scale for a one-week step; late gaps grow logarithmically.
SEGMENT_UNIT = 1.0
# Root y-offset per rating point for therapy-mean filaments.
SPREAD_SCALE = 0.8 * SEGMENT_UNIT


@dataclass(frozen=True)
class AngleParams:
    theta_max: float = 3.0 * math.pi / 4.0
    delta_r_max: float = 10.0


DEFAULT_ANGLE_PARAMS = AngleParams()


@dataclass(frozen=True)
class FilamentVertex:
    x: float
    y: float
    timepoint_index: int
    reported: bool


@dataclass(frozen=True)
class FilamentPolyline:
    owner: str  # patient id, or therapy label for mean filaments
    symptom_id: str
    vertices: tuple
    highlight: bool = False


def segment_angle(delta_r: float, params: AngleParams = DEFAULT_ANGLE_PARAMS) -> float:
    """Rotation for one step: theta = theta_max * delta_r / (2 * delta_r_max).

    Positive for worsening (rating increase), negative for improvement, and
    capped at +-theta_max/2 since |delta_r| <= delta_r_max.
    """
    if abs(delta_r) > params.delta_r_max:
        raise DeltaOutOfRange(f"|delta_r| = {abs(delta_r)} exceeds {params.delta_r_max}")
    return params.theta_max * delta_r / (2.0 * params.delta_r_max)


def segment_length(from_tp: TimePoint, to_tp: TimePoint, unit: float = SEGMENT_UNIT) -> float:
    """Length of the step between adjacent grid points.

    l = unit * log2(1 + days/7): exactly `unit` for the weekly acute steps,
    strictly growing with elapsed time so late follow-ups spread out.
    """
    if to_tp.index != from_tp.index + 1:
        raise NonAdjacentTimepoints(
            f"{from_tp.label} -> {to_tp.label} is not a single grid step"
        )
    days = to_tp.day_offset - from_tp.day_offset
    return unit * math.log2(1.0 + days / 7.0)


def _polyline(values, reported, grid, origin, params, unit):
    """Shared vertex walk for individual and mean filaments.

    Stops at the last reported index; a step into an unreported timepoint
    contributes no rating change (theta = 0).
    """
    last = None
    for i in range(len(reported) - 1, -1, -1):
        if reported[i]:
            last = i
            break
    x, y = origin
    vertices = [FilamentVertex(x, y, 0, bool(reported[0]))]
    if last is None:
        return tuple(vertices)
    for t in range(last):
        theta = segment_angle(values[t + 1] - values[t], params) if reported[t + 1] else 0.0
        length = segment_length(grid[t], grid[t + 1], unit)
        x += length * math.cos(theta)
        y += length * math.sin(theta)
        vertices.append(FilamentVertex(x, y, t + 1, bool(reported[t + 1])))
    return tuple(vertices)


def build_filament(
    series: RatingSeries,
    grid=TIME_GRID,
    params: AngleParams = DEFAULT_ANGLE_PARAMS,
    unit: float = SEGMENT_UNIT,
    origin=(0.0, 0.0),
    highlight: bool = False,
) -> FilamentPolyline:
    """Polyline for one patient's imputed series of one symptom."""
    if any(v is None for v in series.values):
        raise UnimputedSeries(f"series {series.patient_id}/{series.symptom_id} has missing slots")
    vertices = _polyline(series.values, series.reported, grid, origin, params, unit)
    return FilamentPolyline(series.patient_id, series.symptom_id, vertices, highlight)


def therapy_mean_filaments(
    dataset: CohortDataset,
    symptom_id: str,
    params: AngleParams = DEFAULT_ANGLE_PARAMS,
    unit: float = SEGMENT_UNIT,
    spread_scale: float = SPREAD_SCALE,
):
    """One mean filament per therapy present in the cohort.

    The mean series averages imputed ratings over the therapy's patients at
    each timepoint; a timepoint counts as reported if any member reported
    it. Roots are spread vertically by spread_scale * (baseline mean), so
    therapies separate according to where their cohorts start.
    """
    if not dataset.imputed:
        raise UnimputedDataset("mean filaments require an imputed dataset")
    if symptom_id not in SYMPTOM_SET:
        raise UnknownSymptom(f"unknown symptom id: {symptom_id!r}")

    from .model import THERAPIES

    out = []
    for therapy in THERAPIES:
        members = [p.patient_id for p in dataset.patients if p.therapy == therapy]
        if not members:
            continue
        series = [dataset.series[(pid, symptom_id)] for pid in members]
        mean_values = [
            sum(s.values[t] for s in series) / len(series) for t in range(N_TIMEPOINTS)
        ]
        any_reported = [
            any(s.reported[t] for s in series) for t in range(N_TIMEPOINTS)
        ]
        root = (0.0, spread_scale * mean_values[0])
        vertices = _polyline(mean_values, any_reported, dataset.time_grid, root, params, unit)
        out.append(FilamentPolyline(therapy, symptom_id, vertices, False))
    return out
