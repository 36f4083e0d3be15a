"""The fixed 12-slot time grid and its phase segmentation.

Questionnaires land on 12 slots: week 0 (baseline), weeks 1..7 during
treatment (acute), then 6 weeks and 6/12/18 months after treatment ends
(late). Treatment is assumed to end at week 7 (day 49), so the late
day offsets are 49 + {42, 180, 365, 547}.
"""

from dataclasses import dataclass
from enum import Enum

from .errors import UnknownTimepointLabel


class Phase(str, Enum):
    BASELINE = "baseline"
    ACUTE = "acute"
    LATE = "late"


@dataclass(frozen=True)
class TimePoint:
    index: int
    label: str
    phase: Phase
    day_offset: int


TIME_GRID = (
    TimePoint(0, "wk0", Phase.BASELINE, 0),
    TimePoint(1, "wk1", Phase.ACUTE, 7),
    TimePoint(2, "wk2", Phase.ACUTE, 14),
    TimePoint(3, "wk3", Phase.ACUTE, 21),
    TimePoint(4, "wk4", Phase.ACUTE, 28),
    TimePoint(5, "wk5", Phase.ACUTE, 35),
    TimePoint(6, "wk6", Phase.ACUTE, 42),
    TimePoint(7, "wk7", Phase.ACUTE, 49),
    TimePoint(8, "post6w", Phase.LATE, 91),
    TimePoint(9, "post6m", Phase.LATE, 229),
    TimePoint(10, "post12m", Phase.LATE, 414),
    TimePoint(11, "post18m", Phase.LATE, 596),
)

N_TIMEPOINTS = len(TIME_GRID)

LABEL_TO_TIMEPOINT = {tp.label: tp for tp in TIME_GRID}

PHASE_INDICES = {
    Phase.BASELINE: (0,),
    Phase.ACUTE: tuple(range(1, 8)),
    Phase.LATE: tuple(range(8, 12)),
}


def phase_of(tp: TimePoint) -> Phase:
    """Phase of a grid timepoint: 0 baseline, 1..7 acute, 8..11 late."""
    return tp.phase


def timepoint_by_label(label: str) -> TimePoint:
    """Resolve a canonical label ('wk0'..'wk7', 'post6w', 'post6m', ...) or a bare index."""
    if label in LABEL_TO_TIMEPOINT:
        return LABEL_TO_TIMEPOINT[label]
    if label.isdigit() and int(label) < N_TIMEPOINTS:
        return TIME_GRID[int(label)]
    raise UnknownTimepointLabel(f"unknown timepoint label: {label!r}")
