"""Cohort data model: CSV ingestion, imputation, eligibility.

Input schemas (UTF-8, comma-separated):
  patients.csv  patient_id,age,gender,t_category,therapy[,total_dose]
  ratings.csv   patient_id,timepoint,symptom,rating   (long format)

`timepoint` is a canonical label (wk0..wk7, post6w, post6m, post12m,
post18m) or a bare index 0..11. `rating` is an integer 0..10, or empty for
an explicitly blank cell. Patients who completed fewer than two
questionnaires are dropped at parse time.

A CohortDataset is immutable after construction: `impute` returns a new
dataset with missing slots filled (carry the previous value forward;
missing baselines become 0) and never touches reported values.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace

from .errors import (
    AlreadyImputed,
    DuplicateCell,
    MalformedCsv,
    RatingOutOfRange,
    UnknownPatient,
    UnknownSymptom,
    UnknownTimepointLabel,
    ValidationFailure,
)
from .symptoms import ALL_SYMPTOMS, SYMPTOM_SET
from .timegrid import N_TIMEPOINTS, PHASE_INDICES, TIME_GRID, Phase, timepoint_by_label

GENDERS = ("M", "F")
T_CATEGORIES = ("T0", "T1", "T2", "T3", "T4")
THERAPIES = ("Radiation", "CC_Radiation", "IC_Radiation", "IC_Radiation_CC")

PATIENT_HEADER = ["patient_id", "age", "gender", "t_category", "therapy"]
RATING_HEADER = ["patient_id", "timepoint", "symptom", "rating"]

MIN_QUESTIONNAIRES = 2


@dataclass(frozen=True)
class PatientRecord:
    patient_id: str
    age: int
    gender: str
    t_category: str
    therapy: str
    total_dose: float | None = None


@dataclass(frozen=True)
class RatingSeries:
    """One patient's 12-slot series for one symptom.

    values[i] is None while the slot is missing (pre-imputation only);
    reported[i] stays True only where a questionnaire value was actually
    present, regardless of later imputation.
    """

    patient_id: str
    symptom_id: str
    values: tuple
    reported: tuple

    def last_reported_index(self):
        for i in range(N_TIMEPOINTS - 1, -1, -1):
            if self.reported[i]:
                return i
        return None


@dataclass(frozen=True)
class CohortDataset:
    patients: tuple[PatientRecord, ...]
    series: dict  # (patient_id, symptom_id) -> RatingSeries
    time_grid: tuple = TIME_GRID
    imputed: bool = False
    partial_questionnaires: int = 0  # warning count, not an error

    def patient_ids(self):
        return tuple(p.patient_id for p in self.patients)

    def patient(self, patient_id: str) -> PatientRecord:
        for p in self.patients:
            if p.patient_id == patient_id:
                return p
        raise UnknownPatient(f"unknown patient id: {patient_id!r}")

    def get_series(self, patient_id: str, symptom_id: str) -> RatingSeries:
        if symptom_id not in SYMPTOM_SET:
            raise UnknownSymptom(f"unknown symptom id: {symptom_id!r}")
        try:
            return self.series[(patient_id, symptom_id)]
        except KeyError:
            raise UnknownPatient(f"unknown patient id: {patient_id!r}") from None

    def reported_timepoints(self, patient_id: str):
        """Indices where the patient completed a questionnaire (any symptom reported)."""
        out = set()
        for sym in ALL_SYMPTOMS:
            s = self.series.get((patient_id, sym))
            if s is None:
                continue
            out.update(i for i in range(N_TIMEPOINTS) if s.reported[i])
        return out


@dataclass
class Violation:
    """One rejected input row, for structured ingest error reports."""

    file: str
    row: int  # 1-based line number including header
    message: str
    column: str | None = None


@dataclass
class _ParseState:
    fail_fast: bool
    violations: list = field(default_factory=list)

    def reject(self, exc: ValidationFailure, file: str, row: int, column=None):
        if self.fail_fast:
            raise exc
        self.violations.append(Violation(file, row, str(exc), column))


def _read_rows(text: str, expected_header, optional, file: str):
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedCsv(f"{file}: empty file, expected header") from None
    header = [h.strip() for h in header]
    if header != expected_header and header != expected_header + optional:
        raise MalformedCsv(
            f"{file}: bad header {header!r}, expected {','.join(expected_header)}"
            + (f"[,{','.join(optional)}]" if optional else "")
        )
    has_optional = header != expected_header
    return header, has_optional, list(reader)


def _parse_patient_row(row, has_dose, lineno):
    pid, age_s, gender, t_cat, therapy = (v.strip() for v in row[:5])
    if not pid:
        raise MalformedCsv("empty patient_id", row=lineno)
    try:
        age = int(age_s)
    except ValueError:
        raise MalformedCsv(f"age {age_s!r} is not an integer", row=lineno) from None
    if gender not in GENDERS:
        raise MalformedCsv(f"gender {gender!r} not in {GENDERS}", row=lineno)
    if t_cat not in T_CATEGORIES:
        raise MalformedCsv(f"t_category {t_cat!r} not in T0..T4", row=lineno)
    if therapy not in THERAPIES:
        raise MalformedCsv(f"therapy {therapy!r} not one of {THERAPIES}", row=lineno)
    dose = None
    if has_dose and len(row) == 6 and row[5].strip():
        try:
            dose = float(row[5])
        except ValueError:
            raise MalformedCsv(f"total_dose {row[5]!r} is not a number", row=lineno) from None
    return PatientRecord(pid, age, gender, t_cat, therapy, dose)


def _parse_rating_value(raw: str):
    """None for an empty cell, else an integer 0..10."""
    raw = raw.strip()
    if raw == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise RatingOutOfRange(f"rating {raw!r} is not an integer on the 0..10 scale") from None
    if not 0 <= value <= 10:
        raise RatingOutOfRange(f"rating {value} outside 0..10")
    return value


def _parse(patients_csv: str, ratings_csv: str, state: _ParseState):
    _, has_dose, patient_rows = _read_rows(
        patients_csv, PATIENT_HEADER, ["total_dose"], "patients.csv"
    )
    records = {}
    for offset, row in enumerate(patient_rows):
        lineno = offset + 2
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 5 + (1 if has_dose else 0):
            state.reject(
                MalformedCsv(f"expected {5 + has_dose} fields, got {len(row)}", row=lineno),
                "patients.csv",
                lineno,
            )
            continue
        try:
            rec = _parse_patient_row(row, has_dose, lineno)
        except ValidationFailure as exc:
            state.reject(exc, "patients.csv", lineno)
            continue
        if rec.patient_id in records:
            state.reject(
                MalformedCsv(f"duplicate patient_id {rec.patient_id!r}", row=lineno),
                "patients.csv",
                lineno,
                column="patient_id",
            )
            continue
        records[rec.patient_id] = rec

    _, _, rating_rows = _read_rows(ratings_csv, RATING_HEADER, [], "ratings.csv")
    # cells[(pid, sym)] = {tp_index: value-or-None}
    cells = {}
    seen = set()
    for offset, row in enumerate(rating_rows):
        lineno = offset + 2
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 4:
            state.reject(
                MalformedCsv(f"expected 4 fields, got {len(row)}", row=lineno),
                "ratings.csv",
                lineno,
            )
            continue
        pid, tp_raw, sym, rating_raw = (v.strip() for v in row)
        if pid not in records:
            state.reject(
                MalformedCsv(f"rating for unknown patient_id {pid!r}", row=lineno),
                "ratings.csv",
                lineno,
                column="patient_id",
            )
            continue
        try:
            tp = timepoint_by_label(tp_raw)
        except UnknownTimepointLabel as exc:
            state.reject(exc, "ratings.csv", lineno, column="timepoint")
            continue
        if sym not in SYMPTOM_SET:
            state.reject(
                UnknownSymptom(f"unknown symptom id: {sym!r}"),
                "ratings.csv",
                lineno,
                column="symptom",
            )
            continue
        key = (pid, tp.index, sym)
        if key in seen:
            state.reject(
                DuplicateCell(f"duplicate cell for {pid}/{tp.label}/{sym}"),
                "ratings.csv",
                lineno,
            )
            continue
        seen.add(key)
        try:
            value = _parse_rating_value(rating_raw)
        except RatingOutOfRange as exc:
            state.reject(exc, "ratings.csv", lineno, column="rating")
            continue
        if value is not None:
            cells.setdefault((pid, sym), {})[tp.index] = value

    # Assemble series; count partially-reported questionnaires; drop
    # patients with fewer than MIN_QUESTIONNAIRES reported timepoints.
    reported_tps = {pid: set() for pid in records}
    for (pid, _sym), by_tp in cells.items():
        reported_tps[pid].update(by_tp)

    kept = sorted(pid for pid in records if len(reported_tps[pid]) >= MIN_QUESTIONNAIRES)
    partial = 0
    for pid in kept:
        for t in reported_tps[pid]:
            n_sym = sum(1 for sym in ALL_SYMPTOMS if t in cells.get((pid, sym), ()))
            if n_sym < len(ALL_SYMPTOMS):
                partial += 1
    series = {}
    for pid in kept:
        for sym in ALL_SYMPTOMS:
            by_tp = cells.get((pid, sym), {})
            values = tuple(by_tp.get(i) for i in range(N_TIMEPOINTS))
            reported = tuple(i in by_tp for i in range(N_TIMEPOINTS))
            series[(pid, sym)] = RatingSeries(pid, sym, values, reported)

    dataset = CohortDataset(
        patients=tuple(records[pid] for pid in kept),
        series=series,
        imputed=False,
        partial_questionnaires=partial,
    )
    return dataset


def parse_dataset(patients_csv: str, ratings_csv: str) -> CohortDataset:
    """Parse and validate the two CSVs; raises on the first bad row."""
    return _parse(patients_csv, ratings_csv, _ParseState(fail_fast=True))


def parse_dataset_lenient(patients_csv: str, ratings_csv: str):
    """Like parse_dataset, but collects violations instead of raising.

    Returns (dataset-or-None, violations). Header-level failures are fatal
    and reported as a single violation with row 1.
    """
    state = _ParseState(fail_fast=False)
    try:
        dataset = _parse(patients_csv, ratings_csv, state)
    except MalformedCsv as exc:
        state.violations.append(Violation("header", 1, str(exc)))
        return None, state.violations
    return (None if state.violations else dataset), state.violations


def impute(dataset: CohortDataset) -> CohortDataset:
    """Fill missing slots: carry the previous value forward, baseline gaps get 0."""
    if dataset.imputed:
        raise AlreadyImputed("dataset is already imputed")
    new_series = {}
    for key, s in dataset.series.items():
        filled = []
        last = None
        for i in range(N_TIMEPOINTS):
            if s.values[i] is not None:
                last = s.values[i]
                filled.append(last)
            else:
                filled.append(0 if last is None else last)
        new_series[key] = replace(s, values=tuple(filled))
    return replace(dataset, series=new_series, imputed=True)


def impute_series(values):
    """Carry-forward imputation of a single 12-slot value tuple (None = missing)."""
    filled = []
    last = None
    for v in values:
        if v is not None:
            last = v
        filled.append(0 if last is None else last)
    return tuple(filled)


def eligible_patients(dataset: CohortDataset, phase: Phase):
    """Patients with at least one reported questionnaire inside the phase."""
    indices = set(PHASE_INDICES[phase])
    out = set()
    for pid in dataset.patient_ids():
        if dataset.reported_timepoints(pid) & indices:
            out.add(pid)
    return out


def to_canonical_csv(dataset: CohortDataset):
    """Serialize to the canonical CSV pair (sorted, reported cells only).

    Round-trips through parse_dataset: parse(to_canonical_csv(d)) == d for
    any parsed, un-imputed dataset.
    """
    pat = io.StringIO()
    w = csv.writer(pat, lineterminator="\n")
    w.writerow(PATIENT_HEADER + ["total_dose"])
    for p in dataset.patients:
        dose = "" if p.total_dose is None else repr(p.total_dose)
        w.writerow([p.patient_id, p.age, p.gender, p.t_category, p.therapy, dose])

    rat = io.StringIO()
    w = csv.writer(rat, lineterminator="\n")
    w.writerow(RATING_HEADER)
    for p in dataset.patients:
        for t in range(N_TIMEPOINTS):
            for sym in sorted(ALL_SYMPTOMS):
                s = dataset.series[(p.patient_id, sym)]
                if s.reported[t]:
                    w.writerow([p.patient_id, TIME_GRID[t].label, sym, s.values[t]])
    return pat.getvalue(), rat.getvalue()
