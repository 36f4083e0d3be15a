"""Synthetic cohort generator.

Stands in for real questionnaire data, which is not distributable. The
generated cohort mimics the production shape: 28 symptoms on the 12-slot
grid, four therapy combinations, and per-patient late-phase dropout.

Planted structure (documented so validation can assert recovery without
circularity; the generator shares only the symptom/time manifests with the
engine):

  * every patient belongs to a 'low' or 'high' burden group; group means
    differ by `burden_gap` rating points (default 4) on every symptom
    before clipping to the 0..10 scale;
  * per-symptom base offsets in [-3, 1] spread prevalence: some symptoms
    are near-universal, others rare outside the high-burden group, which
    gives rule mining a non-degenerate support/lift landscape;
  * designated symptom groups share half their noise variance through a
    common per-questionnaire factor, planting co-occurrence beyond what
    the burden split induces (total noise variance stays sigma^2);
  * therapies add a nonnegative on-treatment bump (peaking late-acute,
    decaying post-treatment) whose amplitude orders the four therapies:
    Radiation < CC_Radiation < IC_Radiation < IC_Radiation_CC;
  * ratings are round(clip(group + symptom + therapy + noise, 0, 10));
  * baseline is always answered; each patient stops reporting after a
    drawn last timepoint (some never reach the late phase) and skips a few
    intermediate questionnaires at random.

Everything is drawn from one seeded generator in a fixed order, so a given
(n_patients, seed, ...) always produces byte-identical CSVs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .model import T_CATEGORIES, THERAPIES
from .symptoms import ALL_SYMPTOMS
from .timegrid import N_TIMEPOINTS, TIME_GRID

GROUP_MID = 4.5
DEFAULT_BURDEN_GAP = 4.0
DEFAULT_NOISE_SIGMA = 1.0

THERAPY_AMPLITUDE = {
    "Radiation": 0.4,
    "CC_Radiation": 0.8,
    "IC_Radiation": 1.2,
    "IC_Radiation_CC": 1.6,
}

# On-treatment bump shape per timepoint (0 at baseline, peak late-acute).
PHASE_SHAPE = (0.0, 0.25, 0.45, 0.65, 0.8, 0.9, 1.0, 1.0, 0.6, 0.35, 0.2, 0.1)

SYMPTOM_OFFSET_RANGE = (-3.0, 1.0)

# Symptom groups whose members share a common noise factor (see module doc).
COUPLED_GROUPS = (
    ("fatigue", "drowsiness", "sleep"),
    ("swallow", "pain", "sores", "taste", "mucus"),
    ("mood", "sadness", "distress"),
)
FACTOR_SHARE = 0.5  # fraction of noise variance carried by the group factor

# Distribution of each patient's last reported timepoint index.
LAST_INDEX_CHOICES = (4, 5, 6, 7, 8, 9, 10, 11)
LAST_INDEX_WEIGHTS = (0.03, 0.03, 0.04, 0.10, 0.10, 0.15, 0.20, 0.35)

SKIP_PROBABILITY = 0.06  # chance of skipping an intermediate questionnaire


@dataclass(frozen=True)
class SynthCohort:
    patients_csv: str
    ratings_csv: str
    planted_groups: dict  # patient_id -> 'low' | 'high'
    params: dict


def generate_cohort(
    n_patients: int,
    seed: int,
    burden_gap: float = DEFAULT_BURDEN_GAP,
    noise_sigma: float = DEFAULT_NOISE_SIGMA,
) -> SynthCohort:
    if n_patients < 2:
        raise ValueError(f"need at least 2 patients, got {n_patients}")
    rng = np.random.default_rng(seed)
    width = max(3, len(str(n_patients)))
    pids = [f"p{i + 1:0{width}d}" for i in range(n_patients)]

    symptom_offsets = {s: float(rng.uniform(*SYMPTOM_OFFSET_RANGE)) for s in ALL_SYMPTOMS}
    group_of_symptom = {}
    for gi, members in enumerate(COUPLED_GROUPS):
        for s in members:
            group_of_symptom[s] = gi
    factor_w = noise_sigma * FACTOR_SHARE**0.5
    resid_w = {
        s: noise_sigma * ((1.0 - FACTOR_SHARE) ** 0.5 if s in group_of_symptom else 1.0)
        for s in ALL_SYMPTOMS
    }

    half = n_patients // 2
    groups = np.array(["low"] * half + ["high"] * (n_patients - half))
    rng.shuffle(groups)
    group_base = {
        "low": GROUP_MID - burden_gap / 2.0,
        "high": GROUP_MID + burden_gap / 2.0,
    }

    patient_rows = []
    rating_rows = []
    planted = {}
    for i, pid in enumerate(pids):
        group = str(groups[i])
        planted[pid] = group
        therapy = THERAPIES[int(rng.integers(0, len(THERAPIES)))]
        gender = "M" if rng.random() < 0.7 else "F"
        t_category = T_CATEGORIES[int(rng.integers(0, len(T_CATEGORIES)))]
        age = int(rng.integers(35, 86))
        dose = round(float(rng.uniform(60.0, 72.0)), 1)
        patient_rows.append(f"{pid},{age},{gender},{t_category},{therapy},{dose}")

        last_idx = int(rng.choice(LAST_INDEX_CHOICES, p=LAST_INDEX_WEIGHTS))
        reported = [False] * N_TIMEPOINTS
        for t in range(last_idx + 1):
            if t in (0, last_idx):
                reported[t] = True  # baseline and the final visit always answered
            else:
                reported[t] = rng.random() >= SKIP_PROBABILITY

        amplitude = THERAPY_AMPLITUDE[therapy]
        for t in range(N_TIMEPOINTS):
            factors = rng.normal(0.0, 1.0, len(COUPLED_GROUPS))
            eps = rng.normal(0.0, 1.0, len(ALL_SYMPTOMS))
            if not reported[t]:
                continue  # draw order stays fixed regardless of dropout
            for k, sym in enumerate(ALL_SYMPTOMS):
                noise = resid_w[sym] * eps[k]
                if sym in group_of_symptom:
                    noise += factor_w * factors[group_of_symptom[sym]]
                value = (
                    group_base[group]
                    + symptom_offsets[sym]
                    + amplitude * PHASE_SHAPE[t]
                    + noise
                )
                rating = int(np.clip(round(value), 0, 10))
                rating_rows.append(f"{pid},{TIME_GRID[t].label},{sym},{rating}")

    patients_csv = "patient_id,age,gender,t_category,therapy,total_dose\n" + "\n".join(
        patient_rows
    ) + "\n"
    ratings_csv = "patient_id,timepoint,symptom,rating\n" + "\n".join(rating_rows) + "\n"
    params = {
        "n_patients": n_patients,
        "seed": seed,
        "burden_gap": burden_gap,
        "noise_sigma": noise_sigma,
        "group_means": {g: group_base[g] for g in ("low", "high")},
    }
    return SynthCohort(patients_csv, ratings_csv, planted, params)


def write_cohort(cohort: SynthCohort, out_dir):
    """Write patients.csv, ratings.csv, and planted.json into out_dir."""
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "patients.csv").write_text(cohort.patients_csv, encoding="utf-8")
    (out / "ratings.csv").write_text(cohort.ratings_csv, encoding="utf-8")
    truth = {"params": cohort.params, "groups": cohort.planted_groups}
    (out / "planted.json").write_text(
        json.dumps(truth, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return out / "patients.csv", out / "ratings.csv"
