"""Canonical symptom manifest.

28 symptoms in three categories. The ids are the stable join keys used in
CSVs, JSON payloads, and the UI; spellings are pinned here and versioned
with the engine. Order within a category is the canonical display order.
"""

from enum import Enum

MANIFEST_VERSION = 1


class Category(str, Enum):
    CORE = "core"
    HNC_SPECIFIC = "hnc_specific"
    INTERFERENCE = "interference"


CORE_SYMPTOMS = (
    "fatigue",
    "sleep",
    "distress",
    "pain",
    "drowsiness",
    "sadness",
    "memory",
    "numbness",
    "dry_mouth",
    "appetite",
    "breath",
    "nausea",
    "vomit",
)

HNC_SYMPTOMS = (
    "swallow",
    "speech",
    "mucus",
    "taste",
    "constipation",
    "teeth",
    "sores",
    "choking",
    "skin_pain",
)

INTERFERENCE_SYMPTOMS = (
    "work",
    "enjoyment",
    "activity",
    "mood",
    "walk",
    "relations",
)

ALL_SYMPTOMS = CORE_SYMPTOMS + HNC_SYMPTOMS + INTERFERENCE_SYMPTOMS

SYMPTOM_CATEGORY = {
    **{s: Category.CORE for s in CORE_SYMPTOMS},
    **{s: Category.HNC_SPECIFIC for s in HNC_SYMPTOMS},
    **{s: Category.INTERFERENCE for s in INTERFERENCE_SYMPTOMS},
}

SYMPTOM_SET = frozenset(ALL_SYMPTOMS)

assert len(ALL_SYMPTOMS) == 28 and len(SYMPTOM_SET) == 28
assert len(CORE_SYMPTOMS) == 13 and len(HNC_SYMPTOMS) == 9 and len(INTERFERENCE_SYMPTOMS) == 6


def category_of(symptom_id: str) -> Category:
    try:
        return SYMPTOM_CATEGORY[symptom_id]
    except KeyError:
        from .errors import UnknownSymptom

        raise UnknownSymptom(f"unknown symptom id: {symptom_id!r}") from None
