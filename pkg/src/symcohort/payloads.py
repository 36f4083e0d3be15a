"""Canonical JSON payloads shared by the CLI and the HTTP API.

Every analytic response body is built here, from the same inputs, so the
two surfaces are byte-identical and responses are stable across runs
(ETags are content hashes of these bytes). Floats are rounded to at most
6 fractional digits before serialization; fractions become floats.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from . import arm, cluster, filaments, rulegraph, stats
from .errors import UnknownPatient, UnknownSymptom
from .model import CohortDataset, THERAPIES
from .symptoms import SYMPTOM_SET, category_of
from .timegrid import TIME_GRID, Phase

FLOAT_DIGITS = 6
DEFAULT_LAYOUT_SEED = 7


def _clean(value):
    """Round floats, normalize numpy scalars and fractions, recurse containers."""
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, Fraction):
        value = float(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        out = round(float(value), FLOAT_DIGITS)
        return 0.0 if out == 0.0 else out  # collapse -0.0
    return value


def canonical_json(payload) -> bytes:
    """Compact, deterministic encoding of a payload built by this module."""
    return json.dumps(_clean(payload), separators=(",", ":"), ensure_ascii=True).encode()


def meta_payload():
    return {
        "symptoms": [
            {"id": s, "category": category_of(s).value} for s in stats.HEATMAP_SYMPTOM_ORDER
        ],
        "timepoints": [
            {"index": tp.index, "label": tp.label, "phase": tp.phase.value, "day": tp.day_offset}
            for tp in TIME_GRID
        ],
        "therapies": list(THERAPIES),
    }


def rules_payload(
    dataset: CohortDataset,
    phase: Phase,
    min_support=arm.DEFAULT_MIN_SUPPORT,
    min_lift=arm.DEFAULT_MIN_LIFT,
    top_k=arm.DEFAULT_TOP_K,
    presence_threshold=arm.DEFAULT_PRESENCE_THRESHOLD,
    max_itemset_size=arm.DEFAULT_MAX_ITEMSET_SIZE,
    layout_seed=DEFAULT_LAYOUT_SEED,
):
    """Mined rules plus the laid-out node-link graph."""
    ts = arm.build_transactions(dataset, phase, presence_threshold)
    rules = (
        arm.mine_rules(ts, min_support, min_lift, top_k, max_itemset_size)
        if ts.transactions
        else []
    )
    payload = {
        "phase": phase.value,
        "min_support": float(min_support),
        "min_lift": float(min_lift),
        "top_k": top_k,
        "presence_threshold": presence_threshold,
        "transaction_count": len(ts.transactions),
        "rules": [
            {
                "id": r.rule_id,
                "antecedent": sorted(r.antecedent),
                "consequent": sorted(r.consequent),
                "support": r.support,
                "lift": r.lift,
            }
            for r in rules
        ],
        "graph": _graph_payload(rules, layout_seed),
    }
    return payload


def _graph_payload(rules, layout_seed):
    if not rules:
        return {"nodes": [], "edges": []}
    g = rulegraph.build_graph(rules)
    result = rulegraph.layout(g, seed=layout_seed)
    supports = [s for _, _, s, _ in g.rule_nodes]
    lifts = [l for _, _, _, l in g.rule_nodes]
    support_range = (min(supports), max(supports))
    lift_range = (min(lifts), max(lifts))

    nodes = []
    for node_id in g.symptom_nodes:
        x, y = result.positions[node_id]
        nodes.append({"id": node_id, "kind": "symptom", "x": x, "y": y})
    for node_id, rule_id, support, lift in g.rule_nodes:
        x, y = result.positions[node_id]
        radius, shade = rulegraph.node_visuals(support, lift, support_range, lift_range)
        nodes.append(
            {
                "id": node_id,
                "kind": "rule",
                "x": x,
                "y": y,
                "rule_id": rule_id,
                "support": support,
                "lift": lift,
                "radius": radius,
                "shade": shade,
            }
        )
    return {
        "nodes": nodes,
        "edges": [{"from": a, "to": b} for a, b in g.edges],
        "seed": result.seed,
        "stress": result.stress,
    }


def clusters_payload(dataset: CohortDataset, tp, symptoms=None, k: int = 2):
    view = cluster.recluster(dataset, tp, symptoms, k=k)
    return {
        "timepoint": view.timepoint.label,
        "symptoms": list(view.symptom_subset),
        "k": k,
        "points": [
            {
                "patient_id": pid,
                "pc1": view.coords[pid][0],
                "pc2": view.coords[pid][1],
                "burden": view.assignments[pid],
                **view.markers[pid],
            }
            for pid in sorted(view.assignments)
        ],
    }


def filaments_payload(
    dataset: CohortDataset,
    symptom: str,
    mode: str = "individual",
    patients=None,
    phase_highlight=None,
    highlight_patient=None,
):
    if symptom not in SYMPTOM_SET:
        raise UnknownSymptom(f"unknown symptom id: {symptom!r}")
    if mode not in ("individual", "therapy_mean"):
        raise ValueError(f"mode must be individual|therapy_mean, got {mode!r}")

    if mode == "therapy_mean":
        lines = filaments.therapy_mean_filaments(dataset, symptom)
    else:
        ids = list(patients) if patients else list(dataset.patient_ids())
        known = set(dataset.patient_ids())
        for pid in ids:
            if pid not in known:
                raise UnknownPatient(f"unknown patient id: {pid!r}")
        if highlight_patient is None and len(ids) == 1:
            highlight_patient = ids[0]
        lines = [
            filaments.build_filament(
                dataset.series[(pid, symptom)], dataset.time_grid,
                highlight=(pid == highlight_patient),
            )
            for pid in sorted(ids)
        ]
    if highlight_patient is not None and highlight_patient not in set(dataset.patient_ids()):
        raise UnknownPatient(f"unknown patient id: {highlight_patient!r}")

    return {
        "symptom": symptom,
        "mode": mode,
        "phase_highlight": phase_highlight.value if phase_highlight else None,
        "filaments": [
            {
                "owner": line.owner,
                "highlight": line.highlight,
                "vertices": [
                    {"x": v.x, "y": v.y, "tp": v.timepoint_index, "reported": v.reported}
                    for v in line.vertices
                ],
            }
            for line in lines
        ],
    }


def heatmap_payload(dataset: CohortDataset, patient_id=None):
    if patient_id is not None and patient_id not in set(dataset.patient_ids()):
        raise UnknownPatient(f"unknown patient id: {patient_id!r}")
    cells = stats.heatmap(dataset)
    by_symptom = {}
    for c in cells:
        by_symptom.setdefault(c.symptom_id, []).append(c)

    rows = []
    for sym in stats.HEATMAP_SYMPTOM_ORDER:
        row_cells = []
        for c in sorted(by_symptom[sym], key=lambda c: c.timepoint_index):
            entry = {
                "tp": c.timepoint_index,
                "bins": {b: c.bin_fractions[b] for b in stats.BIN_NAMES},
                "reporting_fraction": c.reporting_fraction,
                "prevalence": 1.0 - c.bin_fractions[stats.BIN_ZERO]
                if c.reporting_fraction > 0
                else None,
            }
            if patient_id is not None:
                s = dataset.series[(patient_id, sym)]
                entry["patient_rating"] = s.values[c.timepoint_index] if s.reported[c.timepoint_index] else None
            row_cells.append(entry)
        rows.append({"symptom": sym, "category": category_of(sym).value, "cells": row_cells})
    return {"patient_id": patient_id, "rows": rows}


def correlations_payload(dataset: CohortDataset, tp, symptom=None):
    entries = stats.spearman_matrix(dataset, tp)
    if symptom is not None:
        if symptom not in SYMPTOM_SET:
            raise UnknownSymptom(f"unknown symptom id: {symptom!r}")
        entries = [e for e in entries if symptom in (e.symptom_a, e.symptom_b)]
    return {
        "timepoint": tp.label,
        "symptom": symptom,
        "entries": [
            {"a": e.symptom_a, "b": e.symptom_b, "rho": e.rho, "n": e.n} for e in entries
        ],
    }


def patient_payload(dataset: CohortDataset, patient_id: str):
    p = dataset.patient(patient_id)
    series = []
    for sym in stats.HEATMAP_SYMPTOM_ORDER:
        s = dataset.series[(patient_id, sym)]
        series.append(
            {
                "symptom": sym,
                "values": list(s.values),
                "reported": list(s.reported),
            }
        )
    return {
        "patient_id": p.patient_id,
        "age": p.age,
        "gender": p.gender,
        "t_category": p.t_category,
        "therapy": p.therapy,
        "total_dose": p.total_dose,
        "reported_timepoints": sorted(dataset.reported_timepoints(patient_id)),
        "series": series,
    }
