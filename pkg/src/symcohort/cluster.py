"""Per-timepoint patient clustering and 2-D projection.

Patients eligible for the timepoint's phase form a patient-symptom matrix
of imputed ratings; agglomerative Ward clustering (Lance-Williams updates,
deterministic tie-breaking) splits them into k=2 severity groups, and PCA
on the same matrix gives the scatterplot coordinates. Columns are never
standardized: all ratings share the one 0..10 scale.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptySymptomSubset,
    NoEligiblePatients,
    TooFewPatients,
    UnimputedDataset,
    UnknownSymptom,
)
from .model import CohortDataset, eligible_patients
from .symptoms import ALL_SYMPTOMS, SYMPTOM_SET
from .timegrid import TimePoint, phase_of

HIGH_BURDEN = "high"
LOW_BURDEN = "low"

_ZERO_VARIANCE_EPS = 1e-12


@dataclass(frozen=True)
class PatientSymptomMatrix:
    rows: tuple  # patient ids, sorted
    cols: tuple  # symptom ids, sorted
    values: np.ndarray  # shape (len(rows), len(cols)), imputed ratings
    timepoint: TimePoint


@dataclass(frozen=True)
class ClusterView:
    timepoint: TimePoint
    symptom_subset: tuple
    assignments: dict  # patient_id -> burden label
    coords: dict  # patient_id -> (pc1, pc2)
    markers: dict  # patient_id -> {therapy, gender, t_category}


def build_matrix(dataset: CohortDataset, tp: TimePoint, symptoms=None) -> PatientSymptomMatrix:
    """Imputed ratings of eligible patients at `tp`, one column per symptom."""
    if not dataset.imputed:
        raise UnimputedDataset("clustering requires an imputed dataset")
    if symptoms is None:
        symptoms = ALL_SYMPTOMS
    cols = tuple(sorted(set(symptoms)))
    if not cols:
        raise EmptySymptomSubset("symptom subset must be nonempty")
    for sym in cols:
        if sym not in SYMPTOM_SET:
            raise UnknownSymptom(f"unknown symptom id: {sym!r}")
    rows = tuple(sorted(eligible_patients(dataset, phase_of(tp))))
    if not rows:
        raise NoEligiblePatients(f"no patients eligible at {tp.label}")
    values = np.array(
        [[dataset.series[(pid, sym)].values[tp.index] for sym in cols] for pid in rows],
        dtype=float,
    )
    return PatientSymptomMatrix(rows, cols, values, tp)


def ward_linkage(x: np.ndarray):
    """Agglomerative Ward merges on row vectors of x.

    Returns a list of (i, j, cost, size) with cluster indices in scipy
    convention: originals 0..n-1, the m-th merge creates cluster n+m.
    `cost` is the within-cluster sum-of-squares increase of the merge.

    Uses the Lance-Williams recurrence on squared Euclidean distances;
    with D(a,b) = 2 * deltaSSE(a,b) the merge minimizing D also minimizes
    the variance increase. Ties break on the smallest (slot, slot) pair,
    slots being creation-ordered, so results are platform-stable.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if n < 1:
        raise TooFewPatients("need at least one row")
    merges = []
    if n == 1:
        return merges

    sq_norms = np.einsum("ij,ij->i", x, x)
    d = sq_norms[:, None] + sq_norms[None, :] - 2.0 * (x @ x.T)
    np.maximum(d, 0.0, out=d)  # guard tiny negative round-off
    np.fill_diagonal(d, np.inf)  # inactive entries stay at inf
    sizes = np.ones(n)
    cluster_id = list(range(n))  # slot -> current cluster id
    active = np.ones(n, dtype=bool)

    for step in range(n - 1):
        # row-major argmin over a symmetric matrix -> smallest (i, j) tie wins
        flat = int(np.argmin(d))
        i, j = divmod(flat, n)
        if i > j:
            i, j = j, i
        cost = d[i, j] / 2.0
        ni, nj = sizes[i], sizes[j]
        merges.append((cluster_id[i], cluster_id[j], cost, int(ni + nj)))

        # Lance-Williams update for Ward, written against slot i
        others = active.copy()
        others[i] = others[j] = False
        nk = sizes[others]
        d_new = ((ni + nk) * d[i, others] + (nj + nk) * d[j, others] - nk * d[i, j]) / (
            ni + nj + nk
        )
        d[i, others] = d_new
        d[others, i] = d_new
        d[j, :] = np.inf
        d[:, j] = np.inf
        active[j] = False
        sizes[i] = ni + nj
        cluster_id[i] = n + step
    return merges


def cut_linkage(merges, n: int, k: int):
    """Cluster index per row after stopping the merge sequence at k clusters."""
    if k > n:
        raise TooFewPatients(f"cannot cut {n} rows into {k} clusters")
    members = {i: [i] for i in range(n)}
    next_id = n
    for a, b, _cost, _size in merges[: n - k]:
        members[next_id] = members.pop(a) + members.pop(b)
        next_id += 1
    labels = np.empty(n, dtype=int)
    for idx, (_cid, rows) in enumerate(sorted(members.items())):
        labels[rows] = idx
    return labels


def ward_cluster(m: PatientSymptomMatrix, k: int = 2):
    """Ward assignments, labeled by descending mean total selected-symptom score.

    With k=2 the labels are 'high'/'low'; for other k they are 'g1'..'gk'
    in descending burden order.
    """
    n = len(m.rows)
    if n < k:
        raise TooFewPatients(f"{n} patients cannot form {k} clusters")
    merges = ward_linkage(m.values)
    labels = cut_linkage(merges, n, k)

    totals = m.values.sum(axis=1)
    order = sorted(
        range(k),
        key=lambda c: (-float(totals[labels == c].mean()), int(np.argmax(labels == c))),
    )
    if k == 2:
        names = {order[0]: HIGH_BURDEN, order[1]: LOW_BURDEN}
    else:
        names = {c: f"g{rank + 1}" for rank, c in enumerate(order)}
    return {pid: names[labels[i]] for i, pid in enumerate(m.rows)}


def pca_project(m: PatientSymptomMatrix):
    """Project rows onto the top-2 principal components of the covariance.

    Sign convention: within each component, the loading of largest absolute
    value is made positive. A single-column matrix gets pc2 = 0; an
    all-identical matrix projects everything to the origin (with a warning).
    """
    x = m.values
    n, d = x.shape
    if n < 2:
        raise TooFewPatients("PCA needs at least two rows")
    centered = x - x.mean(axis=0)
    cov = centered.T @ centered / (n - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals, eigvecs = eigvals[order], eigvecs[:, order]

    if float(eigvals[0]) <= _ZERO_VARIANCE_EPS:
        warnings.warn("degenerate input: all rows identical, coordinates collapse to (0,0)")
        return {pid: (0.0, 0.0) for pid in m.rows}

    comps = []
    for c in range(min(2, d)):
        v = eigvecs[:, c]
        if v[int(np.argmax(np.abs(v)))] < 0:
            v = -v
        comps.append(v)
    scores = centered @ np.column_stack(comps)
    if scores.shape[1] == 1:
        scores = np.column_stack([scores, np.zeros(n)])
    return {pid: (float(scores[i, 0]), float(scores[i, 1])) for i, pid in enumerate(m.rows)}


def recluster(dataset: CohortDataset, tp: TimePoint, symptoms=None, k: int = 2) -> ClusterView:
    """build_matrix -> ward_cluster -> pca_project -> marker attribution."""
    m = build_matrix(dataset, tp, symptoms)
    assignments = ward_cluster(m, k=k)
    coords = pca_project(m)
    markers = {}
    for pid in m.rows:
        p = dataset.patient(pid)
        markers[pid] = {
            "therapy": p.therapy,
            "gender": p.gender,
            "t_category": p.t_category,
        }
    return ClusterView(tp, m.cols, assignments, coords, markers)
