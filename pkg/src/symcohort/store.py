"""Content-addressed dataset storage plus a derived-result byte cache.

A dataset directory holds the canonical CSV pair and a manifest; its id is
the hash of the canonical content, so re-uploading the same cohort always
lands on the same id and ingestion is idempotent. Derived analytics are
cached as the exact response bytes keyed by (dataset, endpoint, params) —
evictable, never authoritative.
"""

from __future__ import annotations

import hashlib
import json
import shutil
import tempfile
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from .errors import UnknownDataset
from .model import CohortDataset, impute, parse_dataset, to_canonical_csv


@dataclass(frozen=True)
class DatasetHandle:
    dataset_id: str
    name: str
    created_at: str
    patient_count: int
    status: str  # 'ready' | 'failed' (ingest returns only on success)

    def to_dict(self):
        return {
            "dataset_id": self.dataset_id,
            "name": self.name,
            "created_at": self.created_at,
            "patient_count": self.patient_count,
            "status": self.status,
        }


def content_id(patients_csv: str, ratings_csv: str) -> str:
    h = hashlib.sha256()
    h.update(patients_csv.encode("utf-8"))
    h.update(b"\x00")
    h.update(ratings_csv.encode("utf-8"))
    return h.hexdigest()[:16]


class DatasetStore:
    def __init__(self, root):
        self.root = Path(root)
        (self.root / "datasets").mkdir(parents=True, exist_ok=True)
        (self.root / "cache").mkdir(parents=True, exist_ok=True)
        self._ingest_lock = threading.Lock()
        self._loaded = {}  # dataset_id -> (raw, imputed)
        self._loaded_lock = threading.Lock()

    # -- datasets ------------------------------------------------------------

    def _dataset_dir(self, dataset_id: str) -> Path:
        return self.root / "datasets" / dataset_id

    def ingest(self, patients_csv: str, ratings_csv: str, name: str | None = None):
        """Parse, canonicalize, and persist; returns (handle, dataset).

        Atomic: the dataset directory appears only after everything is
        written. Re-ingesting identical content returns the existing handle.
        """
        dataset = parse_dataset(patients_csv, ratings_csv)
        canon_patients, canon_ratings = to_canonical_csv(dataset)
        dataset_id = content_id(canon_patients, canon_ratings)

        with self._ingest_lock:
            target = self._dataset_dir(dataset_id)
            if target.exists():
                return self.handle(dataset_id), self._get_loaded(dataset_id)[0]
            manifest = {
                "dataset_id": dataset_id,
                "name": name or dataset_id,
                "created_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
                "patient_count": len(dataset.patients),
                "status": "ready",
                "partial_questionnaires": dataset.partial_questionnaires,
            }
            tmp = Path(tempfile.mkdtemp(dir=self.root / "datasets", prefix=".ingest-"))
            try:
                (tmp / "patients.csv").write_text(canon_patients, encoding="utf-8")
                (tmp / "ratings.csv").write_text(canon_ratings, encoding="utf-8")
                (tmp / "manifest.json").write_text(
                    json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
                )
                tmp.rename(target)
            except BaseException:
                shutil.rmtree(tmp, ignore_errors=True)
                raise
        return self.handle(dataset_id), self._get_loaded(dataset_id)[0]

    def handle(self, dataset_id: str) -> DatasetHandle:
        manifest_path = self._dataset_dir(dataset_id) / "manifest.json"
        if not manifest_path.exists():
            raise UnknownDataset(f"unknown dataset: {dataset_id!r}")
        m = json.loads(manifest_path.read_text(encoding="utf-8"))
        return DatasetHandle(
            m["dataset_id"], m["name"], m["created_at"], m["patient_count"], m["status"]
        )

    def list_handles(self):
        out = []
        for d in sorted((self.root / "datasets").iterdir()):
            if d.is_dir() and not d.name.startswith("."):
                out.append(self.handle(d.name))
        return out

    def _get_loaded(self, dataset_id: str):
        with self._loaded_lock:
            if dataset_id in self._loaded:
                return self._loaded[dataset_id]
        d = self._dataset_dir(dataset_id)
        if not d.exists():
            raise UnknownDataset(f"unknown dataset: {dataset_id!r}")
        raw = parse_dataset(
            (d / "patients.csv").read_text(encoding="utf-8"),
            (d / "ratings.csv").read_text(encoding="utf-8"),
        )
        pair = (raw, impute(raw))
        with self._loaded_lock:
            self._loaded[dataset_id] = pair
        return pair

    def raw(self, dataset_id: str) -> CohortDataset:
        return self._get_loaded(dataset_id)[0]

    def imputed(self, dataset_id: str) -> CohortDataset:
        return self._get_loaded(dataset_id)[1]

    def delete(self, dataset_id: str):
        d = self._dataset_dir(dataset_id)
        if not d.exists():
            raise UnknownDataset(f"unknown dataset: {dataset_id!r}")
        shutil.rmtree(d)
        shutil.rmtree(self.root / "cache" / dataset_id, ignore_errors=True)
        with self._loaded_lock:
            self._loaded.pop(dataset_id, None)

    # -- derived-result cache --------------------------------------------------

    def _cache_path(self, dataset_id: str, endpoint: str, params: dict) -> Path:
        key = json.dumps(params, sort_keys=True, separators=(",", ":"))
        digest = hashlib.sha256(key.encode("utf-8")).hexdigest()[:24]
        return self.root / "cache" / dataset_id / f"{endpoint}__{digest}.json"

    def cache_get(self, dataset_id: str, endpoint: str, params: dict):
        path = self._cache_path(dataset_id, endpoint, params)
        return path.read_bytes() if path.exists() else None

    def cache_put(self, dataset_id: str, endpoint: str, params: dict, body: bytes):
        path = self._cache_path(dataset_id, endpoint, params)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_bytes(body)
        tmp.replace(path)

    def clear_cache(self):
        shutil.rmtree(self.root / "cache", ignore_errors=True)
        (self.root / "cache").mkdir(parents=True, exist_ok=True)
