"""HTTP JSON API over the analytics engine.

All analytic GET endpoints are pure functions of (dataset content, query
parameters): bodies are canonical JSON built by `payloads`, cached on disk
by the store, and tagged with a content-hash ETag. Ingestion is the only
write path and is atomic and content-addressed.
"""

from __future__ import annotations

import hashlib

from fastapi import FastAPI, File, Form, Request, Response, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import arm, payloads
from .errors import (
    NotFound,
    TooFewPatients,
    UnknownSymptom,
    ValidationFailure,
)
from .model import parse_dataset_lenient
from .store import DatasetStore
from .timegrid import Phase, timepoint_by_label

DEFAULT_MAX_UPLOAD_BYTES = 64 * 1024 * 1024
MAX_REPORTED_VIOLATIONS = 20

API = "/api/v1"


def _etag(body: bytes) -> str:
    return '"' + hashlib.sha256(body).hexdigest()[:32] + '"'


def _error(status: int, kind: str, message: str, **extra):
    return JSONResponse({"error": kind, "message": message, **extra}, status_code=status)


def create_app(
    data_dir,
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD_BYTES,
    cors_origins=(),
    static_dir=None,
) -> FastAPI:
    app = FastAPI(title="symcohort", docs_url=None, redoc_url=None)
    store = DatasetStore(data_dir)
    app.state.store = store

    if cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(NotFound)
    async def _not_found(_request, exc):
        return _error(404, type(exc).__name__, str(exc))

    @app.exception_handler(ValidationFailure)
    async def _invalid(_request, exc):
        return _error(422, type(exc).__name__, str(exc))

    @app.exception_handler(TooFewPatients)
    async def _too_few(_request, exc):
        return _error(422, type(exc).__name__, str(exc))

    def serve_cached(request: Request, dataset_id: str, endpoint: str, params: dict, build):
        body = store.cache_get(dataset_id, endpoint, params)
        if body is None:
            body = payloads.canonical_json(build())
            store.cache_put(dataset_id, endpoint, params, body)
        etag = _etag(body)
        if request.headers.get("if-none-match") == etag:
            return Response(status_code=304, headers={"ETag": etag})
        return Response(body, media_type="application/json", headers={"ETag": etag})

    # -- meta / datasets -------------------------------------------------------

    @app.get(API + "/meta")
    def get_meta():
        body = payloads.canonical_json(payloads.meta_payload())
        return Response(body, media_type="application/json", headers={"ETag": _etag(body)})

    @app.post(API + "/datasets", status_code=201)
    async def ingest_dataset(
        patients: UploadFile = File(...),
        ratings: UploadFile = File(...),
        name: str = Form(None),
    ):
        patients_bytes = await patients.read()
        ratings_bytes = await ratings.read()
        if len(patients_bytes) + len(ratings_bytes) > max_upload_bytes:
            return _error(413, "PayloadTooLarge", "uploaded CSVs exceed the size cap")
        try:
            patients_csv = patients_bytes.decode("utf-8")
            ratings_csv = ratings_bytes.decode("utf-8")
        except UnicodeDecodeError:
            return _error(400, "MalformedCsv", "uploads must be UTF-8 text")

        dataset, violations = parse_dataset_lenient(patients_csv, ratings_csv)
        if violations:
            return _error(
                400,
                "ValidationFailure",
                f"{len(violations)} invalid rows",
                violations=[
                    {"file": v.file, "row": v.row, "column": v.column, "message": v.message}
                    for v in violations[:MAX_REPORTED_VIOLATIONS]
                ],
            )
        handle, dataset = store.ingest(patients_csv, ratings_csv, name=name)
        return {
            **handle.to_dict(),
            "partial_questionnaires": dataset.partial_questionnaires,
        }

    @app.get(API + "/datasets")
    def list_datasets():
        return {"datasets": [h.to_dict() for h in store.list_handles()]}

    @app.get(API + "/datasets/{dataset_id}")
    def get_dataset(dataset_id: str):
        return store.handle(dataset_id).to_dict()

    @app.delete(API + "/datasets/{dataset_id}", status_code=204)
    def delete_dataset(dataset_id: str):
        store.delete(dataset_id)
        return Response(status_code=204)

    # -- analytics -------------------------------------------------------------

    @app.get(API + "/datasets/{dataset_id}/clusters")
    def get_clusters(
        request: Request,
        dataset_id: str,
        timepoint: str = "wk0",
        symptoms: str = None,
        k: int = 2,
    ):
        store.handle(dataset_id)
        tp = timepoint_by_label(timepoint)
        subset = [s for s in symptoms.split(",") if s] if symptoms is not None else None
        if symptoms is not None and not subset:
            return _error(422, "EmptySymptomSubset", "symptom subset must be nonempty")
        if k < 1:
            return _error(422, "InvalidParameter", f"k must be >= 1, got {k}")
        params = {"timepoint": tp.label, "symptoms": subset, "k": k}
        return serve_cached(
            request,
            dataset_id,
            "clusters",
            params,
            lambda: payloads.clusters_payload(store.imputed(dataset_id), tp, subset, k=k),
        )

    @app.get(API + "/datasets/{dataset_id}/rules")
    def get_rules(
        request: Request,
        dataset_id: str,
        phase: str = "acute",
        min_support: float = arm.DEFAULT_MIN_SUPPORT,
        min_lift: float = arm.DEFAULT_MIN_LIFT,
        top_k: int = arm.DEFAULT_TOP_K,
        presence_threshold: int = arm.DEFAULT_PRESENCE_THRESHOLD,
        max_itemset_size: int = arm.DEFAULT_MAX_ITEMSET_SIZE,
        layout_seed: int = payloads.DEFAULT_LAYOUT_SEED,
    ):
        store.handle(dataset_id)
        try:
            phase_enum = Phase(phase)
        except ValueError:
            return _error(422, "InvalidParameter", f"phase must be baseline|acute|late, got {phase!r}")
        if not 0.0 < min_support <= 1.0:
            return _error(422, "InvalidParameter", f"min_support must be in (0,1], got {min_support}")
        if min_lift <= 0:
            return _error(422, "InvalidParameter", f"min_lift must be > 0, got {min_lift}")
        if top_k < 1:
            return _error(422, "InvalidParameter", f"top_k must be >= 1, got {top_k}")
        if not 1 <= presence_threshold <= 10:
            return _error(422, "InvalidParameter", "presence_threshold must be in 1..10")
        params = {
            "phase": phase_enum.value,
            "min_support": min_support,
            "min_lift": min_lift,
            "top_k": top_k,
            "presence_threshold": presence_threshold,
            "max_itemset_size": max_itemset_size,
            "layout_seed": layout_seed,
        }
        return serve_cached(
            request,
            dataset_id,
            "rules",
            params,
            lambda: payloads.rules_payload(
                store.raw(dataset_id),
                phase_enum,
                min_support,
                min_lift,
                top_k,
                presence_threshold,
                max_itemset_size,
                layout_seed,
            ),
        )

    @app.get(API + "/datasets/{dataset_id}/filaments")
    def get_filaments(
        request: Request,
        dataset_id: str,
        symptom: str,
        mode: str = "individual",
        patients: str = None,
        phase_highlight: str = None,
        highlight: str = None,
    ):
        store.handle(dataset_id)
        if mode not in ("individual", "therapy_mean"):
            return _error(422, "InvalidParameter", f"mode must be individual|therapy_mean, got {mode!r}")
        phase_enum = None
        if phase_highlight is not None:
            try:
                phase_enum = Phase(phase_highlight)
            except ValueError:
                return _error(422, "InvalidParameter", f"bad phase_highlight {phase_highlight!r}")
        patient_list = [p for p in patients.split(",") if p] if patients else None
        params = {
            "symptom": symptom,
            "mode": mode,
            "patients": patient_list,
            "phase_highlight": phase_highlight,
            "highlight": highlight,
        }

        def build():
            try:
                return payloads.filaments_payload(
                    store.imputed(dataset_id),
                    symptom,
                    mode,
                    patient_list,
                    phase_enum,
                    highlight,
                )
            except UnknownSymptom as exc:
                # on this endpoint the symptom addresses a resource
                raise NotFound(str(exc)) from exc

        return serve_cached(request, dataset_id, "filaments", params, build)

    @app.get(API + "/datasets/{dataset_id}/heatmap")
    def get_heatmap(request: Request, dataset_id: str, patient_id: str = None):
        store.handle(dataset_id)
        params = {"patient_id": patient_id}
        return serve_cached(
            request,
            dataset_id,
            "heatmap",
            params,
            lambda: payloads.heatmap_payload(store.imputed(dataset_id), patient_id),
        )

    @app.get(API + "/datasets/{dataset_id}/correlations")
    def get_correlations(
        request: Request, dataset_id: str, timepoint: str = "wk0", symptom: str = None
    ):
        store.handle(dataset_id)
        tp = timepoint_by_label(timepoint)
        params = {"timepoint": tp.label, "symptom": symptom}

        def build():
            try:
                return payloads.correlations_payload(store.imputed(dataset_id), tp, symptom)
            except UnknownSymptom as exc:
                raise NotFound(str(exc)) from exc

        return serve_cached(request, dataset_id, "correlations", params, build)

    @app.get(API + "/datasets/{dataset_id}/patients/{patient_id}")
    def get_patient(request: Request, dataset_id: str, patient_id: str):
        store.handle(dataset_id)
        params = {"patient_id": patient_id}
        return serve_cached(
            request,
            dataset_id,
            "patient",
            params,
            lambda: payloads.patient_payload(store.imputed(dataset_id), patient_id),
        )

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
