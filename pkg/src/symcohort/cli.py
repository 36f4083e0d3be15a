"""Command-line interface.

Subcommands mirror the analytics endpoints (JSON output is byte-identical
to the corresponding API response body), plus a synthetic-cohort generator
and the API server launcher.

Exit codes: 0 ok, 2 validation error, 3 I/O error, 4 internal error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import arm, payloads
from .errors import EngineError, NotFound, StateError, ValidationFailure
from .model import impute, parse_dataset
from .timegrid import Phase, timepoint_by_label

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_INTERNAL = 4


def _load(data_dir: str, imputed: bool):
    d = Path(data_dir)
    dataset = parse_dataset(
        (d / "patients.csv").read_text(encoding="utf-8"),
        (d / "ratings.csv").read_text(encoding="utf-8"),
    )
    return impute(dataset) if imputed else dataset


def _emit(payload):
    sys.stdout.buffer.write(payloads.canonical_json(payload))
    sys.stdout.buffer.flush()


def _cmd_synth(args):
    from .synth import generate_cohort, write_cohort

    if args.patients < 2:
        raise ValidationFailure(f"--patients must be >= 2, got {args.patients}")
    cohort = generate_cohort(args.patients, args.seed, args.gap, args.sigma)
    p, r = write_cohort(cohort, args.out)
    print(f"wrote {p} and {r} ({args.patients} patients, seed {args.seed})", file=sys.stderr)


def _cmd_rules(args):
    if args.top_k < 1:
        raise ValidationFailure(f"--top-k must be >= 1, got {args.top_k}")
    if not 0.0 < args.min_support <= 1.0:
        raise ValidationFailure(f"--min-support must be in (0,1], got {args.min_support}")
    if args.min_lift <= 0:
        raise ValidationFailure(f"--min-lift must be > 0, got {args.min_lift}")
    dataset = _load(args.data, imputed=False)
    payload = payloads.rules_payload(
        dataset,
        Phase(args.phase),
        args.min_support,
        args.min_lift,
        args.top_k,
        args.threshold,
        args.max_size,
        args.layout_seed,
    )
    if args.format == "json":
        _emit(payload)
        return
    lines = ["id,antecedent,consequent,support,lift"]
    for r in payload["rules"]:
        lines.append(
            f"{r['id']},{'+'.join(r['antecedent'])},{'+'.join(r['consequent'])},"
            f"{float(r['support']):.6f},{float(r['lift']):.6f}"
        )
    sys.stdout.write("\n".join(lines) + "\n")


def _cmd_cluster(args):
    dataset = _load(args.data, imputed=True)
    tp = timepoint_by_label(args.timepoint)
    symptoms = [s for s in args.symptoms.split(",") if s] if args.symptoms else None
    _emit(payloads.clusters_payload(dataset, tp, symptoms, k=args.k))


def _cmd_filaments(args):
    dataset = _load(args.data, imputed=True)
    patients = [p for p in args.patients.split(",") if p] if args.patients else None
    phase = Phase(args.phase_highlight) if args.phase_highlight else None
    _emit(
        payloads.filaments_payload(
            dataset, args.symptom, args.mode, patients, phase, args.highlight
        )
    )


def _cmd_heatmap(args):
    dataset = _load(args.data, imputed=True)
    _emit(payloads.heatmap_payload(dataset, args.patient))


def _cmd_serve(args):
    import uvicorn

    from .server import create_app

    host, _, port = args.listen.rpartition(":")
    app = create_app(
        args.data,
        cors_origins=args.cors or (),
        static_dir=args.ui if args.ui else None,
    )
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")


def build_parser():
    parser = argparse.ArgumentParser(prog="symcohort")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic cohort")
    p.add_argument("--patients", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--gap", type=float, default=4.0, help="planted burden-group mean gap")
    p.add_argument("--sigma", type=float, default=1.0, help="rating noise sigma")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("rules", help="mine association rules")
    p.add_argument("--data", required=True, help="directory with patients.csv + ratings.csv")
    p.add_argument("--phase", choices=[ph.value for ph in Phase], default="acute")
    p.add_argument("--min-support", type=float, default=arm.DEFAULT_MIN_SUPPORT)
    p.add_argument("--min-lift", type=float, default=arm.DEFAULT_MIN_LIFT)
    p.add_argument("--top-k", type=int, default=arm.DEFAULT_TOP_K)
    p.add_argument("--threshold", type=int, default=arm.DEFAULT_PRESENCE_THRESHOLD)
    p.add_argument("--max-size", type=int, default=arm.DEFAULT_MAX_ITEMSET_SIZE)
    p.add_argument("--layout-seed", type=int, default=payloads.DEFAULT_LAYOUT_SEED)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=_cmd_rules)

    p = sub.add_parser("cluster", help="per-timepoint severity clustering")
    p.add_argument("--data", required=True)
    p.add_argument("--timepoint", default="wk0")
    p.add_argument("--symptoms", default=None, help="comma-separated subset")
    p.add_argument("--k", type=int, default=2)
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("filaments", help="trajectory filament geometry")
    p.add_argument("--data", required=True)
    p.add_argument("--symptom", required=True)
    p.add_argument("--mode", choices=["individual", "therapy_mean"], default="individual")
    p.add_argument("--patients", default=None, help="comma-separated patient ids")
    p.add_argument("--phase-highlight", choices=[ph.value for ph in Phase], default=None)
    p.add_argument("--highlight", default=None, help="patient id to highlight")
    p.set_defaults(func=_cmd_filaments)

    p = sub.add_parser("heatmap", help="percentile heatmap cells")
    p.add_argument("--data", required=True)
    p.add_argument("--patient", default=None)
    p.set_defaults(func=_cmd_heatmap)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--listen", default="127.0.0.1:8077")
    p.add_argument("--data", required=True, help="store root directory")
    p.add_argument("--cors", action="append", default=None, help="allowed origin (repeatable)")
    p.add_argument("--ui", default=None, help="directory of built UI assets to serve at /")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ValidationFailure, StateError, NotFound, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
