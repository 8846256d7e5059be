"""Command-line client for the engine.

All reasoning lives in the core package; subcommands parse a file, run the
same workflow the HTTP service runs, and print. ``--json`` output uses the
service's wire schemas verbatim, so anything that consumes the API can
consume the CLI. ``serve`` starts the HTTP service itself.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional

from . import dot, ingest
from .analysis import Analysis, analyze, apply_refutations
from .errors import DiveError, ValidationFailedError
from .model import ProvDocument
from .propagate import PolicyConfig, propagate, seed_confidences
from .service import schemas
from .service.store import document_id_for
from .tms import WhatIfState

DEFAULT_ADDR = "127.0.0.1:8000"


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _write_output(path: Optional[str], data: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        Path(path).write_bytes(data)


def _print_json(model) -> None:
    print(model.model_dump_json(indent=2, by_alias=True, exclude_none=True))


def _load(path: str) -> ProvDocument:
    return ingest.parse_document(_read_input(path))


def _policy_from_args(args) -> PolicyConfig:
    return PolicyConfig(
        and_policy=args.and_policy,
        or_policy=args.or_policy,
        appraisal_aggregator=args.aggregator,
        default_seed=args.default_seed,
    )


def _state_for(analysis: Analysis, disabled: list[str]) -> WhatIfState:
    return apply_refutations(analysis, disabled)


# --- subcommands ---------------------------------------------------------------

def cmd_validate(args) -> int:
    try:
        doc = _load(args.file)
    except ValidationFailedError as exc:
        if args.json:
            _print_json(
                schemas.ErrorBody(
                    code=exc.code,
                    message=exc.message,
                    violations=[
                        schemas.ViolationModel.from_violation(v) for v in exc.violations
                    ],
                )
            )
        else:
            print(f"invalid: {len(exc.violations)} violation(s)", file=sys.stderr)
            for v in exc.violations:
                print(f"  [{v.rule}] {v.message}", file=sys.stderr)
        return 1
    doc_id = document_id_for(ingest.serialize_document(doc))
    if args.json:
        _print_json(schemas.DocumentCreated(documentId=doc_id))
    else:
        annotations = sum(
            len(c) for c in (doc.appraisals, doc.evidence, doc.preferences, doc.nexuses)
        )
        print(
            f"ok: {len(doc.nodes)} nodes, {len(doc.edges)} edges, "
            f"{annotations} annotation(s) ({doc_id})"
        )
    return 0


def cmd_fixture(args) -> int:
    if args.name != "lady-ada":
        print(f"unknown fixture {args.name!r} (try: lady-ada)", file=sys.stderr)
        return 2
    _write_output(args.output, ingest.serialize_document(ingest.build_lady_ada_fixture()))
    return 0


def cmd_provenance(args) -> int:
    doc = _load(args.file)
    analysis = analyze(doc, args.targets)
    if args.json:
        _print_json(schemas.analysis_model(analysis))
        return 0
    kind_tag = {"Entity": "E", "Activity": "A", "Agent": "G"}
    print(f"subgraph for target(s) {', '.join(analysis.subgraph.targets)}:")
    for node_id in sorted(analysis.subgraph.nodes):
        node = analysis.subgraph.nodes[node_id]
        print(f"  [{kind_tag[node.kind.value]}] {node_id}  {node.label}")
    print("environments:")
    for node_id, envs in sorted(analysis.labels.environments.items()):
        rendered = " | ".join("{" + ", ".join(sorted(env)) + "}" for env in envs)
        print(f"  {node_id}: {rendered}")
    return 0


def cmd_refute(args) -> int:
    doc = _load(args.file)
    analysis = analyze(doc, args.targets)
    state = _state_for(analysis, args.disable)
    if args.json:
        _print_json(schemas.WhatIfModel.from_state(args.disable, state, version=0))
        return 0
    for node_id, status in sorted(state.statuses.items()):
        print(f"{status.value:<18} {node_id}")
    return 0


def cmd_confidence(args) -> int:
    doc = _load(args.file)
    analysis = analyze(doc, args.targets)
    cfg = _policy_from_args(args)
    state = _state_for(analysis, args.disable)
    seeds = seed_confidences(doc, analysis.subgraph, cfg)
    confidence = propagate(analysis.labels, seeds, cfg, state)
    if args.json:
        _print_json(schemas.ConfidenceModel.from_map(confidence, cfg))
        return 0
    for node_id in sorted(analysis.subgraph.nodes):
        if node_id in confidence.values:
            print(f"{confidence.values[node_id]:.4f}  {node_id}")
        else:
            print(f"refuted {node_id}")
    return 0


def cmd_export_dot(args) -> int:
    doc = _load(args.file)
    analysis = analyze(doc, args.targets)
    cfg = _policy_from_args(args)
    state = _state_for(analysis, args.disable)
    seeds = seed_confidences(doc, analysis.subgraph, cfg)
    confidence = propagate(analysis.labels, seeds, cfg, state)
    text = dot.export_dot(
        analysis, state=state, confidence=confidence.values, name="provenance"
    )
    _write_output(args.output, text.encode("utf-8"))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    addr = args.addr or os.environ.get("DIVE_ADDR", DEFAULT_ADDR)
    host, _, port_text = addr.partition(":")
    app = create_app(args.data_dir, ui_dir=args.ui_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port_text or 8000))
    return 0


# --- argument wiring ----------------------------------------------------------------

def _add_target_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("file", help="dive/1 document path, or - for stdin")
    parser.add_argument(
        "--target",
        dest="targets",
        action="append",
        required=True,
        metavar="ID",
        help="target node id (repeatable)",
    )


def _add_disable_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--disable",
        action="append",
        default=[],
        metavar="REF",
        help="node id or factor 'kind:key' to disable (repeatable)",
    )


def _add_policy_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--and", dest="and_policy", choices=["min", "max", "avg"], default="min"
    )
    parser.add_argument(
        "--or", dest="or_policy", choices=["min", "max", "avg"], default="max"
    )
    parser.add_argument(
        "--aggregator", choices=["min", "max", "avg"], default="avg",
        help="fold for multiple appraisals of one element",
    )
    parser.add_argument("--default-seed", type=float, default=1.0, metavar="X")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dive",
        description="Inspect, refute, and score multi-agent analytic provenance.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a document against the dive/1 rules")
    p.add_argument("file", help="dive/1 document path, or - for stdin")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("fixture", help="emit a built-in demo document")
    p.add_argument("name", help="fixture name (lady-ada)")
    p.add_argument("-o", "--output", metavar="FILE")
    p.set_defaults(func=cmd_fixture)

    p = sub.add_parser("provenance", help="print upstream subgraph and environments")
    _add_target_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_provenance)

    p = sub.add_parser("refute", help="disable factors/nodes and print statuses")
    _add_target_args(p)
    _add_disable_arg(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_refute)

    p = sub.add_parser("confidence", help="propagate appraisal confidences")
    _add_target_args(p)
    _add_disable_arg(p)
    _add_policy_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_confidence)

    p = sub.add_parser("export-dot", help="render the analysis as Graphviz DOT")
    _add_target_args(p)
    _add_disable_arg(p)
    _add_policy_args(p)
    p.add_argument("-o", "--output", metavar="FILE")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--addr", metavar="HOST:PORT", help="default $DIVE_ADDR or " + DEFAULT_ADDR)
    p.add_argument("--data-dir", metavar="DIR", help="default $DIVE_DATA_DIR or ./dive-data")
    p.add_argument(
        "--ui-dir", metavar="DIR", help="serve a built browser client at /ui (default $DIVE_UI_DIR)"
    )
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DiveError as exc:
        print(f"error [{exc.code}]: {exc.message}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error [FileNotFound]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
