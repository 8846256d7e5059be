"""Provenance interpretation engine: assumption environments, counterfactual
refutation, and confidence propagation over PROV-style graphs with agent
judgments."""

from .analysis import Analysis, IsolationView, analyze, isolate
from .ingest import (
    build_lady_ada_fixture,
    parse_document,
    serialize_document,
)
from .model import (
    Appraisal,
    Evidence,
    Nexus,
    NodeKind,
    Polarity,
    Preference,
    ProvDocument,
    ProvEdge,
    ProvNode,
    Relation,
    Violation,
    add_edge,
    add_node,
    attach_annotation,
    validate,
)
from .propagate import ConfidenceMap, PolicyConfig, closed_form_check, propagate, seed_confidences
from .tms import (
    AssumptionClass,
    Justification,
    LabelSet,
    Status,
    Subgraph,
    WhatIfState,
    build_justifications,
    compute_labels,
    downstream_of,
    refute,
    retrieve_upstream,
    upstream_of,
)

__version__ = "0.1.0"

__all__ = [
    "Analysis",
    "Appraisal",
    "AssumptionClass",
    "ConfidenceMap",
    "Evidence",
    "IsolationView",
    "Justification",
    "LabelSet",
    "Nexus",
    "NodeKind",
    "Polarity",
    "PolicyConfig",
    "Preference",
    "ProvDocument",
    "ProvEdge",
    "ProvNode",
    "Relation",
    "Status",
    "Subgraph",
    "Violation",
    "WhatIfState",
    "add_edge",
    "add_node",
    "analyze",
    "attach_annotation",
    "build_justifications",
    "build_lady_ada_fixture",
    "closed_form_check",
    "compute_labels",
    "downstream_of",
    "isolate",
    "parse_document",
    "propagate",
    "refute",
    "retrieve_upstream",
    "seed_confidences",
    "serialize_document",
    "upstream_of",
    "validate",
]
