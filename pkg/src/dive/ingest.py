"""Parse and serialize provenance documents in the ``dive/1`` JSON format,
plus the built-in cargo-vessel demo fixture.

Canonical output is deterministic: UTF-8, LF newlines, collections sorted by
id, fixed key order, empty collections omitted. ``parse_document`` is total
over arbitrary bytes: it either returns a valid document or raises one of
DocumentSyntaxError / SchemaError / ValidationFailedError.
"""

from __future__ import annotations

import json
from typing import Any, Mapping, Optional, Union

from . import model
from .errors import DocumentSyntaxError, SchemaError, ValidationFailedError
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
)

FORMAT_VERSION = "dive/1"
FILE_EXTENSION = ".dive.json"

_TOP_KEYS = (
    "nodes",
    "edges",
    "appraisals",
    "evidence",
    "preferences",
    "nexuses",
    "meta",
)

_NODE_KEYS = {"id", "kind", "label", "attrs", "sourceClass", "sourceId", "operationClass"}
_EDGE_KEYS = {"relation", "from", "to"}
_APPRAISAL_KEYS = {"id", "appraiser", "appraised", "confidence", "likelihood", "rationale"}
_EVIDENCE_KEYS = {"id", "agent", "related", "indicated", "polarity", "strength"}
_PREFERENCE_KEYS = {"id", "agent", "preferred", "dispreferred"}
_NEXUS_KEYS = {"id", "agent", "members", "jointLikelihood"}


# --- schema helpers ----------------------------------------------------------

def _want_str(obj: Mapping[str, Any], key: str, path: str, required: bool = True) -> Optional[str]:
    if key not in obj:
        if required:
            raise SchemaError(f"missing key {key!r}", path)
        return None
    value = obj[key]
    if not isinstance(value, str):
        raise SchemaError(f"{key!r} must be a string", path)
    return value


def _want_number(
    obj: Mapping[str, Any], key: str, path: str, required: bool = True
) -> Optional[float]:
    if key not in obj:
        if required:
            raise SchemaError(f"missing key {key!r}", path)
        return None
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{key!r} must be a number", path)
    return float(value)


def _want_object(value: Any, path: str) -> Mapping[str, Any]:
    if not isinstance(value, dict):
        raise SchemaError("expected an object", path)
    return value


def _want_list(obj: Mapping[str, Any], key: str, path: str) -> list:
    value = obj.get(key, [])
    if not isinstance(value, list):
        raise SchemaError(f"{key!r} must be an array", path)
    return value


def _reject_unknown(obj: Mapping[str, Any], allowed: set, path: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise SchemaError(f"unknown keys {unknown}", path)


def _parse_enum(enum_cls, value: Any, key: str, path: str):
    if not isinstance(value, str):
        raise SchemaError(f"{key!r} must be a string", path)
    try:
        return enum_cls(value)
    except ValueError:
        options = ", ".join(m.value for m in enum_cls)
        raise SchemaError(f"{key!r} must be one of: {options}", path) from None


# --- parsing -----------------------------------------------------------------

def parse_document(text: Union[bytes, str]) -> ProvDocument:
    """Parse dive/1 bytes into a validated document."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentSyntaxError(
                f"invalid UTF-8 at byte {exc.start}", pos=exc.start
            ) from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(
            f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})",
            line=exc.lineno,
            column=exc.colno,
            pos=exc.pos,
        ) from None

    top = _want_object(raw, "$")
    _reject_unknown(top, set(_TOP_KEYS), "$")
    if "meta" not in top:
        raise SchemaError("missing key 'meta'", "$")
    meta = _want_object(top["meta"], "$.meta")
    version = meta.get("formatVersion")
    if version != FORMAT_VERSION:
        raise SchemaError(
            f"'formatVersion' must be {FORMAT_VERSION!r}, got {version!r}", "$.meta"
        )

    violations: list[Violation] = []
    seen_ids: dict[str, str] = {}

    def claim_id(item_id: str, what: str) -> None:
        if item_id in seen_ids:
            violations.append(
                Violation(
                    "DuplicateId",
                    (item_id,),
                    f"id {item_id!r} used by both {seen_ids[item_id]} and {what}",
                )
            )
        else:
            seen_ids[item_id] = what

    nodes: dict[str, ProvNode] = {}
    for i, item in enumerate(_want_list(top, "nodes", "$")):
        path = f"$.nodes[{i}]"
        obj = _want_object(item, path)
        _reject_unknown(obj, _NODE_KEYS, path)
        node_id = _want_str(obj, "id", path)
        kind = _parse_enum(NodeKind, obj.get("kind"), "kind", path)
        label = _want_str(obj, "label", path)
        attrs_raw = obj.get("attrs", {})
        attrs = dict(_want_object(attrs_raw, f"{path}.attrs"))
        for k, v in attrs.items():
            if not isinstance(v, str):
                raise SchemaError(f"attr {k!r} must be a string", f"{path}.attrs")
        node = ProvNode(
            id=node_id,
            kind=kind,
            label=label,
            attrs=attrs,
            source_class=_want_str(obj, "sourceClass", path, required=False),
            source_id=_want_str(obj, "sourceId", path, required=False),
            operation_class=_want_str(obj, "operationClass", path, required=False),
        )
        claim_id(node_id, "node")
        if node_id not in nodes:
            nodes[node_id] = node

    edges: set[ProvEdge] = set()
    for i, item in enumerate(_want_list(top, "edges", "$")):
        path = f"$.edges[{i}]"
        obj = _want_object(item, path)
        _reject_unknown(obj, _EDGE_KEYS, path)
        relation = _parse_enum(Relation, obj.get("relation"), "relation", path)
        edges.add(
            ProvEdge(
                relation=relation,
                from_id=_want_str(obj, "from", path),
                to_id=_want_str(obj, "to", path),
            )
        )

    appraisals: dict[str, Appraisal] = {}
    for i, item in enumerate(_want_list(top, "appraisals", "$")):
        path = f"$.appraisals[{i}]"
        obj = _want_object(item, path)
        _reject_unknown(obj, _APPRAISAL_KEYS, path)
        ann = Appraisal(
            id=_want_str(obj, "id", path),
            appraiser=_want_str(obj, "appraiser", path),
            appraised=_want_str(obj, "appraised", path),
            confidence=_want_number(obj, "confidence", path),
            likelihood=_want_number(obj, "likelihood", path, required=False),
            rationale=_want_str(obj, "rationale", path, required=False),
        )
        claim_id(ann.id, "appraisal")
        appraisals.setdefault(ann.id, ann)

    evidence: dict[str, Evidence] = {}
    for i, item in enumerate(_want_list(top, "evidence", "$")):
        path = f"$.evidence[{i}]"
        obj = _want_object(item, path)
        _reject_unknown(obj, _EVIDENCE_KEYS, path)
        ann = Evidence(
            id=_want_str(obj, "id", path),
            agent=_want_str(obj, "agent", path),
            related=_want_str(obj, "related", path),
            indicated=_want_str(obj, "indicated", path),
            polarity=_parse_enum(Polarity, obj.get("polarity"), "polarity", path),
            strength=_want_number(obj, "strength", path, required=False),
        )
        claim_id(ann.id, "evidence")
        evidence.setdefault(ann.id, ann)

    preferences: dict[str, Preference] = {}
    for i, item in enumerate(_want_list(top, "preferences", "$")):
        path = f"$.preferences[{i}]"
        obj = _want_object(item, path)
        _reject_unknown(obj, _PREFERENCE_KEYS, path)
        ann = Preference(
            id=_want_str(obj, "id", path),
            agent=_want_str(obj, "agent", path),
            preferred=_want_str(obj, "preferred", path),
            dispreferred=_want_str(obj, "dispreferred", path),
        )
        claim_id(ann.id, "preference")
        preferences.setdefault(ann.id, ann)

    nexuses: dict[str, Nexus] = {}
    for i, item in enumerate(_want_list(top, "nexuses", "$")):
        path = f"$.nexuses[{i}]"
        obj = _want_object(item, path)
        _reject_unknown(obj, _NEXUS_KEYS, path)
        members_raw = obj.get("members")
        if not isinstance(members_raw, list) or not all(
            isinstance(m, str) for m in members_raw
        ):
            raise SchemaError("'members' must be an array of strings", path)
        ann = Nexus(
            id=_want_str(obj, "id", path),
            agent=_want_str(obj, "agent", path),
            members=frozenset(members_raw),
            joint_likelihood=_want_number(obj, "jointLikelihood", path),
        )
        claim_id(ann.id, "nexus")
        nexuses.setdefault(ann.id, ann)

    doc = ProvDocument(
        nodes=nodes,
        edges=frozenset(edges),
        appraisals=appraisals,
        evidence=evidence,
        preferences=preferences,
        nexuses=nexuses,
        meta={k: v for k, v in meta.items() if k != "formatVersion"},
    )
    violations.extend(model.validate(doc))
    if violations:
        raise ValidationFailedError(violations)
    return doc


# --- serialization -----------------------------------------------------------

def _node_obj(node: ProvNode) -> dict:
    obj: dict[str, Any] = {"id": node.id, "kind": node.kind.value, "label": node.label}
    if node.attrs:
        obj["attrs"] = {k: node.attrs[k] for k in sorted(node.attrs)}
    if node.source_class is not None:
        obj["sourceClass"] = node.source_class
    if node.source_id is not None:
        obj["sourceId"] = node.source_id
    if node.operation_class is not None:
        obj["operationClass"] = node.operation_class
    return obj


def _appraisal_obj(a: Appraisal) -> dict:
    obj: dict[str, Any] = {
        "id": a.id,
        "appraiser": a.appraiser,
        "appraised": a.appraised,
        "confidence": a.confidence,
    }
    if a.likelihood is not None:
        obj["likelihood"] = a.likelihood
    if a.rationale is not None:
        obj["rationale"] = a.rationale
    return obj


def _evidence_obj(e: Evidence) -> dict:
    obj: dict[str, Any] = {
        "id": e.id,
        "agent": e.agent,
        "related": e.related,
        "indicated": e.indicated,
        "polarity": e.polarity.value,
    }
    if e.strength is not None:
        obj["strength"] = e.strength
    return obj


def document_to_jsonable(doc: ProvDocument) -> dict:
    """Canonical plain-dict form of a document (sorted, fixed key order)."""
    out: dict[str, Any] = {}
    if doc.nodes:
        out["nodes"] = [_node_obj(doc.nodes[k]) for k in sorted(doc.nodes)]
    if doc.edges:
        out["edges"] = [
            {"relation": e.relation.value, "from": e.from_id, "to": e.to_id}
            for e in sorted(
                doc.edges, key=lambda e: (e.from_id, e.relation.value, e.to_id)
            )
        ]
    if doc.appraisals:
        out["appraisals"] = [
            _appraisal_obj(doc.appraisals[k]) for k in sorted(doc.appraisals)
        ]
    if doc.evidence:
        out["evidence"] = [_evidence_obj(doc.evidence[k]) for k in sorted(doc.evidence)]
    if doc.preferences:
        out["preferences"] = [
            {
                "id": p.id,
                "agent": p.agent,
                "preferred": p.preferred,
                "dispreferred": p.dispreferred,
            }
            for p in (doc.preferences[k] for k in sorted(doc.preferences))
        ]
    if doc.nexuses:
        out["nexuses"] = [
            {
                "id": n.id,
                "agent": n.agent,
                "members": sorted(n.members),
                "jointLikelihood": n.joint_likelihood,
            }
            for n in (doc.nexuses[k] for k in sorted(doc.nexuses))
        ]
    meta: dict[str, Any] = {"formatVersion": FORMAT_VERSION}
    for k in sorted(doc.meta):
        meta[k] = doc.meta[k]
    out["meta"] = meta
    return out


def serialize_document(doc: ProvDocument) -> bytes:
    """Canonical dive/1 bytes for a valid document."""
    violations = model.validate(doc)
    if violations:
        raise ValidationFailedError(violations)
    text = json.dumps(document_to_jsonable(doc), indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


# --- built-in fixture ----------------------------------------------------------

#: id of the fixture's target assertion, for tests and docs
FIXTURE_TARGET = "assert-ladyada-usa"
FIXTURE_LOW_CONFIDENCE_DOC = "sni-article-1893"


def build_lady_ada_fixture() -> ProvDocument:
    """The cargo-vessel location scenario: one assertion derived along three
    paths (transponder geolocation, news-wire NLP, social-media NLP), with a
    low-confidence appraisal on the news article."""
    doc = ProvDocument.empty()

    def agent(node_id: str, label: str) -> None:
        nonlocal doc
        doc = model.add_node(doc, ProvNode(node_id, NodeKind.AGENT, label))

    def entity(node_id: str, label: str, source_class=None, source_id=None) -> None:
        nonlocal doc
        doc = model.add_node(
            doc,
            ProvNode(
                node_id,
                NodeKind.ENTITY,
                label,
                source_class=source_class,
                source_id=source_id,
            ),
        )

    def activity(node_id: str, label: str, operation_class: str) -> None:
        nonlocal doc
        doc = model.add_node(
            doc,
            ProvNode(node_id, NodeKind.ACTIVITY, label, operation_class=operation_class),
        )

    def edge(relation: Relation, from_id: str, to_id: str) -> None:
        nonlocal doc
        doc = model.add_edge(doc, ProvEdge(relation, from_id, to_id))

    agent("agent-geoint-service", "GEOINT Correlation Service")
    agent("agent-nlp-service", "NLP Pipeline Service")
    agent("agent-pattern-service", "Pattern Inference Service")
    agent("agent-shipping-news-intl", "Shipping News International")
    agent("agent-twitter-774", "@harborwatch (Twitter)")
    agent("agent-vessel-ladyada", "Cargo vessel Lady Ada (AIS)")
    agent("agent-analyst-moss", "Analyst D. Moss")

    # path 1: transponder geolocation
    entity(
        "ais-ping-0412",
        "AIS transponder track: Lady Ada, Baltimore berth",
        source_class="SELF-REPORT",
        source_id="ais-transponder-ladyada",
    )
    activity("geo-infer-1", "Geo Infer", "Geolocation Inference")

    # path 2: news wire -> named entities -> pattern inference
    entity(
        "sni-article-1893",
        "SNI article: 'Lady Ada docks stateside'",
        source_class="NEWS-REPORT",
        source_id="shipping-news-intl-wire",
    )
    activity("ner-sni-1", "NER over SNI article", "Named Entity Recognition")
    entity("ne-ladyada-sni", "Named entity: 'Lady Ada' (SNI article)")
    entity("ne-usa-sni", "Named entity: 'USA' (SNI article)")
    activity(
        "pattern-infer-sni-1", "Pattern inference over SNI entities", "Pattern Inference"
    )

    # path 3: social media -> named entities -> pattern inference
    entity(
        "tweet-58121",
        "Tweet: 'spotted the Lady Ada coming into port'",
        source_class="SOCIAL-MEDIA",
        source_id="twitter-feed",
    )
    activity("ner-tweet-1", "NER over tweet", "Named Entity Recognition")
    entity("ne-ladyada-tweet", "Named entity: 'Lady Ada' (tweet)")
    entity("ne-usa-tweet", "Named entity: 'USA' (tweet)")
    activity(
        "pattern-infer-tweet-1",
        "Pattern inference over tweet entities",
        "Pattern Inference",
    )

    entity(FIXTURE_TARGET, "Lady Ada located in USA")

    edge(Relation.USED, "geo-infer-1", "ais-ping-0412")
    edge(Relation.WAS_GENERATED_BY, FIXTURE_TARGET, "geo-infer-1")
    edge(Relation.WAS_ASSOCIATED_WITH, "geo-infer-1", "agent-geoint-service")
    edge(Relation.WAS_ATTRIBUTED_TO, "ais-ping-0412", "agent-vessel-ladyada")

    edge(Relation.USED, "ner-sni-1", "sni-article-1893")
    edge(Relation.WAS_GENERATED_BY, "ne-ladyada-sni", "ner-sni-1")
    edge(Relation.WAS_GENERATED_BY, "ne-usa-sni", "ner-sni-1")
    edge(Relation.USED, "pattern-infer-sni-1", "ne-ladyada-sni")
    edge(Relation.USED, "pattern-infer-sni-1", "ne-usa-sni")
    edge(Relation.WAS_GENERATED_BY, FIXTURE_TARGET, "pattern-infer-sni-1")
    edge(Relation.WAS_ASSOCIATED_WITH, "ner-sni-1", "agent-nlp-service")
    edge(Relation.WAS_ASSOCIATED_WITH, "pattern-infer-sni-1", "agent-pattern-service")
    edge(Relation.WAS_ATTRIBUTED_TO, "sni-article-1893", "agent-shipping-news-intl")

    edge(Relation.USED, "ner-tweet-1", "tweet-58121")
    edge(Relation.WAS_GENERATED_BY, "ne-ladyada-tweet", "ner-tweet-1")
    edge(Relation.WAS_GENERATED_BY, "ne-usa-tweet", "ner-tweet-1")
    edge(Relation.USED, "pattern-infer-tweet-1", "ne-ladyada-tweet")
    edge(Relation.USED, "pattern-infer-tweet-1", "ne-usa-tweet")
    edge(Relation.WAS_GENERATED_BY, FIXTURE_TARGET, "pattern-infer-tweet-1")
    edge(Relation.WAS_ASSOCIATED_WITH, "ner-tweet-1", "agent-nlp-service")
    edge(Relation.WAS_ASSOCIATED_WITH, "pattern-infer-tweet-1", "agent-pattern-service")
    edge(Relation.WAS_ATTRIBUTED_TO, "tweet-58121", "agent-twitter-774")

    doc = model.attach_annotation(
        doc,
        Appraisal(
            id="appr-moss-sni-article",
            appraiser="agent-analyst-moss",
            appraised="sni-article-1893",
            confidence=0.1,
            rationale="Single-source wire item; outlet reliability unverified.",
        ),
    )
    return doc
