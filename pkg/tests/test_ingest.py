import json
import random

import pytest

from dive import ingest, model
from dive.errors import (
    DiveError,
    DocumentSyntaxError,
    SchemaError,
    ValidationFailedError,
)
from dive.model import NodeKind, ProvDocument, Relation

from corpus import corpus


def test_parse_minimal_single_entity():
    text = json.dumps(
        {
            "nodes": [{"id": "e1", "kind": "Entity", "label": "thing"}],
            "meta": {"formatVersion": "dive/1"},
        }
    )
    doc = ingest.parse_document(text)
    assert set(doc.nodes) == {"e1"}
    assert doc.nodes["e1"].kind is NodeKind.ENTITY


def test_wrong_format_version_rejected():
    text = json.dumps({"meta": {"formatVersion": "dive/2"}})
    with pytest.raises(SchemaError):
        ingest.parse_document(text)


def test_missing_meta_rejected():
    with pytest.raises(SchemaError):
        ingest.parse_document("{}")


def test_unknown_top_level_key_rejected():
    text = json.dumps({"meta": {"formatVersion": "dive/1"}, "extras": []})
    with pytest.raises(SchemaError):
        ingest.parse_document(text)


def test_unknown_node_key_rejected():
    text = json.dumps(
        {
            "nodes": [{"id": "e1", "kind": "Entity", "label": "x", "color": "red"}],
            "meta": {"formatVersion": "dive/1"},
        }
    )
    with pytest.raises(SchemaError):
        ingest.parse_document(text)


def test_syntax_error_is_position_annotated():
    with pytest.raises(DocumentSyntaxError) as err:
        ingest.parse_document(b'{"nodes": [')
    assert err.value.line >= 1
    assert "line" in err.value.message


def test_invalid_utf8_is_syntax_error():
    with pytest.raises(DocumentSyntaxError):
        ingest.parse_document(b'\xff\xfe{"meta":{}}')


def test_validation_failure_carries_violations():
    text = json.dumps(
        {
            "nodes": [{"id": "e1", "kind": "Entity", "label": "x"}],
            "edges": [{"relation": "used", "from": "e1", "to": "ghost"}],
            "meta": {"formatVersion": "dive/1"},
        }
    )
    with pytest.raises(ValidationFailedError) as err:
        ingest.parse_document(text)
    assert any(v.rule == "UnknownEndpoint" for v in err.value.violations)


def test_empty_doc_serializes_to_meta_skeleton():
    data = ingest.serialize_document(ProvDocument.empty())
    assert json.loads(data) == {"meta": {"formatVersion": "dive/1"}}
    assert data.endswith(b"\n")


def test_serialize_is_deterministic(fixture_doc):
    assert ingest.serialize_document(fixture_doc) == ingest.serialize_document(fixture_doc)


def test_round_trip_fixture(fixture_doc):
    data = ingest.serialize_document(fixture_doc)
    parsed = ingest.parse_document(data)
    assert parsed == fixture_doc
    assert ingest.serialize_document(parsed) == data


def test_round_trip_corpus():
    for doc, _ in corpus(40, seed=7):
        data = ingest.serialize_document(doc)
        parsed = ingest.parse_document(data)
        assert parsed == doc
        assert ingest.serialize_document(parsed) == data


def test_serialize_rejects_invalid_doc():
    doc = ProvDocument(
        nodes={"e1": model.ProvNode("e1", NodeKind.ENTITY, "x")},
        edges=frozenset({model.ProvEdge(Relation.USED, "e1", "ghost")}),
    )
    with pytest.raises(ValidationFailedError):
        ingest.serialize_document(doc)


def test_meta_extras_preserved():
    text = json.dumps(
        {
            "nodes": [{"id": "e1", "kind": "Entity", "label": "x"}],
            "meta": {"formatVersion": "dive/1", "title": "case 7"},
        }
    )
    doc = ingest.parse_document(text)
    assert doc.meta["title"] == "case 7"
    again = ingest.parse_document(ingest.serialize_document(doc))
    assert again.meta["title"] == "case 7"


def test_attrs_preserved_and_sorted():
    text = json.dumps(
        {
            "nodes": [
                {
                    "id": "e1",
                    "kind": "Entity",
                    "label": "x",
                    "attrs": {"zeta": "1", "alpha": "2"},
                }
            ],
            "meta": {"formatVersion": "dive/1"},
        }
    )
    doc = ingest.parse_document(text)
    assert doc.nodes["e1"].attrs == {"alpha": "2", "zeta": "1"}
    data = ingest.serialize_document(doc)
    assert data.index(b"alpha") < data.index(b"zeta")


# --- fixture structure -----------------------------------------------------------

def test_fixture_target_has_three_generators(fixture_doc):
    generators = [
        e.to_id
        for e in fixture_doc.edges
        if e.relation is Relation.WAS_GENERATED_BY and e.from_id == ingest.FIXTURE_TARGET
    ]
    assert len(generators) == 3


def test_fixture_has_four_ner_entities(fixture_doc):
    ner_activities = {
        n.id
        for n in fixture_doc.nodes.values()
        if n.operation_class == "Named Entity Recognition"
    }
    produced = {
        e.from_id
        for e in fixture_doc.edges
        if e.relation is Relation.WAS_GENERATED_BY and e.to_id in ner_activities
    }
    assert len(produced) == 4


def test_fixture_validates_cleanly(fixture_doc):
    assert model.validate(fixture_doc) == []


def test_fixture_has_self_report_premise(fixture_doc):
    tagged = [n for n in fixture_doc.nodes.values() if n.source_class == "SELF-REPORT"]
    assert len(tagged) == 1
    assert tagged[0].kind is NodeKind.ENTITY


def test_fixture_carries_low_confidence_appraisal(fixture_doc):
    appraisals = fixture_doc.appraisals_for(ingest.FIXTURE_LOW_CONFIDENCE_DOC)
    assert [a.confidence for a in appraisals] == [0.1]


# --- fuzzing ----------------------------------------------------------------------

def test_parse_never_crashes_on_random_bytes():
    rng = random.Random(99)
    base = ingest.serialize_document(ingest.build_lady_ada_fixture())
    for trial in range(2000):
        if trial % 3 == 0:
            blob = bytes(rng.randrange(256) for _ in range(rng.randrange(0, 120)))
        elif trial % 3 == 1:
            blob = bytearray(base)
            for _ in range(rng.randrange(1, 8)):
                blob[rng.randrange(len(blob))] = rng.randrange(256)
            blob = bytes(blob)
        else:
            payload = {"meta": {"formatVersion": "dive/1"}, "nodes": rng.random()}
            blob = json.dumps(payload).encode()
        try:
            ingest.parse_document(blob)
        except DiveError:
            pass
