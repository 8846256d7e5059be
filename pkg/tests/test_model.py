import pytest

from dive import model
from dive.errors import (
    CycleIntroducedError,
    DuplicateAppraisalError,
    DuplicateEdgeError,
    DuplicateIdError,
    KindConstraintError,
    KindFieldMismatchError,
    OutOfRangeError,
    UnknownEndpointError,
    UnknownReferenceError,
)
from dive.model import (
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
)


def entity(node_id, **kw):
    return ProvNode(node_id, NodeKind.ENTITY, node_id, **kw)


def activity(node_id, **kw):
    return ProvNode(node_id, NodeKind.ACTIVITY, node_id, **kw)


def agent(node_id):
    return ProvNode(node_id, NodeKind.AGENT, node_id)


@pytest.fixture
def small_doc():
    doc = ProvDocument.empty()
    doc = model.add_node(doc, entity("e1"))
    doc = model.add_node(doc, entity("e2"))
    doc = model.add_node(doc, activity("a1"))
    doc = model.add_node(doc, agent("h1"))
    return doc


def test_add_node_to_empty_doc():
    doc = model.add_node(ProvDocument.empty(), entity("e1"))
    assert set(doc.nodes) == {"e1"}


def test_add_node_duplicate_id_rejected():
    doc = model.add_node(ProvDocument.empty(), entity("e1"))
    with pytest.raises(DuplicateIdError):
        model.add_node(doc, entity("e1"))


def test_activity_with_source_class_rejected():
    with pytest.raises(KindFieldMismatchError):
        model.add_node(ProvDocument.empty(), activity("a1", source_class="SELF-REPORT"))


def test_agent_with_operation_class_rejected():
    with pytest.raises(KindFieldMismatchError):
        model.add_node(
            ProvDocument.empty(),
            ProvNode("g", NodeKind.AGENT, "g", operation_class="NER"),
        )


def test_add_node_leaves_input_untouched():
    doc = model.add_node(ProvDocument.empty(), entity("e1"))
    doc2 = model.add_node(doc, entity("e2"))
    assert set(doc.nodes) == {"e1"}
    assert set(doc2.nodes) == {"e1", "e2"}
    assert doc2.nodes["e1"] is doc.nodes["e1"]


def test_add_edge_used(small_doc):
    doc = model.add_edge(small_doc, ProvEdge(Relation.USED, "a1", "e1"))
    assert ProvEdge(Relation.USED, "a1", "e1") in doc.edges
    assert small_doc.edges == frozenset()


def test_add_edge_kind_constraint(small_doc):
    with pytest.raises(KindConstraintError):
        model.add_edge(small_doc, ProvEdge(Relation.USED, "e1", "e2"))


def test_add_edge_unknown_endpoint(small_doc):
    with pytest.raises(UnknownEndpointError):
        model.add_edge(small_doc, ProvEdge(Relation.USED, "a1", "missing"))


def test_add_edge_duplicate(small_doc):
    doc = model.add_edge(small_doc, ProvEdge(Relation.USED, "a1", "e1"))
    with pytest.raises(DuplicateEdgeError):
        model.add_edge(doc, ProvEdge(Relation.USED, "a1", "e1"))


def test_two_cycle_detected(small_doc):
    doc = model.add_edge(small_doc, ProvEdge(Relation.WAS_GENERATED_BY, "e1", "a1"))
    with pytest.raises(CycleIntroducedError) as err:
        model.add_edge(doc, ProvEdge(Relation.USED, "a1", "e1"))
    assert err.value.cycle[0] == err.value.cycle[-1]
    assert {"a1", "e1"} <= set(err.value.cycle)


def test_longer_cycle_reports_sequence():
    doc = ProvDocument.empty()
    for n in ("e1", "e2"):
        doc = model.add_node(doc, entity(n))
    for n in ("a1", "a2"):
        doc = model.add_node(doc, activity(n))
    doc = model.add_edge(doc, ProvEdge(Relation.WAS_GENERATED_BY, "e1", "a1"))
    doc = model.add_edge(doc, ProvEdge(Relation.USED, "a1", "e2"))
    doc = model.add_edge(doc, ProvEdge(Relation.WAS_GENERATED_BY, "e2", "a2"))
    with pytest.raises(CycleIntroducedError) as err:
        model.add_edge(doc, ProvEdge(Relation.USED, "a2", "e1"))
    cycle = err.value.cycle
    assert cycle[0] == cycle[-1]
    assert set(cycle) == {"a2", "e1", "a1", "e2"}


def test_attach_appraisal_and_duplicate(small_doc):
    doc = model.attach_annotation(
        small_doc, Appraisal("ap1", appraiser="h1", appraised="e1", confidence=0.1)
    )
    assert doc.appraisals["ap1"].confidence == 0.1
    assert doc.appraisals_for("e1")[0].id == "ap1"
    assert doc.appraisals_by("h1")[0].id == "ap1"
    assert doc.annotation("ap1") is doc.appraisals["ap1"]
    with pytest.raises(DuplicateAppraisalError):
        model.attach_annotation(
            doc, Appraisal("ap2", appraiser="h1", appraised="e1", confidence=0.5)
        )


def test_appraisal_confidence_out_of_range(small_doc):
    with pytest.raises(OutOfRangeError):
        model.attach_annotation(
            small_doc, Appraisal("ap1", appraiser="h1", appraised="e2", confidence=1.3)
        )


def test_appraisal_unknown_reference(small_doc):
    with pytest.raises(UnknownReferenceError):
        model.attach_annotation(
            small_doc, Appraisal("ap1", appraiser="h1", appraised="nope", confidence=0.5)
        )


def test_appraiser_must_be_agent(small_doc):
    with pytest.raises(KindConstraintError):
        model.attach_annotation(
            small_doc, Appraisal("ap1", appraiser="e1", appraised="e2", confidence=0.5)
        )


def test_evidence_rules(small_doc):
    doc = model.attach_annotation(
        small_doc,
        Evidence("ev1", agent="h1", related="e1", indicated="e2", polarity=Polarity.SUPPORTING),
    )
    assert doc.evidence["ev1"].polarity is Polarity.SUPPORTING
    with pytest.raises(KindConstraintError):
        model.attach_annotation(
            small_doc,
            Evidence("ev2", agent="h1", related="e1", indicated="e1", polarity=Polarity.COUNTER),
        )


def test_preference_same_kind(small_doc):
    with pytest.raises(KindConstraintError):
        model.attach_annotation(
            small_doc, Preference("pr1", agent="h1", preferred="e1", dispreferred="a1")
        )
    doc = model.attach_annotation(
        small_doc, Preference("pr1", agent="h1", preferred="e1", dispreferred="e2")
    )
    assert doc.preferences["pr1"].preferred == "e1"


def test_nexus_rules(small_doc):
    with pytest.raises(KindConstraintError):
        model.attach_annotation(
            small_doc, Nexus("nx1", agent="h1", members=frozenset({"e1"}), joint_likelihood=0.5)
        )
    doc = model.attach_annotation(
        small_doc,
        Nexus("nx1", agent="h1", members=frozenset({"e1", "e2"}), joint_likelihood=0.5),
    )
    assert doc.nexuses["nx1"].members == frozenset({"e1", "e2"})


def test_annotation_id_shares_namespace_with_nodes(small_doc):
    with pytest.raises(DuplicateIdError):
        model.attach_annotation(
            small_doc, Appraisal("e1", appraiser="h1", appraised="e2", confidence=0.5)
        )


def test_validate_clean_fixture(fixture_doc):
    assert model.validate(fixture_doc) == []


def test_validate_dangling_appraised():
    doc = ProvDocument(
        nodes={"h1": agent("h1")},
        appraisals={"ap1": Appraisal("ap1", "h1", "ghost", 0.5)},
    )
    rules = [v.rule for v in model.validate(doc)]
    assert "UnknownReference" in rules


def test_validate_duplicate_appraisal_pair():
    doc = ProvDocument(
        nodes={"h1": agent("h1"), "e1": entity("e1")},
        appraisals={
            "ap1": Appraisal("ap1", "h1", "e1", 0.2),
            "ap2": Appraisal("ap2", "h1", "e1", 0.9),
        },
    )
    rules = [v.rule for v in model.validate(doc)]
    assert "DuplicateAppraisal" in rules


def test_validate_reports_rule_ids_message():
    doc = ProvDocument(
        nodes={"e1": entity("e1")},
        edges=frozenset({ProvEdge(Relation.USED, "e1", "ghost")}),
    )
    violations = model.validate(doc)
    assert violations
    v = violations[0]
    assert v.rule and v.ids and v.message


def test_fixture_toposort_exists(fixture_doc):
    order = model.derivation_topo_order(fixture_doc)
    assert len(order) == len(fixture_doc.nodes)
    position = {n: i for i, n in enumerate(order)}
    for e in fixture_doc.edges:
        if e.relation in model.DERIVATION_RELATIONS:
            assert position[e.from_id] < position[e.to_id]
