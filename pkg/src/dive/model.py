"""Provenance data model: a typed multigraph of entities, activities, and
agents, plus the four judgment annotations layered on top of it.

Documents are values. The ``add_*``/``attach_*`` operations return a new
document and never mutate their input; after :func:`validate` returns an
empty list a document can be shared freely across threads.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, Optional, Union

from .errors import (
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


class NodeKind(str, Enum):
    ENTITY = "Entity"
    ACTIVITY = "Activity"
    AGENT = "Agent"


class Relation(str, Enum):
    USED = "used"
    WAS_GENERATED_BY = "wasGeneratedBy"
    WAS_ASSOCIATED_WITH = "wasAssociatedWith"
    WAS_ATTRIBUTED_TO = "wasAttributedTo"


# Required (from-kind, to-kind) per relation. Anything else is invalid.
EDGE_KINDS: Mapping[Relation, tuple[NodeKind, NodeKind]] = {
    Relation.USED: (NodeKind.ACTIVITY, NodeKind.ENTITY),
    Relation.WAS_GENERATED_BY: (NodeKind.ENTITY, NodeKind.ACTIVITY),
    Relation.WAS_ASSOCIATED_WITH: (NodeKind.ACTIVITY, NodeKind.AGENT),
    Relation.WAS_ATTRIBUTED_TO: (NodeKind.ENTITY, NodeKind.AGENT),
}

# The subgraph that must stay acyclic: information derivation.
DERIVATION_RELATIONS = frozenset({Relation.USED, Relation.WAS_GENERATED_BY})


class Polarity(str, Enum):
    SUPPORTING = "supporting"
    COUNTER = "counter"


@dataclass(frozen=True)
class ProvNode:
    """One graph node. ``source_class``/``source_id`` are entity-only tags,
    ``operation_class`` is activity-only."""

    id: str
    kind: NodeKind
    label: str
    attrs: Mapping[str, str] = field(default_factory=dict)
    source_class: Optional[str] = None
    source_id: Optional[str] = None
    operation_class: Optional[str] = None


@dataclass(frozen=True)
class ProvEdge:
    relation: Relation
    from_id: str
    to_id: str


@dataclass(frozen=True)
class Appraisal:
    """One agent's confidence judgment about one element (unique per pair)."""

    id: str
    appraiser: str
    appraised: str
    confidence: float
    likelihood: Optional[float] = None
    rationale: Optional[str] = None


@dataclass(frozen=True)
class Evidence:
    """Directed diagnosticity judgment from a related to an indicated entity."""

    id: str
    agent: str
    related: str
    indicated: str
    polarity: Polarity
    strength: Optional[float] = None


@dataclass(frozen=True)
class Preference:
    """Relative, all-else-equal quality judgment between two same-kind nodes."""

    id: str
    agent: str
    preferred: str
    dispreferred: str


@dataclass(frozen=True)
class Nexus:
    """Joint coherence/conflict judgment over a set of entities."""

    id: str
    agent: str
    members: frozenset[str]
    joint_likelihood: float


Annotation = Union[Appraisal, Evidence, Preference, Nexus]


@dataclass(frozen=True)
class Violation:
    """One broken invariant: the rule name, the ids involved, and a message."""

    rule: str
    ids: tuple[str, ...]
    message: str


@dataclass(frozen=True)
class ProvDocument:
    nodes: Mapping[str, ProvNode] = field(default_factory=dict)
    edges: frozenset[ProvEdge] = field(default_factory=frozenset)
    appraisals: Mapping[str, Appraisal] = field(default_factory=dict)
    evidence: Mapping[str, Evidence] = field(default_factory=dict)
    preferences: Mapping[str, Preference] = field(default_factory=dict)
    nexuses: Mapping[str, Nexus] = field(default_factory=dict)
    meta: Mapping[str, object] = field(default_factory=dict)

    @classmethod
    def empty(cls) -> "ProvDocument":
        return cls()

    def node(self, node_id: str) -> ProvNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownReferenceError(f"unknown node {node_id!r}") from None

    def kind_of(self, node_id: str) -> Optional[NodeKind]:
        node = self.nodes.get(node_id)
        return node.kind if node else None

    def annotations(self) -> Iterable[Annotation]:
        yield from self.appraisals.values()
        yield from self.evidence.values()
        yield from self.preferences.values()
        yield from self.nexuses.values()

    def annotation(self, ann_id: str) -> Optional[Annotation]:
        for coll in (self.appraisals, self.evidence, self.preferences, self.nexuses):
            if ann_id in coll:
                return coll[ann_id]
        return None

    def appraisals_for(self, node_id: str) -> list[Appraisal]:
        """Appraisals whose appraised element is ``node_id``."""
        return sorted(
            (a for a in self.appraisals.values() if a.appraised == node_id),
            key=lambda a: a.id,
        )

    def appraisals_by(self, agent_id: str) -> list[Appraisal]:
        return sorted(
            (a for a in self.appraisals.values() if a.appraiser == agent_id),
            key=lambda a: a.id,
        )

    def all_ids(self) -> set[str]:
        ids = set(self.nodes)
        for coll in (self.appraisals, self.evidence, self.preferences, self.nexuses):
            ids.update(coll)
        return ids


# --- incremental construction ------------------------------------------------

def _check_kind_fields(node: ProvNode) -> None:
    if node.kind is not NodeKind.ENTITY and (node.source_class or node.source_id):
        raise KindFieldMismatchError(
            f"node {node.id!r}: sourceClass/sourceId are entity-only "
            f"but kind is {node.kind.value}"
        )
    if node.kind is not NodeKind.ACTIVITY and node.operation_class:
        raise KindFieldMismatchError(
            f"node {node.id!r}: operationClass is activity-only "
            f"but kind is {node.kind.value}"
        )


def add_node(doc: ProvDocument, node: ProvNode) -> ProvDocument:
    """Return ``doc`` plus ``node``. Everything else is untouched."""
    if not node.id:
        raise UnknownReferenceError("node id must be non-empty")
    if node.id in doc.all_ids():
        raise DuplicateIdError(f"id {node.id!r} already present")
    _check_kind_fields(node)
    nodes = dict(doc.nodes)
    nodes[node.id] = node
    return replace(doc, nodes=nodes)


def _derivation_cycle(edges: Iterable[ProvEdge], start: str, goal: str) -> Optional[list[str]]:
    """Path start -> ... -> goal over derivation edges, or None."""
    succ: dict[str, list[str]] = defaultdict(list)
    for e in edges:
        if e.relation in DERIVATION_RELATIONS:
            succ[e.from_id].append(e.to_id)
    stack = [(start, [start])]
    seen = {start}
    while stack:
        cur, path = stack.pop()
        if cur == goal:
            return path
        for nxt in sorted(succ.get(cur, ())):
            if nxt not in seen:
                seen.add(nxt)
                stack.append((nxt, path + [nxt]))
    return None


def add_edge(doc: ProvDocument, edge: ProvEdge) -> ProvDocument:
    """Return ``doc`` plus ``edge``; the derivation subgraph must stay acyclic."""
    for endpoint in (edge.from_id, edge.to_id):
        if endpoint not in doc.nodes:
            raise UnknownEndpointError(f"edge endpoint {endpoint!r} does not exist")
    want_from, want_to = EDGE_KINDS[edge.relation]
    got_from = doc.nodes[edge.from_id].kind
    got_to = doc.nodes[edge.to_id].kind
    if (got_from, got_to) != (want_from, want_to):
        raise KindConstraintError(
            f"{edge.relation.value} requires {want_from.value}->{want_to.value}, "
            f"got {got_from.value}->{got_to.value} "
            f"({edge.from_id!r}->{edge.to_id!r})"
        )
    if edge in doc.edges:
        raise DuplicateEdgeError(
            f"edge {edge.relation.value}({edge.from_id!r}->{edge.to_id!r}) already present"
        )
    if edge.relation in DERIVATION_RELATIONS:
        back = _derivation_cycle(doc.edges, edge.to_id, edge.from_id)
        if back is not None:
            cycle = tuple([edge.from_id] + back)
            raise CycleIntroducedError(
                "edge would close a derivation cycle: " + " -> ".join(cycle),
                cycle,
            )
    return replace(doc, edges=doc.edges | {edge})


def _check_unit_range(value: Optional[float], what: str, ann_id: str) -> None:
    if value is not None and not (0.0 <= value <= 1.0):
        raise OutOfRangeError(f"{what} of {ann_id!r} must be in [0,1], got {value}")


def attach_annotation(doc: ProvDocument, ann: Annotation) -> ProvDocument:
    """Return ``doc`` plus the annotation, enforcing reference and range rules."""
    if not ann.id:
        raise UnknownReferenceError("annotation id must be non-empty")
    if ann.id in doc.all_ids():
        raise DuplicateIdError(f"id {ann.id!r} already present")

    def need(node_id: str, kind: Optional[NodeKind], role: str) -> None:
        node = doc.nodes.get(node_id)
        if node is None:
            raise UnknownReferenceError(
                f"annotation {ann.id!r}: {role} {node_id!r} does not exist"
            )
        if kind is not None and node.kind is not kind:
            raise KindConstraintError(
                f"annotation {ann.id!r}: {role} {node_id!r} must be "
                f"{kind.value}, got {node.kind.value}"
            )

    if isinstance(ann, Appraisal):
        need(ann.appraiser, NodeKind.AGENT, "appraiser")
        need(ann.appraised, None, "appraised")
        _check_unit_range(ann.confidence, "confidence", ann.id)
        _check_unit_range(ann.likelihood, "likelihood", ann.id)
        for other in doc.appraisals.values():
            if other.appraiser == ann.appraiser and other.appraised == ann.appraised:
                raise DuplicateAppraisalError(
                    f"{ann.appraiser!r} already appraised {ann.appraised!r} "
                    f"(existing {other.id!r})"
                )
        return replace(doc, appraisals={**doc.appraisals, ann.id: ann})

    if isinstance(ann, Evidence):
        need(ann.agent, NodeKind.AGENT, "agent")
        need(ann.related, NodeKind.ENTITY, "related")
        need(ann.indicated, NodeKind.ENTITY, "indicated")
        if ann.related == ann.indicated:
            raise KindConstraintError(
                f"evidence {ann.id!r}: related and indicated must differ"
            )
        _check_unit_range(ann.strength, "strength", ann.id)
        return replace(doc, evidence={**doc.evidence, ann.id: ann})

    if isinstance(ann, Preference):
        need(ann.agent, NodeKind.AGENT, "agent")
        need(ann.preferred, None, "preferred")
        need(ann.dispreferred, None, "dispreferred")
        if ann.preferred == ann.dispreferred:
            raise KindConstraintError(
                f"preference {ann.id!r}: preferred and dispreferred must differ"
            )
        if doc.nodes[ann.preferred].kind is not doc.nodes[ann.dispreferred].kind:
            raise KindConstraintError(
                f"preference {ann.id!r}: both sides must share one kind"
            )
        return replace(doc, preferences={**doc.preferences, ann.id: ann})

    if isinstance(ann, Nexus):
        need(ann.agent, NodeKind.AGENT, "agent")
        if len(ann.members) < 2:
            raise KindConstraintError(
                f"nexus {ann.id!r}: needs at least two distinct members"
            )
        for member in sorted(ann.members):
            need(member, NodeKind.ENTITY, "member")
        _check_unit_range(ann.joint_likelihood, "jointLikelihood", ann.id)
        return replace(doc, nexuses={**doc.nexuses, ann.id: ann})

    raise TypeError(f"not an annotation: {ann!r}")


# --- bulk validation ----------------------------------------------------------

def derivation_topo_order(doc: ProvDocument) -> tuple[str, ...]:
    """Topological order of all nodes under the derivation subgraph.

    Raises CycleIntroducedError with the cycle's node sequence if none exists.
    """
    succ: dict[str, set[str]] = {n: set() for n in doc.nodes}
    indeg: dict[str, int] = {n: 0 for n in doc.nodes}
    for e in doc.edges:
        if e.relation in DERIVATION_RELATIONS and e.from_id in succ and e.to_id in succ:
            if e.to_id not in succ[e.from_id]:
                succ[e.from_id].add(e.to_id)
                indeg[e.to_id] += 1
    ready = sorted(n for n, d in indeg.items() if d == 0)
    order: list[str] = []
    while ready:
        cur = ready.pop(0)
        order.append(cur)
        changed = False
        for nxt in sorted(succ[cur]):
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                ready.append(nxt)
                changed = True
        if changed:
            ready.sort()
    if len(order) != len(doc.nodes):
        leftover = sorted(set(doc.nodes) - set(order))
        cycle = _extract_cycle(succ, leftover)
        raise CycleIntroducedError(
            "derivation subgraph is cyclic: " + " -> ".join(cycle), tuple(cycle)
        )
    return tuple(order)


def _extract_cycle(succ: Mapping[str, set[str]], candidates: list[str]) -> list[str]:
    start = candidates[0]
    path = [start]
    at = {start: 0}
    cur = start
    while True:
        nxts = sorted(n for n in succ[cur] if n in candidates)
        cur = nxts[0]
        if cur in at:
            return path[at[cur]:] + [cur]
        at[cur] = len(path)
        path.append(cur)


def validate(doc: ProvDocument) -> list[Violation]:
    """Check every invariant in bulk; an empty list means the document is valid."""
    out: list[Violation] = []

    def bad(rule: str, ids: Iterable[str], message: str) -> None:
        out.append(Violation(rule, tuple(ids), message))

    # id namespace
    seen: dict[str, str] = {}
    for name, coll in (
        ("node", doc.nodes),
        ("appraisal", doc.appraisals),
        ("evidence", doc.evidence),
        ("preference", doc.preferences),
        ("nexus", doc.nexuses),
    ):
        for item_id in sorted(coll):
            if not item_id:
                bad("EmptyId", (item_id,), f"{name} id must be non-empty")
            elif item_id in seen:
                bad(
                    "DuplicateId",
                    (item_id,),
                    f"id {item_id!r} used by both {seen[item_id]} and {name}",
                )
            else:
                seen[item_id] = name

    # node kind/field coherence
    for node in sorted(doc.nodes.values(), key=lambda n: n.id):
        if node.kind is not NodeKind.ENTITY and (node.source_class or node.source_id):
            bad(
                "KindFieldMismatch",
                (node.id,),
                f"node {node.id!r}: sourceClass/sourceId on a {node.kind.value}",
            )
        if node.kind is not NodeKind.ACTIVITY and node.operation_class:
            bad(
                "KindFieldMismatch",
                (node.id,),
                f"node {node.id!r}: operationClass on a {node.kind.value}",
            )

    # edges
    for e in sorted(doc.edges, key=lambda e: (e.from_id, e.relation.value, e.to_id)):
        missing = [x for x in (e.from_id, e.to_id) if x not in doc.nodes]
        if missing:
            bad(
                "UnknownEndpoint",
                missing,
                f"edge {e.relation.value}({e.from_id!r}->{e.to_id!r}) has unknown endpoints",
            )
            continue
        want = EDGE_KINDS[e.relation]
        got = (doc.nodes[e.from_id].kind, doc.nodes[e.to_id].kind)
        if got != want:
            bad(
                "KindConstraintViolation",
                (e.from_id, e.to_id),
                f"{e.relation.value} requires {want[0].value}->{want[1].value}, "
                f"got {got[0].value}->{got[1].value}",
            )

    try:
        derivation_topo_order(doc)
    except CycleIntroducedError as exc:
        bad("CycleIntroduced", exc.cycle, exc.message)

    def ref(ann_id: str, node_id: str, kind: Optional[NodeKind], role: str) -> bool:
        node = doc.nodes.get(node_id)
        if node is None:
            bad(
                "UnknownReference",
                (ann_id, node_id),
                f"annotation {ann_id!r}: {role} {node_id!r} does not exist",
            )
            return False
        if kind is not None and node.kind is not kind:
            bad(
                "KindConstraintViolation",
                (ann_id, node_id),
                f"annotation {ann_id!r}: {role} {node_id!r} should be {kind.value}",
            )
            return False
        return True

    def unit(ann_id: str, value: Optional[float], what: str) -> None:
        if value is not None and not (0.0 <= value <= 1.0):
            bad(
                "RangeError",
                (ann_id,),
                f"{what} of {ann_id!r} must be in [0,1], got {value}",
            )

    pairs: dict[tuple[str, str], str] = {}
    for a in sorted(doc.appraisals.values(), key=lambda a: a.id):
        ref(a.id, a.appraiser, NodeKind.AGENT, "appraiser")
        ref(a.id, a.appraised, None, "appraised")
        unit(a.id, a.confidence, "confidence")
        unit(a.id, a.likelihood, "likelihood")
        key = (a.appraiser, a.appraised)
        if key in pairs:
            bad(
                "DuplicateAppraisal",
                (pairs[key], a.id),
                f"{a.appraiser!r} appraised {a.appraised!r} more than once",
            )
        else:
            pairs[key] = a.id

    for ev in sorted(doc.evidence.values(), key=lambda e: e.id):
        ref(ev.id, ev.agent, NodeKind.AGENT, "agent")
        ref(ev.id, ev.related, NodeKind.ENTITY, "related")
        ref(ev.id, ev.indicated, NodeKind.ENTITY, "indicated")
        if ev.related == ev.indicated:
            bad(
                "SelfReference",
                (ev.id,),
                f"evidence {ev.id!r}: related and indicated must differ",
            )
        unit(ev.id, ev.strength, "strength")

    for p in sorted(doc.preferences.values(), key=lambda p: p.id):
        ok_a = ref(p.id, p.preferred, None, "preferred")
        ok_b = ref(p.id, p.dispreferred, None, "dispreferred")
        if p.preferred == p.dispreferred:
            bad(
                "SelfReference",
                (p.id,),
                f"preference {p.id!r}: preferred and dispreferred must differ",
            )
        elif ok_a and ok_b:
            if doc.nodes[p.preferred].kind is not doc.nodes[p.dispreferred].kind:
                bad(
                    "KindConstraintViolation",
                    (p.id,),
                    f"preference {p.id!r}: both sides must share one kind",
                )

    for nx in sorted(doc.nexuses.values(), key=lambda n: n.id):
        ref(nx.id, nx.agent, NodeKind.AGENT, "agent")
        if len(nx.members) < 2:
            bad(
                "MemberCount",
                (nx.id,),
                f"nexus {nx.id!r}: needs at least two distinct members",
            )
        for member in sorted(nx.members):
            ref(nx.id, member, NodeKind.ENTITY, "member")
        unit(nx.id, nx.joint_likelihood, "jointLikelihood")

    return out
