"""Assumption environments over provenance.

Activities join their used entities and associated agents to the entities
they generate; that gives an AND/OR derivation structure (an entity with
several generating activities has several alternative derivations). Each
node's label is the set of minimal assumption sets sufficient to derive it,
where the assumptions are premise entities, agents, and activities.

Labels drive everything downstream: impact queries, what-if refutation, and
confidence propagation. They are recomputed from scratch on any change;
graphs at this scale make incremental relabeling pointless.
"""

from __future__ import annotations

import hashlib
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .errors import (
    CyclicProvenanceError,
    LabelExplosionError,
    UnknownElementError,
    UnknownNodeError,
)
from .model import (
    DERIVATION_RELATIONS,
    NodeKind,
    ProvDocument,
    ProvEdge,
    ProvNode,
    Relation,
)

DEFAULT_ENV_CAP = 10_000


@dataclass(frozen=True)
class Subgraph:
    """Induced upstream closure of a target set."""

    nodes: Mapping[str, ProvNode]
    edges: tuple[ProvEdge, ...]
    targets: tuple[str, ...]

    def kinds(self, kind: NodeKind) -> list[str]:
        return sorted(n.id for n in self.nodes.values() if n.kind is kind)


@dataclass(frozen=True)
class Justification:
    """One derivation of ``consequent``: the activity ``via`` plus everything
    the activity consumed (used entities and associated agents)."""

    consequent: str
    via: str
    antecedents: frozenset[str]


class AssumptionClass(str, Enum):
    PREMISE_ENTITY = "PremiseEntity"
    AGENT = "Agent"
    ACTIVITY = "Activity"


class Status(str, Enum):
    ACTIVE = "Active"
    PARTIALLY_AFFECTED = "PartiallyAffected"
    REFUTED = "Refuted"


_SEVERITY = {Status.ACTIVE: 0, Status.PARTIALLY_AFFECTED: 1, Status.REFUTED: 2}


def status_severity(status: Status) -> int:
    return _SEVERITY[status]


@dataclass(frozen=True)
class LabelSet:
    """Minimal environments for every node, plus the structure they came from."""

    environments: Mapping[str, tuple[frozenset[str], ...]]
    assumptions: Mapping[str, AssumptionClass]
    justifications: tuple[Justification, ...]
    order: tuple[str, ...]
    fingerprint: str

    def require(self, node: str) -> tuple[frozenset[str], ...]:
        try:
            return self.environments[node]
        except KeyError:
            raise UnknownNodeError(f"no label for {node!r}") from None


@dataclass(frozen=True)
class WhatIfState:
    """Statuses under a disabled set; pure function of (labels, disabled)."""

    disabled: frozenset[str]
    statuses: Mapping[str, Status]
    fingerprint: str


# --- retrieval -----------------------------------------------------------------

def retrieve_upstream(doc: ProvDocument, targets: Iterable[str]) -> Subgraph:
    """Induced subgraph of everything reachable upstream from the targets.

    All four relations already point upstream (an activity's used edge points
    at its input; a generated entity points at its generator), so this is a
    plain closure over outgoing edges.
    """
    target_list = sorted(set(targets))
    if not target_list:
        raise UnknownNodeError("at least one target is required")
    for t in target_list:
        if t not in doc.nodes:
            raise UnknownNodeError(f"unknown target {t!r}")

    succ: dict[str, list[str]] = defaultdict(list)
    for e in doc.edges:
        succ[e.from_id].append(e.to_id)

    keep: set[str] = set()
    frontier = list(target_list)
    while frontier:
        cur = frontier.pop()
        if cur in keep:
            continue
        keep.add(cur)
        frontier.extend(succ.get(cur, ()))

    nodes = {n: doc.nodes[n] for n in sorted(keep)}
    edges = tuple(
        sorted(
            (e for e in doc.edges if e.from_id in keep and e.to_id in keep),
            key=lambda e: (e.from_id, e.relation.value, e.to_id),
        )
    )
    return Subgraph(nodes=nodes, edges=edges, targets=tuple(target_list))


def graph_upstream(subgraph: Subgraph, start: Iterable[str]) -> frozenset[str]:
    """Upstream reachability closure of ``start`` within the subgraph."""
    succ: dict[str, list[str]] = defaultdict(list)
    for e in subgraph.edges:
        succ[e.from_id].append(e.to_id)
    seen: set[str] = set()
    frontier = [s for s in start]
    while frontier:
        cur = frontier.pop()
        if cur in seen:
            continue
        seen.add(cur)
        frontier.extend(succ.get(cur, ()))
    return frozenset(seen)


# --- structure extraction --------------------------------------------------------

def _check_derivation_acyclic(subgraph: Subgraph) -> None:
    succ: dict[str, list[str]] = defaultdict(list)
    indeg: dict[str, int] = {n: 0 for n in subgraph.nodes}
    for e in subgraph.edges:
        if e.relation in DERIVATION_RELATIONS:
            succ[e.from_id].append(e.to_id)
            indeg[e.to_id] += 1
    ready = [n for n, d in indeg.items() if d == 0]
    done = 0
    while ready:
        cur = ready.pop()
        done += 1
        for nxt in succ.get(cur, ()):
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                ready.append(nxt)
    if done != len(subgraph.nodes):
        stuck = tuple(sorted(n for n, d in indeg.items() if d > 0))
        raise CyclicProvenanceError(
            "derivation subgraph is cyclic", cycle=stuck
        )


def build_justifications(subgraph: Subgraph) -> tuple[Justification, ...]:
    """One justification per (generated entity, generating activity) pair."""
    _check_derivation_acyclic(subgraph)
    used: dict[str, set[str]] = defaultdict(set)
    agents: dict[str, set[str]] = defaultdict(set)
    generated: list[tuple[str, str]] = []
    for e in subgraph.edges:
        if e.relation is Relation.USED:
            used[e.from_id].add(e.to_id)
        elif e.relation is Relation.WAS_ASSOCIATED_WITH:
            agents[e.from_id].add(e.to_id)
        elif e.relation is Relation.WAS_GENERATED_BY:
            generated.append((e.from_id, e.to_id))
    return tuple(
        Justification(
            consequent=entity,
            via=activity,
            antecedents=frozenset(used[activity] | agents[activity]),
        )
        for entity, activity in sorted(generated)
    )


def classify_assumptions(subgraph: Subgraph) -> dict[str, AssumptionClass]:
    """Premise entities (no generator in the subgraph), agents, activities."""
    generated = {
        e.from_id for e in subgraph.edges if e.relation is Relation.WAS_GENERATED_BY
    }
    out: dict[str, AssumptionClass] = {}
    for node in subgraph.nodes.values():
        if node.kind is NodeKind.AGENT:
            out[node.id] = AssumptionClass.AGENT
        elif node.kind is NodeKind.ACTIVITY:
            out[node.id] = AssumptionClass.ACTIVITY
        elif node.id not in generated:
            out[node.id] = AssumptionClass.PREMISE_ENTITY
    return out


# --- label computation ------------------------------------------------------------

def _minimize(envs: Iterable[frozenset[str]]) -> list[frozenset[str]]:
    """Drop every environment that is a superset of another."""
    kept: list[frozenset[str]] = []
    for env in sorted(set(envs), key=lambda s: (len(s), tuple(sorted(s)))):
        if not any(k <= env for k in kept):
            kept.append(env)
    return kept


def _cross_union(
    label_sets: list[tuple[frozenset[str], ...]],
    base: frozenset[str],
    cap: int,
    node: str,
) -> list[frozenset[str]]:
    acc: list[frozenset[str]] = [base]
    for envs in label_sets:
        acc = _minimize(a | e for a in acc for e in envs)
        if len(acc) > cap:
            raise LabelExplosionError(node, len(acc), cap)
    return acc


def _canonical(envs: Iterable[frozenset[str]]) -> tuple[frozenset[str], ...]:
    return tuple(sorted(envs, key=lambda e: tuple(sorted(e))))


def _toposort(
    nodes: set[str], deps: Mapping[str, set[str]]
) -> tuple[str, ...]:
    indeg = {n: 0 for n in nodes}
    succ: dict[str, list[str]] = defaultdict(list)
    for n, ds in deps.items():
        for d in ds:
            succ[d].append(n)
            indeg[n] += 1
    ready = sorted(n for n, d in indeg.items() if d == 0)
    order: list[str] = []
    while ready:
        cur = ready.pop(0)
        order.append(cur)
        inserted = False
        for nxt in succ.get(cur, ()):
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                ready.append(nxt)
                inserted = True
        if inserted:
            ready.sort()
    if len(order) != len(nodes):
        stuck = tuple(sorted(n for n in nodes if indeg[n] > 0))
        raise CyclicProvenanceError("justification structure is cyclic", cycle=stuck)
    return tuple(order)


def compute_labels(
    justifications: Iterable[Justification],
    assumptions: Mapping[str, AssumptionClass],
    cap: int = DEFAULT_ENV_CAP,
) -> LabelSet:
    """Minimal environments for every node reachable from the inputs.

    Premise entities and agents ground out as themselves. An activity's
    environments are the unions over its antecedents' environments plus the
    activity itself. A generated entity inherits the environments of each
    generating activity; superset environments are dropped throughout.
    """
    justs = tuple(
        sorted(justifications, key=lambda j: (j.consequent, j.via))
    )
    justs_by_consequent: dict[str, list[Justification]] = defaultdict(list)
    activity_antecedents: dict[str, frozenset[str]] = {}
    for j in justs:
        justs_by_consequent[j.consequent].append(j)
        activity_antecedents[j.via] = j.antecedents

    nodes = set(assumptions) | set(justs_by_consequent)
    deps: dict[str, set[str]] = defaultdict(set)
    for j in justs:
        deps[j.consequent].add(j.via)
        for a in j.antecedents:
            deps[j.via].add(a)
            nodes.add(a)

    for n in sorted(nodes):
        if n not in assumptions and n not in justs_by_consequent:
            raise UnknownNodeError(
                f"{n!r} is neither an assumption nor a justified entity"
            )

    order = _toposort(nodes, deps)
    envs: dict[str, list[frozenset[str]]] = {}
    for n in order:
        cls = assumptions.get(n)
        if cls is AssumptionClass.ACTIVITY:
            ants = sorted(activity_antecedents.get(n, frozenset()))
            envs[n] = _cross_union(
                [tuple(envs[a]) for a in ants], frozenset({n}), cap, n
            )
        elif cls is not None:
            envs[n] = [frozenset({n})]
        else:
            contributions: list[frozenset[str]] = []
            for j in justs_by_consequent[n]:
                contributions.extend(envs[j.via])
            envs[n] = _minimize(contributions)
            if len(envs[n]) > cap:
                raise LabelExplosionError(n, len(envs[n]), cap)

    environments = {n: _canonical(envs[n]) for n in sorted(envs)}
    digest = hashlib.sha256()
    for n, en in environments.items():
        digest.update(n.encode())
        for e in en:
            digest.update(("|" + ",".join(sorted(e))).encode())
        digest.update(b";")
    return LabelSet(
        environments=environments,
        assumptions=dict(assumptions),
        justifications=justs,
        order=order,
        fingerprint=digest.hexdigest(),
    )


# --- label queries -----------------------------------------------------------------

def upstream_of(labels: LabelSet, node: str) -> frozenset[str]:
    """Everything the node rests on: all environment members, plus itself."""
    envs = labels.require(node)
    return frozenset({node}).union(*envs) if envs else frozenset({node})


def downstream_of(labels: LabelSet, node: str) -> frozenset[str]:
    """Everything resting on the node: exact transpose of :func:`upstream_of`."""
    if node not in labels.environments:
        raise UnknownNodeError(f"no label for {node!r}")
    return frozenset(
        n for n in labels.environments if node in upstream_of(labels, n)
    )


# --- refutation ----------------------------------------------------------------------

def _closure(
    labels: LabelSet,
    base: frozenset[str],
    deleted: frozenset[str],
    activity_antecedents: Mapping[str, frozenset[str]],
    justs_by_consequent: Mapping[str, list[Justification]],
) -> set[str]:
    """Forward closure: which nodes are derivable from the assumptions in
    ``base`` once every node in ``deleted`` is removed from the graph."""
    avail: set[str] = set()
    for n in labels.order:
        if n in deleted:
            continue
        cls = labels.assumptions.get(n)
        if cls is AssumptionClass.ACTIVITY:
            if n in base and all(
                a in avail for a in activity_antecedents.get(n, frozenset())
            ):
                avail.add(n)
        elif cls is not None:
            if n in base:
                avail.add(n)
        else:
            if any(j.via in avail for j in justs_by_consequent.get(n, ())):
                avail.add(n)
    return avail


def refute(labels: LabelSet, disabled: Iterable[str]) -> WhatIfState:
    """Three-valued status for every node under a disabled set.

    A node is Refuted when it is disabled itself or every one of its
    environments is blocked; Active when nothing touches it; and
    PartiallyAffected when only some of its derivations are blocked.

    Disabling an assumption blocks exactly the environments containing it.
    Disabling a derived entity removes it from the graph, which also blocks
    any derivation that consumes it downstream.
    """
    d = frozenset(disabled)
    unknown = sorted(d - set(labels.environments))
    if unknown:
        raise UnknownElementError(f"unknown elements: {unknown}")

    assumption_only = all(x in labels.assumptions for x in d)
    statuses: dict[str, Status] = {}

    if assumption_only:
        for n, envs in labels.environments.items():
            blocked = [bool(e & d) for e in envs]
            if n in d or all(blocked):
                statuses[n] = Status.REFUTED
            elif not any(blocked):
                statuses[n] = Status.ACTIVE
            else:
                statuses[n] = Status.PARTIALLY_AFFECTED
    else:
        activity_antecedents: dict[str, frozenset[str]] = {}
        justs_by_consequent: dict[str, list[Justification]] = defaultdict(list)
        for j in labels.justifications:
            activity_antecedents[j.via] = j.antecedents
            justs_by_consequent[j.consequent].append(j)
        for n, envs in labels.environments.items():
            blocked = []
            for e in envs:
                if e & d:
                    blocked.append(True)
                else:
                    derivable = n in _closure(
                        labels, e, d, activity_antecedents, justs_by_consequent
                    )
                    blocked.append(not derivable)
            if n in d or all(blocked):
                statuses[n] = Status.REFUTED
            elif not any(blocked):
                statuses[n] = Status.ACTIVE
            else:
                statuses[n] = Status.PARTIALLY_AFFECTED

    return WhatIfState(
        disabled=d,
        statuses={n: statuses[n] for n in sorted(statuses)},
        fingerprint=labels.fingerprint,
    )
