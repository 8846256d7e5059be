"""Brute-force reference for label computation and refutation.

Everything here works straight off a document's nodes and edges: enumerate
every subset of the assumption universe, decide derivability by forward
closure, and keep the minimal derivable sets. Deliberately independent of
dive.tms so the two can disagree.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from dive.model import NodeKind, ProvDocument, Relation


@dataclass
class OracleStructure:
    """Upstream closure of the targets, in closure-evaluation order."""

    assumptions: list[str]            # premises + agents + activities, sorted
    bit: dict[str, int]               # assumption -> bit position
    order: list[str]                  # all closure nodes, antecedents first
    kind: dict[str, str]              # node -> premise | agent | activity | derived
    activity_inputs: dict[str, list[str]]   # activity -> used entities + agents
    entity_gens: dict[str, list[str]]       # derived entity -> generating activities


def build_structure(doc: ProvDocument, targets: list[str]) -> OracleStructure:
    used = defaultdict(list)
    agents = defaultdict(list)
    gens = defaultdict(list)
    upstream_edges = defaultdict(list)
    for e in doc.edges:
        upstream_edges[e.from_id].append(e.to_id)
        if e.relation is Relation.USED:
            used[e.from_id].append(e.to_id)
        elif e.relation is Relation.WAS_ASSOCIATED_WITH:
            agents[e.from_id].append(e.to_id)
        elif e.relation is Relation.WAS_GENERATED_BY:
            gens[e.from_id].append(e.to_id)

    keep: set[str] = set()
    frontier = list(targets)
    while frontier:
        cur = frontier.pop()
        if cur in keep:
            continue
        keep.add(cur)
        frontier.extend(upstream_edges.get(cur, ()))

    kind: dict[str, str] = {}
    for n in keep:
        node = doc.nodes[n]
        if node.kind is NodeKind.AGENT:
            kind[n] = "agent"
        elif node.kind is NodeKind.ACTIVITY:
            kind[n] = "activity"
        elif not gens.get(n):
            kind[n] = "premise"
        else:
            kind[n] = "derived"

    # dependency order: an activity after its inputs, an entity after its
    # generating activities
    deps: dict[str, set[str]] = {n: set() for n in keep}
    for n in keep:
        if kind[n] == "activity":
            deps[n] = {x for x in used[n] + agents[n] if x in keep}
        elif kind[n] == "derived":
            deps[n] = {x for x in gens[n] if x in keep}
    order: list[str] = []
    done: set[str] = set()
    pending = sorted(keep)
    while pending:
        progressed = False
        rest = []
        for n in pending:
            if deps[n] <= done:
                order.append(n)
                done.add(n)
                progressed = True
            else:
                rest.append(n)
        pending = rest
        assert progressed, "cyclic derivation structure"

    assumptions = sorted(n for n in keep if kind[n] != "derived")
    return OracleStructure(
        assumptions=assumptions,
        bit={a: i for i, a in enumerate(assumptions)},
        order=order,
        kind=kind,
        activity_inputs={
            n: sorted(x for x in used[n] + agents[n] if x in keep)
            for n in keep
            if kind[n] == "activity"
        },
        entity_gens={
            n: sorted(x for x in gens[n] if x in keep)
            for n in keep
            if kind[n] == "derived"
        },
    )


def closure(st: OracleStructure, mask: int, deleted: frozenset[str] = frozenset()) -> set[str]:
    """Nodes derivable from the assumptions selected by ``mask``, with the
    ``deleted`` nodes removed from the graph entirely."""
    avail: set[str] = set()
    for n in st.order:
        if n in deleted:
            continue
        k = st.kind[n]
        if k in ("premise", "agent"):
            if mask >> st.bit[n] & 1:
                avail.add(n)
        elif k == "activity":
            if mask >> st.bit[n] & 1 and all(
                x in avail for x in st.activity_inputs[n]
            ):
                avail.add(n)
        else:
            if any(v in avail for v in st.entity_gens[n]):
                avail.add(n)
    return avail


def derivability_table(st: OracleStructure) -> dict[str, set[int]]:
    """node -> set of assumption masks that derive it, by full enumeration."""
    table: dict[str, set[int]] = {n: set() for n in st.order}
    for mask in range(1 << len(st.assumptions)):
        for n in closure(st, mask):
            table[n].add(mask)
    return table


def minimal_environments(st: OracleStructure, table: dict[str, set[int]]) -> dict[str, set[frozenset[str]]]:
    """node -> minimal derivable assumption sets, as id sets."""
    out: dict[str, set[frozenset[str]]] = {}
    for n, masks in table.items():
        minimal: set[int] = set()
        for m in masks:
            reducible = False
            probe = m
            while probe:
                low = probe & -probe
                if (m ^ low) in masks:
                    reducible = True
                    break
                probe ^= low
            if not reducible:
                minimal.add(m)
        out[n] = {
            frozenset(a for a in st.assumptions if m >> st.bit[a] & 1)
            for m in minimal
        }
    return out


def full_mask(st: OracleStructure) -> int:
    return (1 << len(st.assumptions)) - 1


def mask_of(st: OracleStructure, ids: frozenset[str]) -> int:
    mask = 0
    for a in ids:
        mask |= 1 << st.bit[a]
    return mask
