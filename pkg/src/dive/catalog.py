"""Analytic-factor catalogs: agents, sources, source classes, and operation
classes, plus the index tying every node's environments to those factors."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .errors import MalformedFactorError, UnknownElementError
from .model import NodeKind, Relation
from .tms import LabelSet, Subgraph


class FactorKind(str, Enum):
    AGENT = "agent"
    SOURCE = "source"
    SOURCE_CLASS = "sourceClass"
    OPERATION_CLASS = "operationClass"


_KIND_ORDER = {
    FactorKind.AGENT: 0,
    FactorKind.SOURCE: 1,
    FactorKind.SOURCE_CLASS: 2,
    FactorKind.OPERATION_CLASS: 3,
}


@dataclass(frozen=True)
class FactorRef:
    """One catalog entry, written ``kind:key`` on the wire."""

    kind: FactorKind
    key: str

    @property
    def ref(self) -> str:
        return f"{self.kind.value}:{self.key}"

    def sort_key(self) -> tuple[int, str]:
        return (_KIND_ORDER[self.kind], self.key)

    @classmethod
    def parse(cls, text: str) -> "FactorRef":
        kind_text, sep, key = text.partition(":")
        if not sep or not key:
            raise MalformedFactorError(f"factor must be 'kind:key', got {text!r}")
        try:
            kind = FactorKind(kind_text)
        except ValueError:
            options = ", ".join(k.value for k in FactorKind)
            raise MalformedFactorError(
                f"unknown factor kind {kind_text!r} (expected one of: {options})"
            ) from None
        return cls(kind, key)


def looks_like_factor(text: str) -> bool:
    """True when the prefix before the first colon names a factor kind."""
    kind_text, sep, _ = text.partition(":")
    return bool(sep) and kind_text in {k.value for k in FactorKind}


@dataclass(frozen=True)
class Catalog:
    """Factor membership per kind. A node can sit in several dimensions at
    once (a tagged premise is a source and belongs to a source class)."""

    membership: Mapping[FactorRef, frozenset[str]]

    def of_kind(self, kind: FactorKind) -> list[FactorRef]:
        return sorted((f for f in self.membership if f.kind is kind), key=lambda f: f.key)

    @property
    def agents(self) -> list[FactorRef]:
        return self.of_kind(FactorKind.AGENT)

    @property
    def sources(self) -> list[FactorRef]:
        return self.of_kind(FactorKind.SOURCE)

    @property
    def source_classes(self) -> list[FactorRef]:
        return self.of_kind(FactorKind.SOURCE_CLASS)

    @property
    def operation_classes(self) -> list[FactorRef]:
        return self.of_kind(FactorKind.OPERATION_CLASS)

    def resolve(self, factor: FactorRef) -> frozenset[str]:
        try:
            return self.membership[factor]
        except KeyError:
            raise UnknownElementError(f"unknown factor {factor.ref!r}") from None


@dataclass(frozen=True)
class FactorIndex:
    """byNode and byFactor are exact transposes of each other."""

    by_node: Mapping[str, frozenset[FactorRef]]
    by_factor: Mapping[FactorRef, frozenset[str]]


def build_catalog(subgraph: Subgraph) -> Catalog:
    """Catalog every agent, source, source class, and operation class.

    Sources are keyed by the premise entity's sourceId tag so that several
    premises from one device or feed group together; an untagged premise is
    its own source, keyed by node id.
    """
    generated = {
        e.from_id for e in subgraph.edges if e.relation is Relation.WAS_GENERATED_BY
    }
    members: dict[FactorRef, set[str]] = defaultdict(set)
    for node in subgraph.nodes.values():
        if node.kind is NodeKind.AGENT:
            members[FactorRef(FactorKind.AGENT, node.id)].add(node.id)
        elif node.kind is NodeKind.ACTIVITY:
            if node.operation_class:
                members[
                    FactorRef(FactorKind.OPERATION_CLASS, node.operation_class)
                ].add(node.id)
        else:
            if node.id not in generated:
                key = node.source_id or node.id
                members[FactorRef(FactorKind.SOURCE, key)].add(node.id)
            if node.source_class:
                members[FactorRef(FactorKind.SOURCE_CLASS, node.source_class)].add(
                    node.id
                )
    return Catalog(membership={f: frozenset(ids) for f, ids in members.items()})


def index_factors(labels: LabelSet, catalog: Catalog) -> FactorIndex:
    """Tie nodes to the factors mentioned inside their environments."""
    factor_of: dict[str, set[FactorRef]] = defaultdict(set)
    for factor, ids in catalog.membership.items():
        for node_id in ids:
            factor_of[node_id].add(factor)

    by_node: dict[str, frozenset[FactorRef]] = {}
    by_factor: dict[FactorRef, set[str]] = defaultdict(set)
    for node, envs in labels.environments.items():
        mentioned: set[FactorRef] = set()
        for env in envs:
            for member in env:
                mentioned.update(factor_of.get(member, ()))
        by_node[node] = frozenset(mentioned)
        for factor in mentioned:
            by_factor[factor].add(node)

    return FactorIndex(
        by_node=by_node,
        by_factor={f: frozenset(ns) for f, ns in by_factor.items()},
    )
