"""Assemble everything a session needs from a document and target set, and
answer isolation queries over the assembled state."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import catalog as catalog_mod
from . import tms
from .catalog import Catalog, FactorIndex, FactorRef
from .errors import UnknownElementError
from .model import ProvDocument
from .tms import LabelSet, Subgraph, WhatIfState


@dataclass(frozen=True)
class Analysis:
    """Immutable per-(document, targets) computation shared by all readers."""

    doc: ProvDocument
    subgraph: Subgraph
    labels: LabelSet
    catalog: Catalog
    index: FactorIndex


@dataclass(frozen=True)
class IsolationView:
    """What to emphasize when inspecting one element or factor's contribution."""

    element: str
    focus: tuple[str, ...]
    emphasized: tuple[str, ...]
    deemphasized: tuple[str, ...]
    involved_factors: tuple[FactorRef, ...]


def analyze(
    doc: ProvDocument, targets: Iterable[str], env_cap: int = tms.DEFAULT_ENV_CAP
) -> Analysis:
    subgraph = tms.retrieve_upstream(doc, targets)
    justifications = tms.build_justifications(subgraph)
    assumptions = tms.classify_assumptions(subgraph)
    labels = tms.compute_labels(justifications, assumptions, cap=env_cap)
    cat = catalog_mod.build_catalog(subgraph)
    index = catalog_mod.index_factors(labels, cat)
    return Analysis(doc=doc, subgraph=subgraph, labels=labels, catalog=cat, index=index)


def resolve_element(analysis: Analysis, text: str) -> frozenset[str]:
    """Resolve ``kind:key`` to the factor's members, or a bare id to itself.

    A colon only makes a factor ref when its prefix names a factor kind, so
    ids containing colons (URIs and the like) still resolve as nodes.
    """
    if catalog_mod.looks_like_factor(text):
        return analysis.catalog.resolve(FactorRef.parse(text))
    if text in analysis.subgraph.nodes:
        return frozenset({text})
    raise UnknownElementError(f"unknown element {text!r}")


def resolve_disabled(analysis: Analysis, refs: Iterable[str]) -> frozenset[str]:
    out: set[str] = set()
    for ref in refs:
        out |= resolve_element(analysis, ref)
    return frozenset(out)


def apply_refutations(analysis: Analysis, refs: Iterable[str]) -> WhatIfState:
    """Resolve factor refs / node ids and recompute statuses."""
    return tms.refute(analysis.labels, resolve_disabled(analysis, refs))


def isolate(analysis: Analysis, element: str) -> IsolationView:
    """Emphasize one element's contribution: its full upstream derivation
    (graph closure, attribution included) plus everything whose environments
    mention it; report the factors involved upstream for sidebar filtering."""
    focus = resolve_element(analysis, element)
    upstream = tms.graph_upstream(analysis.subgraph, focus)
    downstream: set[str] = set()
    for x in focus:
        if x in analysis.labels.environments:
            downstream |= tms.downstream_of(analysis.labels, x)
    emphasized = upstream | downstream | focus
    deemphasized = set(analysis.subgraph.nodes) - emphasized

    involved = {
        factor
        for factor, members in analysis.catalog.membership.items()
        if members & upstream
    }
    return IsolationView(
        element=element,
        focus=tuple(sorted(focus)),
        emphasized=tuple(sorted(emphasized)),
        deemphasized=tuple(sorted(deemphasized)),
        involved_factors=tuple(sorted(involved, key=lambda f: f.sort_key())),
    )
