"""Render an analysis as Graphviz DOT, target rightmost, with statuses and
confidences encoded as node colors."""

from __future__ import annotations

from typing import Mapping, Optional

from .analysis import Analysis
from .model import NodeKind, Relation
from .tms import Status, WhatIfState

_SHAPES = {
    NodeKind.ENTITY: "ellipse",
    NodeKind.ACTIVITY: "box",
    NodeKind.AGENT: "house",
}


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _confidence_fill(value: float) -> str:
    # red (hue 0) at confidence 0 through green (hue 1/3) at confidence 1
    return f"{value / 3:.4f} 0.55 0.96"


def export_dot(
    analysis: Analysis,
    state: Optional[WhatIfState] = None,
    confidence: Optional[Mapping[str, float]] = None,
    name: str = "provenance",
) -> str:
    statuses = state.statuses if state is not None else {}
    targets = set(analysis.subgraph.targets)
    lines = [
        f"digraph {_quote(name)} {{",
        "  rankdir=LR;",
        "  node [style=filled, fontname=Helvetica, fontsize=10];",
        "  edge [fontname=Helvetica, fontsize=9];",
    ]
    for node_id in sorted(analysis.subgraph.nodes):
        node = analysis.subgraph.nodes[node_id]
        status = statuses.get(node_id, Status.ACTIVE)
        attrs = {
            "label": _quote(node.label),
            "shape": _SHAPES[node.kind],
        }
        if status is Status.REFUTED:
            attrs["fillcolor"] = _quote("gray85")
            attrs["fontcolor"] = _quote("gray50")
            attrs["style"] = _quote("filled,dashed")
        elif confidence is not None and node_id in confidence:
            attrs["fillcolor"] = _quote(_confidence_fill(confidence[node_id]))
        else:
            attrs["fillcolor"] = _quote("white")
        if status is Status.PARTIALLY_AFFECTED:
            attrs["color"] = _quote("orange3")
            attrs["penwidth"] = "2"
        if node_id in targets:
            attrs["peripheries"] = "2"
        rendered = ", ".join(f"{k}={v}" for k, v in sorted(attrs.items()))
        lines.append(f"  {_quote(node_id)} [{rendered}];")

    # draw information flow left to right: inputs point at the activity,
    # the activity points at what it generated; agent links are dashed
    for e in analysis.subgraph.edges:
        if e.relation is Relation.USED:
            lines.append(f"  {_quote(e.to_id)} -> {_quote(e.from_id)};")
        elif e.relation is Relation.WAS_GENERATED_BY:
            lines.append(f"  {_quote(e.to_id)} -> {_quote(e.from_id)};")
        elif e.relation is Relation.WAS_ASSOCIATED_WITH:
            lines.append(
                f"  {_quote(e.to_id)} -> {_quote(e.from_id)} [style=dashed, arrowhead=open];"
            )
        else:
            lines.append(
                f"  {_quote(e.to_id)} -> {_quote(e.from_id)} [style=dashed, arrowhead=open];"
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
