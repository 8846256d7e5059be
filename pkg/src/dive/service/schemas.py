"""Pydantic request/response models for the HTTP API.

Field names follow the wire convention (camelCase, matching the dive/1
document format). The CLI builds its ``--json`` output from these same
models, so both surfaces emit one schema.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..analysis import Analysis, IsolationView
from ..catalog import Catalog, FactorIndex, FactorKind
from ..model import (
    Appraisal,
    ProvDocument,
    ProvEdge,
    ProvNode,
    Violation,
)
from ..propagate import ConfidenceMap, PolicyConfig
from ..tms import Subgraph, WhatIfState

PolicyName = Literal["min", "max", "avg"]


class ViolationModel(BaseModel):
    rule: str
    ids: list[str]
    message: str

    @classmethod
    def from_violation(cls, v: Violation) -> "ViolationModel":
        return cls(rule=v.rule, ids=list(v.ids), message=v.message)


class ErrorBody(BaseModel):
    code: str
    message: str
    violations: Optional[list[ViolationModel]] = None


class NodeModel(BaseModel):
    id: str
    kind: str
    label: str
    attrs: dict[str, str] = Field(default_factory=dict)
    sourceClass: Optional[str] = None
    sourceId: Optional[str] = None
    operationClass: Optional[str] = None

    @classmethod
    def from_node(cls, n: ProvNode) -> "NodeModel":
        return cls(
            id=n.id,
            kind=n.kind.value,
            label=n.label,
            attrs=dict(sorted(n.attrs.items())),
            sourceClass=n.source_class,
            sourceId=n.source_id,
            operationClass=n.operation_class,
        )


class EdgeModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    relation: str
    from_: str = Field(alias="from")
    to: str

    @classmethod
    def from_edge(cls, e: ProvEdge) -> "EdgeModel":
        return cls(relation=e.relation.value, from_=e.from_id, to=e.to_id)


class AppraisalModel(BaseModel):
    id: str
    appraiser: str
    appraised: str
    confidence: float
    likelihood: Optional[float] = None
    rationale: Optional[str] = None

    @classmethod
    def from_appraisal(cls, a: Appraisal) -> "AppraisalModel":
        return cls(
            id=a.id,
            appraiser=a.appraiser,
            appraised=a.appraised,
            confidence=a.confidence,
            likelihood=a.likelihood,
            rationale=a.rationale,
        )


class SubgraphModel(BaseModel):
    targets: list[str]
    nodes: list[NodeModel]
    edges: list[EdgeModel]

    @classmethod
    def from_subgraph(cls, sg: Subgraph) -> "SubgraphModel":
        return cls(
            targets=list(sg.targets),
            nodes=[NodeModel.from_node(sg.nodes[k]) for k in sorted(sg.nodes)],
            edges=[EdgeModel.from_edge(e) for e in sg.edges],
        )


class NodeLabelModel(BaseModel):
    node: str
    assumptionClass: Optional[str] = None
    environments: list[list[str]]


class FactorModel(BaseModel):
    kind: str
    key: str
    ref: str
    members: list[str]
    memberCount: int
    environmentMentionCount: int


class CatalogModel(BaseModel):
    agents: list[FactorModel]
    sources: list[FactorModel]
    sourceClasses: list[FactorModel]
    operationClasses: list[FactorModel]

    @classmethod
    def from_catalog(cls, cat: Catalog, index: FactorIndex) -> "CatalogModel":
        def factors(kind: FactorKind) -> list[FactorModel]:
            out = []
            for f in cat.of_kind(kind):
                members = sorted(cat.membership[f])
                out.append(
                    FactorModel(
                        kind=f.kind.value,
                        key=f.key,
                        ref=f.ref,
                        members=members,
                        memberCount=len(members),
                        environmentMentionCount=len(index.by_factor.get(f, ())),
                    )
                )
            return out

        return cls(
            agents=factors(FactorKind.AGENT),
            sources=factors(FactorKind.SOURCE),
            sourceClasses=factors(FactorKind.SOURCE_CLASS),
            operationClasses=factors(FactorKind.OPERATION_CLASS),
        )


class FactorIndexModel(BaseModel):
    byNode: dict[str, list[str]]
    byFactor: dict[str, list[str]]

    @classmethod
    def from_index(cls, index: FactorIndex) -> "FactorIndexModel":
        return cls(
            byNode={
                node: sorted(f.ref for f in factors)
                for node, factors in sorted(index.by_node.items())
            },
            byFactor={
                f.ref: sorted(nodes)
                for f, nodes in sorted(index.by_factor.items(), key=lambda kv: kv[0].sort_key())
            },
        )


class PolicyModel(BaseModel):
    andPolicy: PolicyName = "min"
    orPolicy: PolicyName = "max"
    appraisalAggregator: PolicyName = "avg"
    defaultSeed: float = Field(default=1.0, ge=0.0, le=1.0)

    @classmethod
    def from_config(cls, cfg: PolicyConfig) -> "PolicyModel":
        return cls(
            andPolicy=cfg.and_policy,
            orPolicy=cfg.or_policy,
            appraisalAggregator=cfg.appraisal_aggregator,
            defaultSeed=cfg.default_seed,
        )

    def to_config(self) -> PolicyConfig:
        return PolicyConfig(
            and_policy=self.andPolicy,
            or_policy=self.orPolicy,
            appraisal_aggregator=self.appraisalAggregator,
            default_seed=self.defaultSeed,
        )


class WhatIfModel(BaseModel):
    disabled: list[str]
    resolved: list[str]
    statuses: dict[str, str]
    version: int

    @classmethod
    def from_state(
        cls, requested: list[str], state: WhatIfState, version: int
    ) -> "WhatIfModel":
        return cls(
            disabled=list(requested),
            resolved=sorted(state.disabled),
            statuses={n: s.value for n, s in sorted(state.statuses.items())},
            version=version,
        )


class IsolationModel(BaseModel):
    element: str
    focus: list[str]
    emphasized: list[str]
    deemphasized: list[str]
    involvedFactors: list[str]

    @classmethod
    def from_view(cls, view: IsolationView) -> "IsolationModel":
        return cls(
            element=view.element,
            focus=list(view.focus),
            emphasized=list(view.emphasized),
            deemphasized=list(view.deemphasized),
            involvedFactors=[f.ref for f in view.involved_factors],
        )


class ConfidenceModel(BaseModel):
    values: dict[str, float]
    seeds: dict[str, float]
    policy: PolicyModel

    @classmethod
    def from_map(cls, cm: ConfidenceMap, cfg: PolicyConfig) -> "ConfidenceModel":
        return cls(
            values=dict(cm.values),
            seeds=dict(cm.seeds),
            policy=PolicyModel.from_config(cfg),
        )


class DocumentCreated(BaseModel):
    documentId: str


class SessionCreateRequest(BaseModel):
    documentId: str
    targets: list[str] = Field(min_length=1)


class RefutationsRequest(BaseModel):
    disabled: list[str] = Field(default_factory=list)
    version: Optional[int] = None


class PolicyRequest(PolicyModel):
    version: Optional[int] = None

    def to_config(self) -> PolicyConfig:
        return PolicyConfig(
            and_policy=self.andPolicy,
            or_policy=self.orPolicy,
            appraisal_aggregator=self.appraisalAggregator,
            default_seed=self.defaultSeed,
        )


class AnalysisModel(BaseModel):
    """Everything derived from one (document, targets) pair. The CLI's
    ``provenance --json`` emits exactly this; sessions embed it."""

    targets: list[str]
    subgraph: SubgraphModel
    labels: list[NodeLabelModel]
    catalog: CatalogModel
    factorIndex: FactorIndexModel
    appraisals: list[AppraisalModel]


class SessionModel(AnalysisModel):
    sessionId: str
    documentId: str
    version: int
    createdAt: str
    updatedAt: str
    disabled: list[str]
    policy: PolicyModel
    statuses: dict[str, str]


def labels_summary(analysis: Analysis) -> list[NodeLabelModel]:
    return [
        NodeLabelModel(
            node=node,
            assumptionClass=(
                analysis.labels.assumptions[node].value
                if node in analysis.labels.assumptions
                else None
            ),
            environments=[sorted(env) for env in envs],
        )
        for node, envs in sorted(analysis.labels.environments.items())
    ]


def appraisals_in_scope(doc: ProvDocument, subgraph: Subgraph) -> list[AppraisalModel]:
    """All appraisals whose appraised element landed in the subgraph."""
    return [
        AppraisalModel.from_appraisal(a)
        for a in sorted(doc.appraisals.values(), key=lambda a: a.id)
        if a.appraised in subgraph.nodes
    ]


def analysis_model(analysis: Analysis) -> AnalysisModel:
    return AnalysisModel(
        targets=list(analysis.subgraph.targets),
        subgraph=SubgraphModel.from_subgraph(analysis.subgraph),
        labels=labels_summary(analysis),
        catalog=CatalogModel.from_catalog(analysis.catalog, analysis.index),
        factorIndex=FactorIndexModel.from_index(analysis.index),
        appraisals=appraisals_in_scope(analysis.doc, analysis.subgraph),
    )


def session_model(
    *,
    session_id: str,
    document_id: str,
    version: int,
    created_at: str,
    updated_at: str,
    disabled: list[str],
    cfg: PolicyConfig,
    analysis: Analysis,
    state: WhatIfState,
) -> SessionModel:
    base = analysis_model(analysis)
    return SessionModel(
        sessionId=session_id,
        documentId=document_id,
        version=version,
        createdAt=created_at,
        updatedAt=updated_at,
        disabled=list(disabled),
        policy=PolicyModel.from_config(cfg),
        statuses={n: s.value for n, s in sorted(state.statuses.items())},
        targets=base.targets,
        subgraph=base.subgraph,
        labels=base.labels,
        catalog=base.catalog,
        factorIndex=base.factorIndex,
        appraisals=base.appraisals,
    )
