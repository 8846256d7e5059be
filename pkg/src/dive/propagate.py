"""Seed confidences from appraisals and push them through the derivation
structure under selectable junction policies, honoring refutation overlays."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .errors import InconsistentStateError, PreconditionViolatedError
from .model import ProvDocument
from .tms import AssumptionClass, Justification, LabelSet, Status, Subgraph, WhatIfState

POLICY_NAMES = ("min", "max", "avg")


def _avg(values: Iterable[float]) -> float:
    values = list(values)
    return sum(values) / len(values)


_POLICIES = {"min": min, "max": max, "avg": _avg}


@dataclass(frozen=True)
class PolicyConfig:
    """Junction policies plus seeding defaults.

    ``and_policy`` combines an element with everything it requires,
    ``or_policy`` merges alternative derivations, and
    ``appraisal_aggregator`` folds multiple appraisals of one element into
    its seed. Unappraised elements seed at ``default_seed``: distrust is
    expressed by refuting, not by a low default.
    """

    and_policy: str = "min"
    or_policy: str = "max"
    appraisal_aggregator: str = "avg"
    default_seed: float = 1.0

    def __post_init__(self):
        for name, value in (
            ("andPolicy", self.and_policy),
            ("orPolicy", self.or_policy),
            ("appraisalAggregator", self.appraisal_aggregator),
        ):
            if value not in _POLICIES:
                raise PreconditionViolatedError(
                    f"{name} must be one of {POLICY_NAMES}, got {value!r}"
                )
        if not (0.0 <= self.default_seed <= 1.0):
            raise PreconditionViolatedError(
                f"defaultSeed must be in [0,1], got {self.default_seed}"
            )

    @property
    def and_fn(self):
        return _POLICIES[self.and_policy]

    @property
    def or_fn(self):
        return _POLICIES[self.or_policy]

    @property
    def aggregate_fn(self):
        return _POLICIES[self.appraisal_aggregator]


@dataclass(frozen=True)
class ConfidenceMap:
    """Propagated values plus the per-node seeds they started from. Refuted
    nodes carry no value."""

    values: Mapping[str, float]
    seeds: Mapping[str, float]


def seed_confidences(
    doc: ProvDocument, subgraph: Subgraph, cfg: PolicyConfig
) -> dict[str, float]:
    """Aggregate every node's appraisals (nexus joint likelihoods count as a
    pseudo-appraisal on each member) or fall back to the default seed."""
    judgments: dict[str, list[float]] = defaultdict(list)
    for appraisal in doc.appraisals.values():
        if appraisal.appraised in subgraph.nodes:
            judgments[appraisal.appraised].append(appraisal.confidence)
    for nexus in doc.nexuses.values():
        for member in nexus.members:
            if member in subgraph.nodes:
                judgments[member].append(nexus.joint_likelihood)
    return {
        node: cfg.aggregate_fn(judgments[node]) if node in judgments else cfg.default_seed
        for node in sorted(subgraph.nodes)
    }


def propagate(
    labels: LabelSet,
    seeds: Mapping[str, float],
    cfg: PolicyConfig,
    state: Optional[WhatIfState] = None,
) -> ConfidenceMap:
    """Forward-propagate in topological order.

    Assumptions carry their seed (activities fold in their inputs under the
    and-policy); an entity's alternative derivations merge under the
    or-policy, then combine with the entity's own seed under the and-policy.
    Derivations touching anything refuted are excluded, and refuted nodes are
    left out entirely.
    """
    if state is not None and state.fingerprint != labels.fingerprint:
        raise InconsistentStateError(
            "what-if state was computed from different labels"
        )
    statuses: Mapping[str, Status] = state.statuses if state is not None else {}

    def refuted(node: str) -> bool:
        return statuses.get(node) is Status.REFUTED

    justs_by_consequent: dict[str, list[Justification]] = defaultdict(list)
    activity_antecedents: dict[str, frozenset[str]] = {}
    for j in labels.justifications:
        justs_by_consequent[j.consequent].append(j)
        activity_antecedents[j.via] = j.antecedents

    def seed(node: str) -> float:
        return seeds.get(node, cfg.default_seed)

    values: dict[str, float] = {}
    for node in labels.order:
        if refuted(node):
            continue
        cls = labels.assumptions.get(node)
        if cls is AssumptionClass.ACTIVITY:
            inputs = [seed(node)]
            for ant in sorted(activity_antecedents.get(node, frozenset())):
                if not refuted(ant):
                    inputs.append(values[ant])
            values[node] = cfg.and_fn(inputs)
        elif cls is not None:
            values[node] = seed(node)
        else:
            branch_values = []
            for j in justs_by_consequent[node]:
                participants = {j.via, *j.antecedents}
                if any(refuted(p) for p in participants):
                    continue
                branch_values.append(
                    cfg.and_fn([values[j.via]] + [values[a] for a in sorted(j.antecedents)])
                )
            if not branch_values:
                raise InconsistentStateError(
                    f"every derivation of {node!r} is excluded but its status "
                    f"is not Refuted"
                )
            values[node] = cfg.and_fn([seed(node), cfg.or_fn(branch_values)])

    return ConfidenceMap(
        values={n: values[n] for n in sorted(values)},
        seeds={n: seed(n) for n in sorted(labels.environments)},
    )


def closed_form_check(labels: LabelSet, seeds: Mapping[str, float]) -> ConfidenceMap:
    """Independent check for the min/max policy pair with no refutations:
    each node's confidence is the best derivation's weakest assumption,
    computed straight off the environments."""
    for node in labels.environments:
        if node not in labels.assumptions and seeds.get(node, 1.0) != 1.0:
            raise PreconditionViolatedError(
                f"closed form needs assumption-only seeds; {node!r} is derived "
                f"but seeded at {seeds.get(node)}"
            )
    values = {
        node: max(min(seeds.get(a, 1.0) for a in env) for env in envs)
        for node, envs in labels.environments.items()
        if envs
    }
    return ConfidenceMap(
        values={n: values[n] for n in sorted(values)},
        seeds={n: seeds.get(n, 1.0) for n in sorted(labels.environments)},
    )
