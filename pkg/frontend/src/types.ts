/** Wire types mirroring the service's response schemas, field for field. */

export type NodeKind = 'Entity' | 'Activity' | 'Agent';
export type NodeStatus = 'Active' | 'PartiallyAffected' | 'Refuted';
export type PolicyName = 'min' | 'max' | 'avg';

export interface WireNode {
  id: string;
  kind: NodeKind;
  label: string;
  attrs: Record<string, string>;
  sourceClass?: string | null;
  sourceId?: string | null;
  operationClass?: string | null;
}

export interface WireEdge {
  relation: 'used' | 'wasGeneratedBy' | 'wasAssociatedWith' | 'wasAttributedTo';
  from: string;
  to: string;
}

export interface WireSubgraph {
  targets: string[];
  nodes: WireNode[];
  edges: WireEdge[];
}

export interface NodeLabel {
  node: string;
  assumptionClass?: string | null;
  environments: string[][];
}

export interface Factor {
  kind: 'agent' | 'source' | 'sourceClass' | 'operationClass';
  key: string;
  ref: string;
  members: string[];
  memberCount: number;
  environmentMentionCount: number;
}

export interface Catalog {
  agents: Factor[];
  sources: Factor[];
  sourceClasses: Factor[];
  operationClasses: Factor[];
}

export interface FactorIndex {
  byNode: Record<string, string[]>;
  byFactor: Record<string, string[]>;
}

export interface Appraisal {
  id: string;
  appraiser: string;
  appraised: string;
  confidence: number;
  likelihood?: number | null;
  rationale?: string | null;
}

export interface Policy {
  andPolicy: PolicyName;
  orPolicy: PolicyName;
  appraisalAggregator: PolicyName;
  defaultSeed: number;
}

export interface Session {
  targets: string[];
  subgraph: WireSubgraph;
  labels: NodeLabel[];
  catalog: Catalog;
  factorIndex: FactorIndex;
  appraisals: Appraisal[];
  sessionId: string;
  documentId: string;
  version: number;
  createdAt: string;
  updatedAt: string;
  disabled: string[];
  policy: Policy;
  statuses: Record<string, NodeStatus>;
}

export interface IsolationView {
  element: string;
  focus: string[];
  emphasized: string[];
  deemphasized: string[];
  involvedFactors: string[];
}

export interface WhatIfState {
  disabled: string[];
  resolved: string[];
  statuses: Record<string, NodeStatus>;
  version: number;
}

export interface PolicyAck {
  policy: Policy;
  version: number;
}

export interface ConfidenceMap {
  values: Record<string, number>;
  seeds: Record<string, number>;
  policy: Policy;
}

export interface DocumentCreated {
  documentId: string;
}

export interface FixtureLoaded {
  documentId: string;
  targets: string[];
}
