/** Wire payload shapes and the client-side filter mirrors. */

export type KnowledgeState = "not_known" | "partially_known" | "fully_known";
export type Polarity = "malicious" | "benign";

export interface Summary {
  rules: number;
  calls: number;
  samples: number;
  classification_version: number;
}

export interface CallRow {
  id: number;
  name: string;
  occurrence: number;
}

export interface RuleRow {
  id: number;
  occurrence: number;
  equal: boolean;
  length: number;
  knowledge_state: KnowledgeState;
  calls: string[];
}

export interface RulesPayload {
  total: number;
  page: number | null;
  classification_version: number;
  rules: RuleRow[];
}

export interface DetailPattern {
  calls: string[];
  occurrences: number[];
  count: number;
}

export interface RuleDetail extends RuleRow {
  per_trace_counts: number[];
  trace_names: string[];
  patterns: DetailPattern[];
}

export interface Histogram {
  field: string;
  edges: number[];
  counts: number[];
}

export interface KdbRule {
  id: number;
  calls: string[];
  polarity: Polarity;
  created: string;
}

export interface KdbNode {
  id: number;
  label: string;
  active: boolean;
  rules: KdbRule[];
  children: KdbNode[];
}

export interface KdbSnapshot {
  version: number;
  tree: KdbNode[];
  classification_version: number;
}

/** Mirror of the gateway's call-filter parameters; serializes 1:1. */
export interface CallFilter {
  occMin?: number;
  occMax?: number;
  pattern: string;
  caseSensitive: boolean;
  ids?: number[];
  sel?: number[];
}

/** Mirror of the gateway's rule-filter parameters; serializes 1:1. */
export interface RuleFilter {
  multiples: boolean;
  equal: boolean;
  states: KnowledgeState[];
  occMin?: number;
  occMax?: number;
  lenMin?: number;
  lenMax?: number;
}

export interface RuleQuery {
  call: CallFilter;
  rule: RuleFilter;
  sort?: string;
  page?: number;
  pageSize?: number;
}

export const emptyCallFilter = (): CallFilter => ({
  pattern: "",
  caseSensitive: false,
});

export const emptyRuleFilter = (): RuleFilter => ({
  multiples: false,
  equal: false,
  states: ["not_known", "partially_known", "fully_known"],
});

export const ALL_STATES: KnowledgeState[] = [
  "not_known",
  "partially_known",
  "fully_known",
];
