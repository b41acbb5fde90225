/** Gateway client: parameter serialization and typed endpoint calls.
 *
 * The UI computes nothing itself — every number it shows came out of one
 * of these calls.
 */

import type {
  CallFilter,
  CallRow,
  Histogram,
  KdbSnapshot,
  KnowledgeState,
  Polarity,
  RuleDetail,
  RuleQuery,
  RulesPayload,
  Summary,
} from "./types.js";
import { ALL_STATES } from "./types.js";

export class GatewayError extends Error {
  constructor(
    readonly status: number,
    readonly kind: string,
    message: string,
  ) {
    super(message);
  }
}

/** Serialize a call filter into the gateway's query-parameter names. */
export function callParams(f: CallFilter): URLSearchParams {
  const p = new URLSearchParams();
  if (f.occMin !== undefined) p.set("occ_min", String(f.occMin));
  if (f.occMax !== undefined) p.set("occ_max", String(f.occMax));
  if (f.pattern !== "") p.set("pattern", f.pattern);
  if (f.caseSensitive) p.set("cs", "1");
  if (f.ids !== undefined) p.set("ids", f.ids.join(","));
  if (f.sel !== undefined) p.set("sel", f.sel.join(","));
  return p;
}

/** Serialize a full rule query on top of its call-filter parameters. */
export function ruleParams(q: RuleQuery): URLSearchParams {
  const p = callParams(q.call);
  const r = q.rule;
  if (r.multiples) p.set("multiples", "1");
  if (r.equal) p.set("equal", "1");
  if (r.states.length !== ALL_STATES.length) p.set("states", r.states.join(","));
  if (r.occMin !== undefined) p.set("rule_occ_min", String(r.occMin));
  if (r.occMax !== undefined) p.set("rule_occ_max", String(r.occMax));
  if (r.lenMin !== undefined) p.set("len_min", String(r.lenMin));
  if (r.lenMax !== undefined) p.set("len_max", String(r.lenMax));
  if (q.sort !== undefined) p.set("sort", q.sort);
  if (q.page !== undefined) p.set("page", String(q.page));
  if (q.pageSize !== undefined) p.set("page_size", String(q.pageSize));
  return p;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Everything the view layer may ask of the backend. */
export interface GatewayApi {
  loadDocument(text: string): Promise<Summary>;
  calls(f: CallFilter): Promise<CallRow[]>;
  rules(q: RuleQuery): Promise<RulesPayload>;
  ruleDetail(id: number): Promise<RuleDetail>;
  histogram(field: "occurrence" | "length", bins: number): Promise<Histogram>;
  kdb(): Promise<KdbSnapshot>;
  addNode(label: string, parentId?: number): Promise<{ node_id: number; classification_version: number }>;
  addRule(
    nodeId: number,
    calls: string[],
    polarity?: Polarity,
  ): Promise<{ rule_id: number; classification_version: number }>;
  setActive(nodeId: number, active: boolean): Promise<{ classification_version: number }>;
  removeRule(ruleId: number): Promise<{ classification_version: number }>;
  csvUrl(q: RuleQuery): string;
}

export class Gateway implements GatewayApi {
  constructor(
    private readonly base: string = "/api",
    private readonly doFetch: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async go<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.doFetch(this.base + path, init);
    if (!resp.ok) {
      let kind = "error";
      let message = resp.statusText;
      try {
        const body = (await resp.json()) as { error?: string; message?: string };
        kind = body.error ?? kind;
        message = body.message ?? message;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new GatewayError(resp.status, kind, message);
    }
    return (await resp.json()) as T;
  }

  loadDocument(text: string): Promise<Summary> {
    return this.go("/document", { method: "POST", body: text });
  }

  calls(f: CallFilter): Promise<CallRow[]> {
    return this.go(`/calls?${callParams(f)}`);
  }

  rules(q: RuleQuery): Promise<RulesPayload> {
    return this.go(`/rules?${ruleParams(q)}`);
  }

  ruleDetail(id: number): Promise<RuleDetail> {
    return this.go(`/rules/${id}`);
  }

  histogram(field: "occurrence" | "length", bins: number): Promise<Histogram> {
    return this.go(`/histograms?field=${field}&bins=${bins}`);
  }

  kdb(): Promise<KdbSnapshot> {
    return this.go("/kdb");
  }

  addNode(label: string, parentId?: number): Promise<{ node_id: number; classification_version: number }> {
    return this.go("/kdb/nodes", {
      method: "POST",
      body: JSON.stringify({ label, parent_id: parentId ?? null }),
    });
  }

  addRule(
    nodeId: number,
    calls: string[],
    polarity: Polarity = "malicious",
  ): Promise<{ rule_id: number; classification_version: number }> {
    return this.go(`/kdb/nodes/${nodeId}/rules`, {
      method: "POST",
      body: JSON.stringify({ calls, polarity }),
    });
  }

  setActive(nodeId: number, active: boolean): Promise<{ classification_version: number }> {
    return this.go(`/kdb/nodes/${nodeId}`, {
      method: "PATCH",
      body: JSON.stringify({ active }),
    });
  }

  removeRule(ruleId: number): Promise<{ classification_version: number }> {
    return this.go(`/kdb/rules/${ruleId}`, { method: "DELETE" });
  }

  csvUrl(q: RuleQuery): string {
    return `${this.base}/export/rules.csv?${ruleParams(q)}`;
  }
}

export type { KnowledgeState };
