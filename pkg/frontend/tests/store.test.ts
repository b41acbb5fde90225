import { describe, expect, it } from "vitest";

import type { GatewayApi } from "../src/client.js";
import { GatewayError } from "../src/client.js";
import { DEBOUNCE_MS, Store } from "../src/store.js";
import type { RuleDetail, RulesPayload } from "../src/types.js";

const sleep = (ms: number) => new Promise((res) => setTimeout(res, ms));

function payload(version: number, firstRuleId: number): RulesPayload {
  return {
    total: 1,
    page: 0,
    classification_version: version,
    rules: [
      {
        id: firstRuleId,
        occurrence: 4,
        equal: false,
        length: 2,
        knowledge_state: "not_known",
        calls: ["a", "b"],
      },
    ],
  };
}

function detail(id: number): RuleDetail {
  return {
    ...payload(1, id).rules[0],
    id,
    per_trace_counts: [4],
    trace_names: ["sample00"],
    patterns: [],
  };
}

/** Gateway stub whose every method resolves instantly unless overridden. */
function stub(): GatewayApi & { rulesCalls: number; callsCalls: number; kdbCalls: number } {
  const gw = {
    rulesCalls: 0,
    callsCalls: 0,
    kdbCalls: 0,
    async loadDocument() {
      return { rules: 1, calls: 2, samples: 1, classification_version: 1 };
    },
    async calls() {
      gw.callsCalls++;
      return [];
    },
    async rules() {
      gw.rulesCalls++;
      return payload(1, 1);
    },
    async ruleDetail(id: number) {
      return detail(id);
    },
    async histogram(field: "occurrence" | "length") {
      return { field, edges: [0, 1], counts: [1] };
    },
    async kdb() {
      gw.kdbCalls++;
      return { version: 1, tree: [], classification_version: 1 };
    },
    async addNode() {
      return { node_id: 2, classification_version: 2 };
    },
    async addRule() {
      return { rule_id: 1, classification_version: 2 };
    },
    async setActive() {
      return { classification_version: 2 };
    },
    async removeRule() {
      return { classification_version: 2 };
    },
    csvUrl: () => "/api/export/rules.csv",
  };
  return gw;
}

describe("filter debounce", () => {
  it("stays within the 200 ms budget", () => {
    expect(DEBOUNCE_MS).toBeLessThanOrEqual(200);
  });

  it("coalesces rapid filter edits into one query", async () => {
    const gw = stub();
    const store = new Store(gw, 25);
    store.setCallFilter({ pattern: "a" });
    store.setCallFilter({ pattern: "ab" });
    store.setRuleFilter({ multiples: true });
    expect(gw.rulesCalls).toBe(0);
    await sleep(60);
    await store.idle();
    expect(gw.rulesCalls).toBe(1);
    expect(store.state.callFilter.pattern).toBe("ab");
    expect(store.state.ruleFilter.multiples).toBe(true);
  });

  it("flush() runs a pending refresh immediately", async () => {
    const gw = stub();
    const store = new Store(gw, 10_000);
    store.setCallFilter({ pattern: "x" });
    expect(gw.rulesCalls).toBe(0);
    await store.flush();
    expect(gw.rulesCalls).toBe(1);
  });

  it("resets to the first page when filters change", async () => {
    const gw = stub();
    const store = new Store(gw, 5);
    store.setPage(7);
    await store.idle();
    store.setRuleFilter({ equal: true });
    await store.idle();
    expect(store.state.page).toBe(0);
  });
});

describe("latest-wins reconciliation", () => {
  it("never lets a stale response overwrite a newer one", async () => {
    const gw = stub();
    const waiting: Array<(p: RulesPayload) => void> = [];
    gw.rules = () => new Promise<RulesPayload>((res) => waiting.push(res));
    const store = new Store(gw, 5);

    store.setSort("occurrence"); // request #1, will resolve last
    store.setSort("-occurrence"); // request #2, resolves first
    await sleep(0);
    expect(waiting).toHaveLength(2);

    waiting[1](payload(1, 222));
    await sleep(0);
    expect(store.rules?.rules[0]?.id).toBe(222);

    waiting[0](payload(1, 111)); // stale; must be dropped
    await sleep(0);
    expect(store.rules?.rules[0]?.id).toBe(222);
    await store.idle();
  });

  it("drops a detail payload when the selection has moved on", async () => {
    const gw = stub();
    const waiting: Array<{ id: number; res: (d: RuleDetail) => void }> = [];
    gw.ruleDetail = (id: number) => new Promise<RuleDetail>((res) => waiting.push({ id, res }));
    const store = new Store(gw, 5);

    void store.selectRule(40);
    void store.selectRule(102);
    await sleep(0);
    expect(waiting.map((w) => w.id)).toEqual([40, 102]);

    waiting[1].res(detail(102));
    await sleep(0);
    expect(store.detail?.id).toBe(102);

    waiting[0].res(detail(40)); // stale selection; must be dropped
    await sleep(0);
    expect(store.detail?.id).toBe(102);
    await store.idle();
  });

  it("clears the detail when the selection is cleared", async () => {
    const gw = stub();
    const store = new Store(gw, 5);
    await store.selectRule(7);
    expect(store.detail?.id).toBe(7);
    await store.selectRule(null);
    expect(store.detail).toBeNull();
  });
});

describe("knowledge-base mutations", () => {
  it("follows a mutation with exactly one table refresh round trip", async () => {
    const gw = stub();
    const store = new Store(gw, 5);
    await store.loadDocument("doc");
    await store.idle();
    const before = gw.rulesCalls;
    const beforeKdb = gw.kdbCalls;
    await store.addRuleToNode(2, ["a", "b"]);
    await store.idle();
    expect(gw.rulesCalls).toBe(before + 1);
    expect(gw.kdbCalls).toBe(beforeKdb + 1);
  });

  it("surfaces gateway conflicts inline instead of refreshing", async () => {
    const gw = stub();
    gw.addRule = async () => {
      throw new GatewayError(409, "ConflictError", "node already carries this pattern");
    };
    const store = new Store(gw, 5);
    await store.loadDocument("doc");
    await store.idle();
    const before = gw.rulesCalls;
    await store.addRuleToNode(2, ["a", "b"]);
    expect(store.kdbError).toMatch(/already carries/);
    expect(gw.rulesCalls).toBe(before);
    // The next successful mutation clears the error.
    gw.addRule = async () => ({ rule_id: 9, classification_version: 3 });
    await store.addRuleToNode(2, ["a"]);
    await store.idle();
    expect(store.kdbError).toBeNull();
  });

  it("refreshes the open detail after a mutation", async () => {
    const gw = stub();
    const served: number[] = [];
    gw.ruleDetail = async (id: number) => {
      served.push(id);
      return detail(id);
    };
    const store = new Store(gw, 5);
    await store.loadDocument("doc");
    await store.selectRule(40);
    await store.idle();
    await store.setNodeActive(1, false);
    await store.idle();
    expect(served).toEqual([40, 40]);
  });
});
