/** End-to-end workbench behavior against the frozen 794-rule corpus:
 * load-and-render speed, the arc cap, drag-to-knowledge-base recoloring
 * in one round trip, connection-line refocus, tree interactions, and the
 * histogram/bar hue invariant.
 */

import { beforeEach, describe, expect, it } from "vitest";

import { THREE_STEP } from "../src/color.js";
import { buildWorkbench, type Workbench } from "../src/main.js";
import { Store } from "../src/store.js";
import { ROW_HEIGHT, WINDOW_MIN } from "../src/components/overview.js";
import { loadFixture, MockGateway } from "./mock.js";

const fx = loadFixture();

interface Rig {
  gw: MockGateway;
  store: Store;
  wb: Workbench;
}

function rig(): Rig {
  document.body.innerHTML = "";
  const mount = document.createElement("div");
  document.body.appendChild(mount);
  const gw = new MockGateway(structuredClone(fx));
  const store = new Store(gw, 5);
  store.state.pageSize = 1000;
  const wb = buildWorkbench(store, mount);
  return { gw, store, wb };
}

async function loaded(): Promise<Rig> {
  const r = rig();
  await r.store.loadDocument("synthetic corpus");
  await r.store.idle();
  return r;
}

/** The color a hex value normalizes to in this DOM implementation. */
function normalized(hex: string): string {
  const probe = document.createElement("i");
  probe.style.background = hex;
  return probe.style.background;
}

class FakeDataTransfer {
  private data = new Map<string, string>();
  setData(type: string, value: string): void {
    this.data.set(type, value);
  }
  getData(type: string): string {
    return this.data.get(type) ?? "";
  }
}

function withTransfer(type: string, dt: FakeDataTransfer): Event {
  const ev = new Event(type, { bubbles: true, cancelable: true });
  Object.defineProperty(ev, "dataTransfer", { value: dt });
  return ev;
}

describe("loading the study corpus", () => {
  it("presents all 794 rules within one second of load", async () => {
    document.body.innerHTML = "";
    const mount = document.createElement("div");
    document.body.appendChild(mount);
    const gw = new MockGateway(structuredClone(fx));
    const t0 = performance.now();
    const store = new Store(gw, 5);
    store.state.pageSize = 1000;
    const wb = buildWorkbench(store, mount);
    await store.loadDocument("synthetic corpus");
    await store.idle();
    const elapsed = performance.now() - t0;

    // The whole corpus is in the table: every rule has a position, the
    // scroll extent spans all of them, and the top window is materialized.
    expect(store.summary?.rules).toBe(794);
    expect(wb.overview.rowCount).toBe(794);
    const body = wb.overview.scrollBox;
    const spacers = body.querySelectorAll<HTMLElement>(".spacer");
    const padding = [...spacers].reduce((sum, el) => sum + parseFloat(el.style.height), 0);
    const rows = body.querySelectorAll(".rule-row");
    expect(rows).toHaveLength(Math.min(794, WINDOW_MIN));
    expect(padding + rows.length * ROW_HEIGHT).toBe(794 * ROW_HEIGHT);
    expect(elapsed).toBeLessThan(1000);

    // Rows outside the initial window materialize on demand.
    const last = store.rules!.rules[793];
    wb.overview.focusRow(last.id);
    expect(body.querySelector(`[data-rule-id="${last.id}"]`)).not.toBeNull();
  });

  it("shows the document summary in the toolbar", async () => {
    const { wb } = await loaded();
    expect(wb.root.querySelector(".status")?.textContent).toContain("794 rules");
  });

  it("renders every call row with an occurrence bar", async () => {
    const { wb } = await loaded();
    expect(wb.calls.root.querySelectorAll(".call-row")).toHaveLength(660);
    expect(wb.calls.root.querySelector(".call-row .bar")).not.toBeNull();
  });

  it("draws fingerprint ticks in the summary strip", async () => {
    const { wb } = await loaded();
    const first = wb.overview.root.querySelector(".rule-row .summary");
    expect(first).not.toBeNull();
    expect(first!.querySelectorAll(".tick").length).toBeGreaterThan(0);
  });

  it("backgrounds unknown rules with the light end of the red scale", async () => {
    const { wb } = await loaded();
    const row = wb.overview.root.querySelector<HTMLElement>(".rule-row")!;
    expect(row.dataset.state).toBe("not_known");
    expect(row.style.background).toBe(normalized(THREE_STEP.not_known));
  });
});

describe("rule detail and arcs", () => {
  it("caps the arc diagram at five hue layers", async () => {
    const { store, wb } = await loaded();
    await store.selectRule(fx.max_pattern_rule);
    await store.idle();
    const svg = wb.detail.root.querySelector<SVGElement>(".arc-gutter")!;
    const paths = [...svg.querySelectorAll<SVGElement>(".arc")];
    expect(paths.length).toBeGreaterThan(0);
    const layers = new Set(paths.map((p) => p.dataset.layer));
    expect(layers.size).toBeLessThanOrEqual(5);
    expect(layers.size).toBe(5);
    const hues = new Set(paths.map((p) => p.getAttribute("stroke")));
    expect(hues.size).toBe(5);
  });

  it("lists the rule's calls in sequence", async () => {
    const { store, wb } = await loaded();
    await store.selectRule(fx.max_pattern_rule);
    await store.idle();
    const rows = wb.detail.root.querySelectorAll(".detail-row");
    expect(rows).toHaveLength(fx.details[String(fx.max_pattern_rule)].length);
    expect(rows[0].textContent).toBe(fx.details[String(fx.max_pattern_rule)].calls[0]);
  });

  it("renders a plain list with no arcs when the rule has no repeats", async () => {
    const { store, wb } = await loaded();
    expect(fx.plain_rule).not.toBeNull();
    await store.selectRule(fx.plain_rule!);
    await store.idle();
    expect(wb.detail.root.querySelectorAll(".detail-row").length).toBeGreaterThan(0);
    expect(wb.detail.root.querySelectorAll(".arc")).toHaveLength(0);
  });
});

describe("connection line", () => {
  it("shows no line without a selection", async () => {
    const { wb } = await loaded();
    expect(wb.connection.root.style.display).toBe("none");
  });

  it("re-targets when the selection changes", async () => {
    const { store, wb } = await loaded();
    await store.selectRule(fx.arc_rule);
    await store.idle();
    expect(wb.connection.root.dataset.target).toBe(String(fx.arc_rule));
    await store.selectRule(fx.plain_rule!);
    await store.idle();
    expect(wb.connection.root.dataset.target).toBe(String(fx.plain_rule));
  });

  it("brings the selected row back into view on click", async () => {
    const { store, wb } = await loaded();
    await store.selectRule(fx.arc_rule);
    await store.idle();
    const body = wb.overview.scrollBox;
    body.scrollTop = 4000; // user scrolled the selection far away
    wb.connection.root.querySelector("line")!.dispatchEvent(new Event("click", { bubbles: true }));
    const idx = store.rules!.rules.findIndex((r) => r.id === fx.arc_rule);
    expect(idx).toBeGreaterThanOrEqual(0);
    expect(body.scrollTop).toBe(Math.max(0, idx * ROW_HEIGHT - body.clientHeight / 2));
    expect(body.scrollTop).not.toBe(4000);
  });
});

describe("knowledge tree", () => {
  it("unfolds a hovered category", async () => {
    const { wb } = await loaded();
    expect(wb.tree.root.querySelector('[data-node-id="2"]')).toBeNull();
    const rootHead = wb.tree.root.querySelector('[data-node-id="1"] .kdb-head')!;
    rootHead.dispatchEvent(new Event("mouseenter"));
    expect(wb.tree.root.querySelector('[data-node-id="2"]')).not.toBeNull();
  });

  it("shows subtree rule counts", async () => {
    const { wb } = await loaded();
    const count = wb.tree.root.querySelector('[data-node-id="1"] .kdb-count')!;
    expect(count.textContent).toBe("0");
  });

  it("recolors a dropped rule within one table round trip", async () => {
    const { gw, store, wb } = await loaded();
    const versionBefore = gw.version;

    // Unfold the root so the drop target is visible.
    wb.tree.root.querySelector('[data-node-id="1"] .kdb-head')!.dispatchEvent(new Event("mouseenter"));

    const row = wb.overview.root.querySelector<HTMLElement>(`[data-rule-id="${fx.arc_rule}"]`)!;
    expect(row.dataset.state).toBe("not_known");

    const dt = new FakeDataTransfer();
    row.dispatchEvent(withTransfer("dragstart", dt));
    const fetchesBefore = gw.rulesFetches;
    wb.tree.root
      .querySelector(`[data-node-id="${fx.drop_target_node}"] .kdb-head`)!
      .dispatchEvent(withTransfer("drop", dt));
    await store.idle();

    // Exactly one follow-up fetch, and the row now wears the dark end.
    expect(gw.rulesFetches).toBe(fetchesBefore + 1);
    const recolored = wb.overview.root.querySelector<HTMLElement>(`[data-rule-id="${fx.arc_rule}"]`)!;
    expect(recolored.dataset.state).toBe("fully_known");
    expect(recolored.style.background).toBe(normalized(THREE_STEP.fully_known));
    expect(wb.overview.scrollBox.dataset.version).toBe(String(versionBefore + 1));

    // The stored rule is visible under its category with updated counts.
    store.setExpanded(fx.drop_target_node, true);
    expect(wb.tree.root.querySelector("[data-kdb-rule-id]")).not.toBeNull();
    expect(wb.tree.root.querySelector('[data-node-id="1"] .kdb-count')!.textContent).toBe("1");
  });

  it("stores a partial rule from a dragged call slice", async () => {
    const { gw, store, wb } = await loaded();
    await store.selectRule(fx.max_pattern_rule);
    await store.idle();
    wb.tree.root.querySelector('[data-node-id="1"] .kdb-head')!.dispatchEvent(new Event("mouseenter"));

    // Select calls 2..4 of the detail list, then drag the slice.
    const rows = wb.detail.root.querySelectorAll<HTMLElement>(".detail-row");
    rows[2].dispatchEvent(new Event("click", { bubbles: true }));
    const shiftClick = new Event("click", { bubbles: true });
    Object.defineProperty(shiftClick, "shiftKey", { value: true });
    wb.detail.root.querySelectorAll<HTMLElement>(".detail-row")[4].dispatchEvent(shiftClick);

    const dt = new FakeDataTransfer();
    wb.detail.root.querySelectorAll<HTMLElement>(".detail-row")[3].dispatchEvent(withTransfer("dragstart", dt));
    wb.tree.root
      .querySelector(`[data-node-id="${fx.drop_target_node}"] .kdb-head`)!
      .dispatchEvent(withTransfer("drop", dt));
    await store.idle();

    const detailCalls = fx.details[String(fx.max_pattern_rule)].calls;
    const stored = gw
      .kdb()
      .then((snap) => snap.tree[0].children.find((n) => n.id === fx.drop_target_node)!.rules[0].calls);
    await expect(stored).resolves.toEqual(detailCalls.slice(2, 5));
  });

  it("surfaces a duplicate drop as an inline conflict", async () => {
    const { store, wb } = await loaded();
    await store.addRuleToNode(fx.drop_target_node, ["x_call", "y_call"]);
    await store.idle();
    await store.addRuleToNode(fx.drop_target_node, ["x_call", "y_call"]);
    await store.idle();
    expect(store.kdbError).toMatch(/already carries/);
    expect(wb.tree.root.querySelector(".kdb-error")!.textContent).toMatch(/already carries/);
  });

  it("deactivating the category recolors its rules back", async () => {
    const { store, wb } = await loaded();
    wb.tree.root.querySelector('[data-node-id="1"] .kdb-head')!.dispatchEvent(new Event("mouseenter"));
    const row = () => wb.overview.root.querySelector<HTMLElement>(`[data-rule-id="${fx.arc_rule}"]`)!;
    const calls = fx.rules.rules.find((r) => r.id === fx.arc_rule)!.calls;

    await store.addRuleToNode(fx.drop_target_node, calls);
    await store.idle();
    expect(row().dataset.state).toBe("fully_known");

    const toggle = wb.tree.root.querySelector<HTMLInputElement>(
      `[data-node-id="${fx.drop_target_node}"] .kdb-head input[type="checkbox"]`,
    )!;
    toggle.checked = false;
    toggle.dispatchEvent(new Event("change", { bubbles: true }));
    await store.idle();
    expect(row().dataset.state).toBe("not_known");
    expect(
      wb.tree.root.querySelector(`[data-node-id="${fx.drop_target_node}"] .kdb-head`)!.classList.contains("inactive"),
    ).toBe(true);
  });

  it("adds categories through the inline form", async () => {
    const { gw, store, wb } = await loaded();
    const form = wb.tree.root.querySelector<HTMLFormElement>(".kdb-add")!;
    form.querySelector<HTMLInputElement>('input[name="label"]')!.value = "network";
    form.dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
    await store.idle();
    const snap = await gw.kdb();
    expect(snap.tree.some((n) => n.label === "network")).toBe(true);
  });
});

describe("panel chrome", () => {
  it("matches histogram backgrounds to their table-bar hue", async () => {
    const { wb } = await loaded();
    const hist = wb.filters.root.querySelector<HTMLElement>(".histogram.occurrence")!;
    const bar = wb.overview.root.querySelector<HTMLElement>(".bar-cell.occurrence .bar")!;
    expect(hist.style.background).toBe(bar.style.background);
    const callBar = wb.calls.root.querySelector<HTMLElement>(".bar-cell.occurrence .bar")!;
    expect(hist.style.background).toBe(callBar.style.background);
  });

  it("keeps tooltips up while hovered", async () => {
    const { wb } = await loaded();
    const cell = wb.overview.root.querySelector<HTMLElement>(".rule-row .state")!;
    cell.dispatchEvent(new Event("mouseover", { bubbles: true }));
    const tip = document.querySelector<HTMLElement>(".tooltip")!;
    expect(tip.style.display).toBe("block");
    expect(tip.textContent).toContain("calls:");
    await new Promise((res) => setTimeout(res, 60));
    expect(tip.style.display).toBe("block"); // no auto-hide while hovering
    cell.dispatchEvent(new Event("mouseout", { bubbles: true }));
    expect(tip.style.display).toBe("none");
  });

  it("swaps the panel order on request", async () => {
    const { wb } = await loaded();
    const panels = wb.root.querySelector(".panels")!;
    expect(panels.classList.contains("swapped")).toBe(false);
    wb.root.querySelector<HTMLButtonElement>(".toolbar button")!.click();
    expect(panels.classList.contains("swapped")).toBe(true);
  });

  it("keeps the CSV export link on the current rule view", async () => {
    const { store, wb } = await loaded();
    const link = wb.root.querySelector<HTMLAnchorElement>(".csv-export")!;
    expect(link.getAttribute("href")).toContain("/api/export/rules.csv");
    store.setRuleFilter({ lenMin: 5 });
    await store.flush();
    await store.idle();
    expect(link.getAttribute("href")).toContain("len_min=5");
  });

  it("toggling a call row narrows the call table via the selection filter", async () => {
    const { store, wb } = await loaded();
    const firstCall = fx.calls[0];
    wb.calls.root.querySelector<HTMLElement>(`[data-call-id="${firstCall.id}"]`)!.click();
    await store.flush();
    await store.idle();
    expect(store.state.callFilter.sel).toEqual([firstCall.id]);
    expect(wb.calls.root.querySelectorAll(".call-row")).toHaveLength(1);
  });
});
