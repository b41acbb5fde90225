/** Rule overview table: one row per rule with a graphical summary strip,
 * occurrence/length bars beside exact numbers, an equal-distribution mark,
 * and a background color named by the rule's knowledge state.  Rows are
 * draggable onto the knowledge tree and clickable to select.
 *
 * Documents reach thousands of rules, so the body is windowed: only rows
 * near the scroll position materialize, with spacer blocks keeping the
 * scrollbar honest.  Row lookups used by the connection line work on the
 * full payload, not just the materialized window.
 */

import { stateColor, stateTextColor } from "../color.js";
import type { Store } from "../store.js";
import { fingerprintSlots, SUMMARY_SLOTS } from "../summary.js";
import type { CallRow, RuleRow, RulesPayload } from "../types.js";
import { barCell } from "./cells.js";

export const ROW_HEIGHT = 22;

/** Rows materialized even when the viewport height is unknown. */
export const WINDOW_MIN = 160;
const OVERSCAN = 24;

export const RULE_DRAG_TYPE = "application/x-kamas-rule";

export class OverviewTable {
  readonly root: HTMLElement;
  private body: HTMLElement;
  private rowsById = new Map<number, HTMLElement>();
  private rowIndex = new Map<number, number>();
  private callsById = new Map<number, string[]>();
  private windowStart = -1;
  private lastPayload: RulesPayload | null = null;
  private lastCalls: CallRow[] | null = null;
  private lastSelected: number | null = null;

  constructor(
    private readonly store: Store,
    doc: Document = document,
  ) {
    this.root = doc.createElement("div");
    this.root.className = "overview";
    const head = doc.createElement("div");
    head.className = "table-head";
    for (const [label, sortKey] of [
      ["rule", "id"],
      ["summary", ""],
      ["occurrence", "occurrence"],
      ["length", "length"],
      ["=", "equal"],
      ["state", "state"],
    ] as const) {
      const cell = doc.createElement("span");
      cell.textContent = label;
      cell.className = "head-cell";
      if (sortKey !== "") {
        cell.addEventListener("click", () => this.cycleSort(sortKey));
        cell.classList.add("sortable");
      }
      head.appendChild(cell);
    }
    this.body = doc.createElement("div");
    this.body.className = "table-body";
    this.root.append(head, this.body);
    // One delegated listener pair instead of two per row.
    this.body.addEventListener("click", (ev) => {
      const id = this.rowIdAt(ev.target);
      if (id !== null) void this.store.selectRule(id);
    });
    this.body.addEventListener("dragstart", (ev) => {
      const id = this.rowIdAt(ev.target);
      const calls = id === null ? undefined : this.callsById.get(id);
      if (calls !== undefined) {
        (ev as DragEvent).dataTransfer?.setData(RULE_DRAG_TYPE, JSON.stringify({ calls }));
      }
    });
    this.body.addEventListener("scroll", () => {
      if (this.lastPayload !== null && this.windowFirst(this.lastPayload.rules.length) !== this.windowStart) {
        this.render();
      }
    });
    store.subscribe(() => this.sync());
  }

  private rowIdAt(target: EventTarget | null): number | null {
    const row = (target as HTMLElement | null)?.closest?.("[data-rule-id]") as HTMLElement | null;
    return row === null || row === undefined ? null : Number(row.dataset.ruleId);
  }

  /** Rebuild only when the table data changed; a moved selection is just a
   * class toggle on two rows. */
  private sync(): void {
    if (this.store.rules !== this.lastPayload || this.store.allCalls !== this.lastCalls) {
      this.render();
      return;
    }
    const selected = this.store.state.selectedRule;
    if (selected === this.lastSelected) return;
    if (this.lastSelected !== null) this.rowsById.get(this.lastSelected)?.classList.remove("selected");
    if (selected !== null) this.rowsById.get(selected)?.classList.add("selected");
    this.lastSelected = selected;
  }

  private cycleSort(key: string): void {
    const current = this.store.state.sort;
    if (current === key) this.store.setSort("-" + key);
    else if (current === "-" + key) this.store.setSort(undefined);
    else this.store.setSort(key);
  }

  private windowSize(): number {
    const viewRows = Math.ceil(this.body.clientHeight / ROW_HEIGHT);
    return Math.max(WINDOW_MIN, viewRows + 2 * OVERSCAN);
  }

  private windowFirst(total: number): number {
    const first = Math.floor(this.body.scrollTop / ROW_HEIGHT) - OVERSCAN;
    return Math.max(0, Math.min(first, total - this.windowSize()));
  }

  render(): void {
    const doc = this.root.ownerDocument;
    const payload = this.store.rules;
    this.lastPayload = payload;
    this.lastCalls = this.store.allCalls;
    this.lastSelected = this.store.state.selectedRule;
    this.body.textContent = "";
    this.rowsById.clear();
    this.rowIndex.clear();
    this.callsById.clear();
    this.windowStart = -1;
    if (payload === null) return;

    const rows = payload.rules;
    rows.forEach((rule, idx) => {
      this.rowIndex.set(rule.id, idx);
      this.callsById.set(rule.id, rule.calls);
    });
    const idOf = this.store.nameToId();
    const maxOcc = Math.max(1, ...rows.map((r) => r.occurrence));
    const maxLen = Math.max(1, ...rows.map((r) => r.length));

    const start = this.windowFirst(rows.length);
    const end = Math.min(rows.length, start + this.windowSize());
    this.windowStart = start;

    const frag = doc.createDocumentFragment();
    frag.appendChild(this.spacer(doc, start * ROW_HEIGHT));
    for (let idx = start; idx < end; idx++) {
      const rule = rows[idx];
      const row = this.buildRow(doc, rule, idOf, maxOcc, maxLen);
      if (rule.id === this.lastSelected) row.classList.add("selected");
      this.rowsById.set(rule.id, row);
      frag.appendChild(row);
    }
    frag.appendChild(this.spacer(doc, (rows.length - end) * ROW_HEIGHT));
    this.body.appendChild(frag);
    this.body.dataset.version = String(payload.classification_version);
  }

  private spacer(doc: Document, height: number): HTMLElement {
    const pad = doc.createElement("div");
    pad.className = "spacer";
    pad.setAttribute("style", `height:${height}px`);
    return pad;
  }

  private buildRow(
    doc: Document,
    rule: RuleRow,
    idOf: Map<string, number>,
    maxOcc: number,
    maxLen: number,
  ): HTMLElement {
    const row = doc.createElement("div");
    row.className = "rule-row";
    row.dataset.ruleId = String(rule.id);
    row.dataset.state = rule.knowledge_state;
    // One style-attribute write per element: every inline style assignment
    // re-parses the declaration, which at table scale adds up.
    row.setAttribute(
      "style",
      `background:${stateColor(rule.knowledge_state)};color:${stateTextColor(rule.knowledge_state)};height:${ROW_HEIGHT}px`,
    );
    row.draggable = true;

    const idCell = doc.createElement("span");
    idCell.className = "cell id";
    idCell.textContent = String(rule.id);

    const summary = doc.createElement("span");
    summary.className = "cell summary";
    for (const slot of fingerprintSlots(rule.calls, idOf)) {
      const tick = doc.createElement("i");
      tick.className = "tick";
      tick.setAttribute("style", `left:${(100 * slot) / SUMMARY_SLOTS}%`);
      summary.appendChild(tick);
    }

    const occ = barCell(doc, rule.occurrence, maxOcc, "occurrence");
    const len = barCell(doc, rule.length, maxLen, "length");

    const equal = doc.createElement("span");
    equal.className = "cell equal";
    equal.textContent = rule.equal ? "=" : "";

    const state = doc.createElement("span");
    state.className = "cell state";
    state.textContent = rule.knowledge_state.replace("_", " ");
    state.dataset.tip = `calls: ${rule.calls.join(", ")}`;

    row.append(idCell, summary, occ, len, equal, state);
    return row;
  }

  /** Materialized row element, if the rule is inside the current window. */
  rowElement(ruleId: number): HTMLElement | null {
    return this.rowsById.get(ruleId) ?? null;
  }

  /** Position of the rule in the current table order, window or not. */
  indexOf(ruleId: number): number | null {
    return this.rowIndex.get(ruleId) ?? null;
  }

  /** How many rules the table currently presents (full payload extent). */
  get rowCount(): number {
    return this.rowIndex.size;
  }

  /**
   * Scroll the table so the given rule's row is visible (centered when the
   * viewport height is known) and materialize its window.  Used by the
   * connection line's click-to-refocus.
   */
  focusRow(ruleId: number): void {
    const idx = this.rowIndex.get(ruleId);
    if (idx === undefined) return;
    const half = this.body.clientHeight / 2;
    this.body.scrollTop = Math.max(0, idx * ROW_HEIGHT - half);
    this.render();
    this.rowsById.get(ruleId)?.scrollIntoView?.({ block: "nearest" });
  }

  get scrollBox(): HTMLElement {
    return this.body;
  }
}
