/** Call explorer: every visible call with its occurrence bar.  Clicking a
 * row toggles it in the table selection, which the rule query treats as a
 * visibility filter (the `sel` parameter).
 */

import type { Store } from "../store.js";
import type { CallRow } from "../types.js";
import { barCell } from "./cells.js";

export class CallTable {
  readonly root: HTMLElement;
  private body: HTMLElement;
  private selected = new Set<number>();
  private lastRows: CallRow[] | null = null;

  constructor(private readonly store: Store) {
    const doc = document;
    this.root = doc.createElement("div");
    this.root.className = "call-table";
    const head = doc.createElement("div");
    head.className = "table-head";
    for (const label of ["id", "call", "occurrence"]) {
      const cell = doc.createElement("span");
      cell.className = "head-cell";
      cell.textContent = label;
      head.appendChild(cell);
    }
    this.body = doc.createElement("div");
    this.body.className = "table-body";
    this.root.append(head, this.body);
    this.body.addEventListener("click", (ev) => {
      const row = (ev.target as HTMLElement | null)?.closest?.("[data-call-id]") as HTMLElement | null;
      if (row) this.toggle(Number(row.dataset.callId));
    });
    store.subscribe(() => {
      if (this.store.calls !== this.lastRows) this.render();
    });
  }

  render(): void {
    const doc = this.root.ownerDocument;
    this.body.textContent = "";
    const rows = this.store.calls;
    this.lastRows = rows;
    const maxOcc = Math.max(1, ...rows.map((r) => r.occurrence));
    const frag = doc.createDocumentFragment();
    for (const row of rows) {
      const el = doc.createElement("div");
      el.className = "call-row";
      el.dataset.callId = String(row.id);
      if (this.selected.has(row.id)) el.classList.add("selected");

      const id = doc.createElement("span");
      id.className = "cell id";
      id.textContent = String(row.id);

      const name = doc.createElement("span");
      name.className = "cell name";
      name.textContent = row.name;
      name.dataset.tip = row.name;

      el.append(id, name, barCell(doc, row.occurrence, maxOcc, "occurrence"));
      frag.appendChild(el);
    }
    this.body.appendChild(frag);
  }

  private toggle(callId: number): void {
    if (this.selected.has(callId)) this.selected.delete(callId);
    else this.selected.add(callId);
    const sel = this.selected.size === 0 ? undefined : [...this.selected].sort((a, b) => a - b);
    this.store.setCallFilter({ sel });
  }
}
