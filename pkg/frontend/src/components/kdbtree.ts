/** Knowledge-base tree panel.
 *
 * Shows every category with its activation toggle and the number of rules
 * in its subtree.  Hovering a folded category unfolds it, so a drag can
 * descend into the tree without dropping.  Rule rows from the overview and
 * call slices from the detail panel can be dropped onto a category to store
 * a new rule; the gateway answers with a fresh classification version and
 * the tables recolor on the follow-up fetch.  Gateway rejections (duplicate
 * patterns, unknown nodes) appear inline under the tree.
 */

import type { Store } from "../store.js";
import type { KdbNode } from "../types.js";
import { RULE_DRAG_TYPE } from "./overview.js";
import { SLICE_DRAG_TYPE } from "./detail.js";

export function subtreeRuleCount(node: KdbNode): number {
  let n = node.rules.length;
  for (const child of node.children) n += subtreeRuleCount(child);
  return n;
}

export class KdbTree {
  readonly root: HTMLElement;
  private list: HTMLElement;
  private errorBox: HTMLElement;

  constructor(private readonly store: Store) {
    const doc = document;
    this.root = doc.createElement("div");
    this.root.className = "kdb-tree";
    this.list = doc.createElement("div");
    this.list.className = "kdb-nodes";
    this.errorBox = doc.createElement("div");
    this.errorBox.className = "kdb-error";
    const addForm = this.buildAddForm(doc);
    this.root.append(this.list, addForm, this.errorBox);
    store.subscribe(() => this.render());
  }

  private buildAddForm(doc: Document): HTMLElement {
    const form = doc.createElement("form");
    form.className = "kdb-add";
    const label = doc.createElement("input");
    label.name = "label";
    label.placeholder = "new category";
    const parent = doc.createElement("input");
    parent.name = "parent";
    parent.placeholder = "parent id";
    parent.size = 4;
    const btn = doc.createElement("button");
    btn.type = "submit";
    btn.textContent = "add category";
    form.append(label, parent, btn);
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      const text = label.value.trim();
      if (text === "") return;
      const pid = parent.value.trim() === "" ? undefined : Number(parent.value);
      void this.store.addNode(text, pid);
      label.value = "";
    });
    return form;
  }

  render(): void {
    this.list.textContent = "";
    const snap = this.store.kdb;
    this.errorBox.textContent = this.store.kdbError ?? "";
    if (snap === null) return;
    for (const node of snap.tree) this.list.appendChild(this.renderNode(node, true));
    this.list.dataset.version = String(snap.classification_version);
  }

  private renderNode(node: KdbNode, parentActive: boolean): HTMLElement {
    const doc = this.root.ownerDocument;
    const box = doc.createElement("div");
    box.className = "kdb-node";
    box.dataset.nodeId = String(node.id);

    const head = doc.createElement("div");
    head.className = "kdb-head";
    const effective = parentActive && node.active;
    if (!effective) head.classList.add("inactive");

    const toggle = doc.createElement("input");
    toggle.type = "checkbox";
    toggle.checked = node.active;
    toggle.title = "active";
    toggle.addEventListener("change", () => void this.store.setNodeActive(node.id, toggle.checked));

    const name = doc.createElement("span");
    name.className = "kdb-label";
    name.textContent = `${node.label} [${node.id}]`;

    const count = doc.createElement("span");
    count.className = "kdb-count";
    count.textContent = String(subtreeRuleCount(node));
    count.dataset.tip = "rules in this subtree";

    head.append(toggle, name, count);
    box.appendChild(head);

    // Drop target + hover-unfold.
    head.addEventListener("dragover", (ev) => ev.preventDefault());
    head.addEventListener("dragenter", () => this.store.setExpanded(node.id, true));
    head.addEventListener("mouseenter", () => this.store.setExpanded(node.id, true));
    head.addEventListener("drop", (ev) => {
      ev.preventDefault();
      const dt = ev.dataTransfer;
      if (!dt) return;
      const raw = dt.getData(RULE_DRAG_TYPE) || dt.getData(SLICE_DRAG_TYPE);
      if (raw === "") return;
      let calls: unknown;
      try {
        calls = (JSON.parse(raw) as { calls?: unknown }).calls;
      } catch {
        return;
      }
      if (Array.isArray(calls) && calls.every((c) => typeof c === "string")) {
        void this.store.addRuleToNode(node.id, calls as string[]);
      }
    });

    const open = this.store.state.expanded.has(node.id);
    if (open) {
      for (const rule of node.rules) box.appendChild(this.renderRule(rule.id, rule.calls, rule.polarity));
      for (const child of node.children) box.appendChild(this.renderNode(child, effective));
    } else if (node.children.length > 0 || node.rules.length > 0) {
      head.classList.add("folded");
    }
    return box;
  }

  private renderRule(id: number, calls: string[], polarity: string): HTMLElement {
    const doc = this.root.ownerDocument;
    const row = doc.createElement("div");
    row.className = "kdb-rule";
    row.dataset.kdbRuleId = String(id);
    const text = doc.createElement("span");
    text.textContent = `${polarity === "benign" ? "○" : "●"} ${calls.join(" → ")}`;
    const del = doc.createElement("button");
    del.type = "button";
    del.textContent = "×";
    del.title = "remove rule";
    del.addEventListener("click", () => void this.store.removeKdbRule(id));
    row.append(text, del);
    return row;
  }
}
