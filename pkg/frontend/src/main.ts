/** Workbench assembly: knowledge tree | rule explorer | call explorer.
 *
 * The rule explorer's middle column stacks the overview table, the
 * connection line, and the detail panel with its arc diagram.  A toolbar
 * hosts the document loader, the CSV export link, and the layout-swap
 * toggle that reverses the panel order for readers who prefer the
 * knowledge tree on the right.
 */

import { Gateway } from "./client.js";
import { Store } from "./store.js";
import { CallTable } from "./components/calls.js";
import { ConnectionLine } from "./components/connection.js";
import { DetailPanel } from "./components/detail.js";
import { FilterPanel } from "./components/filters.js";
import { KdbTree } from "./components/kdbtree.js";
import { OverviewTable } from "./components/overview.js";

export interface Workbench {
  store: Store;
  root: HTMLElement;
  overview: OverviewTable;
  detail: DetailPanel;
  connection: ConnectionLine;
  tree: KdbTree;
  calls: CallTable;
  filters: FilterPanel;
}

export function buildWorkbench(store: Store, mount: HTMLElement): Workbench {
  const doc = mount.ownerDocument;
  const root = doc.createElement("div");
  root.className = "workbench";

  const toolbar = doc.createElement("div");
  toolbar.className = "toolbar";
  const fileInput = doc.createElement("input");
  fileInput.type = "file";
  fileInput.addEventListener("change", () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    void file.text().then((text) => store.loadDocument(text));
  });
  const swap = doc.createElement("button");
  swap.type = "button";
  swap.textContent = "swap layout";
  swap.addEventListener("click", () => store.toggleLayout());
  const exportLink = doc.createElement("a");
  exportLink.className = "csv-export";
  exportLink.textContent = "export csv";
  const status = doc.createElement("span");
  status.className = "status";
  toolbar.append(fileInput, swap, exportLink, status);

  const overview = new OverviewTable(store, doc);
  const detail = new DetailPanel(store);
  const connection = new ConnectionLine(store, overview);
  const tree = new KdbTree(store);
  const calls = new CallTable(store);
  const filters = new FilterPanel(store);

  const knowledgePanel = panel(doc, "knowledge base", tree.root);
  const rulePanel = panel(doc, "rules", overview.root, connection.root, detail.root);
  const callPanel = panel(doc, "calls", filters.root, calls.root);

  const panels = doc.createElement("div");
  panels.className = "panels";
  panels.append(knowledgePanel, rulePanel, callPanel);

  root.append(toolbar, panels);
  mount.appendChild(root);

  store.subscribe(() => {
    panels.classList.toggle("swapped", store.state.layoutSwapped);
    const s = store.summary;
    status.textContent = s === null ? "no document" : `${s.rules} rules · ${s.calls} calls · ${s.samples} samples`;
    exportLink.setAttribute("href", store.csvUrl());
  });

  installTooltips(root);
  return { store, root, overview, detail, connection, tree, calls, filters };
}

function panel(doc: Document, title: string, ...children: Element[]): HTMLElement {
  const el = doc.createElement("section");
  el.className = "panel";
  const head = doc.createElement("h2");
  head.textContent = title;
  el.append(head, ...children);
  return el;
}

/**
 * Tooltips for any element carrying data-tip.  The bubble appears on
 * hover and stays up for as long as the pointer remains — it never times
 * out on its own.
 */
export function installTooltips(root: HTMLElement): void {
  const doc = root.ownerDocument;
  const bubble = doc.createElement("div");
  bubble.className = "tooltip";
  bubble.style.display = "none";
  root.appendChild(bubble);
  root.addEventListener("mouseover", (ev) => {
    const target = (ev.target as HTMLElement | null)?.closest?.("[data-tip]") as HTMLElement | null;
    if (!target) return;
    bubble.textContent = target.dataset.tip ?? "";
    bubble.style.display = "block";
  });
  root.addEventListener("mouseout", (ev) => {
    const target = (ev.target as HTMLElement | null)?.closest?.("[data-tip]");
    if (target) bubble.style.display = "none";
  });
  root.addEventListener("mousemove", (ev) => {
    if (bubble.style.display === "none") return;
    bubble.style.left = `${ev.clientX + 12}px`;
    bubble.style.top = `${ev.clientY + 12}px`;
  });
}

export function start(): void {
  const mount = document.getElementById("app");
  if (mount === null) throw new Error("missing #app mount point");
  // When the static shell is served from a different origin than the data
  // service, set window.__kamasApi to the service's /api base before load.
  const store = new Store(new Gateway(window.__kamasApi));
  buildWorkbench(store, mount);
}

declare global {
  interface Window {
    __kamasAuto?: boolean;
    __kamasApi?: string;
  }
}

if (typeof window !== "undefined" && window.__kamasAuto !== false && typeof document !== "undefined") {
  if (document.getElementById("app") !== null) start();
}
