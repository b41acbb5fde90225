/** Filter panel: name pattern, occurrence/length ranges, distribution and
 * knowledge-state switches, plus the occurrence and length histograms.
 * Every edit lands in the store, which debounces the gateway round trip.
 * Histogram backgrounds use the same hue as the table bars they summarize.
 */

import { histogramHue } from "../color.js";
import type { Store } from "../store.js";
import type { Histogram, KnowledgeState } from "../types.js";
import { ALL_STATES } from "../types.js";

export class FilterPanel {
  readonly root: HTMLElement;
  private occHistBox: HTMLElement;
  private lenHistBox: HTMLElement;
  private lastOcc: Histogram | null = null;
  private lastLen: Histogram | null = null;

  constructor(private readonly store: Store) {
    const doc = document;
    this.root = doc.createElement("div");
    this.root.className = "filters";

    this.root.appendChild(this.patternRow(doc));
    this.occHistBox = this.histogramBox(doc, "occurrence");
    this.root.appendChild(this.occHistBox);
    this.root.appendChild(this.rangeRow(doc, "call occurrence", (lo, hi) =>
      store.setCallFilter({ occMin: lo, occMax: hi }),
    ));
    this.root.appendChild(this.rangeRow(doc, "rule occurrence", (lo, hi) =>
      store.setRuleFilter({ occMin: lo, occMax: hi }),
    ));
    this.lenHistBox = this.histogramBox(doc, "length");
    this.root.appendChild(this.lenHistBox);
    this.root.appendChild(this.rangeRow(doc, "rule length", (lo, hi) =>
      store.setRuleFilter({ lenMin: lo, lenMax: hi }),
    ));
    this.root.appendChild(this.switchRow(doc));
    this.root.appendChild(this.stateRow(doc));
    store.subscribe(() => this.renderHistograms());
  }

  private patternRow(doc: Document): HTMLElement {
    const row = doc.createElement("div");
    row.className = "filter-row";
    const input = doc.createElement("input");
    input.placeholder = "call name pattern (prefix r: for regex)";
    input.name = "pattern";
    input.addEventListener("input", () => this.store.setCallFilter({ pattern: input.value }));
    const cs = doc.createElement("input");
    cs.type = "checkbox";
    cs.name = "case";
    cs.addEventListener("change", () => this.store.setCallFilter({ caseSensitive: cs.checked }));
    const csLabel = doc.createElement("label");
    csLabel.append(cs, doc.createTextNode(" case"));
    row.append(input, csLabel);
    return row;
  }

  private rangeRow(doc: Document, label: string, apply: (lo?: number, hi?: number) => void): HTMLElement {
    const row = doc.createElement("div");
    row.className = "filter-row range";
    const caption = doc.createElement("span");
    caption.textContent = label;
    const lo = doc.createElement("input");
    lo.type = "number";
    lo.placeholder = "min";
    const hi = doc.createElement("input");
    hi.type = "number";
    hi.placeholder = "max";
    const onChange = () => {
      apply(
        lo.value === "" ? undefined : Number(lo.value),
        hi.value === "" ? undefined : Number(hi.value),
      );
    };
    lo.addEventListener("input", onChange);
    hi.addEventListener("input", onChange);
    row.append(caption, lo, hi);
    return row;
  }

  private switchRow(doc: Document): HTMLElement {
    const row = doc.createElement("div");
    row.className = "filter-row switches";
    for (const [label, key] of [
      ["multiples of sample count", "multiples"],
      ["equal distribution", "equal"],
    ] as const) {
      const box = doc.createElement("input");
      box.type = "checkbox";
      box.name = key;
      box.addEventListener("change", () => this.store.setRuleFilter({ [key]: box.checked }));
      const lab = doc.createElement("label");
      lab.append(box, doc.createTextNode(" " + label));
      row.appendChild(lab);
    }
    return row;
  }

  private stateRow(doc: Document): HTMLElement {
    const row = doc.createElement("div");
    row.className = "filter-row states";
    for (const state of ALL_STATES) {
      const box = doc.createElement("input");
      box.type = "checkbox";
      box.checked = true;
      box.name = state;
      box.addEventListener("change", () => {
        const states = this.store.state.ruleFilter.states;
        const next = box.checked
          ? ([...states, state] as KnowledgeState[])
          : states.filter((s) => s !== state);
        this.store.setRuleFilter({ states: ALL_STATES.filter((s) => next.includes(s)) });
      });
      const lab = doc.createElement("label");
      lab.append(box, doc.createTextNode(" " + state.replace("_", " ")));
      row.appendChild(lab);
    }
    return row;
  }

  private histogramBox(doc: Document, field: "occurrence" | "length"): HTMLElement {
    const box = doc.createElement("div");
    box.className = `histogram ${field}`;
    box.style.background = histogramHue(field);
    box.dataset.field = field;
    return box;
  }

  private renderHistograms(): void {
    if (this.store.occurrenceHist !== this.lastOcc) {
      this.lastOcc = this.store.occurrenceHist;
      this.fillHistogram(this.occHistBox, this.lastOcc);
    }
    if (this.store.lengthHist !== this.lastLen) {
      this.lastLen = this.store.lengthHist;
      this.fillHistogram(this.lenHistBox, this.lastLen);
    }
  }

  private fillHistogram(box: HTMLElement, hist: Histogram | null): void {
    const doc = this.root.ownerDocument;
    box.textContent = "";
    if (hist === null) return;
    const max = Math.max(1, ...hist.counts);
    hist.counts.forEach((count, i) => {
      const bar = doc.createElement("i");
      bar.className = "hist-bar";
      bar.style.height = `${(100 * count) / max}%`;
      bar.dataset.tip = `${hist.edges[i]}–${hist.edges[i + 1]}: ${count}`;
      box.appendChild(bar);
    });
  }
}
