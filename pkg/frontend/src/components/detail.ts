/** Rule detail: the selected rule's calls in sequence, with an arc diagram
 * in the left gutter connecting consecutive occurrences of each repeated
 * pattern (at most five layers, one hue per pattern).  A contiguous slice
 * of calls can be selected by click / shift-click and dragged onto the
 * knowledge tree to store a partial rule.
 */

import { buildArcs, MAX_ARC_LAYERS } from "../arcs.js";
import type { Store } from "../store.js";
import type { RuleDetail } from "../types.js";

export const SLICE_DRAG_TYPE = "application/x-kamas-calls";
export const DETAIL_ROW_HEIGHT = 20;
const GUTTER_WIDTH = 90;

export class DetailPanel {
  readonly root: HTMLElement;
  private list: HTMLElement;
  private svg: SVGSVGElement;
  private anchor: number | null = null;
  private sliceStart = -1;
  private sliceEnd = -1;
  private lastDetail: RuleDetail | null = null;

  constructor(private readonly store: Store) {
    const doc = document;
    this.root = doc.createElement("div");
    this.root.className = "detail";
    this.svg = doc.createElementNS("http://www.w3.org/2000/svg", "svg");
    this.svg.setAttribute("class", "arc-gutter");
    this.svg.setAttribute("width", String(GUTTER_WIDTH));
    this.list = doc.createElement("div");
    this.list.className = "detail-list";
    this.root.append(this.svg, this.list);
    store.subscribe(() => {
      if (this.store.detail !== this.lastDetail) {
        // A different rule's content: any call-slice selection is stale.
        this.anchor = null;
        this.sliceStart = this.sliceEnd = -1;
        this.render();
      }
    });
  }

  render(): void {
    const doc = this.root.ownerDocument;
    const detail = this.store.detail;
    this.lastDetail = detail;
    this.list.textContent = "";
    this.svg.textContent = "";
    if (detail === null) {
      this.anchor = null;
      this.sliceStart = this.sliceEnd = -1;
      return;
    }
    detail.calls.forEach((name, idx) => {
      const row = doc.createElement("div");
      row.className = "detail-row";
      row.dataset.index = String(idx);
      row.style.height = `${DETAIL_ROW_HEIGHT}px`;
      row.textContent = name;
      row.draggable = true;
      if (idx >= this.sliceStart && idx <= this.sliceEnd) row.classList.add("in-slice");
      row.addEventListener("click", (ev) => this.extendSlice(idx, ev.shiftKey));
      row.addEventListener("dragstart", (ev) => {
        const calls = this.sliceCalls() ?? [name];
        ev.dataTransfer?.setData(SLICE_DRAG_TYPE, JSON.stringify({ calls }));
      });
      this.list.appendChild(row);
    });
    this.drawArcs(detail.patterns.length, detail.calls.length);
  }

  private drawArcs(patternCount: number, rowCount: number): void {
    const detail = this.store.detail;
    if (detail === null) return;
    const arcs = buildArcs(detail.patterns);
    this.svg.setAttribute("height", String(rowCount * DETAIL_ROW_HEIGHT));
    const doc = this.root.ownerDocument;
    for (const arc of arcs) {
      const y1 = arc.from * DETAIL_ROW_HEIGHT + DETAIL_ROW_HEIGHT / 2;
      const y2 = arc.to * DETAIL_ROW_HEIGHT + DETAIL_ROW_HEIGHT / 2;
      // Deeper layers bow out further so the five hues stay separable.
      const bow = 14 + arc.layer * ((GUTTER_WIDTH - 18) / MAX_ARC_LAYERS);
      const path = doc.createElementNS("http://www.w3.org/2000/svg", "path");
      path.setAttribute(
        "d",
        `M ${GUTTER_WIDTH} ${y1} C ${GUTTER_WIDTH - bow} ${y1}, ${GUTTER_WIDTH - bow} ${y2}, ${GUTTER_WIDTH} ${y2}`,
      );
      path.setAttribute("class", "arc");
      path.dataset.layer = String(arc.layer);
      path.setAttribute("stroke", arc.hue);
      path.setAttribute("fill", "none");
      this.svg.appendChild(path);
    }
    this.svg.dataset.layers = String(new Set(arcs.map((a) => a.layer)).size);
    this.svg.dataset.patterns = String(patternCount);
  }

  /** Click selects one call; shift-click extends to a contiguous slice. */
  private extendSlice(idx: number, extend: boolean): void {
    if (!extend || this.anchor === null) {
      this.anchor = idx;
      this.sliceStart = this.sliceEnd = idx;
    } else {
      this.sliceStart = Math.min(this.anchor, idx);
      this.sliceEnd = Math.max(this.anchor, idx);
    }
    this.render();
  }

  sliceCalls(): string[] | null {
    const detail = this.store.detail;
    if (detail === null || this.sliceStart < 0) return null;
    return detail.calls.slice(this.sliceStart, this.sliceEnd + 1);
  }

  get scrollBox(): HTMLElement {
    return this.list;
  }
}
