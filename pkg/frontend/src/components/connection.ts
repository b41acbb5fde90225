/** Connection line between the selected overview row and the detail panel.
 *
 * The line's endpoints follow both panels as they scroll; when no rule is
 * selected there is no line.  Clicking the line scrolls the overview so the
 * selected row comes back into view.
 */

import type { Store } from "../store.js";
import type { OverviewTable } from "./overview.js";
import { ROW_HEIGHT } from "./overview.js";

export class ConnectionLine {
  readonly root: SVGSVGElement;
  private line: SVGLineElement;

  constructor(
    private readonly store: Store,
    private readonly overview: OverviewTable,
  ) {
    this.root = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    this.root.setAttribute("class", "connection");
    this.line = document.createElementNS("http://www.w3.org/2000/svg", "line");
    this.line.setAttribute("class", "connection-line");
    this.root.appendChild(this.line);
    this.line.addEventListener("click", () => this.refocus());
    overview.scrollBox.addEventListener("scroll", () => this.update());
    store.subscribe(() => this.update());
    this.update();
  }

  /** Bring the selected row back into the overview viewport. */
  refocus(): void {
    const id = this.store.state.selectedRule;
    if (id !== null) this.overview.focusRow(id);
  }

  update(): void {
    const id = this.store.state.selectedRule;
    // Index math, not row elements: the selected row keeps a table position
    // even when scrolled outside the materialized window.
    const idx = id === null ? null : this.overview.indexOf(id);
    if (id === null || idx === null) {
      this.root.style.display = "none";
      this.root.dataset.target = "";
      return;
    }
    this.root.style.display = "";
    this.root.dataset.target = String(id);
    const box = this.overview.scrollBox;
    const y = idx * ROW_HEIGHT - box.scrollTop + ROW_HEIGHT / 2;
    this.line.setAttribute("x1", "0");
    this.line.setAttribute("y1", String(y));
    this.line.setAttribute("x2", "100");
    this.line.setAttribute("y2", "20");
  }
}
