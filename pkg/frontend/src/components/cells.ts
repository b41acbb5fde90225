/** Shared table-cell builders. */

import { barHue } from "../color.js";

/** A cell showing a horizontal value bar with the exact number on top. */
export function barCell(
  doc: Document,
  value: number,
  max: number,
  field: "occurrence" | "length",
): HTMLElement {
  const cell = doc.createElement("span");
  cell.className = `cell bar-cell ${field}`;
  const bar = doc.createElement("i");
  bar.className = "bar";
  bar.setAttribute("style", `width:${(100 * value) / max}%;background:${barHue(field)}`);
  const num = doc.createElement("b");
  num.textContent = String(value);
  cell.append(bar, num);
  return cell;
}
