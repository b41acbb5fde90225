/** Arc geometry for the rule detail view.
 *
 * Each repeated pattern inside the selected rule becomes one layer of arcs:
 * an arc connects every pair of consecutive occurrence positions of that
 * pattern.  The backend caps detail payloads at five patterns; this module
 * enforces the same bound so a violation fails loudly instead of rendering
 * an unreadable diagram.
 */

import type { DetailPattern } from "./types.js";

export const MAX_ARC_LAYERS = 5;

/** One hue per layer, mutually distinguishable. */
export const ARC_HUES = [
  "#d95f02",
  "#1b9e77",
  "#7570b3",
  "#e7298a",
  "#66a61e",
] as const;

export interface Arc {
  /** Pattern index, 0-based; doubles as the hue index. */
  layer: number;
  /** Row index of the earlier occurrence. */
  from: number;
  /** Row index of the later occurrence. */
  to: number;
  hue: string;
}

export function buildArcs(patterns: DetailPattern[]): Arc[] {
  if (patterns.length > MAX_ARC_LAYERS) {
    throw new Error(`detail payload carries ${patterns.length} patterns; at most ${MAX_ARC_LAYERS} are drawable`);
  }
  const arcs: Arc[] = [];
  patterns.forEach((pattern, layer) => {
    const occ = pattern.occurrences;
    for (let i = 0; i + 1 < occ.length; i++) {
      arcs.push({ layer, from: occ[i], to: occ[i + 1], hue: ARC_HUES[layer] });
    }
  });
  return arcs;
}

/** Number of distinct layers that actually draw at least one arc. */
export function layerCount(arcs: Arc[]): number {
  return new Set(arcs.map((a) => a.layer)).size;
}
