/** Color assignments for knowledge states, table bars, and histograms.
 *
 * Two palettes exist for rule backgrounds:
 *
 *  - the default three-step scale shades rows from dark to light red as
 *    knowledge about the rule decreases;
 *  - the five-step diverging scale additionally separates malicious
 *    (red side) from benign (blue side) matches, with unknown rules on the
 *    neutral middle step.
 */

import type { KnowledgeState, Polarity } from "./types.js";

export type ColorMode = "three" | "five";

/** Dark → light red as knowledge decreases. */
export const THREE_STEP: Record<KnowledgeState, string> = {
  fully_known: "#99000d",
  partially_known: "#ef3b2c",
  not_known: "#fcbba1",
};

/** Diverging red–blue; red = malicious, blue = benign, middle = unknown. */
export const FIVE_STEP = {
  fully_malicious: "#ca0020",
  partially_malicious: "#f4a582",
  neutral: "#f7f7f7",
  partially_benign: "#92c5de",
  fully_benign: "#0571b0",
} as const;

export function stateColor(
  state: KnowledgeState,
  mode: ColorMode = "three",
  polarity: Polarity = "malicious",
): string {
  if (mode === "three") return THREE_STEP[state];
  if (state === "not_known") return FIVE_STEP.neutral;
  if (polarity === "benign") {
    return state === "fully_known" ? FIVE_STEP.fully_benign : FIVE_STEP.partially_benign;
  }
  return state === "fully_known" ? FIVE_STEP.fully_malicious : FIVE_STEP.partially_malicious;
}

/** Text color readable on the given state background. */
export function stateTextColor(state: KnowledgeState, mode: ColorMode = "three"): string {
  if (mode === "three") return state === "not_known" ? "#3a1410" : "#ffffff";
  return state === "fully_known" ? "#ffffff" : "#1c1c1c";
}

/**
 * Hue of the in-cell value bars, per column.  Histogram backgrounds must use
 * the same hue as the table column they summarize, so both sides read from
 * this table.
 */
export const BAR_HUES = {
  occurrence: "#4a78b5",
  length: "#8a62a8",
} as const;

export type BarField = keyof typeof BAR_HUES;

export function barHue(field: BarField): string {
  return BAR_HUES[field];
}

export function histogramHue(field: BarField): string {
  return BAR_HUES[field];
}
