/** Graphical rule summary: a fixed-width strip of tick marks.
 *
 * Each distinct call in a rule contributes one tick whose horizontal slot
 * is derived from the call's id, so the same call lines up at the same
 * position in every row.  The mapping is id modulo strip width, which is
 * deliberately lossy once a document has more distinct calls than the strip
 * has slots: two calls may share a slot, and their ticks overdraw.
 */

export const SUMMARY_SLOTS = 64;

/**
 * Slot index for each distinct call id, in first-appearance order.
 * One entry per distinct id — collisions are kept, not deduplicated.
 */
export function tickSlots(callIds: Iterable<number>, slots: number = SUMMARY_SLOTS): number[] {
  if (!Number.isInteger(slots) || slots < 1) throw new RangeError("slots must be a positive integer");
  const seen = new Set<number>();
  const out: number[] = [];
  for (const id of callIds) {
    if (id < 0 || !Number.isInteger(id)) throw new RangeError(`call ids are non-negative integers, got ${id}`);
    if (seen.has(id)) continue;
    seen.add(id);
    out.push(id % slots);
  }
  return out;
}

/** Ticks for a rule row, whose calls arrive as names. */
export function fingerprintSlots(
  callNames: string[],
  idOf: Map<string, number>,
  slots: number = SUMMARY_SLOTS,
): number[] {
  const ids: number[] = [];
  for (const name of callNames) {
    const id = idOf.get(name);
    if (id !== undefined) ids.push(id);
  }
  return tickSlots(ids, slots);
}
