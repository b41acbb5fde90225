/** Central view state + data cache.
 *
 * All data shown anywhere in the UI lives here and came from the gateway;
 * components subscribe and re-render from these slices.  Two rules govern
 * every fetch:
 *
 *  - filter edits are debounced (DEBOUNCE_MS, well under the 200 ms budget);
 *  - each query family carries a sequence number, and a response is dropped
 *    unless it is newer than the last one applied (latest wins — a slow
 *    stale response can never overwrite a fresh one).
 */

import type { GatewayApi } from "./client.js";
import { GatewayError } from "./client.js";
import type {
  CallFilter,
  CallRow,
  Histogram,
  KdbSnapshot,
  Polarity,
  RuleDetail,
  RuleFilter,
  RuleQuery,
  RulesPayload,
  Summary,
} from "./types.js";
import { emptyCallFilter, emptyRuleFilter } from "./types.js";

export const DEBOUNCE_MS = 150;

/** Monotonic ticket counter; a response is applied only if newest. */
class Latest {
  private issued = 0;
  private applied = 0;

  next(): number {
    return ++this.issued;
  }

  accept(seq: number): boolean {
    if (seq <= this.applied) return false;
    this.applied = seq;
    return true;
  }
}

export interface ViewState {
  selectedRule: number | null;
  sort?: string;
  page: number;
  pageSize: number;
  callFilter: CallFilter;
  ruleFilter: RuleFilter;
  /** KDB node ids currently unfolded in the tree. */
  expanded: Set<number>;
  /** Panel order toggle: false = knowledge | rules | calls. */
  layoutSwapped: boolean;
}

export class Store {
  readonly state: ViewState = {
    selectedRule: null,
    page: 0,
    pageSize: 100,
    callFilter: emptyCallFilter(),
    ruleFilter: emptyRuleFilter(),
    expanded: new Set(),
    layoutSwapped: false,
  };

  summary: Summary | null = null;
  rules: RulesPayload | null = null;
  calls: CallRow[] = [];
  /** Unfiltered call table; maps names in rule rows back to their ids. */
  allCalls: CallRow[] = [];
  detail: RuleDetail | null = null;
  kdb: KdbSnapshot | null = null;
  occurrenceHist: Histogram | null = null;
  lengthHist: Histogram | null = null;
  /** Last gateway failure worth showing inline (e.g. duplicate KDB rule). */
  kdbError: string | null = null;

  private listeners = new Set<() => void>();
  private timer: ReturnType<typeof setTimeout> | null = null;
  private rulesSeq = new Latest();
  private callsSeq = new Latest();
  private detailSeq = new Latest();
  private pendingOps = new Set<Promise<unknown>>();

  constructor(
    private readonly gw: GatewayApi,
    private readonly debounceMs: number = DEBOUNCE_MS,
  ) {}

  subscribe(fn: () => void): () => void {
    this.listeners.add(fn);
    return () => this.listeners.delete(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  private track<T>(p: Promise<T>): Promise<T> {
    this.pendingOps.add(p);
    void p.finally(() => this.pendingOps.delete(p)).catch(() => {});
    return p;
  }

  /** Resolves once every in-flight gateway call has settled. */
  async idle(): Promise<void> {
    while (this.pendingOps.size > 0 || this.timer !== null) {
      if (this.timer !== null) await this.flush();
      await Promise.allSettled([...this.pendingOps]);
    }
  }

  nameToId(): Map<string, number> {
    return new Map(this.allCalls.map((c) => [c.name, c.id]));
  }

  private ruleQuery(): RuleQuery {
    return {
      call: this.state.callFilter,
      rule: this.state.ruleFilter,
      sort: this.state.sort,
      page: this.state.page,
      pageSize: this.state.pageSize,
    };
  }

  /** Download address for the current rule view as CSV. */
  csvUrl(): string {
    return this.gw.csvUrl(this.ruleQuery());
  }

  // -- document ------------------------------------------------------------

  loadDocument(text: string): Promise<void> {
    return this.track(this.doLoad(text));
  }

  private async doLoad(text: string): Promise<void> {
    this.summary = await this.gw.loadDocument(text);
    this.state.selectedRule = null;
    this.detail = null;
    this.emit();
    const [all, kdb, occ, len] = await Promise.all([
      this.gw.calls(emptyCallFilter()),
      this.gw.kdb(),
      this.gw.histogram("occurrence", 10),
      this.gw.histogram("length", 10),
    ]);
    this.allCalls = all;
    this.kdb = kdb;
    this.occurrenceHist = occ;
    this.lengthHist = len;
    await this.refreshQueries();
  }

  // -- filters and queries ---------------------------------------------------

  setCallFilter(patch: Partial<CallFilter>): void {
    Object.assign(this.state.callFilter, patch);
    this.state.page = 0;
    this.scheduleRefresh();
  }

  setRuleFilter(patch: Partial<RuleFilter>): void {
    Object.assign(this.state.ruleFilter, patch);
    this.state.page = 0;
    this.scheduleRefresh();
  }

  setSort(sort: string | undefined): void {
    this.state.sort = sort;
    void this.track(this.refreshQueries());
  }

  setPage(page: number): void {
    this.state.page = page;
    void this.track(this.refreshQueries());
  }

  private scheduleRefresh(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.track(this.refreshQueries());
    }, this.debounceMs);
    this.emit();
  }

  /** Run a pending debounced refresh immediately (tests, form submit). */
  flush(): Promise<void> {
    if (this.timer === null) return Promise.resolve();
    clearTimeout(this.timer);
    this.timer = null;
    return this.track(this.refreshQueries());
  }

  private async refreshQueries(): Promise<void> {
    const rulesSeq = this.rulesSeq.next();
    const callsSeq = this.callsSeq.next();
    const [rules, calls] = await Promise.all([
      this.gw.rules(this.ruleQuery()),
      this.gw.calls(this.state.callFilter),
    ]);
    let changed = false;
    if (this.rulesSeq.accept(rulesSeq)) {
      this.rules = rules;
      changed = true;
    }
    if (this.callsSeq.accept(callsSeq)) {
      this.calls = calls;
      changed = true;
    }
    if (changed) this.emit();
  }

  // -- selection -------------------------------------------------------------

  selectRule(id: number | null): Promise<void> {
    this.state.selectedRule = id;
    if (id === null) {
      this.detail = null;
      this.emit();
      return Promise.resolve();
    }
    this.emit();
    return this.track(this.fetchDetail(id));
  }

  private async fetchDetail(id: number): Promise<void> {
    const seq = this.detailSeq.next();
    const detail = await this.gw.ruleDetail(id);
    // Apply only while this rule is still the selection.
    if (this.detailSeq.accept(seq) && this.state.selectedRule === detail.id) {
      this.detail = detail;
      this.emit();
    }
  }

  // -- knowledge-base mutations ----------------------------------------------

  addRuleToNode(nodeId: number, calls: string[], polarity: Polarity = "malicious"): Promise<void> {
    return this.track(this.mutate(() => this.gw.addRule(nodeId, calls, polarity)));
  }

  addNode(label: string, parentId?: number): Promise<void> {
    return this.track(this.mutate(() => this.gw.addNode(label, parentId)));
  }

  setNodeActive(nodeId: number, active: boolean): Promise<void> {
    return this.track(this.mutate(() => this.gw.setActive(nodeId, active)));
  }

  removeKdbRule(ruleId: number): Promise<void> {
    return this.track(this.mutate(() => this.gw.removeRule(ruleId)));
  }

  setExpanded(nodeId: number, open: boolean): void {
    if (open) this.state.expanded.add(nodeId);
    else this.state.expanded.delete(nodeId);
    this.emit();
  }

  toggleLayout(): void {
    this.state.layoutSwapped = !this.state.layoutSwapped;
    this.emit();
  }

  /**
   * Run one KDB mutation, then refresh everything that can recolor in a
   * single follow-up round trip.  Gateway rejections (duplicate rule,
   * unknown node) land in kdbError for inline display.
   */
  private async mutate(op: () => Promise<unknown>): Promise<void> {
    try {
      await op();
      this.kdbError = null;
    } catch (err) {
      this.kdbError = err instanceof GatewayError ? err.message : String(err);
      this.emit();
      return;
    }
    const jobs: Promise<unknown>[] = [
      this.gw.kdb().then((snap) => {
        this.kdb = snap;
      }),
    ];
    if (this.summary !== null) jobs.push(this.refreshQueries());
    if (this.state.selectedRule !== null) jobs.push(this.fetchDetail(this.state.selectedRule));
    await Promise.all(jobs);
    this.emit();
  }
}
