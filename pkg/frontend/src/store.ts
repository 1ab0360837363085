/** Queue state machine: last-fetched server state plus in-flight optimistic
 * operations. Every server response triggers reconciliation, so the rendered
 * state is always a pure function of (serverItems, pendingOps, selection). */

import { ApiClient, ApiError, ConnectionError } from "./api.js";
import type { AnalysisRecord, QueueItem, ReviewDecision } from "./types.js";

export type SortOrder = "oldest-first" | "newest-first";

export interface Toast {
  kind: "info" | "error";
  text: string;
}

export interface StoreState {
  items: QueueItem[];
  selectedId: string | null;
  selectedRecord: AnalysisRecord | null;
  /** records optimistically removed while their decision is in flight */
  inFlight: Set<string>;
  sort: SortOrder;
  connectionLost: boolean;
  toast: Toast | null;
  notFound: boolean;
}

export class QueueStore {
  private serverItems: QueueItem[] = [];
  private state: StoreState = {
    items: [],
    selectedId: null,
    selectedRecord: null,
    inFlight: new Set(),
    sort: "oldest-first",
    connectionLost: false,
    toast: null,
    notFound: false,
  };
  private listeners: Array<(s: StoreState) => void> = [];
  /** decision posts serialized per record */
  private postChains = new Map<string, Promise<void>>();

  constructor(private readonly api: ApiClient, private readonly reviewer: string) {}

  subscribe(listener: (s: StoreState) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  getState(): StoreState {
    return this.state;
  }

  private emit(patch: Partial<StoreState>): void {
    this.state = { ...this.state, ...patch, items: this.visibleItems(patch) };
    for (const listener of this.listeners) listener(this.state);
  }

  private visibleItems(patch: Partial<StoreState>): QueueItem[] {
    const inFlight = patch.inFlight ?? this.state.inFlight;
    const sort = patch.sort ?? this.state.sort;
    const items = this.serverItems.filter((i) => !inFlight.has(i.message_id));
    return sort === "newest-first" ? [...items].reverse() : items;
  }

  async refresh(): Promise<void> {
    try {
      this.serverItems = await this.api.getQueue();
      this.emit({ connectionLost: false });
    } catch (err) {
      if (err instanceof ConnectionError) {
        this.emit({ connectionLost: true });
        return;
      }
      throw err;
    }
  }

  setSort(sort: SortOrder): void {
    this.emit({ sort });
  }

  async select(id: string): Promise<void> {
    this.emit({ selectedId: id, selectedRecord: null, notFound: false });
    try {
      const record = await this.api.getRecord(id);
      if (this.state.selectedId === id) this.emit({ selectedRecord: record });
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        this.emit({ notFound: true });
        return;
      }
      if (err instanceof ConnectionError) {
        this.emit({ connectionLost: true });
        return;
      }
      throw err;
    }
  }

  /** Optimistically remove the row, roll back on 409/404/network failure. */
  submitDecision(id: string, decision: ReviewDecision): Promise<void> {
    const previous = this.postChains.get(id);
    if (!previous) {
      // the row disappears synchronously; the POST settles it later
      const inFlight = new Set(this.state.inFlight);
      inFlight.add(id);
      this.emit({ inFlight });
    }
    const chained = (previous ?? Promise.resolve()).then(() =>
      this.doSubmit(id, decision),
    );
    this.postChains.set(id, chained);
    return chained;
  }

  private async doSubmit(id: string, decision: ReviewDecision): Promise<void> {
    if (!this.serverItems.some((i) => i.message_id === id)) {
      this.settle(id, null);
      return;
    }
    const inFlight = new Set(this.state.inFlight);
    inFlight.add(id);
    this.emit({ inFlight });
    try {
      await this.api.submitDecision(id, decision, this.reviewer);
      this.serverItems = this.serverItems.filter((i) => i.message_id !== id);
      this.settle(id, { kind: "info", text: `${id}: ${decision} recorded` });
    } catch (err) {
      if (err instanceof ApiError && (err.status === 409 || err.status === 404)) {
        // someone else decided (or the record vanished): drop the row for
        // real and refresh from the server
        this.serverItems = this.serverItems.filter((i) => i.message_id !== id);
        this.settle(id, {
          kind: "error",
          text: `${id}: ${err.status === 409 ? "already decided by another analyst" : "record not found"}`,
        });
        await this.refresh();
        return;
      }
      if (err instanceof ConnectionError) {
        // rollback: the row reappears
        this.settle(id, { kind: "error", text: `${id}: connection failed, decision not saved` });
        this.emit({ connectionLost: true });
        return;
      }
      this.settle(id, null);
      throw err;
    }
  }

  private settle(id: string, toast: Toast | null): void {
    const inFlight = new Set(this.state.inFlight);
    inFlight.delete(id);
    const patch: Partial<StoreState> = { inFlight };
    if (toast) patch.toast = toast;
    if (this.state.selectedId === id) {
      patch.selectedId = null;
      patch.selectedRecord = null;
    }
    this.emit(patch);
  }

  dismissToast(): void {
    this.emit({ toast: null });
  }
}
