/** Queue state machine: last-fetched server state plus in-flight optimistic
 * operations. Every server response triggers reconciliation, so the rendered
 * state is always a pure function of (serverItems, pendingOps, selection). */
import { ApiError, ConnectionError } from "./api.js";
export class QueueStore {
    constructor(api, reviewer) {
        this.api = api;
        this.reviewer = reviewer;
        this.serverItems = [];
        this.state = {
            items: [],
            selectedId: null,
            selectedRecord: null,
            inFlight: new Set(),
            sort: "oldest-first",
            connectionLost: false,
            toast: null,
            notFound: false,
        };
        this.listeners = [];
        /** decision posts serialized per record */
        this.postChains = new Map();
    }
    subscribe(listener) {
        this.listeners.push(listener);
        return () => {
            this.listeners = this.listeners.filter((l) => l !== listener);
        };
    }
    getState() {
        return this.state;
    }
    emit(patch) {
        this.state = { ...this.state, ...patch, items: this.visibleItems(patch) };
        for (const listener of this.listeners)
            listener(this.state);
    }
    visibleItems(patch) {
        const inFlight = patch.inFlight ?? this.state.inFlight;
        const sort = patch.sort ?? this.state.sort;
        const items = this.serverItems.filter((i) => !inFlight.has(i.message_id));
        return sort === "newest-first" ? [...items].reverse() : items;
    }
    async refresh() {
        try {
            this.serverItems = await this.api.getQueue();
            this.emit({ connectionLost: false });
        }
        catch (err) {
            if (err instanceof ConnectionError) {
                this.emit({ connectionLost: true });
                return;
            }
            throw err;
        }
    }
    setSort(sort) {
        this.emit({ sort });
    }
    async select(id) {
        this.emit({ selectedId: id, selectedRecord: null, notFound: false });
        try {
            const record = await this.api.getRecord(id);
            if (this.state.selectedId === id)
                this.emit({ selectedRecord: record });
        }
        catch (err) {
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
    submitDecision(id, decision) {
        const previous = this.postChains.get(id);
        if (!previous) {
            // the row disappears synchronously; the POST settles it later
            const inFlight = new Set(this.state.inFlight);
            inFlight.add(id);
            this.emit({ inFlight });
        }
        const chained = (previous ?? Promise.resolve()).then(() => this.doSubmit(id, decision));
        this.postChains.set(id, chained);
        return chained;
    }
    async doSubmit(id, decision) {
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
        }
        catch (err) {
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
    settle(id, toast) {
        const inFlight = new Set(this.state.inFlight);
        inFlight.delete(id);
        const patch = { inFlight };
        if (toast)
            patch.toast = toast;
        if (this.state.selectedId === id) {
            patch.selectedId = null;
            patch.selectedRecord = null;
        }
        this.emit(patch);
    }
    dismissToast() {
        this.emit({ toast: null });
    }
}
