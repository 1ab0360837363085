import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { QueueStore } from "../src/store.js";
import { FakeService } from "./helpers.js";

function setup(seedCount = 5) {
  const service = new FakeService();
  service.seed(seedCount);
  const api = new ApiClient(service.fetch);
  const store = new QueueStore(api, "analyst-a");
  return { service, api, store };
}

describe("queue listing", () => {
  it("lists all seeded pending records", async () => {
    const { store } = setup(5);
    await store.refresh();
    expect(store.getState().items).toHaveLength(5);
  });

  it("excludes records that are not needs_review", async () => {
    const { service, store } = setup(3);
    const record = service.records.get("review-1")!;
    record.decision = { ...record.decision, verdict: "phishing" };
    await store.refresh();
    expect(store.getState().items.map((i) => i.message_id)).toEqual([
      "review-0",
      "review-2",
    ]);
  });

  it("newest-first toggle reverses the order", async () => {
    const { store } = setup(3);
    await store.refresh();
    store.setSort("newest-first");
    expect(store.getState().items.map((i) => i.message_id)).toEqual([
      "review-2",
      "review-1",
      "review-0",
    ]);
  });

  it("connection failure raises the banner and a retry clears it", async () => {
    const { service, store } = setup(2);
    service.offline = true;
    await store.refresh();
    expect(store.getState().connectionLost).toBe(true);
    service.offline = false;
    await store.refresh();
    expect(store.getState().connectionLost).toBe(false);
    expect(store.getState().items).toHaveLength(2);
  });
});

describe("decision submission", () => {
  it("removes the row optimistically before the server responds", async () => {
    const { service, store } = setup(5);
    await store.refresh();
    let release!: () => void;
    service.gate = new Promise((resolve) => {
      release = resolve;
    });
    const submission = store.submitDecision("review-2", "confirm_phishing");
    expect(store.getState().items.map((i) => i.message_id)).not.toContain("review-2");
    release();
    await submission;
    expect(store.getState().items).toHaveLength(4);
    expect(service.records.get("review-2")!.review?.decision).toBe("confirm_phishing");
  });

  it("a racing second decision surfaces a 409 toast and refreshes", async () => {
    const first = setup(5);
    await first.store.refresh();

    // a second analyst sharing the same backend
    const second = new QueueStore(new ApiClient(first.service.fetch), "analyst-b");
    await second.refresh();

    await first.store.submitDecision("review-0", "confirm_phishing");
    await second.submitDecision("review-0", "mark_benign");

    const state = second.getState();
    expect(state.toast?.kind).toBe("error");
    expect(state.toast?.text).toContain("already decided");
    expect(state.items.map((i) => i.message_id)).not.toContain("review-0");
    // the first analyst's decision stands
    expect(first.service.records.get("review-0")!.review?.decision).toBe(
      "confirm_phishing",
    );
  });

  it("rolls the row back when the network fails", async () => {
    const { service, store } = setup(3);
    await store.refresh();
    service.offline = true;
    await store.submitDecision("review-1", "mark_benign");
    const state = store.getState();
    expect(state.items.map((i) => i.message_id)).toContain("review-1");
    expect(state.connectionLost).toBe(true);
    expect(state.toast?.text).toContain("not saved");
    expect(service.records.get("review-1")!.review).toBeUndefined();
  });

  it("serializes posts per record: the duplicate turns into a no-op", async () => {
    const { service, store } = setup(2);
    await store.refresh();
    const a = store.submitDecision("review-0", "confirm_phishing");
    const b = store.submitDecision("review-0", "mark_benign");
    await Promise.all([a, b]);
    expect(service.records.get("review-0")!.review?.decision).toBe("confirm_phishing");
    const posts = service.requestLog.filter((line) => line.startsWith("POST"));
    expect(posts).toHaveLength(1);
  });

  it("clears the detail pane when the selected record is decided", async () => {
    const { store } = setup(2);
    await store.refresh();
    await store.select("review-1");
    expect(store.getState().selectedRecord?.message_id).toBe("review-1");
    await store.submitDecision("review-1", "mark_benign");
    expect(store.getState().selectedId).toBeNull();
    expect(store.getState().selectedRecord).toBeNull();
  });
});

describe("record detail", () => {
  it("loads the full record on selection", async () => {
    const { store } = setup(1);
    await store.refresh();
    await store.select("review-0");
    const record = store.getState().selectedRecord;
    expect(record?.attacks[0].attack).toBe("CredentialTheft");
    expect(record?.neighbors).toHaveLength(3);
  });

  it("shows the not-found view for a vanished record", async () => {
    const { store } = setup(1);
    await store.refresh();
    await store.select("ghost");
    expect(store.getState().notFound).toBe(true);
  });
});
