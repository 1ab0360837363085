import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, ConnectionError } from "../src/api.js";
import { FakeService } from "./helpers.js";

describe("ApiClient", () => {
  it("fetches the pending queue", async () => {
    const service = new FakeService();
    service.seed(3);
    const api = new ApiClient(service.fetch);
    const queue = await api.getQueue();
    expect(queue).toHaveLength(3);
    expect(queue[0].message_id).toBe("review-0");
  });

  it("sends the bearer token when set", async () => {
    let seen: string | undefined;
    const api = new ApiClient(async (_input, init) => {
      seen = (init?.headers as Record<string, string>)["Authorization"];
      return new Response("[]", { status: 200 });
    });
    api.token = "hunter2";
    await api.getQueue();
    expect(seen).toBe("Bearer hunter2");
  });

  it("raises ApiError with status and detail on HTTP errors", async () => {
    const service = new FakeService();
    const api = new ApiClient(service.fetch);
    const err = await api.getRecord("ghost").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(404);
    expect(err.message).toBe("unknown record");
  });

  it("raises ConnectionError when the service is unreachable", async () => {
    const service = new FakeService();
    service.offline = true;
    const api = new ApiClient(service.fetch);
    await expect(api.getQueue()).rejects.toBeInstanceOf(ConnectionError);
  });

  it("returns the updated record after a decision", async () => {
    const service = new FakeService();
    service.seed(1);
    const api = new ApiClient(service.fetch);
    const record = await api.submitDecision("review-0", "mark_benign", "rey");
    expect(record.review?.decision).toBe("mark_benign");
    expect(record.review?.reviewer).toBe("rey");
  });
});
