/** Thin fetch client over the service JSON API. */
export class ApiError extends Error {
    constructor(status, message) {
        super(message);
        this.status = status;
        this.name = "ApiError";
    }
}
/** Network-level failure (service unreachable), distinct from HTTP errors. */
export class ConnectionError extends Error {
    constructor(cause) {
        super(`service unreachable: ${String(cause)}`);
        this.name = "ConnectionError";
    }
}
export class ApiClient {
    constructor(fetchImpl, base = "") {
        this.fetchImpl = fetchImpl;
        this.base = base;
        /** Bearer token held in memory only; never persisted. */
        this.token = null;
    }
    async request(path, init) {
        const headers = {
            ...init?.headers,
        };
        if (this.token)
            headers["Authorization"] = `Bearer ${this.token}`;
        let response;
        try {
            response = await this.fetchImpl(this.base + path, { ...init, headers });
        }
        catch (cause) {
            throw new ConnectionError(cause);
        }
        if (!response.ok) {
            let detail = response.statusText;
            try {
                const body = (await response.json());
                if (body.detail)
                    detail = body.detail;
            }
            catch {
                // non-JSON error body; keep the status text
            }
            throw new ApiError(response.status, detail);
        }
        return (await response.json());
    }
    getQueue() {
        return this.request("/api/queue");
    }
    getRecord(id) {
        return this.request(`/api/records/${encodeURIComponent(id)}`);
    }
    getMetrics() {
        return this.request("/api/metrics");
    }
    submitDecision(id, decision, reviewer) {
        return this.request(`/api/queue/${encodeURIComponent(id)}/decision`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ decision, reviewer }),
        });
    }
}
