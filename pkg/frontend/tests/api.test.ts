import { describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError, guidanceFor } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("ApiClient", () => {
  it("fetches cluster summaries from /clusters", async () => {
    const fetchFn = vi.fn().mockResolvedValue(jsonResponse([{ id: 0 }]));
    const client = new ApiClient("http://api", fetchFn);
    const clusters = await client.clusters();
    expect(fetchFn).toHaveBeenCalledWith("http://api/clusters", undefined);
    expect(clusters).toEqual([{ id: 0 }]);
  });

  it("pages members with query parameters", async () => {
    const fetchFn = vi.fn().mockResolvedValue(jsonResponse({ members: [] }));
    await new ApiClient("http://api", fetchFn).members(4, 2, 25);
    expect(fetchFn).toHaveBeenCalledWith(
      "http://api/clusters/4/members?page=2&page_size=25",
      undefined,
    );
  });

  it("posts labels as JSON", async () => {
    const fetchFn = vi.fn().mockResolvedValue(jsonResponse({ id: 1, label: "x" }));
    await new ApiClient("http://api", fetchFn).labelCluster(1, "billing");
    const [url, init] = fetchFn.mock.calls[0];
    expect(url).toBe("http://api/clusters/1/label");
    expect(init.method).toBe("POST");
    expect(JSON.parse(init.body)).toEqual({ intent: "billing" });
  });

  it("posts the propagation threshold", async () => {
    const fetchFn = vi.fn().mockResolvedValue(jsonResponse({ propagated: 1 }));
    await new ApiClient("http://api", fetchFn).propagate(0.35);
    expect(JSON.parse(fetchFn.mock.calls[0][1].body)).toEqual({ threshold: 0.35 });
  });

  it("raises a typed error carrying the service detail", async () => {
    const fetchFn = vi.fn().mockResolvedValue(
      jsonResponse({ detail: "need >= 2 distinct intents to train" }, 409),
    );
    const call = new ApiClient("http://api", fetchFn).propagate(0.5);
    await expect(call).rejects.toBeInstanceOf(ApiError);
  });

  it("retries idempotent GETs once on transport failure", async () => {
    const fetchFn = vi
      .fn()
      .mockRejectedValueOnce(new TypeError("connection reset"))
      .mockResolvedValueOnce(jsonResponse({ total: 5 }));
    const progress = await new ApiClient("http://api", fetchFn).progress();
    expect(progress.total).toBe(5);
    expect(fetchFn).toHaveBeenCalledTimes(2);
  });

  it("never retries mutations", async () => {
    const fetchFn = vi.fn().mockRejectedValue(new TypeError("connection reset"));
    const call = new ApiClient("http://api", fetchFn).labelCluster(0, "x");
    await expect(call).rejects.toBeInstanceOf(TypeError);
    expect(fetchFn).toHaveBeenCalledTimes(1);
  });

  it("returns the raw JSONL export body", async () => {
    const fetchFn = vi.fn().mockResolvedValue(new Response('{"id":"u1"}\n'));
    const body = await new ApiClient("http://api", fetchFn).exportCorpus();
    expect(body).toBe('{"id":"u1"}\n');
  });
});

describe("guidanceFor", () => {
  it("maps the two-labels precondition to actionable text", () => {
    const guidance = guidanceFor(new ApiError(409, "TooFewClasses"));
    expect(guidance).toContain("at least two clusters");
  });

  it("falls back to a connectivity hint for transport errors", () => {
    expect(guidanceFor(new TypeError("fetch failed"))).toContain("unreachable");
  });
});
