import { describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("api client", () => {
  it("posts goals to /rank with a JSON body", async () => {
    const fetchFn = vi.fn(async () => jsonResponse(200, { ranking: [], skipped: [] }));
    const client = new ApiClient("http://svc", fetchFn);
    const goal = {
      object: ["Source code"], purpose: "evaluation",
      viewpoint: ["User"], focus: ["Safety"], context: {},
    };
    await client.rank(goal);
    const [url, init] = fetchFn.mock.calls[0] as [string, RequestInit];
    expect(url).toBe("http://svc/rank");
    expect(init.method).toBe("POST");
    expect(JSON.parse(init.body as string)).toEqual(goal);
  });

  it("quotes the revision on writes", async () => {
    const fetchFn = vi.fn(async () =>
      jsonResponse(200, { session: {}, records: [], tasks: [] }),
    );
    const client = new ApiClient("http://svc", fetchFn);
    await client.applyOperations("s1", 4, [{ op: "DEL", target: "x" }]);
    const [, init] = fetchFn.mock.calls[0] as [string, RequestInit];
    expect(JSON.parse(init.body as string)).toEqual({
      revision: 4,
      ops: [{ op: "DEL", target: "x" }],
    });
  });

  it("turns error bodies into ApiError with status, code, and details", async () => {
    const fetchFn = vi.fn(async () =>
      jsonResponse(409, {
        code: "stale-revision",
        message: "session changed",
        details: { quoted: 1, current: 2 },
      }),
    );
    const client = new ApiClient("http://svc", fetchFn);
    const error = await client
      .completeTask("s1", "t1", 1)
      .then(() => null, (e: unknown) => e as ApiError);
    expect(error).toBeInstanceOf(ApiError);
    expect(error!.status).toBe(409);
    expect(error!.isConflict).toBe(true);
    expect(error!.code).toBe("stale-revision");
    expect(error!.details).toEqual({ quoted: 1, current: 2 });
  });

  it("survives non-JSON error bodies", async () => {
    const fetchFn = vi.fn(async () => new Response("boom", { status: 500 }));
    const client = new ApiClient("http://svc", fetchFn);
    const error = await client.pool().then(() => null, (e: unknown) => e as ApiError);
    expect(error!.status).toBe(500);
    expect(error!.code).toBe("http-error");
  });
});
