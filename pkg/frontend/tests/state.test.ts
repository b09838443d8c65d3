import { describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError, type SessionHandle } from "../src/api.js";
import { AssistantStore } from "../src/state.js";
import { PollController } from "../src/poll.js";

function handle(revision: number): SessionHandle {
  return {
    sessionId: "s1",
    modelHash: "h",
    revision,
    referenceModelId: "ref",
    tailored: revision > 0,
  };
}

function storeWith(overrides: Partial<Record<keyof ApiClient, unknown>>) {
  const client = {
    createSession: vi.fn(async () => ({ session: handle(0), report: null })),
    ...overrides,
  } as unknown as ApiClient;
  return { client, store: new AssistantStore(client) };
}

const GOAL = {
  object: ["Source code"], purpose: "evaluation",
  viewpoint: ["User"], focus: ["Safety"], context: {},
};

describe("assistant store", () => {
  it("tracks the revision from every accepted write", async () => {
    const { client, store } = storeWith({
      applyOperations: vi.fn(async () => ({
        session: handle(1), records: [], tasks: [],
      })),
    });
    await store.openSession(GOAL, "ref");
    expect(store.revision).toBe(0);
    await store.applyOperations([{ op: "DEL", target: "x" }]);
    expect(store.revision).toBe(1);
    expect((client.applyOperations as any).mock.calls[0]).toEqual(
      ["s1", 0, [{ op: "DEL", target: "x" }]],
    );
  });

  it("flags 409 as a conflict and never retries automatically", async () => {
    const complete = vi.fn(async () => {
      throw new ApiError(409, "stale-revision", "session changed");
    });
    const { store } = storeWith({ completeTask: complete });
    await store.openSession(GOAL, "ref");
    const result = await store.completeTask("t1");
    expect(result).toBeNull();
    expect(store.snapshot().conflict).toBe(true);
    expect(complete).toHaveBeenCalledTimes(1);
  });

  it("refresh clears the conflict and re-syncs tasks and violations", async () => {
    const { store } = storeWith({
      completeTask: vi.fn(async () => {
        throw new ApiError(409, "stale-revision", "session changed");
      }),
      session: vi.fn(async () => ({ session: handle(3) })),
      tasks: vi.fn(async () => ({
        revision: 3,
        tasks: [{ taskId: "t9", status: "open" }],
      })),
      validate: vi.fn(async () => ({
        revision: 3, purpose: "evaluation", violations: [{ rule: "V4" }],
      })),
    });
    await store.openSession(GOAL, "ref");
    await store.completeTask("t1");
    expect(store.snapshot().conflict).toBe(true);
    await store.refresh();
    const snap = store.snapshot();
    expect(snap.conflict).toBe(false);
    expect(store.revision).toBe(3);
    expect(snap.tasks).toHaveLength(1);
    expect(snap.violations).toHaveLength(1);
  });

  it("blocks empty waiver notes client-side", async () => {
    const waive = vi.fn();
    const { store } = storeWith({ waiveTask: waive });
    await store.openSession(GOAL, "ref");
    await expect(store.waiveTask("t1", "   ")).rejects.toThrow(/note/);
    expect(waive).not.toHaveBeenCalled();
  });

  it("allows only one in-flight write per session", async () => {
    let release!: () => void;
    const gate = new Promise<void>((resolve) => (release = resolve));
    const { store } = storeWith({
      applyOperations: vi.fn(async () => {
        await gate;
        return { session: handle(1), records: [], tasks: [] };
      }),
    });
    await store.openSession(GOAL, "ref");
    const first = store.applyOperations([{ op: "DEL", target: "x" }]);
    await expect(
      store.applyOperations([{ op: "DEL", target: "y" }]),
    ).rejects.toThrow(/in flight/);
    release();
    await first;
  });

  it("rethrows non-conflict domain errors after recording the message", async () => {
    const { store } = storeWith({
      applyOperations: vi.fn(async () => {
        throw new ApiError(422, "IntegrityError", "factor needs an entity type");
      }),
    });
    await store.openSession(GOAL, "ref");
    await expect(store.applyOperations([{ op: "DEL", target: "x" }]))
      .rejects.toMatchObject({ status: 422 });
    expect(store.snapshot().lastError).toMatch(/entity type/);
    expect(store.snapshot().conflict).toBe(false);
  });
});

describe("poll controller", () => {
  it("uses the fast interval for a burst after a write, then idles", async () => {
    vi.useFakeTimers();
    const ticks: number[] = [];
    const poll = new PollController(
      async () => { ticks.push(Date.now()); },
      { fastMs: 100, slowMs: 1000, burstTicks: 2 },
    );
    poll.start();
    expect(poll.interval).toBe(1000);
    poll.bump();
    expect(poll.interval).toBe(100);
    await vi.advanceTimersByTimeAsync(100);
    await vi.advanceTimersByTimeAsync(100);
    expect(poll.interval).toBe(1000); // burst exhausted
    poll.stop();
    await vi.advanceTimersByTimeAsync(5000);
    expect(ticks.length).toBe(2);
    vi.useRealTimers();
  });
});
