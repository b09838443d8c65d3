/** End-to-end against the real Python service: the stub-measure walkthrough
 * driven through the client exactly as the inbox would, plus the
 * concurrent-tab 409 path.  Spawns `qm-adapt serve` on a scratch pool. */

import { spawn, type ChildProcess } from "node:child_process";
import { copyFileSync, mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, ApiError, type GoalDocument, type Task } from "../src/api.js";
import { AssistantStore } from "../src/state.js";

const FIXTURES = fileURLToPath(new URL("../../fixtures", import.meta.url));
const PORT = 8991;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let poolDir: string;
const client = new ApiClient(BASE);

const goal = JSON.parse(
  readFileSync(join(FIXTURES, "target.goal.json"), "utf-8"),
) as GoalDocument;

function openKeys(tasks: Task[]): [string, string | null][] {
  return tasks
    .filter((t) => t.status === "open")
    .map((t) => [t.templateId, t.target]);
}

async function waitForService(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt++) {
    try {
      await client.pool();
      return;
    } catch {
      await new Promise((resolve) => setTimeout(resolve, 200));
    }
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  poolDir = mkdtempSync(join(tmpdir(), "qm-pool-"));
  copyFileSync(
    join(FIXTURES, "walkthrough.qm.json"),
    join(poolDir, "walkthrough.qm.json"),
  );
  copyFileSync(
    join(FIXTURES, "pool", "embedded-cpp.qm.json"),
    join(poolDir, "embedded-cpp.qm.json"),
  );
  server = spawn(
    "qm-adapt",
    ["serve", "--pool", poolDir, "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForService();
}, 30000);

afterAll(() => {
  server?.kill();
  rmSync(poolDir, { recursive: true, force: true });
});

describe("stub-measure walkthrough through the client", () => {
  it("reproduces the task-list transitions end to end", async () => {
    const store = new AssistantStore(client);
    await store.openSession(goal, "walkthrough");
    expect(store.revision).toBe(0);

    await store.applyOperations([
      {
        op: "ADD",
        kind: "measures",
        payload: { id: "m1", stub: true, quantifies: ["f1"] },
      },
    ]);
    expect(openKeys(store.snapshot().tasks)).toEqual([
      ["measure.add.name-rule", "m1"],
      ["measure.add.impact-eval", "m1"],
      ["factor.mod.quantified.check-eval", "ie1"],
      ["factor.mod.quantified.check-eval", "ie2"],
    ]);

    await store.completeTask("t1", [
      { op: "MOD", target: "m1", field: "name", value: "M1" },
      { op: "MOD", target: "m1", field: "measurementRule", value: "Counted." },
    ]);
    expect(openKeys(store.snapshot().tasks)).toEqual([
      ["measure.add.impact-eval", "m1"],
      ["factor.mod.quantified.check-eval", "ie1"],
      ["factor.mod.quantified.check-eval", "ie2"],
    ]);

    await store.completeTask("t3", [
      { op: "MOD", target: "ie1", field: "uses", value: ["m0", "m1"] },
    ]);
    // the impact-eval obligation auto-completed, a rule-review opened
    expect(openKeys(store.snapshot().tasks)).toEqual([
      ["factor.mod.quantified.check-eval", "ie2"],
      ["impact-eval.mod.uses.rule-considers", "ie1"],
    ]);

    await store.completeTask("t4", [
      { op: "MOD", target: "ie2", field: "uses", value: ["m0", "m1"] },
    ]);
    await store.completeTask("t5", [
      { op: "MOD", target: "ie1", field: "evaluationRule", value: "Weighted." },
    ]);
    await store.completeTask("t6", [
      { op: "MOD", target: "ie2", field: "evaluationRule", value: "Weighted." },
    ]);

    await store.refresh();
    const snap = store.snapshot();
    expect(snap.tasks.filter((t) => t.status === "open")).toEqual([]);
    expect(snap.violations).toEqual([]);

    // everything shown came from the service: the log holds each write
    const log = await client.log(snap.session!.sessionId);
    expect(log.records.map((r) => r.action)).toEqual([
      "op", "complete", "complete", "complete", "complete", "complete",
    ]);
    expect(store.revision).toBe(6);
  }, 20000);
});

describe("concurrent tabs", () => {
  it("routes the losing tab through the 409 refresh path", async () => {
    const tabA = new AssistantStore(client);
    await tabA.openSession(goal, "walkthrough");
    await tabA.applyOperations([
      {
        op: "ADD",
        kind: "measures",
        payload: { id: "mX", stub: true, quantifies: ["f1"] },
      },
    ]);
    const sessionId = tabA.snapshot().session!.sessionId;

    // tab B attaches to the same session at the same revision
    const tabB = new AssistantStore(client);
    await tabB.attach(sessionId);
    expect(tabB.revision).toBe(1);

    // tab A completes the task first …
    await tabA.completeTask("t1", [
      { op: "MOD", target: "mX", field: "name", value: "X" },
      { op: "MOD", target: "mX", field: "measurementRule", value: "r" },
    ]);
    // … so tab B's write with the stale revision conflicts
    const result = await tabB.completeTask("t1", []);
    expect(result).toBeNull();
    expect(tabB.snapshot().conflict).toBe(true);

    // the session is unchanged by the rejected write and refresh recovers
    await tabB.refresh();
    expect(tabB.snapshot().conflict).toBe(false);
    expect(tabB.revision).toBe(2);
  }, 20000);

  it("raw 409 bodies are machine readable", async () => {
    const created = await client.createSession(goal, "walkthrough");
    const error = await client
      .applyOperations(created.session.sessionId, 99, [
        { op: "DEL", target: "m0" },
      ])
      .then(() => null, (e: unknown) => e as ApiError);
    expect(error!.status).toBe(409);
    expect(error!.code).toBe("stale-revision");
    expect(error!.details).toEqual({ quoted: 99, current: 0 });
  });
});
