/** Session-side state store for the assistant.
 *
 * All writes quote the latest revision seen from the service and a 409 is
 * never retried automatically: the store flips into `conflict` and the UI
 * offers an explicit refresh.  One write is in flight per session at a
 * time; reads may overlap.
 */

import {
  ApiClient,
  ApiError,
  type GoalDocument,
  type Operation,
  type RankingEntry,
  type SessionHandle,
  type TailoringReport,
  type Task,
  type Violation,
} from "./api.js";

export interface AssistantSnapshot {
  ranking: RankingEntry[];
  skipped: string[];
  session: SessionHandle | null;
  report: TailoringReport | null;
  tasks: Task[];
  violations: Violation[];
  conflict: boolean;
  lastError: string | null;
}

type Listener = (snapshot: AssistantSnapshot) => void;

export class AssistantStore {
  private ranking: RankingEntry[] = [];
  private skipped: string[] = [];
  private session: SessionHandle | null = null;
  private report: TailoringReport | null = null;
  private tasks: Task[] = [];
  private violations: Violation[] = [];
  private conflict = false;
  private lastError: string | null = null;
  private writing = false;
  private listeners: Listener[] = [];

  constructor(private readonly client: ApiClient) {}

  snapshot(): AssistantSnapshot {
    return {
      ranking: this.ranking,
      skipped: this.skipped,
      session: this.session,
      report: this.report,
      tasks: this.tasks,
      violations: this.violations,
      conflict: this.conflict,
      lastError: this.lastError,
    };
  }

  get revision(): number {
    return this.session?.revision ?? 0;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    const snap = this.snapshot();
    for (const listener of this.listeners) listener(snap);
  }

  async rank(goal: GoalDocument): Promise<void> {
    const result = await this.client.rank(goal);
    this.ranking = result.ranking;
    this.skipped = result.skipped;
    this.emit();
  }

  async openSession(goal: GoalDocument, referenceModelId: string): Promise<void> {
    const created = await this.client.createSession(goal, referenceModelId);
    this.session = created.session;
    this.report = created.report;
    this.tasks = [];
    this.violations = [];
    this.conflict = false;
    this.lastError = null;
    this.emit();
  }

  /** Attach to an existing session (second tab, reopened browser). */
  async attach(sessionId: string): Promise<void> {
    const handle = await this.client.session(sessionId);
    this.session = handle.session;
    this.report = null;
    this.conflict = false;
    this.lastError = null;
    await this.refresh();
  }

  /** Serialize writes and route 409s into the conflict state. */
  private async write<T extends { session: SessionHandle; tasks?: Task[] }>(
    action: () => Promise<T>,
  ): Promise<T | null> {
    if (this.writing) {
      throw new Error("another write is already in flight");
    }
    if (this.session === null) {
      throw new Error("no session open");
    }
    this.writing = true;
    try {
      const result = await action();
      this.session = result.session;
      if (result.tasks !== undefined) this.tasks = result.tasks;
      this.lastError = null;
      this.emit();
      return result;
    } catch (error) {
      if (error instanceof ApiError && error.isConflict) {
        this.conflict = true;
        this.lastError = error.message;
        this.emit();
        return null;
      }
      if (error instanceof ApiError) {
        this.lastError = error.message;
        this.emit();
      }
      throw error;
    } finally {
      this.writing = false;
    }
  }

  applyTailoring(): Promise<unknown> {
    return this.write(() =>
      this.client.applyTailoring(this.session!.sessionId, this.revision),
    );
  }

  applyOperations(ops: Operation[]): Promise<unknown> {
    return this.write(() =>
      this.client.applyOperations(this.session!.sessionId, this.revision, ops),
    );
  }

  completeTask(taskId: string, ops: Operation[] = []): Promise<unknown> {
    return this.write(() =>
      this.client.completeTask(this.session!.sessionId, taskId, this.revision, ops),
    );
  }

  /** Blocked client-side when the note is blank. */
  waiveTask(taskId: string, note: string): Promise<unknown> {
    if (note.trim() === "") {
      return Promise.reject(new Error("a waiver needs a non-empty note"));
    }
    return this.write(() =>
      this.client.waiveTask(this.session!.sessionId, taskId, this.revision, note),
    );
  }

  /** Re-sync after a conflict (or on the polling tick). */
  async refresh(): Promise<void> {
    if (this.session === null) return;
    const id = this.session.sessionId;
    const [handle, tasks, validation] = await Promise.all([
      this.client.session(id),
      this.client.tasks(id),
      this.client.validate(id),
    ]);
    this.session = handle.session;
    this.tasks = tasks.tasks;
    this.violations = validation.violations;
    this.conflict = false;
    this.emit();
  }
}
