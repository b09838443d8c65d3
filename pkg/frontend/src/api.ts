/** Typed client for the qm-adapt HTTP service.
 *
 * Every write quotes the revision the caller last saw; the service answers
 * 409 when it is stale.  All non-2xx responses carry a machine-readable
 * {code, message, details} body which is surfaced as ApiError.
 */

export interface GoalDocument {
  object: string[];
  purpose: string;
  viewpoint: string[];
  focus: string[];
  context: Record<string, string[]>;
  weights?: Record<string, number>;
}

export interface Operation {
  op: "ADD" | "DEL" | "MOD";
  kind?: string;
  target?: string;
  field?: string;
  value?: unknown;
  payload?: Record<string, unknown>;
}

export interface Task {
  taskId: string;
  templateId: string;
  target: string | null;
  text: string;
  status: "open" | "completed" | "waived" | "obsolete";
  origin: string;
  resolution: string | null;
  suggestedOps: Operation[];
}

export interface Violation {
  rule: string;
  target: string;
  severity: "structural" | "operational";
  message: string;
}

export interface TailoringAction {
  rule: string;
  action: "delete" | "add-stub";
  op: Operation;
  reason: string;
  autoConsequences: Operation[];
  spawnedTasks: unknown[];
}

export interface ReviewItem {
  dimension: string;
  value: string;
  text: string;
}

export interface TailoringReport {
  schema: string;
  modelHash: string;
  goal: GoalDocument;
  flagContext: boolean;
  actions: TailoringAction[];
  reviewTasks: ReviewItem[];
  counts: Record<string, number>;
  seededTasks: number;
  resultModelHash: string;
  openTaskCount: number;
}

export interface SessionHandle {
  sessionId: string;
  modelHash: string;
  revision: number;
  referenceModelId: string;
  tailored: boolean;
}

export interface PoolEntry {
  modelId: string;
  name: string;
  elementCount: number;
  goal: GoalDocument | null;
  modelHash: string;
}

export interface RankingEntry {
  model: string;
  total: string;
  totalDecimal: number;
  perParameter: Record<string, string>;
}

export interface LogRecord {
  seq: number;
  action: string;
  [key: string]: unknown;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly details: unknown = {},
  ) {
    super(message);
    this.name = "ApiError";
  }

  get isConflict(): boolean {
    return this.status === 409;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      let code = "http-error";
      let message = `${method} ${path} failed with ${response.status}`;
      let details: unknown = {};
      try {
        const doc = await response.json();
        if (doc && typeof doc === "object") {
          code = (doc as any).code ?? code;
          message = (doc as any).message ?? message;
          details = (doc as any).details ?? details;
        }
      } catch {
        // non-JSON error body: keep the generic message
      }
      throw new ApiError(response.status, code, message, details);
    }
    return (await response.json()) as T;
  }

  pool(): Promise<{ pool: PoolEntry[] }> {
    return this.request("GET", "/pool");
  }

  rank(goal: GoalDocument): Promise<{ ranking: RankingEntry[]; skipped: string[] }> {
    return this.request("POST", "/rank", goal);
  }

  createSession(
    goal: GoalDocument,
    referenceModelId: string,
    flagContext = true,
  ): Promise<{ session: SessionHandle; report: TailoringReport }> {
    return this.request("POST", "/sessions", { goal, referenceModelId, flagContext });
  }

  applyTailoring(
    sessionId: string,
    revision: number,
  ): Promise<{ session: SessionHandle; report: TailoringReport; tasks: Task[] }> {
    return this.request("POST", `/sessions/${sessionId}/tailor`, { revision });
  }

  session(sessionId: string): Promise<{ session: SessionHandle }> {
    return this.request("GET", `/sessions/${sessionId}`);
  }

  model(sessionId: string): Promise<Record<string, unknown>> {
    return this.request("GET", `/sessions/${sessionId}/model`);
  }

  tasks(sessionId: string): Promise<{ revision: number; tasks: Task[] }> {
    return this.request("GET", `/sessions/${sessionId}/tasks`);
  }

  validate(
    sessionId: string,
  ): Promise<{ revision: number; purpose: string; violations: Violation[] }> {
    return this.request("GET", `/sessions/${sessionId}/validate`);
  }

  log(sessionId: string): Promise<{ revision: number; records: LogRecord[] }> {
    return this.request("GET", `/sessions/${sessionId}/log`);
  }

  applyOperations(
    sessionId: string,
    revision: number,
    ops: Operation[],
  ): Promise<{ session: SessionHandle; records: LogRecord[]; tasks: Task[] }> {
    return this.request("POST", `/sessions/${sessionId}/operations`, { revision, ops });
  }

  completeTask(
    sessionId: string,
    taskId: string,
    revision: number,
    ops: Operation[] = [],
  ): Promise<{ session: SessionHandle; record: LogRecord; tasks: Task[] }> {
    return this.request("POST", `/sessions/${sessionId}/tasks/${taskId}/complete`, {
      revision,
      ops,
    });
  }

  waiveTask(
    sessionId: string,
    taskId: string,
    revision: number,
    note: string,
  ): Promise<{ session: SessionHandle; record: LogRecord; tasks: Task[] }> {
    return this.request("POST", `/sessions/${sessionId}/tasks/${taskId}/waive`, {
      revision,
      note,
    });
  }

  audit(
    sessionId: string,
    goldDelta: unknown,
    minutes?: number,
  ): Promise<Record<string, unknown>> {
    return this.request("POST", `/sessions/${sessionId}/audit`, {
      goldDelta,
      minutes,
    });
  }
}
