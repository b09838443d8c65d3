/** Pure presentation helpers: tailoring-report grouping, score and task
 * formatting.  Kept DOM-free so the view contracts are unit-testable. */

import type {
  RankingEntry,
  TailoringAction,
  TailoringReport,
  Task,
} from "./api.js";

export type GroupTone = "delete" | "stub" | "review";

export interface ReportGroupItem {
  label: string;
  reason: string;
  cascades: number;
}

export interface ReportGroup {
  rule: string;
  tone: GroupTone;
  items: ReportGroupItem[];
}

function actionLabel(action: TailoringAction): string {
  if (action.action === "add-stub") {
    const name = action.op.payload?.name;
    return typeof name === "string" && name !== "" ? name : "(unnamed stub)";
  }
  return action.op.target ?? "(unknown)";
}

const RULE_ORDER = [
  "TR1", "TR2", "TR3", "TR4", "TR5", "TR6", "TR7", "TR8", "TR9", "TR10",
];

/** Group report actions by rule in TR order; deletes are toned red,
 * stubs amber, and TR10 review items blue. */
export function groupReport(report: TailoringReport): ReportGroup[] {
  const groups = new Map<string, ReportGroup>();
  for (const action of report.actions) {
    let group = groups.get(action.rule);
    if (!group) {
      group = {
        rule: action.rule,
        tone: action.action === "add-stub" ? "stub" : "delete",
        items: [],
      };
      groups.set(action.rule, group);
    }
    group.items.push({
      label: actionLabel(action),
      reason: action.reason,
      cascades: action.autoConsequences.length,
    });
  }
  if (report.reviewTasks.length > 0) {
    groups.set("TR10", {
      rule: "TR10",
      tone: "review",
      items: report.reviewTasks.map((item) => ({
        label: `${item.dimension}=${item.value}`,
        reason: item.text,
        cascades: 0,
      })),
    });
  }
  return [...groups.values()].sort(
    (a, b) => RULE_ORDER.indexOf(a.rule) - RULE_ORDER.indexOf(b.rule),
  );
}

/** "5/6" -> "5/6 (0.833)" using the service-provided decimal. */
export function formatScore(entry: RankingEntry): string {
  return `${entry.total} (${entry.totalDecimal.toFixed(3)})`;
}

export function describeTask(task: Task): string {
  const where = task.target ? ` [${task.target}]` : "";
  return `${task.taskId}${where} ${task.text}`;
}

/** Tasks present in the previous poll but no longer open: these animate
 * out of the inbox (auto-completed or obsoleted by a cascade). */
export function departedTasks(
  previous: { taskId: string }[],
  current: { taskId: string }[],
): string[] {
  const still = new Set(current.map((t) => t.taskId));
  return previous.filter((t) => !still.has(t.taskId)).map((t) => t.taskId);
}
