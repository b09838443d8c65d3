/** DOM wiring for the adaptation assistant single-page client. */

import { ApiClient } from "./api.js";
import {
  buildGoalDocument,
  emptyGoalForm,
  parseChips,
  validateGoalForm,
  type GoalForm,
  PURPOSES,
} from "./goal.js";
import {
  departedTasks,
  describeTask,
  formatScore,
  groupReport,
} from "./format.js";
import { AssistantStore, type AssistantSnapshot } from "./state.js";
import { PollController } from "./poll.js";

const TONE_CLASS = { delete: "tone-delete", stub: "tone-stub", review: "tone-review" };

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

export function mountApp(root: HTMLElement, baseUrl: string): void {
  const client = new ApiClient(baseUrl);
  const store = new AssistantStore(client);
  const poll = new PollController(() => store.refresh());
  const form: GoalForm = emptyGoalForm();
  let previousOpen: string[] = [];

  const goalPanel = el("section", "panel goal-editor");
  const rankingPanel = el("section", "panel ranking");
  const previewPanel = el("section", "panel preview");
  const inboxPanel = el("section", "panel inbox");
  const validationPanel = el("section", "panel validation");
  root.replaceChildren(
    goalPanel, rankingPanel, previewPanel, inboxPanel, validationPanel,
  );

  function chipInput(label: string, onChange: (values: string[]) => void) {
    const wrap = el("label", "chip-input", label + " ");
    const input = el("input");
    input.addEventListener("change", () => onChange(parseChips(input.value)));
    wrap.append(input);
    return wrap;
  }

  function renderGoalEditor(): void {
    goalPanel.replaceChildren(el("h2", "", "Adaptation goal"));
    goalPanel.append(
      chipInput("Object", (v) => (form.object = v)),
      chipInput("Viewpoint", (v) => (form.viewpoint = v)),
      chipInput("Focus", (v) => (form.focus = v)),
    );
    const purpose = el("select");
    for (const p of PURPOSES) {
      const option = el("option", "", p);
      option.value = p;
      purpose.append(option);
    }
    purpose.value = form.purpose;
    purpose.addEventListener("change", () => (form.purpose = purpose.value));
    const purposeLabel = el("label", "", "Purpose ");
    purposeLabel.append(purpose);
    goalPanel.append(purposeLabel);

    const contextRows = el("div", "context-rows");
    const addRow = el("button", "", "+ context dimension");
    addRow.addEventListener("click", () => {
      const row = { dimension: "", values: [] as string[] };
      form.context.push(row);
      const dim = el("input", "dim");
      dim.placeholder = "dimension";
      dim.addEventListener("change", () => (row.dimension = dim.value));
      const values = el("input", "values");
      values.placeholder = "values, comma-separated";
      values.addEventListener("change", () => (row.values = parseChips(values.value)));
      const line = el("div", "context-row");
      line.append(dim, values);
      contextRows.append(line);
    });
    goalPanel.append(contextRows, addRow);

    const errorBox = el("div", "errors");
    const submit = el("button", "primary", "Rank reference models");
    submit.addEventListener("click", () => {
      const errors = validateGoalForm(form);
      errorBox.replaceChildren(...errors.map((e) => el("div", "error", e)));
      if (errors.length > 0) return; // inline validation, no request
      void store.rank(buildGoalDocument(form));
    });
    goalPanel.append(errorBox, submit);
  }

  function renderRanking(snap: AssistantSnapshot): void {
    rankingPanel.replaceChildren(el("h2", "", "Reference model ranking"));
    if (snap.ranking.length === 0) {
      rankingPanel.append(el("p", "empty", "Submit a goal to rank the pool."));
      return;
    }
    const table = el("table");
    const head = el("tr");
    for (const h of ["model", "fitness", "object", "purpose", "viewpoint", "focus", "context", ""]) {
      head.append(el("th", "", h));
    }
    table.append(head);
    for (const entry of snap.ranking) {
      const row = el("tr");
      row.append(el("td", "", entry.model), el("td", "", formatScore(entry)));
      for (const p of ["object", "purpose", "viewpoint", "focus", "context"]) {
        row.append(el("td", "", entry.perParameter[p] ?? ""));
      }
      const pick = el("button", "", "start session");
      pick.addEventListener("click", () => {
        void store.openSession(buildGoalDocument(form), entry.model);
      });
      const cell = el("td");
      cell.append(pick);
      row.append(cell);
      table.append(row);
    }
    rankingPanel.append(table);
    for (const mid of snap.skipped) {
      rankingPanel.append(el("p", "skipped", `${mid}: no embedded goal, skipped`));
    }
  }

  function renderPreview(snap: AssistantSnapshot): void {
    previewPanel.replaceChildren(el("h2", "", "Tailoring preview"));
    if (!snap.report || !snap.session) {
      previewPanel.append(el("p", "empty", "Pick a reference model first."));
      return;
    }
    for (const group of groupReport(snap.report)) {
      const box = el("div", `group ${TONE_CLASS[group.tone]}`);
      box.append(el("h3", "", group.rule));
      for (const item of group.items) {
        const cascade = item.cascades > 0 ? ` (+${item.cascades} cascaded)` : "";
        box.append(el("div", "item", `${item.label}${cascade} — ${item.reason}`));
      }
      previewPanel.append(box);
    }
    if (!snap.session.tailored) {
      const apply = el("button", "primary", "Apply tailoring");
      apply.addEventListener("click", () => {
        void store.applyTailoring().then(() => poll.bump());
      });
      previewPanel.append(apply);
    } else {
      previewPanel.append(el("p", "applied", "Plan applied."));
    }
  }

  function renderInbox(snap: AssistantSnapshot): void {
    inboxPanel.replaceChildren(el("h2", "", "Adaptation to-do list"));
    if (snap.conflict) {
      const banner = el("div", "conflict",
        "Someone else changed this session. Refresh to continue.");
      const refresh = el("button", "", "Refresh");
      refresh.addEventListener("click", () => void store.refresh());
      banner.append(refresh);
      inboxPanel.append(banner);
    }
    const open = snap.tasks.filter((t) => t.status === "open");
    for (const gone of departedTasks(
      previousOpen.map((taskId) => ({ taskId })),
      open,
    )) {
      const ghost = el("div", "task leaving", gone);
      inboxPanel.append(ghost);
      setTimeout(() => ghost.remove(), 400);
    }
    previousOpen = open.map((t) => t.taskId);
    if (open.length === 0) {
      inboxPanel.append(el("p", "empty", "No open tasks."));
    }
    for (const task of open) {
      const row = el("div", "task");
      row.append(el("span", "text", describeTask(task)));
      const complete = el("button", "", "complete");
      complete.addEventListener("click", () => {
        void store.completeTask(task.taskId, task.suggestedOps)
          .then(() => poll.bump());
      });
      const note = el("input", "waive-note");
      note.placeholder = "waiver note";
      const waive = el("button", "", "waive");
      waive.addEventListener("click", () => {
        if (note.value.trim() === "") {
          note.classList.add("invalid"); // blocked client-side
          return;
        }
        void store.waiveTask(task.taskId, note.value).then(() => poll.bump());
      });
      row.append(complete, note, waive);
      inboxPanel.append(row);
    }
  }

  function renderValidation(snap: AssistantSnapshot): void {
    validationPanel.replaceChildren(el("h2", "", "Validation"));
    const badge = el("span", "badge", String(snap.violations.length));
    validationPanel.append(badge);
    if (snap.violations.length === 0) {
      validationPanel.append(el("p", "empty", "Model is consistent."));
      return;
    }
    for (const v of snap.violations) {
      validationPanel.append(
        el("div", `violation ${v.severity}`, `${v.rule} ${v.target}: ${v.message}`),
      );
    }
  }

  store.subscribe((snap) => {
    renderRanking(snap);
    renderPreview(snap);
    renderInbox(snap);
    renderValidation(snap);
  });
  renderGoalEditor();
  renderRanking(store.snapshot());
  renderPreview(store.snapshot());
  renderInbox(store.snapshot());
  renderValidation(store.snapshot());
  poll.start();
}
