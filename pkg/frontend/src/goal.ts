/** Goal form model and client-side validation.
 *
 * The editor only ever submits a well-formed goal document: set parameters
 * are non-empty chip lists, the purpose is one of the known three, and
 * context rows pair a dimension name with at least one value.
 */

import type { GoalDocument } from "./api.js";

export const PURPOSES = ["specification", "evaluation", "prediction"] as const;

export interface ContextRow {
  dimension: string;
  values: string[];
}

export interface GoalForm {
  object: string[];
  purpose: string;
  viewpoint: string[];
  focus: string[];
  context: ContextRow[];
}

export function emptyGoalForm(): GoalForm {
  return { object: [], purpose: "evaluation", viewpoint: [], focus: [], context: [] };
}

function checkChips(field: string, values: string[], errors: string[]): void {
  if (values.length === 0) {
    errors.push(`${field}: add at least one entry`);
  }
  if (values.some((v) => v.trim() === "")) {
    errors.push(`${field}: entries must not be blank`);
  }
}

export function validateGoalForm(form: GoalForm): string[] {
  const errors: string[] = [];
  checkChips("object", form.object, errors);
  checkChips("viewpoint", form.viewpoint, errors);
  checkChips("focus", form.focus, errors);
  if (!PURPOSES.includes(form.purpose as (typeof PURPOSES)[number])) {
    errors.push(`purpose: choose one of ${PURPOSES.join(", ")}`);
  }
  const seen = new Set<string>();
  for (const row of form.context) {
    const dim = row.dimension.trim();
    if (dim === "") {
      errors.push("context: dimension name must not be blank");
      continue;
    }
    const key = dim.toLowerCase();
    if (seen.has(key)) {
      errors.push(`context: dimension "${dim}" listed twice`);
    }
    seen.add(key);
    if (row.values.length === 0 || row.values.every((v) => v.trim() === "")) {
      errors.push(`context: dimension "${dim}" needs at least one value`);
    }
  }
  return errors;
}

/** Build the goal document; throws if the form does not validate. */
export function buildGoalDocument(form: GoalForm): GoalDocument {
  const errors = validateGoalForm(form);
  if (errors.length > 0) {
    throw new Error(`goal form invalid: ${errors.join("; ")}`);
  }
  const context: Record<string, string[]> = {};
  for (const row of form.context) {
    context[row.dimension.trim()] = row.values
      .map((v) => v.trim())
      .filter((v) => v !== "");
  }
  return {
    object: form.object.map((v) => v.trim()),
    purpose: form.purpose,
    viewpoint: form.viewpoint.map((v) => v.trim()),
    focus: form.focus.map((v) => v.trim()),
    context,
  };
}

/** Parse a comma-separated chip input into trimmed, deduplicated entries. */
export function parseChips(raw: string): string[] {
  const out: string[] = [];
  const seen = new Set<string>();
  for (const part of raw.split(",")) {
    const value = part.trim();
    const key = value.toLowerCase();
    if (value !== "" && !seen.has(key)) {
      seen.add(key);
      out.push(value);
    }
  }
  return out;
}
