import { describe, expect, it } from "vitest";

import {
  buildGoalDocument,
  emptyGoalForm,
  parseChips,
  validateGoalForm,
} from "../src/goal.js";

function filledForm() {
  const form = emptyGoalForm();
  form.object = ["Source code"];
  form.purpose = "evaluation";
  form.viewpoint = ["User"];
  form.focus = ["Reliability", "Safety", "Usability"];
  form.context = [
    { dimension: "Domain", values: ["Embedded"] },
    { dimension: "Language", values: ["Assembler"] },
  ];
  return form;
}

describe("goal form validation", () => {
  it("accepts a complete form", () => {
    expect(validateGoalForm(filledForm())).toEqual([]);
  });

  it("blocks an empty focus before any request is made", () => {
    const form = filledForm();
    form.focus = [];
    const errors = validateGoalForm(form);
    expect(errors.some((e) => e.startsWith("focus:"))).toBe(true);
    expect(() => buildGoalDocument(form)).toThrow(/focus/);
  });

  it("rejects unknown purposes and duplicate context dimensions", () => {
    const form = filledForm();
    form.purpose = "decoration";
    form.context.push({ dimension: "domain", values: ["Web"] });
    const errors = validateGoalForm(form);
    expect(errors.some((e) => e.startsWith("purpose:"))).toBe(true);
    expect(errors.some((e) => e.includes("listed twice"))).toBe(true);
  });

  it("rejects context rows without values", () => {
    const form = filledForm();
    form.context.push({ dimension: "Platform", values: ["  "] });
    expect(validateGoalForm(form)).toHaveLength(1);
  });

  it("builds the exact goal document for the worked example", () => {
    expect(buildGoalDocument(filledForm())).toEqual({
      object: ["Source code"],
      purpose: "evaluation",
      viewpoint: ["User"],
      focus: ["Reliability", "Safety", "Usability"],
      context: { Domain: ["Embedded"], Language: ["Assembler"] },
    });
  });
});

describe("chip parsing", () => {
  it("trims, drops empties, and dedups case-insensitively", () => {
    expect(parseChips(" C, C++ ,, c ,Assembler")).toEqual(["C", "C++", "Assembler"]);
  });

  it("returns an empty list for blank input", () => {
    expect(parseChips("  ,  ")).toEqual([]);
  });
});
