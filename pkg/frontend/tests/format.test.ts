import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import type { TailoringReport } from "../src/api.js";
import { departedTasks, formatScore, groupReport } from "../src/format.js";

const goldenPath = fileURLToPath(
  new URL("../../fixtures/golden-tailoring-report.json", import.meta.url),
);
const golden = JSON.parse(readFileSync(goldenPath, "utf-8")) as TailoringReport;

describe("tailoring preview grouping", () => {
  it("groups the worked-example report into the six expected rule groups", () => {
    const groups = groupReport(golden);
    expect(groups.map((g) => g.rule)).toEqual(
      ["TR1", "TR4", "TR7", "TR8", "TR9", "TR10"],
    );
    const byRule = Object.fromEntries(groups.map((g) => [g.rule, g]));
    expect(byRule.TR1.items[0].label).toBe("et_req");
    expect(byRule.TR4.items[0].label).toBe("qa_maint");
    expect(byRule.TR7.items[0].label).toBe("Usability");
    expect(byRule.TR8.items[0].label).toBe("fa_doc_class");
    expect(byRule.TR9.items[0].label).toBe("me_dit");
    expect(byRule.TR10.items[0].label).toBe("Language=Assembler");
  });

  it("tones deletes red, stubs amber, review items blue", () => {
    const byRule = Object.fromEntries(groupReport(golden).map((g) => [g.rule, g]));
    expect(byRule.TR1.tone).toBe("delete");
    expect(byRule.TR7.tone).toBe("stub");
    expect(byRule.TR10.tone).toBe("review");
  });

  it("surfaces cascade counts on delete items", () => {
    const byRule = Object.fromEntries(groupReport(golden).map((g) => [g.rule, g]));
    expect(byRule.TR4.items[0].cascades).toBeGreaterThan(0);
  });
});

describe("score formatting", () => {
  it("shows the exact fraction with a rounded decimal", () => {
    expect(
      formatScore({
        model: "m", total: "5/6", totalDecimal: 5 / 6, perParameter: {},
      }),
    ).toBe("5/6 (0.833)");
  });
});

describe("task departures", () => {
  it("reports tasks that left the open list", () => {
    const before = [{ taskId: "t1" }, { taskId: "t2" }, { taskId: "t3" }];
    const after = [{ taskId: "t2" }];
    expect(departedTasks(before, after)).toEqual(["t1", "t3"]);
  });
});
