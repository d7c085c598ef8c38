import { describe, expect, it } from "vitest";

import { RULE_SECTIONS, findingsBySection, sectionFor } from "../src/rules.js";
import type { Finding } from "../src/types.js";

function finding(rule: string): Finding {
  return { rule, focus: "http://example.org/x", message: "m", severity: "violation" };
}

describe("rule to section mapping", () => {
  it("covers all fifteen built-in rules", () => {
    const ids = Array.from({ length: 15 }, (_, i) => `R${String(i + 1).padStart(2, "0")}`);
    for (const id of ids) expect(RULE_SECTIONS[id], id).toBeDefined();
  });

  it("step-structure rules point at the steps page", () => {
    for (const id of ["R01", "R02", "R04", "R11", "R13", "R14", "R15"]) {
      expect(sectionFor(finding(id))).toBe("steps");
    }
    expect(sectionFor(finding("R05"))).toBe("basics");
  });

  it("unknown rules land on the review page", () => {
    expect(sectionFor(finding("R99"))).toBe("review");
  });

  it("groups a report by section", () => {
    const grouped = findingsBySection({
      conforms: false,
      findings: [finding("R01"), finding("R04"), finding("R05")],
    });
    expect(grouped.get("steps")?.length).toBe(2);
    expect(grouped.get("basics")?.length).toBe(1);
    expect(grouped.get("review")).toBeUndefined();
  });

  it("handles a missing report", () => {
    expect(findingsBySection(null).size).toBe(0);
  });
});
