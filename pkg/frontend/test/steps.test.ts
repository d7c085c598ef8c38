import { describe, expect, it } from "vitest";

import {
  addStep,
  allLabels,
  countSteps,
  getStep,
  indentStep,
  moveStep,
  newStep,
  outdentStep,
  removeStep,
  updateStep,
} from "../src/steps.js";
import type { StepDoc } from "../src/types.js";

const three: StepDoc[] = [
  { label: "one", kind: "atomic" },
  { label: "two", kind: "atomic" },
  { label: "three", kind: "atomic" },
];

describe("step tree editing", () => {
  it("adds top-level and nested steps", () => {
    let steps = addStep([], null, newStep("first"));
    steps = addStep(steps, null, newStep("second"));
    expect(allLabels(steps)).toEqual(["first", "second"]);

    steps = addStep(steps, [0], newStep("child"));
    expect(steps[0].kind).toBe("multistep");
    expect(steps[0].substeps?.[0].label).toBe("child");
    expect(countSteps(steps)).toBe(3);
  });

  it("updates fields in place without touching siblings", () => {
    const updated = updateStep(three, [1], { label: "TWO", expected_duration_s: 60 });
    expect(updated[1].label).toBe("TWO");
    expect(updated[1].expected_duration_s).toBe(60);
    expect(updated[0]).toEqual(three[0]);
    expect(three[1].label).toBe("two"); // input untouched
  });

  it("removes steps", () => {
    const removed = removeStep(three, [1]);
    expect(allLabels(removed)).toEqual(["one", "three"]);
  });

  it("reordering preserves the label multiset", () => {
    const moved = moveStep(three, [], 0, 2);
    expect(moved.map((s) => s.label)).toEqual(["two", "three", "one"]);
    expect(allLabels(moved)).toEqual(allLabels(three));
    const back = moveStep(moved, [], 2, 0);
    expect(back.map((s) => s.label)).toEqual(["one", "two", "three"]);
  });

  it("rejects out-of-range moves", () => {
    expect(() => moveStep(three, [], 0, 5)).toThrow(RangeError);
  });

  it("indents under the previous sibling and outdents back", () => {
    const nested = indentStep(three, [1]);
    expect(nested.length).toBe(2);
    expect(nested[0].kind).toBe("multistep");
    expect(nested[0].substeps?.map((s) => s.label)).toEqual(["two"]);
    expect(allLabels(nested)).toEqual(allLabels(three));

    const flattened = outdentStep(nested, [0, 0]);
    expect(flattened.map((s) => s.label)).toEqual(["one", "two", "three"]);
    expect(flattened[0].kind).toBe("atomic");
    expect(flattened[0].substeps).toBeUndefined();
  });

  it("indenting the first step is a no-op", () => {
    expect(indentStep(three, [0])).toEqual(three);
  });

  it("getStep resolves nested paths", () => {
    const nested = indentStep(three, [1]);
    expect(getStep(nested, [0, 0]).label).toBe("two");
    expect(() => getStep(nested, [4])).toThrow(RangeError);
  });
});
