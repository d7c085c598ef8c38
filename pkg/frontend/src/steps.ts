// Pure operations on the ordered, nestable step tree. The drag-and-drop
// layer calls these; they never lose or duplicate steps.

import type { StepDoc } from "./types.js";

export type StepPath = number[];

function clone<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}

function parentList(steps: StepDoc[], path: StepPath): StepDoc[] {
  let list = steps;
  for (const index of path.slice(0, -1)) {
    const step = list[index];
    if (!step || !step.substeps) throw new RangeError(`bad step path ${path.join(".")}`);
    list = step.substeps;
  }
  return list;
}

export function getStep(steps: StepDoc[], path: StepPath): StepDoc {
  const step = parentList(steps, path)[path[path.length - 1]];
  if (!step) throw new RangeError(`bad step path ${path.join(".")}`);
  return step;
}

export function newStep(label = ""): StepDoc {
  return { label, kind: "atomic" };
}

export function addStep(steps: StepDoc[], parent: StepPath | null, step: StepDoc): StepDoc[] {
  const next = clone(steps);
  if (parent === null || parent.length === 0) {
    next.push(clone(step));
    return next;
  }
  const host = getStep(next, parent);
  host.kind = "multistep";
  host.substeps = host.substeps ?? [];
  host.substeps.push(clone(step));
  return next;
}

export function updateStep(
  steps: StepDoc[],
  path: StepPath,
  patch: Partial<StepDoc>,
): StepDoc[] {
  const next = clone(steps);
  const list = parentList(next, path);
  const index = path[path.length - 1];
  list[index] = { ...list[index], ...clone(patch) };
  return next;
}

export function removeStep(steps: StepDoc[], path: StepPath): StepDoc[] {
  const next = clone(steps);
  const list = parentList(next, path);
  list.splice(path[path.length - 1], 1);
  return next;
}

/** Reorder within one parent (a drag from `from` dropped at `to`). */
export function moveStep(
  steps: StepDoc[],
  parent: StepPath,
  from: number,
  to: number,
): StepDoc[] {
  const next = clone(steps);
  const list = parent.length === 0 ? next : (getStep(next, parent).substeps ?? []);
  if (from < 0 || from >= list.length || to < 0 || to >= list.length) {
    throw new RangeError(`bad move ${from} -> ${to}`);
  }
  const [moved] = list.splice(from, 1);
  list.splice(to, 0, moved);
  return next;
}

/** Nest a step under its previous sibling (which becomes a multistep). */
export function indentStep(steps: StepDoc[], path: StepPath): StepDoc[] {
  const index = path[path.length - 1];
  if (index === 0) return steps; // nothing to indent under
  const next = clone(steps);
  const list = parentList(next, path);
  const [moved] = list.splice(index, 1);
  const host = list[index - 1];
  host.kind = "multistep";
  host.substeps = host.substeps ?? [];
  host.substeps.push(moved);
  return next;
}

/** Pull a nested step up next to its parent. */
export function outdentStep(steps: StepDoc[], path: StepPath): StepDoc[] {
  if (path.length < 2) return steps;
  const next = clone(steps);
  const parentPath = path.slice(0, -1);
  const parent = getStep(next, parentPath);
  const [moved] = (parent.substeps ?? []).splice(path[path.length - 1], 1);
  if (!parent.substeps || parent.substeps.length === 0) {
    delete parent.substeps;
    parent.kind = "atomic";
  }
  const grandList = parentList(next, parentPath);
  grandList.splice(parentPath[parentPath.length - 1] + 1, 0, moved);
  return next;
}

export function allLabels(steps: StepDoc[]): string[] {
  const out: string[] = [];
  const walk = (list: StepDoc[]) => {
    for (const step of list) {
      out.push(step.label);
      if (step.substeps) walk(step.substeps);
    }
  };
  walk(steps);
  return out.sort();
}

export function countSteps(steps: StepDoc[]): number {
  return allLabels(steps).length;
}
