// Page ordering and gating for the step-by-step authoring flow:
// Basics -> Steps -> Resources -> Review -> Submit.

import { canSubmit, FormState, SECTIONS, SectionId } from "./state.js";
import { countSteps } from "./steps.js";

export function pageIndex(page: SectionId): number {
  return SECTIONS.indexOf(page);
}

/** Whether the user may advance past `page` given the current draft. */
export function canLeave(state: FormState, page: SectionId): boolean {
  switch (page) {
    case "basics":
      return state.doc.procedure.title.trim().length > 0
        && state.doc.procedure.status.trim().length > 0;
    case "steps":
      return countSteps(state.doc.procedure.steps) > 0;
    case "resources":
      return true;
    case "review":
      // the review page must have fetched a preview/validation round
      return state.lastReport !== null;
    case "submit":
      return false;
  }
}

export function nextPage(state: FormState, page: SectionId): SectionId {
  if (!canLeave(state, page)) return page;
  const index = pageIndex(page);
  return SECTIONS[Math.min(index + 1, SECTIONS.length - 1)];
}

export function previousPage(page: SectionId): SectionId {
  const index = pageIndex(page);
  return SECTIONS[Math.max(index - 1, 0)];
}

/** Furthest page reachable, for rendering the progress rail. */
export function reachablePages(state: FormState): SectionId[] {
  const out: SectionId[] = [];
  for (const page of SECTIONS) {
    out.push(page);
    if (page !== "submit" && !canLeave(state, page)) break;
  }
  return out;
}

export function submitEnabled(state: FormState): boolean {
  return canSubmit(state);
}
