// Form state: the draft elicitation document, per-section dirty flags, the
// last validation report, and local draft persistence.

import type { ElicitationDoc, ProcedureDoc, ValidationReport } from "./types.js";
import { countSteps } from "./steps.js";

export type SectionId = "basics" | "steps" | "resources" | "review" | "submit";

export const SECTIONS: SectionId[] = ["basics", "steps", "resources", "review", "submit"];

export interface FormState {
  doc: ElicitationDoc;
  dirty: Record<SectionId, boolean>;
  lastReport: ValidationReport | null;
  /** IRI of the procedure being edited, or null when authoring a new one. */
  editingIri: string | null;
}

export function emptyState(): FormState {
  return {
    doc: { procedure: { title: "", status: "draft", steps: [] } },
    dirty: { basics: false, steps: false, resources: false, review: false, submit: false },
    lastReport: null,
    editingIri: null,
  };
}

export function stateForEditing(doc: ElicitationDoc): FormState {
  const state = emptyState();
  state.doc = JSON.parse(JSON.stringify(doc)) as ElicitationDoc;
  state.editingIri = doc.procedure.id ?? null;
  return state;
}

function touched(state: FormState, section: SectionId): FormState {
  return {
    ...state,
    dirty: { ...state.dirty, [section]: true },
    // structural edits invalidate the previous validation round
    lastReport: section === "review" || section === "submit" ? state.lastReport : null,
  };
}

export function patchProcedure(
  state: FormState,
  patch: Partial<ProcedureDoc>,
  section: SectionId = "basics",
): FormState {
  const next = touched(state, section);
  next.doc = {
    procedure: { ...state.doc.procedure, ...JSON.parse(JSON.stringify(patch)) },
  };
  return next;
}

export function setSteps(state: FormState, steps: ProcedureDoc["steps"]): FormState {
  return patchProcedure(state, { steps }, "steps");
}

export function setReport(state: FormState, report: ValidationReport): FormState {
  return { ...state, lastReport: report, dirty: { ...state.dirty, review: true } };
}

/** Submit is enabled only when the required fields are present client-side:
 * a title, a status, and at least one step (every step labeled). */
export function canSubmit(state: FormState): boolean {
  const procedure = state.doc.procedure;
  if (!procedure.title.trim()) return false;
  if (!procedure.status.trim()) return false;
  if (countSteps(procedure.steps) === 0) return false;
  const labeled = (steps: ProcedureDoc["steps"]): boolean =>
    steps.every((s) => s.label.trim().length > 0 && labeled(s.substeps ?? []));
  return labeled(procedure.steps);
}

export interface DraftStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

function defaultStore(): DraftStore | null {
  return typeof localStorage === "undefined" ? null : localStorage;
}

const DRAFT_PREFIX = "pkforge-draft:";

export function draftKey(state: FormState): string {
  return DRAFT_PREFIX + (state.editingIri ?? "new");
}

export function saveDraft(state: FormState, store: DraftStore | null = defaultStore()): void {
  store?.setItem(draftKey(state), JSON.stringify(state.doc));
}

export function loadDraft(
  editingIri: string | null,
  store: DraftStore | null = defaultStore(),
): ElicitationDoc | null {
  const raw = store?.getItem(DRAFT_PREFIX + (editingIri ?? "new"));
  if (!raw) return null;
  try {
    return JSON.parse(raw) as ElicitationDoc;
  } catch {
    return null;
  }
}

export function clearDraft(state: FormState, store: DraftStore | null = defaultStore()): void {
  store?.removeItem(draftKey(state));
}

/** The document to send: drops empty optional collections so the payload
 * stays schema-minimal. */
export function buildDocument(state: FormState): ElicitationDoc {
  const doc = JSON.parse(JSON.stringify(state.doc)) as ElicitationDoc;
  const prune = (value: Record<string, unknown>): void => {
    for (const [key, entry] of Object.entries(value)) {
      if (entry === undefined || entry === null || entry === "") delete value[key];
      else if (Array.isArray(entry)) {
        if (entry.length === 0) delete value[key];
        else entry.forEach((item) => typeof item === "object" && item && prune(item as never));
      } else if (typeof entry === "object") prune(entry as Record<string, unknown>);
    }
  };
  prune(doc.procedure as unknown as Record<string, unknown>);
  // required keys survive pruning even when empty
  doc.procedure.title = state.doc.procedure.title;
  doc.procedure.status = state.doc.procedure.status;
  doc.procedure.steps = doc.procedure.steps ?? [];
  return doc;
}
