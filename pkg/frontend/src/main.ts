// Wiring: one mutable FormState, a current page, a preview controller, and
// re-render on every change. Drafts persist to localStorage per procedure.

import { PkForgeApi } from "./api.js";
import { PreviewController, PreviewView } from "./preview.js";
import { render, UiActions } from "./render.js";
import {
  buildDocument,
  clearDraft,
  emptyState,
  loadDraft,
  saveDraft,
  setSteps,
  stateForEditing,
  patchProcedure,
  setReport,
  FormState,
  SectionId,
} from "./state.js";
import * as steps from "./steps.js";

const SERVICE_URL =
  new URLSearchParams(location.search).get("service") ?? "http://127.0.0.1:8000";

const api = new PkForgeApi(SERVICE_URL);
const root = document.getElementById("app") as HTMLElement;

let state: FormState = emptyState();
let page: SectionId = "basics";
let submitResult: string | null = null;
let preview: PreviewView = { turtle: null, result: null, unavailable: false, message: null };

const previews = new PreviewController(api, (view) => {
  preview = view;
  if (view.result) state = setReport(state, view.result.report);
  paint();
});

function update(next: FormState): void {
  state = next;
  saveDraft(state);
  previews.touch(buildDocument(state));
  paint();
}

const actions: UiActions = {
  goTo(next) {
    page = next;
    if (next === "review") previews.flush();
    paint();
  },
  patchBasics(patch) {
    update(patchProcedure(state, patch, "basics"));
  },
  patchResources(patch) {
    update(patchProcedure(state, patch, "resources"));
  },
  addStep(parent) {
    update(setSteps(state, steps.addStep(state.doc.procedure.steps, parent, steps.newStep())));
  },
  updateStep(path, patch) {
    update(setSteps(state, steps.updateStep(state.doc.procedure.steps, path, patch)));
  },
  removeStep(path) {
    update(setSteps(state, steps.removeStep(state.doc.procedure.steps, path)));
  },
  moveStep(parent, from, to) {
    update(setSteps(state, steps.moveStep(state.doc.procedure.steps, parent, from, to)));
  },
  indentStep(path) {
    update(setSteps(state, steps.indentStep(state.doc.procedure.steps, path)));
  },
  outdentStep(path) {
    update(setSteps(state, steps.outdentStep(state.doc.procedure.steps, path)));
  },
  submit() {
    void submit();
  },
};

async function submit(): Promise<void> {
  const doc = buildDocument(state);
  const outcome = state.editingIri
    ? await api.updateProcedure(state.editingIri, doc)
    : await api.createProcedure(doc);
  if (outcome.ok) {
    submitResult = `stored as ${outcome.id}`;
    clearDraft(state);
  } else if (outcome.report) {
    state = setReport(state, outcome.report);
    submitResult = "rejected by validation; findings are shown on the relevant pages";
  } else {
    submitResult = outcome.error ?? "submission failed";
  }
  paint();
}

function paint(): void {
  render(root, state, page, preview, actions, submitResult);
}

async function boot(): Promise<void> {
  const editIri = new URLSearchParams(location.search).get("edit");
  if (editIri) {
    try {
      state = stateForEditing(await api.getProcedureDoc(editIri));
    } catch {
      submitResult = `cannot load ${editIri}; starting a fresh draft`;
    }
  } else {
    const draft = loadDraft(null);
    if (draft) state = { ...emptyState(), doc: draft };
  }
  previews.touch(buildDocument(state));
  paint();
}

void boot();
