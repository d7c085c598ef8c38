// DOM rendering for the wizard. Thin display layer over the tested state,
// steps, wizard, and preview modules; no business logic lives here.

import type { Entity, Finding, StepDoc } from "./types.js";
import type { FormState, SectionId } from "./state.js";
import { findingsBySection } from "./rules.js";
import { allLabels, StepPath } from "./steps.js";
import { canLeave, reachablePages, submitEnabled } from "./wizard.js";
import type { PreviewView } from "./preview.js";

export interface UiActions {
  goTo(page: SectionId): void;
  patchBasics(patch: Record<string, unknown>): void;
  addStep(parent: StepPath | null): void;
  updateStep(path: StepPath, patch: Partial<StepDoc>): void;
  removeStep(path: StepPath): void;
  moveStep(parent: StepPath, from: number, to: number): void;
  indentStep(path: StepPath): void;
  outdentStep(path: StepPath): void;
  patchResources(patch: Record<string, unknown>): void;
  submit(): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  node.append(...children);
  return node;
}

function textInput(
  label: string,
  value: string,
  onChange: (value: string) => void,
  multiline = false,
): HTMLElement {
  const input = multiline
    ? el("textarea", { rows: "3" })
    : el("input", { type: "text" });
  (input as HTMLInputElement).value = value;
  input.addEventListener("input", () => onChange((input as HTMLInputElement).value));
  return el("label", { class: "field" }, el("span", {}, label), input);
}

function entityLabel(entity: Entity | undefined): string {
  if (!entity) return "";
  return typeof entity === "string" ? entity : entity.label ?? entity.id ?? "";
}

function findingList(findings: Finding[] | undefined): HTMLElement {
  const box = el("div", { class: "findings" });
  for (const finding of findings ?? []) {
    box.append(
      el(
        "p",
        { class: `finding ${finding.severity}` },
        `${finding.rule}: ${finding.message} (${finding.focus})`,
      ),
    );
  }
  return box;
}

export function render(
  root: HTMLElement,
  state: FormState,
  page: SectionId,
  preview: PreviewView,
  actions: UiActions,
  submitResult: string | null,
): void {
  root.replaceChildren();
  const sections = findingsBySection(state.lastReport);

  const rail = el("nav", { class: "rail" });
  const reachable = new Set(reachablePages(state));
  for (const candidate of ["basics", "steps", "resources", "review", "submit"] as SectionId[]) {
    const button = el("button", { class: candidate === page ? "active" : "" }, candidate);
    (button as HTMLButtonElement).disabled = !reachable.has(candidate);
    button.addEventListener("click", () => actions.goTo(candidate));
    rail.append(button);
  }
  root.append(rail);

  const main = el("main", {});
  root.append(main);

  if (page === "basics") main.append(renderBasics(state, actions, sections.get("basics")));
  if (page === "steps") main.append(renderSteps(state, actions, sections.get("steps")));
  if (page === "resources") main.append(renderResources(state, actions));
  if (page === "review") main.append(renderReview(state, preview));
  if (page === "submit") main.append(renderSubmit(state, actions, submitResult));

  const controls = el("footer", {});
  const back = el("button", {}, "back");
  back.addEventListener("click", () =>
    actions.goTo(
      (["basics", "steps", "resources", "review", "submit"] as SectionId[])[
        Math.max(0, ["basics", "steps", "resources", "review", "submit"].indexOf(page) - 1)
      ],
    ),
  );
  const forward = el("button", {}, "next");
  (forward as HTMLButtonElement).disabled = !canLeave(state, page);
  forward.addEventListener("click", () =>
    actions.goTo(
      (["basics", "steps", "resources", "review", "submit"] as SectionId[])[
        Math.min(4, ["basics", "steps", "resources", "review", "submit"].indexOf(page) + 1)
      ],
    ),
  );
  controls.append(back, forward);
  root.append(controls);
}

function renderBasics(
  state: FormState,
  actions: UiActions,
  findings: Finding[] | undefined,
): HTMLElement {
  const procedure = state.doc.procedure;
  const box = el("section", {}, el("h2", {}, "Basics"));
  box.append(
    textInput("Title", procedure.title, (title) => actions.patchBasics({ title })),
    textInput("Description", procedure.description ?? "", (description) =>
      actions.patchBasics({ description: description || undefined }),
    ),
    textInput("Procedure type (label or IRI)", entityLabel(procedure.type), (value) =>
      actions.patchBasics({ type: value ? { label: value } : undefined }),
    ),
    textInput(
      "Target (IRI)",
      typeof procedure.target === "string" ? procedure.target : procedure.target?.id ?? "",
      (value) => actions.patchBasics({ target: value || undefined }),
    ),
  );
  const status = el("select", {});
  for (const option of ["draft", "approved", "published", "archived", "deprecated"]) {
    const choice = el("option", { value: option }, option);
    if (procedure.status === option) choice.setAttribute("selected", "selected");
    status.append(choice);
  }
  status.addEventListener("change", () =>
    actions.patchBasics({ status: (status as HTMLSelectElement).value }),
  );
  box.append(el("label", { class: "field" }, el("span", {}, "Status"), status));
  box.append(findingList(findings));
  return box;
}

function renderStepRow(
  step: StepDoc,
  path: StepPath,
  actions: UiActions,
): HTMLElement {
  const row = el("li", { class: "step", draggable: "true" });
  row.dataset.path = path.join(".");
  row.addEventListener("dragstart", (event) => {
    event.dataTransfer?.setData("text/plain", path.join("."));
  });
  row.addEventListener("dragover", (event) => event.preventDefault());
  row.addEventListener("drop", (event) => {
    event.preventDefault();
    const fromPath = (event.dataTransfer?.getData("text/plain") ?? "").split(".").map(Number);
    if (fromPath.length !== path.length) return; // only reorder among siblings
    if (fromPath.slice(0, -1).join(".") !== path.slice(0, -1).join(".")) return;
    actions.moveStep(path.slice(0, -1), fromPath[fromPath.length - 1], path[path.length - 1]);
  });

  row.append(
    textInput("Label", step.label, (label) => actions.updateStep(path, { label })),
    textInput("Description", step.description ?? "", (value) =>
      actions.updateStep(path, { description: value || undefined }),
    ),
    textInput(
      "Expected duration (seconds)",
      step.expected_duration_s?.toString() ?? "",
      (value) =>
        actions.updateStep(path, {
          expected_duration_s: value ? Number(value) : undefined,
        }),
    ),
    textInput("Actions (labels, comma separated)", listText(step.actions), (value) =>
      actions.updateStep(path, { actions: parseEntities(value) }),
    ),
    textInput("Tools (labels, comma separated)", listText(step.tools), (value) =>
      actions.updateStep(path, { tools: parseEntities(value) }),
    ),
    textInput("Padlocks (labels, comma separated)", listText(step.padlocks), (value) =>
      actions.updateStep(path, { padlocks: parseEntities(value) }),
    ),
    textInput("PPE (labels, comma separated)", listText(step.ppe), (value) =>
      actions.updateStep(path, { ppe: parseEntities(value) }),
    ),
    textInput("Energy sources (labels, comma separated)", listText(step.energy_sources), (value) =>
      actions.updateStep(path, { energy_sources: parseEntities(value) }),
    ),
    textInput("Verification (description)", entityLabel(step.verification), (value) =>
      actions.updateStep(path, {
        verification: value ? { description: value } : undefined,
      }),
    ),
  );

  const toolbar = el("div", { class: "toolbar" });
  const addChild = el("button", {}, "add substep");
  addChild.addEventListener("click", () => actions.addStep(path));
  const remove = el("button", {}, "remove");
  remove.addEventListener("click", () => actions.removeStep(path));
  const indent = el("button", {}, "indent");
  indent.addEventListener("click", () => actions.indentStep(path));
  const outdent = el("button", {}, "outdent");
  outdent.addEventListener("click", () => actions.outdentStep(path));
  toolbar.append(addChild, remove, indent, outdent);
  row.append(toolbar);

  if (step.substeps?.length) {
    const sub = el("ol", { class: "substeps" });
    step.substeps.forEach((child, index) => {
      sub.append(renderStepRow(child, [...path, index], actions));
    });
    row.append(sub);
  }
  return row;
}

function listText(entities: Entity[] | undefined): string {
  return (entities ?? []).map(entityLabel).join(", ");
}

function parseEntities(value: string): { label: string }[] | undefined {
  const labels = value
    .split(",")
    .map((piece) => piece.trim())
    .filter(Boolean);
  return labels.length ? labels.map((label) => ({ label })) : undefined;
}

function renderSteps(
  state: FormState,
  actions: UiActions,
  findings: Finding[] | undefined,
): HTMLElement {
  const box = el("section", {}, el("h2", {}, "Steps"));
  const list = el("ol", { class: "steps" });
  state.doc.procedure.steps.forEach((step, index) => {
    list.append(renderStepRow(step, [index], actions));
  });
  box.append(list);
  const add = el("button", {}, "add step");
  add.addEventListener("click", () => actions.addStep(null));
  box.append(add, findingList(findings));
  box.append(el("p", { class: "hint" }, `${allLabels(state.doc.procedure.steps).length} steps`));
  return box;
}

function renderResources(state: FormState, actions: UiActions): HTMLElement {
  const procedure = state.doc.procedure;
  const box = el("section", {}, el("h2", {}, "Resources"));
  box.append(
    textInput("References (labels, comma separated)", listText(procedure.references), (value) =>
      actions.patchResources({ references: parseEntities(value) }),
    ),
    textInput("Extracted from (label or IRI)", entityLabel(procedure.extracted_from), (value) =>
      actions.patchResources({ extracted_from: value ? { label: value } : undefined }),
    ),
    textInput("Adopted by (organization label)", entityLabel(procedure.adopted_by), (value) =>
      actions.patchResources({ adopted_by: value ? { label: value } : undefined }),
    ),
  );
  return box;
}

function renderReview(state: FormState, preview: PreviewView): HTMLElement {
  const box = el("section", {}, el("h2", {}, "Review"));
  if (preview.unavailable) {
    box.append(el("p", { class: "warning" }, `preview unavailable: ${preview.message ?? ""}`));
  } else if (preview.turtle) {
    const report = preview.result?.report;
    box.append(
      el(
        "p",
        {},
        report?.conforms ? "The procedure validates." : "Validation found problems:",
      ),
    );
    if (report && !report.conforms) box.append(findingList(report.findings));
    box.append(el("pre", { class: "turtle" }, preview.turtle));
  } else {
    box.append(el("p", {}, "Building preview..."));
  }
  return box;
}

function renderSubmit(
  state: FormState,
  actions: UiActions,
  submitResult: string | null,
): HTMLElement {
  const box = el("section", {}, el("h2", {}, "Submit"));
  const button = el("button", { class: "submit" }, state.editingIri ? "update" : "create");
  (button as HTMLButtonElement).disabled = !submitEnabled(state);
  button.addEventListener("click", () => actions.submit());
  box.append(button);
  if (submitResult) box.append(el("p", { class: "result" }, submitResult));
  return box;
}
