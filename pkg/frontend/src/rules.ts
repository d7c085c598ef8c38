// Maps validation rule ids to the wizard section whose inputs caused them,
// so server findings render next to the offending fields.

import type { SectionId } from "./state.js";
import type { Finding, ValidationReport } from "./types.js";

export const RULE_SECTIONS: Record<string, SectionId> = {
  R01: "steps", // step order cycles
  R02: "steps", // branching order
  R03: "steps", // untyped steps
  R04: "steps", // multistep/atomic decomposition
  R05: "basics", // procedure status vocabulary
  R06: "review", // execution status (not authored here)
  R07: "basics", // version chain
  R08: "basics", // version ownership
  R09: "review", // execution consistency (not authored here)
  R10: "review",
  R11: "steps", // durations
  R12: "review", // roles (not authored here)
  R13: "steps", // error fallbacks
  R14: "steps", // padlocks/PPE placement
  R15: "steps", // energy source typing
};

export function sectionFor(finding: Finding): SectionId {
  return RULE_SECTIONS[finding.rule] ?? "review";
}

export function findingsBySection(
  report: ValidationReport | null,
): Map<SectionId, Finding[]> {
  const out = new Map<SectionId, Finding[]>();
  for (const finding of report?.findings ?? []) {
    const section = sectionFor(finding);
    const bucket = out.get(section) ?? [];
    bucket.push(finding);
    out.set(section, bucket);
  }
  return out;
}
