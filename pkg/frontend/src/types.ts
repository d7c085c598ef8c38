// Shapes of the elicitation JSON wire format (the service's normative
// schema lives in pkforge's data/elicitation.schema.json).

export interface EntityRef {
  id?: string;
  label?: string;
  description?: string;
  type?: string;
}

export type Entity = string | EntityRef;

export interface TargetRef extends EntityRef {
  machine_type?: Entity;
  location?: Entity;
  manufacturer?: Entity;
}

export interface StepErrorDoc {
  id?: string;
  error_code?: string;
  fallback_step?: string;
}

export interface StepDoc {
  id?: string;
  label: string;
  description?: string;
  kind: "atomic" | "multistep";
  substeps?: StepDoc[];
  actions?: Entity[];
  functions?: Entity[];
  tools?: Entity[];
  verification?: Entity;
  expertise_level?: Entity;
  expected_duration_s?: number;
  duration_id?: string;
  padlocks?: Entity[];
  ppe?: Entity[];
  energy_sources?: Entity[];
  errors?: StepErrorDoc[];
}

export interface ProcedureDoc {
  id?: string;
  title: string;
  description?: string;
  type?: Entity;
  target?: string | TargetRef;
  status: string;
  steps: StepDoc[];
  references?: Entity[];
  extracted_from?: Entity;
  adopted_by?: Entity;
  version_of?: string;
  previous_version?: string;
  next_version?: string;
}

export interface ElicitationDoc {
  procedure: ProcedureDoc;
}

export interface Finding {
  rule: string;
  focus: string;
  message: string;
  severity: "violation" | "warning";
}

export interface ValidationReport {
  conforms: boolean;
  findings: Finding[];
}

export interface DryRunResult {
  id: string;
  turtle: string;
  report: ValidationReport;
}

export interface ProcedureListing {
  id: string;
  title: string | null;
  status: string | null;
}
