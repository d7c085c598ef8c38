// Thin HTTP client for the pk-forge service. The UI never constructs RDF
// itself: all Turtle text and validation findings come from these calls.

import type {
  DryRunResult,
  ElicitationDoc,
  ProcedureListing,
  ValidationReport,
} from "./types.js";

export interface SubmitOutcome {
  ok: boolean;
  id?: string;
  report?: ValidationReport;
  error?: string;
}

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class PkForgeApi {
  constructor(
    readonly baseUrl: string,
    // wrapped so the global fetch keeps its expected receiver in browsers
    private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async listProcedures(): Promise<ProcedureListing[]> {
    const response = await this.fetchFn(this.url("/procedures"));
    if (!response.ok) throw new ApiError("cannot list procedures", response.status);
    const body = (await response.json()) as { procedures: ProcedureListing[] };
    return body.procedures;
  }

  async getProcedureDoc(iri: string): Promise<ElicitationDoc> {
    const response = await this.fetchFn(
      this.url(`/procedures/${encodeURIComponent(iri)}`),
      { headers: { Accept: "application/json" } },
    );
    if (!response.ok) throw new ApiError(`cannot load ${iri}`, response.status);
    return (await response.json()) as ElicitationDoc;
  }

  async getProcedureTurtle(iri: string): Promise<string> {
    const response = await this.fetchFn(
      this.url(`/procedures/${encodeURIComponent(iri)}`),
      { headers: { Accept: "text/turtle" } },
    );
    if (!response.ok) throw new ApiError(`cannot load ${iri}`, response.status);
    return response.text();
  }

  async dryRun(doc: ElicitationDoc): Promise<DryRunResult> {
    const response = await this.fetchFn(this.url("/validate"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(doc),
    });
    if (!response.ok) {
      const body = await response.json().catch(() => ({}));
      throw new ApiError(
        (body as { error?: string }).error ?? "dry run failed",
        response.status,
      );
    }
    return (await response.json()) as DryRunResult;
  }

  async createProcedure(doc: ElicitationDoc): Promise<SubmitOutcome> {
    return this.submit(this.url("/procedures"), "POST", doc);
  }

  async updateProcedure(iri: string, doc: ElicitationDoc): Promise<SubmitOutcome> {
    return this.submit(
      this.url(`/procedures/${encodeURIComponent(iri)}`),
      "PUT",
      doc,
    );
  }

  private async submit(
    url: string,
    method: "POST" | "PUT",
    doc: ElicitationDoc,
  ): Promise<SubmitOutcome> {
    const response = await this.fetchFn(url, {
      method,
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(doc),
    });
    const body = (await response.json().catch(() => ({}))) as Record<string, unknown>;
    if (response.status === 201 || response.status === 200) {
      return { ok: true, id: body.id as string };
    }
    if (response.status === 409 && "findings" in body) {
      // validation rejection: the body is the report itself
      return { ok: false, report: body as unknown as ValidationReport };
    }
    return {
      ok: false,
      error: (body.error as string) ?? `submission failed (${response.status})`,
    };
  }
}
