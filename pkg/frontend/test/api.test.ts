import { describe, expect, it, vi } from "vitest";

import { PkForgeApi } from "../src/api.js";
import type { ElicitationDoc } from "../src/types.js";

const doc: ElicitationDoc = {
  procedure: { title: "T", status: "draft", steps: [{ label: "s", kind: "atomic" }] },
};

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

describe("api client", () => {
  it("encodes procedure IRIs into one path segment", async () => {
    const fetchFn = vi.fn(async () => jsonResponse(200, { procedure: doc.procedure }));
    const api = new PkForgeApi("http://service", fetchFn as unknown as typeof fetch);
    await api.getProcedureDoc("http://example.org/p/1");
    const url = fetchFn.mock.calls[0][0] as string;
    expect(url).toBe("http://service/procedures/http%3A%2F%2Fexample.org%2Fp%2F1");
  });

  it("treats 201 as success with the minted id", async () => {
    const fetchFn = vi.fn(async () => jsonResponse(201, { id: "http://example.org/p" }));
    const api = new PkForgeApi("http://service", fetchFn as unknown as typeof fetch);
    const outcome = await api.createProcedure(doc);
    expect(outcome.ok).toBe(true);
    expect(outcome.id).toBe("http://example.org/p");
  });

  it("surfaces a 409 validation rejection as the report", async () => {
    const report = {
      conforms: false,
      findings: [
        { rule: "R13", focus: "http://example.org/e", message: "bad fallback", severity: "violation" },
      ],
    };
    const fetchFn = vi.fn(async () => jsonResponse(409, report));
    const api = new PkForgeApi("http://service", fetchFn as unknown as typeof fetch);
    const outcome = await api.createProcedure(doc);
    expect(outcome.ok).toBe(false);
    expect(outcome.report?.findings[0].rule).toBe("R13");
  });

  it("surfaces other failures as error text", async () => {
    const fetchFn = vi.fn(async () => jsonResponse(400, { error: "invalid elicitation document" }));
    const api = new PkForgeApi("http://service", fetchFn as unknown as typeof fetch);
    const outcome = await api.createProcedure(doc);
    expect(outcome.ok).toBe(false);
    expect(outcome.error).toContain("invalid");
  });

  it("dry run returns turtle and report", async () => {
    const fetchFn = vi.fn(async () =>
      jsonResponse(200, {
        id: "http://example.org/p",
        turtle: "@prefix pko: <https://w3id.org/pko#> .",
        report: { conforms: true, findings: [] },
      }),
    );
    const api = new PkForgeApi("http://service", fetchFn as unknown as typeof fetch);
    const result = await api.dryRun(doc);
    expect(result.turtle).toContain("@prefix");
    expect(result.report.conforms).toBe(true);
  });
});
