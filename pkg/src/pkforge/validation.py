"""Native shape rules over procedure graphs, producing deterministic reports.

Fifteen built-in rules (R01..R15) cover step ordering, typing, controlled
vocabularies, version chains, execution consistency, temporal sanity, and the
industry extensions. Rule ids are stable so they can be mapped to SHACL
shapes later.
"""

from __future__ import annotations

import json
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass

from .model import parse_timestamp
from .store import BlankNode, Graph, Literal, SchemaHierarchy, Term, Triple, default_schema, term_sort_key
from .vocab import (
    DCAT,
    DCT,
    Iri,
    PKO,
    PKO_IND,
    PPLAN,
    PRO,
    PROV,
    RDF,
    TIME,
    execution_statuses,
    procedure_statuses,
    shrink,
    default_prefixes,
)


@dataclass(frozen=True)
class Finding:
    rule_id: str
    focus: Term
    message: str
    severity: str  # violation | warning


@dataclass(frozen=True)
class Rule:
    id: str
    description: str
    severity: str
    check: Callable[["RuleContext"], Iterable[Finding]]


@dataclass(frozen=True)
class RuleContext:
    graph: Graph
    schema: SchemaHierarchy


@dataclass(frozen=True)
class ValidationReport:
    conforms: bool
    findings: tuple[Finding, ...]

    def violations(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == "violation")

    def to_json(self) -> str:
        payload = {
            "conforms": self.conforms,
            "findings": [
                {
                    "rule": f.rule_id,
                    "focus": _focus_string(f.focus),
                    "message": f.message,
                    "severity": f.severity,
                }
                for f in self.findings
            ],
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        if not self.findings:
            return "conforms: true (no findings)\n"
        width = max(len(f.rule_id) for f in self.findings)
        lines = [f"conforms: {str(self.conforms).lower()}"]
        for f in self.findings:
            lines.append(f"{f.rule_id:<{width}}  {f.severity:<9}  {_focus_string(f.focus)}  {f.message}")
        return "\n".join(lines) + "\n"


def _focus_string(term: Term) -> str:
    if isinstance(term, Iri):
        return term.value
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    return term.lexical


def _step_containers(g: Graph) -> list[Iri]:
    return [s for s in g.subjects(PKO.hasStep) if isinstance(s, Iri)]


def _children(g: Graph, container: Iri) -> list[Iri]:
    return [o for o in g.objects(container, PKO.hasStep) if isinstance(o, Iri)]


def _cycle_nodes(nodes: list[Iri], edges: list[tuple[Iri, Iri]]) -> list[Iri]:
    """Nodes that can reach themselves along the edges."""
    succ: dict[Iri, set[Iri]] = {}
    for a, b in edges:
        succ.setdefault(a, set()).add(b)
    out = []
    for node in nodes:
        frontier = list(succ.get(node, ()))
        seen: set[Iri] = set()
        hit = False
        while frontier:
            cur = frontier.pop()
            if cur == node:
                hit = True
                break
            if cur in seen:
                continue
            seen.add(cur)
            frontier.extend(succ.get(cur, ()))
        if hit:
            out.append(node)
    return out


def _r01_next_step_acyclic(ctx: RuleContext) -> Iterator[Finding]:
    g = ctx.graph
    for container in _step_containers(g):
        children = _children(g, container)
        edges = [
            (c, o)
            for c in children
            for o in g.objects(c, PKO.nextStep)
            if isinstance(o, Iri) and o in set(children)
        ]
        for node in _cycle_nodes(children, edges):
            yield Finding(
                "R01", node, f"nextStep cycle within {container.value}", "violation"
            )


def _r02_next_step_non_branching(ctx: RuleContext) -> Iterator[Finding]:
    g = ctx.graph
    for subject in g.subjects(PKO.nextStep):
        successors = g.objects(subject, PKO.nextStep)
        if len(successors) > 1:
            yield Finding("R02", subject, "step has multiple nextStep successors", "violation")
    seen_objects: dict[Term, int] = {}
    for t in g.match(None, PKO.nextStep, None):
        seen_objects[t.object] = seen_objects.get(t.object, 0) + 1
    for obj, count in sorted(seen_objects.items(), key=lambda kv: term_sort_key(kv[0])):
        if count > 1:
            yield Finding("R02", obj, "step has multiple nextStep predecessors", "violation")


def _r03_steps_are_typed(ctx: RuleContext) -> Iterator[Finding]:
    g = ctx.graph
    for t in g.match(None, PKO.hasStep, None):
        step = t.object
        if isinstance(step, Literal):
            yield Finding("R03", t.subject, "hasStep points at a literal", "violation")
            continue
        typed = (
            Triple(step, RDF.type, PPLAN.Step) in g
            or Triple(step, RDF.type, PPLAN.MultiStep) in g
        )
        if not typed:
            yield Finding("R03", step, "step lacks type pplan:Step or pplan:MultiStep", "violation")


def _r04_step_decomposition(ctx: RuleContext) -> Iterator[Finding]:
    g = ctx.graph
    for step in g.subjects(RDF.type, PPLAN.MultiStep):
        if not g.objects(step, PKO.hasStep):
            yield Finding("R04", step, "multistep has no substeps", "violation")
    for step in g.subjects(RDF.type, PPLAN.Step):
        if Triple(step, RDF.type, PPLAN.MultiStep) in g:
            continue
        if g.objects(step, PKO.hasStep):
            yield Finding("R04", step, "atomic step has substeps", "violation")


def _vocab_rule(rule_id: str, predicate: Iri, members: tuple[Iri, ...], what: str):
    def check(ctx: RuleContext) -> Iterator[Finding]:
        for t in ctx.graph.match(None, predicate, None):
            value = t.object
            if isinstance(value, Iri):
                if value not in members:
                    yield Finding(
                        rule_id, t.subject,
                        f"{what} {value.value} is outside the controlled vocabulary",
                        "warning",
                    )
            else:
                yield Finding(rule_id, t.subject, f"{what} must be an IRI", "violation")

    return check


def _version_edges(g: Graph) -> list[tuple[Iri, Iri]]:
    return [
        (t.subject, t.object)
        for t in g.match(None, PKO.nextVersion, None)
        if isinstance(t.subject, Iri) and isinstance(t.object, Iri)
    ]


def _r07_version_chain(ctx: RuleContext) -> Iterator[Finding]:
    g = ctx.graph
    edges = _version_edges(g)
    nodes = sorted({n for e in edges for n in e}, key=term_sort_key)
    out_deg: dict[Iri, int] = {}
    in_deg: dict[Iri, int] = {}
    for a, b in edges:
        out_deg[a] = out_deg.get(a, 0) + 1
        in_deg[b] = in_deg.get(b, 0) + 1
    for node in nodes:
        if out_deg.get(node, 0) > 1:
            yield Finding("R07", node, "version has multiple nextVersion successors", "violation")
        if in_deg.get(node, 0) > 1:
            yield Finding("R07", node, "version has multiple nextVersion predecessors", "violation")
    for node in _cycle_nodes(nodes, edges):
        yield Finding("R07", node, "nextVersion chain contains a cycle", "violation")


def _r08_version_membership(ctx: RuleContext) -> Iterator[Finding]:
    g = ctx.graph

    def owners(version: Iri) -> frozenset:
        return frozenset(s for s in g.subjects(PKO.hasVersion, version) if isinstance(s, Iri))

    for a, b in _version_edges(g):
        owners_a, owners_b = owners(a), owners(b)
        # absent ownership is incomplete, not inconsistent (open world)
        if owners_a and owners_b and owners_a != owners_b:
            yield Finding(
                "R08", a,
                f"nextVersion link to {b.value} crosses hasVersion ownership",
                "violation",
            )


def _steps_closure(g: Graph, root: Iri) -> set[Iri]:
    seen: set[Iri] = set()
    frontier = [root]
    while frontier:
        node = frontier.pop()
        for child in g.objects(node, PKO.hasStep):
            if isinstance(child, Iri) and child not in seen:
                seen.add(child)
                frontier.append(child)
    return seen


def _r09_step_execution_reachable(ctx: RuleContext) -> Iterator[Finding]:
    g = ctx.graph
    for se in g.subjects(RDF.type, PKO.StepExecution):
        step = g.value(se, PPLAN.correspondsToStep)
        if not isinstance(step, Iri):
            continue
        for parent in g.subjects(PKO.hasStepExecution, se):
            procedure = g.value(parent, PKO.executes)
            if not isinstance(procedure, Iri):
                continue
            if step not in _steps_closure(g, procedure):
                yield Finding(
                    "R09", se,
                    f"executed step {step.value} is not part of {procedure.value}",
                    "violation",
                )


def _parse_time_or_finding(rule_id: str, focus: Term, value: Term):
    if not isinstance(value, Literal):
        return None, Finding(rule_id, focus, "timestamp is not a literal", "violation")
    try:
        return parse_timestamp(value.lexical), None
    except ValueError:
        return None, Finding(
            rule_id, focus, f"unparseable timestamp {value.lexical!r}", "violation"
        )


def _r10_started_before_ended(ctx: RuleContext) -> Iterator[Finding]:
    g = ctx.graph
    subjects = sorted(
        set(g.subjects(PROV.startedAtTime)) | set(g.subjects(PROV.endedAtTime)),
        key=term_sort_key,
    )
    for node in subjects:
        start_value = g.value(node, PROV.startedAtTime)
        end_value = g.value(node, PROV.endedAtTime)
        start = end = None
        if start_value is not None:
            start, finding = _parse_time_or_finding("R10", node, start_value)
            if finding:
                yield finding
        if end_value is not None:
            end, finding = _parse_time_or_finding("R10", node, end_value)
            if finding:
                yield finding
        if start and end and end < start:
            yield Finding("R10", node, "ends before it starts", "violation")


def _r11_durations(ctx: RuleContext) -> Iterator[Finding]:
    g = ctx.graph
    for t in g.match(None, PKO.hasExpectedDuration, None):
        node = t.object
        if isinstance(node, Literal):
            yield Finding("R11", t.subject, "expected duration must be a duration node", "violation")
            continue
        amount = g.value(node, TIME.numericDuration)
        if not isinstance(amount, Literal):
            yield Finding("R11", node, "duration node lacks a numeric duration", "violation")
        else:
            try:
                seconds = float(amount.lexical)
            except ValueError:
                yield Finding("R11", node, f"non-numeric duration {amount.lexical!r}", "violation")
            else:
                if seconds < 0:
                    yield Finding("R11", node, "negative duration", "violation")
        unit = g.value(node, TIME.unitType)
        if unit != TIME.unitSecond:
            yield Finding("R11", node, "duration unit is not time:unitSecond", "violation")


def _r12_role_intervals(ctx: RuleContext) -> Iterator[Finding]:
    g = ctx.graph
    for rit in g.subjects(RDF.type, PRO.RoleInTime):
        period = g.value(rit, DCT.temporal)
        if not isinstance(period, (Iri, BlankNode)):
            continue
        start_value = g.value(period, DCAT.startDate)
        end_value = g.value(period, DCAT.endDate)
        start = end = None
        if start_value is not None:
            start, finding = _parse_time_or_finding("R12", rit, start_value)
            if finding:
                yield finding
        if end_value is not None:
            end, finding = _parse_time_or_finding("R12", rit, end_value)
            if finding:
                yield finding
        if start and end and end < start:
            yield Finding("R12", rit, "role interval ends before it starts", "violation")


def _r13_fallback_in_procedure(ctx: RuleContext) -> Iterator[Finding]:
    g = ctx.graph
    procedures = [p for p in g.subjects(RDF.type, PKO.Procedure) if isinstance(p, Iri)]
    closures = {p: _steps_closure(g, p) for p in procedures}
    for t in g.match(None, PKO.hasFallbackStep, None):
        error, fallback = t.subject, t.object
        if not isinstance(fallback, Iri):
            yield Finding("R13", error, "fallback step must be an IRI", "violation")
            continue
        declaring = [s for s in g.subjects(PKO.mayRaise, error) if isinstance(s, Iri)]
        for step in declaring:
            for procedure, steps in closures.items():
                if step in steps and fallback not in steps:
                    yield Finding(
                        "R13", error,
                        f"fallback {fallback.value} is not a step of {procedure.value}",
                        "violation",
                    )


def _r14_industry_on_steps(ctx: RuleContext) -> Iterator[Finding]:
    g = ctx.graph
    for predicate in (PKO_IND.requiresPadlock, PKO_IND.requiresPPE):
        for t in g.match(None, predicate, None):
            subject = t.subject
            typed = (
                Triple(subject, RDF.type, PPLAN.Step) in g
                or Triple(subject, RDF.type, PPLAN.MultiStep) in g
            )
            if not typed:
                yield Finding(
                    "R14", subject,
                    f"{shrink(predicate, default_prefixes())} used on a non-step",
                    "violation",
                )


def _r15_energy_sources_typed(ctx: RuleContext) -> Iterator[Finding]:
    g = ctx.graph
    ancestors = ctx.schema.ancestors()
    for t in g.match(None, PKO_IND.isolatesEnergySource, None):
        source = t.object
        if isinstance(source, Literal):
            yield Finding("R15", t.subject, "energy source must be an IRI", "violation")
            continue
        ok = False
        for typ in g.objects(source, RDF.type):
            if not isinstance(typ, Iri):
                continue
            if typ == PKO_IND.EnergySource or PKO_IND.EnergySource in ancestors.get(typ, ()):
                ok = True
                break
        if not ok:
            yield Finding("R15", source, "isolated source is not typed as an energy source", "violation")


def builtin_rules() -> list[Rule]:
    """The full rule catalog, in id order."""
    return [
        Rule("R01", "nextStep chains are acyclic within each container", "violation", _r01_next_step_acyclic),
        Rule("R02", "nextStep chains do not branch", "violation", _r02_next_step_non_branching),
        Rule("R03", "every step linked by hasStep is typed as a step", "violation", _r03_steps_are_typed),
        Rule("R04", "multisteps have substeps, atomic steps have none", "violation", _r04_step_decomposition),
        Rule("R05", "procedure statuses come from the status vocabulary", "warning",
             _vocab_rule("R05", PKO.hasProcedureStatus, procedure_statuses().members, "procedure status")),
        Rule("R06", "execution statuses come from the status vocabulary", "warning",
             _vocab_rule("R06", PKO.hasExecutionStatus, execution_statuses().members, "execution status")),
        Rule("R07", "version chains are acyclic and non-branching", "violation", _r07_version_chain),
        Rule("R08", "nextVersion links stay within one hasVersion family", "violation", _r08_version_membership),
        Rule("R09", "executed steps belong to the executed procedure", "violation", _r09_step_execution_reachable),
        Rule("R10", "executions start before they end", "violation", _r10_started_before_ended),
        Rule("R11", "expected durations are non-negative seconds", "violation", _r11_durations),
        Rule("R12", "role validity intervals are well ordered", "violation", _r12_role_intervals),
        Rule("R13", "error fallback steps belong to the raising procedure", "violation", _r13_fallback_in_procedure),
        Rule("R14", "padlock and PPE requirements sit on steps", "violation", _r14_industry_on_steps),
        Rule("R15", "isolated energy sources are typed energy sources", "violation", _r15_energy_sources_typed),
    ]


def validate(
    graph: Graph,
    rules: Iterable[Rule] | None = None,
    schema: SchemaHierarchy | None = None,
) -> ValidationReport:
    ctx = RuleContext(graph, schema or default_schema())
    findings: list[Finding] = []
    for rule in rules if rules is not None else builtin_rules():
        findings.extend(rule.check(ctx))
    findings.sort(key=lambda f: (f.rule_id, term_sort_key(f.focus), f.message))
    conforms = not any(f.severity == "violation" for f in findings)
    return ValidationReport(conforms, tuple(findings))
