"""Lossless mapping between typed model values and triples.

Lowering emits one triple per populated field plus the nextStep /
previousStep and nextVersion / previousVersion inverses. Lifting reads the
typed fields back and keeps every other reachable triple in an opaque
``extras`` bag so third-party annotations survive a round trip.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

from .model import (
    ErrorDef,
    ExecutionTrace,
    Feedback,
    Issue,
    MachineInfo,
    Occurrence,
    Procedure,
    Question,
    Step,
    StepExecution,
    format_timestamp,
    is_multistep,
    order_steps,
    parse_timestamp,
)
from .store import BlankNode, Graph, Literal, Term, Triple, term_sort_key
from .vocab import (
    DCAT,
    DCT,
    Iri,
    PKO,
    PKO_IND,
    PPLAN,
    PROV,
    RDF,
    TIME,
    XSD,
    default_prefixes,
)


class NotAProcedure(ValueError):
    pass


class NotAnExecution(ValueError):
    pass


class MalformedTimestamp(ValueError):
    pass


@dataclass(frozen=True)
class LiftReport:
    lifted: tuple[Iri, ...]
    skipped: tuple[tuple[Iri, str], ...]


@dataclass(frozen=True)
class ProcedureBundle:
    procedure: Procedure
    steps: tuple[Step, ...]
    errors: tuple[ErrorDef, ...]
    extras: tuple[Triple, ...] = ()


_VOCAB_NAMESPACES = tuple(ns.value for ns in default_prefixes().values())


def _is_vocab_node(term: Term) -> bool:
    return isinstance(term, Iri) and any(term.value.startswith(ns) for ns in _VOCAB_NAMESPACES)


_VERSION_EDGES = (PKO.hasVersion, PKO.nextVersion, PKO.previousVersion)


def procedure_subgraph(graph: Graph, procedure: Iri) -> Graph:
    """All triples reachable from the procedure through instance nodes,
    plus the incoming version-link triples that identify this node as a
    version. Vocabulary-namespace nodes are kept as leaves."""
    out = Graph(prefixes=graph.prefixes)
    visited: set = set()
    frontier: list = [procedure]
    while frontier:
        node = frontier.pop()
        if node in visited:
            continue
        visited.add(node)
        for t in graph.match(s=node):
            if t.predicate in _VERSION_EDGES and node != procedure:
                continue
            out.add(t)
            nxt = t.object
            if (
                isinstance(nxt, (Iri, BlankNode))
                and not _is_vocab_node(nxt)
                and nxt not in visited
                and t.predicate not in _VERSION_EDGES
            ):
                frontier.append(nxt)
    for p in _VERSION_EDGES:
        for t in graph.match(None, p, procedure):
            out.add(t)
    return out


def _duration_literal(seconds: float) -> Literal:
    if float(seconds).is_integer():
        return Literal(str(int(seconds)), datatype=XSD.integer)
    return Literal(repr(float(seconds)), datatype=XSD.decimal)


def _chain_triples(container: Iri, children: tuple[Iri, ...]) -> list[Triple]:
    triples = [Triple(container, PKO.hasStep, child) for child in children]
    for left, right in zip(children, children[1:]):
        triples.append(Triple(left, PKO.nextStep, right))
        triples.append(Triple(right, PKO.previousStep, left))
    return triples


def lower_step(step: Step) -> list[Triple]:
    sid = step.id
    cls = PPLAN.MultiStep if step.kind == "multistep" else PPLAN.Step
    triples = [Triple(sid, RDF.type, cls)]
    if step.label:
        triples.append(Triple(sid, DCT.title, Literal(step.label)))
    if step.description:
        triples.append(Triple(sid, DCT.description, Literal(step.description)))
    triples.extend(_chain_triples(sid, step.substeps))
    for action in step.actions:
        triples.append(Triple(sid, PKO.requiresAction, action))
    for function in step.functions:
        triples.append(Triple(sid, PKO.requiresFunction, function))
    for tool in step.tools:
        triples.append(Triple(sid, PKO.requiresTool, tool))
    if step.verification:
        triples.append(Triple(sid, PKO.hasStepVerification, step.verification))
    if step.expertise_level:
        triples.append(Triple(sid, PKO.hasExpertiseLevel, step.expertise_level))
    if step.expected_duration_s is not None:
        node = step.duration_node or Iri(sid.value + "/duration")
        triples.append(Triple(sid, PKO.hasExpectedDuration, node))
        triples.append(Triple(node, RDF.type, TIME.Duration))
        triples.append(Triple(node, TIME.numericDuration, _duration_literal(step.expected_duration_s)))
        triples.append(Triple(node, TIME.unitType, TIME.unitSecond))
    if step.fallback_for:
        triples.append(Triple(step.fallback_for, PKO.hasFallbackStep, sid))
    for item in step.ppe:
        triples.append(Triple(sid, PKO_IND.requiresPPE, item))
    for padlock in step.padlocks:
        triples.append(Triple(sid, PKO_IND.requiresPadlock, padlock))
    for source in step.energy_sources:
        triples.append(Triple(sid, PKO_IND.isolatesEnergySource, source))
    return triples


def lower_procedure(
    p: Procedure,
    steps: tuple[Step, ...] | list[Step] = (),
    errors: tuple[ErrorDef, ...] | list[ErrorDef] = (),
    extras: tuple[Triple, ...] = (),
) -> Graph:
    g = Graph()
    pid = p.id
    g.add(Triple(pid, RDF.type, PKO.Procedure))
    if p.title:
        g.add(Triple(pid, DCT.title, Literal(p.title)))
    if p.description:
        g.add(Triple(pid, DCT.description, Literal(p.description)))
    g.add(Triple(pid, PKO.hasProcedureStatus, p.status))
    if p.procedure_type:
        g.add(Triple(pid, PKO.hasProcedureType, p.procedure_type))
    if p.target:
        g.add(Triple(pid, PKO.hasProcedureTarget, p.target))
    g.update(_chain_triples(pid, p.steps))
    if p.version_of:
        g.add(Triple(p.version_of, PKO.hasVersion, pid))
    if p.next_version:
        g.add(Triple(pid, PKO.nextVersion, p.next_version))
        g.add(Triple(p.next_version, PKO.previousVersion, pid))
    if p.previous_version:
        g.add(Triple(pid, PKO.previousVersion, p.previous_version))
        g.add(Triple(p.previous_version, PKO.nextVersion, pid))
    if p.adopted_by:
        g.add(Triple(pid, PKO.adoptedBy, p.adopted_by))
    for resource in p.references:
        g.add(Triple(pid, DCT.references, resource))
    if p.extracted_from:
        g.add(Triple(pid, PKO.wasExtractedFrom, p.extracted_from))
    for step in steps:
        g.update(lower_step(step))
    for error in errors:
        g.add(Triple(error.id, RDF.type, PKO.Error))
        if error.error_code is not None:
            g.add(Triple(error.id, PKO.errorCode, Literal(error.error_code)))
        if error.fallback_step:
            g.add(Triple(error.id, PKO.hasFallbackStep, error.fallback_step))
    g.update(extras)
    return g


def _string_value(graph: Graph, node: Iri | BlankNode, predicate: Iri) -> str | None:
    value = graph.value(node, predicate)
    return value.lexical if isinstance(value, Literal) else None


def _iri_value(graph: Graph, node: Iri | BlankNode, predicate: Iri) -> Iri | None:
    value = graph.value(node, predicate)
    return value if isinstance(value, Iri) else None


def _iri_list(graph: Graph, node: Iri | BlankNode, predicate: Iri) -> tuple[Iri, ...]:
    return tuple(o for o in graph.objects(node, predicate) if isinstance(o, Iri))


def lift_step(graph: Graph, sid: Iri, *, mode: str = "strict") -> Step:
    multistep = is_multistep(graph, sid)
    substeps = tuple(order_steps(graph, sid, mode=mode)) if multistep else ()
    duration_node = _iri_value(graph, sid, PKO.hasExpectedDuration)
    duration_s: float | None = None
    if duration_node is not None:
        lex = _string_value(graph, duration_node, TIME.numericDuration)
        if lex is not None:
            duration_s = float(lex)
    fallback_for = None
    sources = [s for s in graph.subjects(PKO.hasFallbackStep, sid) if isinstance(s, Iri)]
    if sources:
        fallback_for = sources[0]
    return Step(
        id=sid,
        label=_string_value(graph, sid, DCT.title) or "",
        kind="multistep" if multistep else "atomic",
        description=_string_value(graph, sid, DCT.description),
        substeps=substeps,
        actions=_iri_list(graph, sid, PKO.requiresAction),
        functions=_iri_list(graph, sid, PKO.requiresFunction),
        tools=_iri_list(graph, sid, PKO.requiresTool),
        verification=_iri_value(graph, sid, PKO.hasStepVerification),
        expertise_level=_iri_value(graph, sid, PKO.hasExpertiseLevel),
        expected_duration_s=duration_s,
        duration_node=duration_node,
        fallback_for=fallback_for,
        ppe=_iri_list(graph, sid, PKO_IND.requiresPPE),
        padlocks=_iri_list(graph, sid, PKO_IND.requiresPadlock),
        energy_sources=_iri_list(graph, sid, PKO_IND.isolatesEnergySource),
    )


def _all_steps(graph: Graph, container: Iri, *, mode: str = "strict") -> list[Iri]:
    """Step ids in depth-first chain order, multisteps before their children."""
    out: list[Iri] = []
    for sid in order_steps(graph, container, mode=mode):
        out.append(sid)
        if is_multistep(graph, sid):
            out.extend(_all_steps(graph, sid, mode=mode))
    return out


def lift_procedure(graph: Graph, pid: Iri, *, mode: str = "strict") -> ProcedureBundle:
    if Triple(pid, RDF.type, PKO.Procedure) not in graph:
        raise NotAProcedure(pid.value)
    version_of = None
    owners = [s for s in graph.subjects(PKO.hasVersion, pid) if isinstance(s, Iri)]
    if owners:
        version_of = owners[0]
    step_ids = _all_steps(graph, pid, mode=mode)
    procedure = Procedure(
        id=pid,
        title=_string_value(graph, pid, DCT.title) or "",
        status=_iri_value(graph, pid, PKO.hasProcedureStatus) or PKO.draft,
        description=_string_value(graph, pid, DCT.description),
        procedure_type=_iri_value(graph, pid, PKO.hasProcedureType),
        target=_iri_value(graph, pid, PKO.hasProcedureTarget),
        steps=tuple(order_steps(graph, pid, mode=mode)),
        version_of=version_of,
        next_version=_iri_value(graph, pid, PKO.nextVersion),
        previous_version=_iri_value(graph, pid, PKO.previousVersion),
        adopted_by=_iri_value(graph, pid, PKO.adoptedBy),
        references=_iri_list(graph, pid, DCT.references),
        extracted_from=_iri_value(graph, pid, PKO.wasExtractedFrom),
    )
    steps = tuple(lift_step(graph, sid, mode=mode) for sid in step_ids)
    error_ids: set[Iri] = set()
    for sid in step_ids:
        for err in graph.objects(sid, PKO.mayRaise):
            if isinstance(err, Iri):
                error_ids.add(err)
        for err in graph.subjects(PKO.hasFallbackStep, sid):
            if isinstance(err, Iri):
                error_ids.add(err)
    errors = tuple(
        ErrorDef(
            id=eid,
            error_code=_string_value(graph, eid, PKO.errorCode),
            fallback_step=_iri_value(graph, eid, PKO.hasFallbackStep),
        )
        for eid in sorted(error_ids, key=term_sort_key)
    )
    reachable = procedure_subgraph(graph, pid)
    lowered = lower_procedure(procedure, steps, errors)
    extras = tuple(sorted((t for t in reachable if t not in lowered), key=Triple.sort_key))
    return ProcedureBundle(procedure, steps, errors, extras)


def lift_procedures(graph: Graph, *, mode: str = "strict") -> tuple[list[ProcedureBundle], LiftReport]:
    """Lift every node typed pko:Procedure; failures land in the report."""
    bundles: list[ProcedureBundle] = []
    lifted: list[Iri] = []
    skipped: list[tuple[Iri, str]] = []
    for node in graph.subjects(RDF.type, PKO.Procedure):
        if not isinstance(node, Iri):
            continue
        try:
            bundles.append(lift_procedure(graph, node, mode=mode))
            lifted.append(node)
        except ValueError as exc:
            skipped.append((node, str(exc)))
    return bundles, LiftReport(tuple(lifted), tuple(skipped))


def _time_literal(moment: datetime) -> Literal:
    return Literal(format_timestamp(moment), datatype=XSD.dateTime)


def _read_time(graph: Graph, node: Iri | BlankNode, predicate: Iri) -> datetime | None:
    value = graph.value(node, predicate)
    if value is None:
        return None
    if not isinstance(value, Literal):
        raise MalformedTimestamp(f"{predicate.value} on {node} is not a literal")
    try:
        return parse_timestamp(value.lexical)
    except ValueError as exc:
        raise MalformedTimestamp(str(exc)) from None


def lower_occurrence(trace_id: Iri, occ: Occurrence) -> list[Triple]:
    triples = [Triple(trace_id, PKO.hasOccurrence, occ.id)]
    if isinstance(occ, Feedback):
        triples.append(Triple(occ.id, RDF.type, PKO.UserFeedbackOccurrence))
        triples.append(Triple(occ.id, DCT.description, Literal(occ.text)))
        triples.append(Triple(occ.id, PKO.about, occ.about))
    elif isinstance(occ, Question):
        triples.append(Triple(occ.id, RDF.type, PKO.UserQuestionOccurrence))
        triples.append(Triple(occ.id, DCT.description, Literal(occ.text)))
        if occ.addressed_by:
            triples.append(Triple(occ.id, PKO.addressedBy, occ.addressed_by))
    else:
        triples.append(Triple(occ.id, RDF.type, PKO.IssueOccurrence))
        triples.append(Triple(occ.id, PKO.hasError, occ.error))
        if occ.cause is not None:
            triples.append(Triple(occ.id, PKO.cause, Literal(occ.cause)))
        if occ.solution is not None:
            triples.append(Triple(occ.id, PKO.solution, Literal(occ.solution)))
    triples.append(Triple(occ.id, PROV.wasAssociatedWith, occ.agent))
    triples.append(Triple(occ.id, PROV.atTime, _time_literal(occ.at)))
    return triples


def lower_execution(t: ExecutionTrace) -> Graph:
    g = Graph()
    g.add(Triple(t.id, RDF.type, PKO.ProcedureExecution))
    g.add(Triple(t.id, PKO.executes, t.procedure))
    g.add(Triple(t.id, PROV.wasAssociatedWith, t.agent))
    g.add(Triple(t.id, PKO.hasExecutionStatus, t.status))
    if t.started_at:
        g.add(Triple(t.id, PROV.startedAtTime, _time_literal(t.started_at)))
    if t.ended_at:
        g.add(Triple(t.id, PROV.endedAtTime, _time_literal(t.ended_at)))
    for se in t.step_executions:
        g.add(Triple(t.id, PKO.hasStepExecution, se.id))
        g.add(Triple(se.id, RDF.type, PKO.StepExecution))
        g.add(Triple(se.id, PPLAN.correspondsToStep, se.step))
        g.add(Triple(se.id, PROV.wasAssociatedWith, se.agent))
        if se.started_at:
            g.add(Triple(se.id, PROV.startedAtTime, _time_literal(se.started_at)))
        if se.ended_at:
            g.add(Triple(se.id, PROV.endedAtTime, _time_literal(se.ended_at)))
    for occ in t.occurrences:
        g.update(lower_occurrence(t.id, occ))
    g.update(t.extras)
    return g


def _occurrence_key(occ: Occurrence):
    return (occ.at, term_sort_key(occ.id))


def lift_execution(graph: Graph, xid: Iri) -> ExecutionTrace:
    if Triple(xid, RDF.type, PKO.ProcedureExecution) not in graph:
        raise NotAnExecution(xid.value)
    step_executions = []
    for node in graph.objects(xid, PKO.hasStepExecution):
        if not isinstance(node, Iri):
            continue
        step = _iri_value(graph, node, PPLAN.correspondsToStep)
        agent = _iri_value(graph, node, PROV.wasAssociatedWith)
        if step is None or agent is None:
            raise NotAnExecution(f"step execution {node.value} lacks step or agent")
        step_executions.append(
            StepExecution(
                id=node,
                step=step,
                agent=agent,
                started_at=_read_time(graph, node, PROV.startedAtTime),
                ended_at=_read_time(graph, node, PROV.endedAtTime),
            )
        )
    occurrences: list[Occurrence] = []
    for node in graph.objects(xid, PKO.hasOccurrence):
        if not isinstance(node, Iri):
            continue
        agent = _iri_value(graph, node, PROV.wasAssociatedWith)
        at = _read_time(graph, node, PROV.atTime)
        if agent is None or at is None:
            raise NotAnExecution(f"occurrence {node.value} lacks agent or time")
        if Triple(node, RDF.type, PKO.UserFeedbackOccurrence) in graph:
            occurrences.append(
                Feedback(
                    id=node,
                    text=_string_value(graph, node, DCT.description) or "",
                    about=_iri_value(graph, node, PKO.about) or xid,
                    agent=agent,
                    at=at,
                )
            )
        elif Triple(node, RDF.type, PKO.UserQuestionOccurrence) in graph:
            occurrences.append(
                Question(
                    id=node,
                    text=_string_value(graph, node, DCT.description) or "",
                    agent=agent,
                    at=at,
                    addressed_by=_iri_value(graph, node, PKO.addressedBy),
                )
            )
        elif Triple(node, RDF.type, PKO.IssueOccurrence) in graph:
            error = _iri_value(graph, node, PKO.hasError)
            if error is None:
                raise NotAnExecution(f"issue {node.value} lacks its error")
            occurrences.append(
                Issue(
                    id=node,
                    error=error,
                    agent=agent,
                    at=at,
                    cause=_string_value(graph, node, PKO.cause),
                    solution=_string_value(graph, node, PKO.solution),
                )
            )
        else:
            raise NotAnExecution(f"occurrence {node.value} has no occurrence type")
    agent = _iri_value(graph, xid, PROV.wasAssociatedWith)
    procedure = _iri_value(graph, xid, PKO.executes)
    status = _iri_value(graph, xid, PKO.hasExecutionStatus)
    if agent is None or procedure is None or status is None:
        raise NotAnExecution(f"{xid.value} lacks executes, agent, or status")
    base = ExecutionTrace(
        id=xid,
        procedure=procedure,
        agent=agent,
        status=status,
        started_at=_read_time(graph, xid, PROV.startedAtTime),
        ended_at=_read_time(graph, xid, PROV.endedAtTime),
        step_executions=tuple(
            sorted(step_executions, key=lambda se: (se.started_at is None, se.started_at or datetime.min, term_sort_key(se.id)))
        ),
        occurrences=tuple(sorted(occurrences, key=_occurrence_key)),
    )
    reachable = execution_subgraph(graph, xid)
    lowered = lower_execution(base)
    extras = tuple(sorted((t for t in reachable if t not in lowered), key=Triple.sort_key))
    if extras:
        base = ExecutionTrace(
            id=base.id,
            procedure=base.procedure,
            agent=base.agent,
            status=base.status,
            started_at=base.started_at,
            ended_at=base.ended_at,
            step_executions=base.step_executions,
            occurrences=base.occurrences,
            extras=extras,
        )
    return base


def execution_subgraph(graph: Graph, xid: Iri) -> Graph:
    """Triples on the execution node, its step executions, and occurrences."""
    out = Graph(prefixes=graph.prefixes)
    nodes = [xid]
    nodes.extend(n for n in graph.objects(xid, PKO.hasStepExecution) if isinstance(n, Iri))
    nodes.extend(n for n in graph.objects(xid, PKO.hasOccurrence) if isinstance(n, Iri))
    for node in nodes:
        for t in graph.match(s=node):
            out.add(t)
    return out


def lift_machine(graph: Graph, mid: Iri) -> MachineInfo:
    return MachineInfo(
        id=mid,
        machine_type=_iri_value(graph, mid, PKO_IND.hasMachineType),
        location=_iri_value(graph, mid, PKO_IND.hasLocation),
        manufacturer=_iri_value(graph, mid, PKO_IND.wasManufacturedBy),
    )


def lift_agent_roles(graph: Graph, agent: Iri):
    """Agent roles with their optional validity intervals."""
    from .model import AgentRole
    from .vocab import PRO

    roles = []
    for rit in graph.objects(agent, PRO.holdsRoleInTime):
        if not isinstance(rit, Iri):
            continue
        role = _iri_value(graph, rit, PRO.withRole)
        if role is None:
            continue
        interval = None
        period = graph.value(rit, DCT.temporal)
        if isinstance(period, (Iri, BlankNode)):
            start = _read_time(graph, period, DCAT.startDate)
            end = _read_time(graph, period, DCAT.endDate)
            if start or end:
                interval = (start, end)
        roles.append(AgentRole(agent=agent, role=role, interval=interval))
    return roles
