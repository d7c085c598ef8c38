"""Typed views of procedures, steps, executions, and their ordering rules.

Values are immutable; construction from and to triples happens in the mapper.
The ordering operations work directly on the graph because that is where the
nextStep / nextVersion chains live.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone

from .store import Graph, Triple, term_sort_key
from .vocab import Iri, PKO, PPLAN, RDF


class OrderingError(ValueError):
    def __init__(self, message: str, focus: Iri | None = None):
        super().__init__(message)
        self.focus = focus


class CyclicOrder(OrderingError):
    """A nextStep / nextVersion chain loops back on itself."""


class BranchingOrder(OrderingError):
    """A node has more than one successor or predecessor in strict mode."""


class DisconnectedOrder(OrderingError):
    """The chain does not cover all children in one run (strict mode)."""


class UnknownLevel(ValueError):
    """The requested expertise level does not appear in the graph."""


def parse_timestamp(lexical: str) -> datetime:
    """Parse an xsd:dateTime lexical form into an aware UTC datetime."""
    text = lexical.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    moment = datetime.fromisoformat(text)
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=timezone.utc)
    return moment.astimezone(timezone.utc).replace(microsecond=0)


def format_timestamp(moment: datetime) -> str:
    """Second-precision UTC xsd:dateTime lexical form."""
    if moment.tzinfo is None:
        raise ValueError("timestamps must be timezone-aware")
    return moment.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class Procedure:
    id: Iri
    title: str
    status: Iri
    description: str | None = None
    procedure_type: Iri | None = None
    target: Iri | None = None
    steps: tuple[Iri, ...] = ()
    version_of: Iri | None = None
    next_version: Iri | None = None
    previous_version: Iri | None = None
    adopted_by: Iri | None = None
    references: tuple[Iri, ...] = ()
    extracted_from: Iri | None = None


@dataclass(frozen=True)
class Step:
    id: Iri
    label: str
    kind: str  # atomic | multistep
    description: str | None = None
    substeps: tuple[Iri, ...] = ()
    actions: tuple[Iri, ...] = ()
    functions: tuple[Iri, ...] = ()
    tools: tuple[Iri, ...] = ()
    verification: Iri | None = None
    expertise_level: Iri | None = None
    expected_duration_s: float | None = None
    duration_node: Iri | None = None
    fallback_for: Iri | None = None
    ppe: tuple[Iri, ...] = ()
    padlocks: tuple[Iri, ...] = ()
    energy_sources: tuple[Iri, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("atomic", "multistep"):
            raise ValueError(f"bad step kind {self.kind!r}")
        if self.kind == "atomic" and self.substeps:
            raise ValueError("atomic step with substeps")
        if self.kind == "multistep" and not self.substeps:
            raise ValueError("multistep without substeps")
        if self.expected_duration_s is not None and self.expected_duration_s < 0:
            raise ValueError("negative expected duration")


@dataclass(frozen=True)
class ErrorDef:
    id: Iri
    error_code: str | None = None
    fallback_step: Iri | None = None


@dataclass(frozen=True)
class StepExecution:
    id: Iri
    step: Iri
    agent: Iri
    started_at: datetime | None = None
    ended_at: datetime | None = None

    def __post_init__(self) -> None:
        if self.started_at and self.ended_at and self.ended_at < self.started_at:
            raise ValueError("step execution ends before it starts")


@dataclass(frozen=True)
class Feedback:
    id: Iri
    text: str
    about: Iri  # the procedure or the execution
    agent: Iri
    at: datetime


@dataclass(frozen=True)
class Question:
    id: Iri
    text: str
    agent: Iri
    at: datetime
    addressed_by: Iri | None = None


@dataclass(frozen=True)
class Issue:
    id: Iri
    error: Iri
    agent: Iri
    at: datetime
    cause: str | None = None
    solution: str | None = None


Occurrence = Feedback | Question | Issue


@dataclass(frozen=True)
class ExecutionTrace:
    id: Iri
    procedure: Iri
    agent: Iri
    status: Iri
    started_at: datetime | None = None
    ended_at: datetime | None = None
    step_executions: tuple[StepExecution, ...] = ()
    occurrences: tuple[Occurrence, ...] = ()
    extras: tuple[Triple, ...] = ()

    def __post_init__(self) -> None:
        if self.started_at and self.ended_at and self.ended_at < self.started_at:
            raise ValueError("execution ends before it starts")


@dataclass(frozen=True)
class AgentRole:
    agent: Iri
    role: Iri
    interval: tuple[datetime | None, datetime | None] | None = None

    def __post_init__(self) -> None:
        if self.interval:
            start, end = self.interval
            if start and end and end < start:
                raise ValueError("role interval ends before it starts")


@dataclass(frozen=True)
class MachineInfo:
    id: Iri
    machine_type: Iri | None = None
    location: Iri | None = None
    manufacturer: Iri | None = None


def _chain_order(
    nodes: list[Iri],
    edges: list[tuple[Iri, Iri]],
    mode: str,
) -> list[Iri]:
    """Linearize `nodes` along `edges`. Strict mode demands one clean chain;
    partial mode accepts any DAG and breaks ties by IRI byte order."""
    if not nodes:
        return []
    node_set = set(nodes)
    succ: dict[Iri, set[Iri]] = {n: set() for n in nodes}
    pred: dict[Iri, set[Iri]] = {n: set() for n in nodes}
    for a, b in edges:
        if a in node_set and b in node_set:
            succ[a].add(b)
            pred[b].add(a)

    if mode == "partial":
        remaining = dict((n, len(pred[n])) for n in nodes)
        ready = sorted((n for n in nodes if not remaining[n]), key=term_sort_key)
        out: list[Iri] = []
        while ready:
            node = ready.pop(0)
            out.append(node)
            opened = []
            for nxt in succ[node]:
                remaining[nxt] -= 1
                if remaining[nxt] == 0:
                    opened.append(nxt)
            if opened:
                ready = sorted(ready + opened, key=term_sort_key)
        if len(out) != len(nodes):
            raise CyclicOrder("ordering edges contain a cycle")
        return out

    for node in nodes:
        if len(succ[node]) > 1:
            raise BranchingOrder(f"{node.value} has multiple successors", focus=node)
        if len(pred[node]) > 1:
            raise BranchingOrder(f"{node.value} has multiple predecessors", focus=node)
    heads = [n for n in nodes if not pred[n]]
    if not heads:
        raise CyclicOrder("every node has a predecessor: the chain is a cycle")
    if len(heads) > 1:
        raise DisconnectedOrder(
            "multiple maximal chains: " + ", ".join(h.value for h in sorted(heads, key=term_sort_key))
        )
    out = []
    seen: set[Iri] = set()
    node: Iri | None = heads[0]
    while node is not None:
        if node in seen:
            raise CyclicOrder(f"chain revisits {node.value}", focus=node)
        seen.add(node)
        out.append(node)
        nxt = succ[node]
        node = next(iter(nxt)) if nxt else None
    if len(out) != len(nodes):
        raise CyclicOrder("chain does not cover nodes that sit on a cycle")
    return out


def order_steps(graph: Graph, container: Iri, *, mode: str = "strict") -> list[Iri]:
    """Linear order of a container's direct children along pko:nextStep."""
    children = [o for o in graph.objects(container, PKO.hasStep) if isinstance(o, Iri)]
    edges = [
        (child, o)
        for child in children
        for o in graph.objects(child, PKO.nextStep)
        if isinstance(o, Iri)
    ]
    return _chain_order(children, edges, mode)


def is_multistep(graph: Graph, step: Iri) -> bool:
    return Triple(step, RDF.type, PPLAN.MultiStep) in graph


def flatten(
    graph: Graph,
    procedure: Iri,
    level: Iri | None = None,
    *,
    mode: str = "strict",
) -> list[Iri]:
    """Depth-first expansion of a procedure into atomic step ids.

    With a level, steps annotated with a different expertise level are
    dropped (unannotated steps always stay).
    """
    if level is not None:
        known = bool(list(graph.match(s=level))) or bool(list(graph.match(o=level)))
        if not known:
            raise UnknownLevel(level.value)

    out: list[Iri] = []

    def expand(container: Iri) -> None:
        for step in order_steps(graph, container, mode=mode):
            if level is not None:
                annotated = graph.value(step, PKO.hasExpertiseLevel)
                if annotated is not None and annotated != level:
                    continue
            if is_multistep(graph, step):
                expand(step)
            else:
                out.append(step)

    expand(procedure)
    return out


def version_chain(graph: Graph, abstract: Iri, *, mode: str = "strict") -> list[Iri]:
    """Versions of an abstract procedure, oldest to newest."""
    versions = [o for o in graph.objects(abstract, PKO.hasVersion) if isinstance(o, Iri)]
    edges = [
        (v, o)
        for v in versions
        for o in graph.objects(v, PKO.nextVersion)
        if isinstance(o, Iri)
    ]
    return _chain_order(versions, edges, mode)
