"""Session recorder for procedure executions.

A session owns one execution trace under construction: steps are started and
ended with explicit timestamps (clock injection keeps everything
deterministic), occurrences are appended, and finish() freezes the trace.
Strict mode allows at most one open step at a time.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone

from .model import (
    ExecutionTrace,
    Feedback,
    Issue,
    Occurrence,
    Question,
    StepExecution,
    format_timestamp,
)
from .store import Graph, Literal, Triple
from .validation import builtin_rules, validate
from .vocab import Iri, PKO, RDF, TIME, execution_statuses


class SessionError(ValueError):
    pass


class UnknownProcedure(SessionError):
    pass


class InvalidProcedure(SessionError):
    def __init__(self, findings):
        self.findings = findings
        rules = ", ".join(sorted({f.rule_id for f in findings}))
        super().__init__(f"procedure fails validation rules: {rules}")


class UnknownStep(SessionError):
    pass


class StepNotOpen(SessionError):
    pass


class StepAlreadyOpen(SessionError):
    pass


class NonMonotonicTime(SessionError):
    pass


class SessionClosed(SessionError):
    pass


class OpenSteps(SessionError):
    pass


class BadStatus(SessionError):
    pass


def _steps_closure(store: Graph, root: Iri) -> set[Iri]:
    seen: set[Iri] = set()
    frontier = [root]
    while frontier:
        node = frontier.pop()
        for child in store.objects(node, PKO.hasStep):
            if isinstance(child, Iri) and child not in seen:
                seen.add(child)
                frontier.append(child)
    return seen


_ORDERING_RULES = ("R01", "R02", "R03", "R04")


class Session:
    """Single-owner recorder; not safe for concurrent use."""

    def __init__(
        self,
        store: Graph,
        procedure: Iri,
        agent: Iri,
        started_at: datetime,
        *,
        strict: bool = True,
    ):
        self.store = store
        self.procedure = procedure
        self.agent = agent
        self.strict = strict
        self.execution_id = Iri(f"{procedure.value}/execution/{uuid.uuid4()}")
        self.started_at = _normalize(started_at)
        self.status: Iri = PKO.inProgress
        self.ended_at: datetime | None = None
        self._steps = _steps_closure(store, procedure)
        self._open: dict[Iri, StepExecution] = {}
        self._closed: list[StepExecution] = []
        self._occurrences: list[Occurrence] = []
        self._last_time = self.started_at
        self._sequence = 0
        self._occurrence_count = 0
        self._finished: ExecutionTrace | None = None

    # -- bookkeeping ---------------------------------------------------

    def _advance_clock(self, at: datetime) -> datetime:
        moment = _normalize(at)
        if moment < self._last_time:
            raise NonMonotonicTime(
                f"{format_timestamp(moment)} is before {format_timestamp(self._last_time)}"
            )
        self._last_time = moment
        return moment

    def _require_open_session(self) -> None:
        if self._finished is not None:
            raise SessionClosed("session already finished")

    def _mint_step_execution_iri(self) -> Iri:
        self._sequence += 1
        return Iri(f"{self.execution_id.value}/step/{self._sequence}")

    def mint_occurrence_iri(self, kind: str) -> Iri:
        self._occurrence_count += 1
        return Iri(f"{self.execution_id.value}/{kind}/{self._occurrence_count}")

    # -- recording -----------------------------------------------------

    def start_step(self, step: Iri, at: datetime) -> "Session":
        self._require_open_session()
        if step not in self._steps:
            raise UnknownStep(step.value)
        if step in self._open:
            raise StepAlreadyOpen(step.value)
        if self.strict and self._open:
            already = next(iter(self._open))
            raise StepAlreadyOpen(f"{already.value} is still open")
        moment = self._advance_clock(at)
        self._open[step] = StepExecution(
            id=self._mint_step_execution_iri(),
            step=step,
            agent=self.agent,
            started_at=moment,
        )
        return self

    def end_step(self, step: Iri, at: datetime) -> "Session":
        self._require_open_session()
        if step not in self._steps:
            raise UnknownStep(step.value)
        if step not in self._open:
            raise StepNotOpen(step.value)
        moment = self._advance_clock(at)
        open_exec = self._open.pop(step)
        self._closed.append(
            StepExecution(
                id=open_exec.id,
                step=open_exec.step,
                agent=open_exec.agent,
                started_at=open_exec.started_at,
                ended_at=moment,
            )
        )
        return self

    def record_occurrence(self, occurrence: Occurrence) -> "Session":
        self._require_open_session()
        self._advance_clock(occurrence.at)
        self._occurrences.append(occurrence)
        return self

    def ask_question(self, text: str, at: datetime, addressed_by: Iri | None = None) -> Question:
        question = Question(
            id=self.mint_occurrence_iri("question"),
            text=text,
            agent=self.agent,
            at=_normalize(at),
            addressed_by=addressed_by,
        )
        self.record_occurrence(question)
        return question

    def leave_feedback(self, text: str, at: datetime, about: Iri | None = None) -> Feedback:
        feedback = Feedback(
            id=self.mint_occurrence_iri("feedback"),
            text=text,
            about=about or self.procedure,
            agent=self.agent,
            at=_normalize(at),
        )
        self.record_occurrence(feedback)
        return feedback

    def report_issue(
        self,
        error: Iri,
        at: datetime,
        cause: str | None = None,
        solution: str | None = None,
    ) -> Issue:
        issue = Issue(
            id=self.mint_occurrence_iri("issue"),
            error=error,
            agent=self.agent,
            at=_normalize(at),
            cause=cause,
            solution=solution,
        )
        self.record_occurrence(issue)
        return issue

    def finish(self, status: Iri, at: datetime) -> ExecutionTrace:
        self._require_open_session()
        if status not in execution_statuses():
            raise BadStatus(status.value)
        if self._open and status not in (PKO.aborted, PKO.failed):
            names = ", ".join(s.value for s in self._open)
            raise OpenSteps(f"open steps: {names}")
        moment = self._advance_clock(at)
        executions = self._closed + list(self._open.values())
        executions.sort(key=lambda se: (se.started_at, se.id.value))
        self._finished = ExecutionTrace(
            id=self.execution_id,
            procedure=self.procedure,
            agent=self.agent,
            status=status,
            started_at=self.started_at,
            ended_at=moment,
            step_executions=tuple(executions),
            occurrences=tuple(self._occurrences),
        )
        self.status = status
        self.ended_at = moment
        return self._finished

    @property
    def trace(self) -> ExecutionTrace | None:
        return self._finished


def _normalize(at: datetime) -> datetime:
    if at.tzinfo is None:
        raise ValueError("timestamps must be timezone-aware")
    return at.astimezone(timezone.utc).replace(microsecond=0)


def start_execution(
    store: Graph,
    procedure: Iri,
    agent: Iri,
    at: datetime,
    *,
    strict: bool = True,
) -> Session:
    """Open a session after checking the procedure exists and its step
    structure passes the ordering rules (R01..R04)."""
    if Triple(procedure, RDF.type, PKO.Procedure) not in store:
        raise UnknownProcedure(procedure.value)
    ordering = [r for r in builtin_rules() if r.id in _ORDERING_RULES]
    report = validate(store, ordering)
    relevant_nodes = _steps_closure(store, procedure) | {procedure}
    related = [f for f in report.findings if f.focus in relevant_nodes]
    if related:
        raise InvalidProcedure(related)
    return Session(store, procedure, agent, at, strict=strict)


@dataclass(frozen=True)
class OverrunRow:
    step: Iri
    expected_s: float | None
    actual_s: float
    delta_s: float | None


@dataclass(frozen=True)
class OverrunReport:
    rows: tuple[OverrunRow, ...]

    def to_json(self) -> str:
        payload = [
            {
                "step": row.step.value,
                "expected_s": row.expected_s,
                "actual_s": row.actual_s,
                "delta_s": row.delta_s,
            }
            for row in self.rows
        ]
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def expected_duration_seconds(store: Graph, step: Iri) -> float | None:
    node = store.value(step, PKO.hasExpectedDuration)
    if node is None or isinstance(node, Literal):
        return None
    amount = store.value(node, TIME.numericDuration)
    if isinstance(amount, Literal):
        try:
            return float(amount.lexical)
        except ValueError:
            return None
    return None


def overrun_report(trace: ExecutionTrace, store: Graph) -> OverrunReport:
    """Expected-vs-actual timing per closed step execution."""
    rows = []
    for se in trace.step_executions:
        if se.started_at is None or se.ended_at is None:
            continue
        actual = (se.ended_at - se.started_at).total_seconds()
        expected = expected_duration_seconds(store, se.step)
        delta = actual - expected if expected is not None else None
        rows.append(OverrunRow(step=se.step, expected_s=expected, actual_s=actual, delta_s=delta))
    return OverrunReport(tuple(rows))
