from __future__ import annotations

import random
from datetime import datetime, timezone

import pytest

from pkforge.mapper import (
    MalformedTimestamp,
    NotAProcedure,
    NotAnExecution,
    execution_subgraph,
    lift_agent_roles,
    lift_execution,
    lift_machine,
    lift_procedure,
    lift_procedures,
    lower_execution,
    lower_procedure,
    procedure_subgraph,
)
from pkforge.model import ExecutionTrace, Procedure
from pkforge.store import Graph, Literal, Triple
from pkforge.vocab import DCT, Iri, PKO, XSD, terms_by_curie

from conftest import JOHN_DOE, LOTO_EXECUTION, LOTO_PROCEDURE, RECIPE, loto_step, recipe_step
from generators import random_procedure_bundle, random_trace

EX = "http://example.org/"


def iri(n: str) -> Iri:
    return Iri(EX + n)


class TestLowerProcedure:
    def test_fixture_lowering_contains_target_triple(self, loto):
        bundle = lift_procedure(loto, LOTO_PROCEDURE)
        lowered = lower_procedure(bundle.procedure, bundle.steps, bundle.errors, bundle.extras)
        assert Triple(LOTO_PROCEDURE, PKO.hasProcedureTarget, iri("condensers-MSK")) in lowered

    def test_minimal_procedure_lowers_to_exact_triples(self):
        p = Procedure(id=iri("p"), title="Minimal", status=PKO.draft, steps=(iri("s1"),))
        lowered = lower_procedure(p)
        assert set(lowered) == {
            Triple(iri("p"), Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type"), PKO.Procedure),
            Triple(iri("p"), DCT.title, Literal("Minimal")),
            Triple(iri("p"), PKO.hasProcedureStatus, PKO.draft),
            Triple(iri("p"), PKO.hasStep, iri("s1")),
        }

    def test_step_chain_gets_inverses(self):
        p = Procedure(id=iri("p"), title="T", status=PKO.draft, steps=(iri("s1"), iri("s2")))
        lowered = lower_procedure(p)
        assert Triple(iri("s1"), PKO.nextStep, iri("s2")) in lowered
        assert Triple(iri("s2"), PKO.previousStep, iri("s1")) in lowered

    def test_every_emitted_predicate_is_in_the_term_table(self):
        rng = random.Random(5)
        table_iris = {t.iri for t in terms_by_curie().values()}
        for k in range(10):
            bundle = random_procedure_bundle(rng, f"vocab{k}")
            lowered = lower_procedure(bundle.procedure, bundle.steps, bundle.errors)
            for t in lowered:
                assert t.predicate in table_iris, t.predicate
            trace = random_trace(rng, f"vocab{k}")
            for t in lower_execution(trace):
                assert t.predicate in table_iris, t.predicate


class TestLiftProcedure:
    def test_loto_references_image_resource(self, loto):
        bundle = lift_procedure(loto, LOTO_PROCEDURE)
        assert bundle.procedure.references == (iri("condensers-MSK-right-side"),)
        description = loto.value(iri("condensers-MSK-right-side"), DCT.description)
        assert "right side" in description.lexical

    def test_untyped_node_raises(self, loto):
        with pytest.raises(NotAProcedure):
            lift_procedure(loto, iri("ACME"))

    def test_recipe_step_1_2_carries_action_and_tool(self, recipe):
        bundle = lift_procedure(recipe, RECIPE)
        step = next(s for s in bundle.steps if s.id == recipe_step("1.2"))
        assert step.actions == (iri("scrub-carrots"),)
        assert step.tools == (iri("vegetable-scrub"),)
        assert step.verification == iri("dirt-removed-check")

    def test_loto_step_4_fields(self, loto):
        bundle = lift_procedure(loto, LOTO_PROCEDURE)
        step = next(s for s in bundle.steps if s.id == loto_step(4))
        assert step.label == "Lock Electrical Energy Point"
        assert step.expected_duration_s == 120
        assert step.duration_node == iri("120-seconds")
        assert step.padlocks == (iri("padlock-MSK-4"),)
        assert step.ppe == (iri("insulating-gloves"),)
        assert step.fallback_for is None  # step 4 raises the error, step 3 is the fallback
        fallback = next(s for s in bundle.steps if s.id == loto_step(3))
        assert fallback.fallback_for == iri("lock-jam-error")
        assert bundle.errors[0].error_code == "E-041"
        assert bundle.errors[0].fallback_step == loto_step(3)

    def test_lift_all_procedures(self, combined):
        bundles, report = lift_procedures(combined)
        assert len(bundles) == 4
        assert {b.procedure.id for b in bundles} >= {LOTO_PROCEDURE, RECIPE}
        assert report.skipped == ()
        assert set(report.lifted) == {b.procedure.id for b in bundles}
        assert not (set(report.lifted) & {sid for sid, _ in report.skipped})

    def test_lift_report_collects_failures(self, loto):
        loto.add(Triple(loto_step(4), PKO.nextStep, loto_step(2)))
        bundles, report = lift_procedures(loto)
        assert LOTO_PROCEDURE in dict(report.skipped)
        assert LOTO_PROCEDURE not in report.lifted


class TestProcedureLosslessness:
    def test_fixture_subgraph_identity(self, loto):
        bundle = lift_procedure(loto, LOTO_PROCEDURE)
        lowered = lower_procedure(bundle.procedure, bundle.steps, bundle.errors, bundle.extras)
        assert set(lowered) == set(procedure_subgraph(loto, LOTO_PROCEDURE))

    def test_recipe_subgraph_identity(self, recipe):
        bundle = lift_procedure(recipe, RECIPE)
        lowered = lower_procedure(bundle.procedure, bundle.steps, bundle.errors, bundle.extras)
        assert set(lowered) == set(procedure_subgraph(recipe, RECIPE))

    def test_random_round_trips(self):
        rng = random.Random(1234)
        for k in range(20):
            bundle = random_procedure_bundle(rng, f"rt{k}")
            lowered = lower_procedure(bundle.procedure, bundle.steps, bundle.errors)
            lifted = lift_procedure(lowered, bundle.procedure.id)
            assert lifted.procedure == bundle.procedure
            assert lifted.steps == bundle.steps
            assert lifted.errors == bundle.errors
            assert lifted.extras == ()


class TestExecutions:
    def test_fixture_trace_times(self, loto):
        trace = lift_execution(loto, LOTO_EXECUTION)
        assert trace.agent == JOHN_DOE
        assert trace.status == PKO.completed
        se = trace.step_executions[0]
        assert se.step == loto_step(4)
        assert se.started_at == datetime(2024, 10, 11, 12, 33, tzinfo=timezone.utc)
        assert se.ended_at == datetime(2024, 10, 11, 12, 36, tzinfo=timezone.utc)

    def test_fixture_question_occurrence(self, loto):
        trace = lift_execution(loto, LOTO_EXECUTION)
        questions = [o for o in trace.occurrences if type(o).__name__ == "Question"]
        assert len(questions) == 1
        assert "key of the padlock" in questions[0].text
        assert questions[0].addressed_by == iri("key-handling-FAQ")

    def test_empty_trace_lowers_to_core_triples(self):
        trace = ExecutionTrace(
            id=iri("p/execution/1"), procedure=iri("p"), agent=iri("agent"), status=PKO.inProgress
        )
        lowered = lower_execution(trace)
        predicates = {t.predicate for t in lowered}
        assert predicates == {
            Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type"),
            PKO.executes,
            Iri("http://www.w3.org/ns/prov#wasAssociatedWith"),
            PKO.hasExecutionStatus,
        }
        assert len(lowered) == 4

    def test_not_an_execution(self, loto):
        with pytest.raises(NotAnExecution):
            lift_execution(loto, LOTO_PROCEDURE)

    def test_malformed_timestamp(self, loto):
        loto.discard(
            Triple(LOTO_EXECUTION, Iri("http://www.w3.org/ns/prov#startedAtTime"),
                   Literal("2024-10-11T12:20:00Z", datatype=XSD.dateTime))
        )
        loto.add(
            Triple(LOTO_EXECUTION, Iri("http://www.w3.org/ns/prov#startedAtTime"),
                   Literal("not a time", datatype=XSD.dateTime))
        )
        with pytest.raises(MalformedTimestamp):
            lift_execution(loto, LOTO_EXECUTION)

    def test_random_round_trips(self):
        rng = random.Random(77)
        for k in range(20):
            trace = random_trace(rng, f"trace{k}")
            lowered = lower_execution(trace)
            assert lift_execution(lowered, trace.id) == trace

    def test_fixture_execution_subgraph_identity(self, loto):
        trace = lift_execution(loto, LOTO_EXECUTION)
        assert set(lower_execution(trace)) == set(execution_subgraph(loto, LOTO_EXECUTION))


class TestIndustryAndRoles:
    def test_lift_machine(self, loto):
        machine = lift_machine(loto, iri("condensers-MSK"))
        assert machine.machine_type == iri("condenser-unit")
        assert machine.location == iri("MSK-factory")
        assert machine.manufacturer == iri("CoolCo")

    def test_lift_agent_roles(self, loto):
        roles = lift_agent_roles(loto, JOHN_DOE)
        assert len(roles) == 1
        role = roles[0]
        assert role.role == iri("maintenance-operator")
        start, end = role.interval
        assert start.year == 2024 and end.year == 2024
