from __future__ import annotations

import random
from datetime import datetime, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pkforge.model import (
    BranchingOrder,
    CyclicOrder,
    DisconnectedOrder,
    ExecutionTrace,
    Step,
    StepExecution,
    UnknownLevel,
    flatten,
    format_timestamp,
    order_steps,
    parse_timestamp,
    version_chain,
)
from pkforge.store import Graph, Triple
from pkforge.vocab import Iri, PKO, PPLAN, RDF

from conftest import LOTO_ABSTRACT, LOTO_PROCEDURE, LOTO_V1, RECIPE, loto_step, recipe_part, recipe_step

EX = "http://example.org/"


def iri(n: str) -> Iri:
    return Iri(EX + n)


def chain_graph(container: Iri, children: list[Iri], edges: list[tuple[Iri, Iri]]) -> Graph:
    g = Graph()
    for child in children:
        g.add(Triple(container, PKO.hasStep, child))
        g.add(Triple(child, RDF.type, PPLAN.Step))
    for a, b in edges:
        g.add(Triple(a, PKO.nextStep, b))
    return g


class TestOrderSteps:
    def test_loto_step_4_is_fourth(self, loto):
        order = order_steps(loto, LOTO_PROCEDURE)
        assert order[3] == loto_step(4)
        assert order == [loto_step(n) for n in range(1, 7)]

    def test_single_step_container(self):
        g = chain_graph(iri("c"), [iri("s1")], [])
        assert order_steps(g, iri("c")) == [iri("s1")]

    def test_empty_container(self):
        assert order_steps(Graph(), iri("c")) == []

    def test_shuffled_insertion_matches_chain_walk_oracle(self):
        rng = random.Random(99)
        for _ in range(25):
            n = rng.randrange(2, 11)
            children = [iri(f"s{k}") for k in range(n)]
            sequence = children[:]
            rng.shuffle(sequence)
            edges = list(zip(sequence, sequence[1:]))
            shuffled_edges = edges[:]
            rng.shuffle(shuffled_edges)
            g = chain_graph(iri("c"), sorted(children, key=lambda i: rng.random()), shuffled_edges)

            # oracle: walk from the unique head
            successors = dict(edges)
            heads = set(sequence) - {b for _, b in edges}
            walk = [next(iter(heads))]
            while walk[-1] in successors:
                walk.append(successors[walk[-1]])

            assert order_steps(g, iri("c")) == walk

    def test_cycle_detected(self):
        g = chain_graph(iri("c"), [iri("s1"), iri("s2")], [(iri("s1"), iri("s2")), (iri("s2"), iri("s1"))])
        with pytest.raises(CyclicOrder):
            order_steps(g, iri("c"))

    def test_self_loop_detected(self):
        g = chain_graph(iri("c"), [iri("s1")], [(iri("s1"), iri("s1"))])
        with pytest.raises(CyclicOrder):
            order_steps(g, iri("c"))

    def test_branching_detected(self):
        g = chain_graph(
            iri("c"),
            [iri("s1"), iri("s2"), iri("s3")],
            [(iri("s1"), iri("s2")), (iri("s1"), iri("s3"))],
        )
        with pytest.raises(BranchingOrder):
            order_steps(g, iri("c"))

    def test_disconnected_detected(self):
        g = chain_graph(iri("c"), [iri("s1"), iri("s2")], [])
        with pytest.raises(DisconnectedOrder):
            order_steps(g, iri("c"))

    def test_partial_mode_accepts_dag(self):
        g = chain_graph(
            iri("c"),
            [iri("s1"), iri("s2"), iri("s3")],
            [(iri("s1"), iri("s2")), (iri("s1"), iri("s3"))],
        )
        order = order_steps(g, iri("c"), mode="partial")
        assert order[0] == iri("s1")
        assert set(order) == {iri("s1"), iri("s2"), iri("s3")}
        # ties broken by IRI byte order
        assert order == [iri("s1"), iri("s2"), iri("s3")]

    def test_partial_mode_still_rejects_cycles(self):
        g = chain_graph(iri("c"), [iri("s1"), iri("s2")], [(iri("s1"), iri("s2")), (iri("s2"), iri("s1"))])
        with pytest.raises(CyclicOrder):
            order_steps(g, iri("c"), mode="partial")

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=1, max_value=12), st.randoms(use_true_random=False))
    def test_output_covers_children_exactly_once(self, n, rng):
        children = [iri(f"s{k}") for k in range(n)]
        sequence = children[:]
        rng.shuffle(sequence)
        g = chain_graph(iri("c"), children, list(zip(sequence, sequence[1:])))
        order = order_steps(g, iri("c"))
        assert sorted(order, key=lambda i: i.value) == sorted(children, key=lambda i: i.value)
        assert len(order) == len(set(order))


def random_tree(rng: random.Random, prefix: str, depth: int) -> tuple[Graph, Iri, list[Iri]]:
    """Random nested procedure; returns (graph, root, expected DFS leaves)."""
    g = Graph()
    root = iri(f"{prefix}proc")
    counter = [0]

    def build(container: Iri, level: int) -> list[Iri]:
        leaves: list[Iri] = []
        width = rng.randrange(1, 4)
        children = []
        for _ in range(width):
            counter[0] += 1
            children.append(iri(f"{prefix}s{counter[0]}"))
        for a, b in zip(children, children[1:]):
            g.add(Triple(a, PKO.nextStep, b))
        for child in children:
            g.add(Triple(container, PKO.hasStep, child))
            if level < depth and rng.random() < 0.5:
                g.add(Triple(child, RDF.type, PPLAN.MultiStep))
                leaves.extend(build(child, level + 1))
            else:
                g.add(Triple(child, RDF.type, PPLAN.Step))
                leaves.append(child)
        return leaves

    expected = build(root, 0)
    return g, root, expected


class TestFlatten:
    def test_recipe_part1_steps_before_part2(self, recipe):
        flat = flatten(recipe, RECIPE)
        assert flat == [
            recipe_step("1.1"), recipe_step("1.2"), recipe_step("1.3"),
            recipe_step("2.1"), recipe_step("2.2"), recipe_step("2.3"),
        ]
        assert flat.index(recipe_step("1.2")) < flat.index(recipe_step("2.1"))

    def test_flat_procedure_is_identity(self, loto):
        assert flatten(loto, LOTO_PROCEDURE) == order_steps(loto, LOTO_PROCEDURE)

    def test_random_trees_match_recursive_oracle(self):
        rng = random.Random(4242)
        for k in range(50):
            g, root, expected = random_tree(rng, f"t{k}-", depth=2)
            assert flatten(g, root) == expected

    def test_level_filter_drops_other_levels(self, recipe):
        novice = iri("novice-cook")
        expert = iri("expert-cook")
        unfiltered = flatten(recipe, RECIPE)
        assert flatten(recipe, RECIPE, level=novice) == unfiltered
        filtered = flatten(recipe, RECIPE, level=expert)
        assert recipe_step("2.2") not in filtered
        assert [s for s in unfiltered if s != recipe_step("2.2")] == filtered

    def test_unknown_level(self, recipe):
        with pytest.raises(UnknownLevel):
            flatten(recipe, RECIPE, level=iri("nonexistent-level"))

    def test_ordering_errors_propagate(self, recipe):
        recipe.add(Triple(recipe_step("1.3"), PKO.nextStep, recipe_step("1.1")))
        with pytest.raises((CyclicOrder, BranchingOrder)):
            flatten(recipe, RECIPE)


class TestVersionChain:
    def test_fixture_chain(self, loto):
        assert version_chain(loto, LOTO_ABSTRACT) == [LOTO_V1, LOTO_PROCEDURE]

    def test_single_version(self):
        g = Graph([Triple(iri("abs"), PKO.hasVersion, iri("v1"))])
        assert version_chain(g, iri("abs")) == [iri("v1")]

    def test_long_shuffled_chain_matches_walk(self):
        rng = random.Random(11)
        versions = [iri(f"v{k}") for k in range(12)]
        g = Graph()
        triples = [Triple(iri("abs"), PKO.hasVersion, v) for v in versions]
        triples += [Triple(a, PKO.nextVersion, b) for a, b in zip(versions, versions[1:])]
        rng.shuffle(triples)
        g.update(triples)
        assert version_chain(g, iri("abs")) == versions

    def test_next_version_links_agree_with_chain(self, loto):
        chain = version_chain(loto, LOTO_ABSTRACT)
        for left, right in zip(chain, chain[1:]):
            assert Triple(left, PKO.nextVersion, right) in loto


class TestTypedValues:
    def test_step_kind_invariants(self):
        with pytest.raises(ValueError):
            Step(id=iri("s"), label="x", kind="atomic", substeps=(iri("a"),))
        with pytest.raises(ValueError):
            Step(id=iri("s"), label="x", kind="multistep")
        with pytest.raises(ValueError):
            Step(id=iri("s"), label="x", kind="atomic", expected_duration_s=-1)

    def test_execution_temporal_invariants(self):
        t0 = datetime(2024, 10, 11, 12, 33, tzinfo=timezone.utc)
        t1 = datetime(2024, 10, 11, 12, 36, tzinfo=timezone.utc)
        with pytest.raises(ValueError):
            StepExecution(id=iri("se"), step=iri("s"), agent=iri("a"), started_at=t1, ended_at=t0)
        with pytest.raises(ValueError):
            ExecutionTrace(
                id=iri("e"), procedure=iri("p"), agent=iri("a"), status=PKO.completed,
                started_at=t1, ended_at=t0,
            )

    def test_timestamp_round_trip(self):
        lexical = "2024-10-11T12:33:00Z"
        assert format_timestamp(parse_timestamp(lexical)) == lexical
        offset = parse_timestamp("2024-10-11T14:33:00+02:00")
        assert format_timestamp(offset) == lexical
        with pytest.raises(ValueError):
            parse_timestamp("yesterday at noon")
