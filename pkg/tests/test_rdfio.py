from __future__ import annotations

import json
import random

import pytest

from pkforge.fixtures import fixture_text
from pkforge.rdfio import (
    SerializationOptions,
    TurtleParseError,
    parse_turtle,
    parse_turtle_verbose,
    serialize,
    serialize_jsonld,
    serialize_ntriples,
    serialize_turtle,
)
from pkforge.store import BlankNode, Graph, Literal, Triple, isomorphic
from pkforge.vocab import Iri, PKO, RDF, XSD, default_prefixes

PREFIX_HEADER = """\
@prefix ex: <http://example.org/> .
@prefix pko: <https://w3id.org/pko#> .
@prefix pko-ind: <https://w3id.org/pko/ind#> .
@prefix pplan: <http://purl.org/net/p-plan#> .
@prefix dct: <http://purl.org/dc/terms/> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
"""

# (sugared document, hand-expanded document); each pair must denote the same
# graph, which doubles as 40 of the round-trip suite's documents.
SUGAR_PAIRS = [
    (  # 1: predicate-object list with ;
        PREFIX_HEADER + "ex:a dct:title \"T\" ; pko:hasStep ex:s1 .",
        PREFIX_HEADER + "ex:a dct:title \"T\" .\nex:a pko:hasStep ex:s1 .",
    ),
    (  # 2: object list with ,
        PREFIX_HEADER + "ex:a pko:hasStep ex:s1, ex:s2, ex:s3 .",
        PREFIX_HEADER
        + "ex:a pko:hasStep ex:s1 .\nex:a pko:hasStep ex:s2 .\nex:a pko:hasStep ex:s3 .",
    ),
    (  # 3: `a` keyword
        PREFIX_HEADER + "ex:a a pko:Procedure .",
        "<http://example.org/a> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <https://w3id.org/pko#Procedure> .",
    ),
    (  # 4: mixed ; and ,
        PREFIX_HEADER + "ex:a a pko:Procedure ; pko:hasStep ex:s1, ex:s2 ; dct:title \"X\" .",
        PREFIX_HEADER
        + "ex:a a pko:Procedure .\nex:a pko:hasStep ex:s1 .\nex:a pko:hasStep ex:s2 .\nex:a dct:title \"X\" .",
    ),
    (  # 5: blank-node property list as object
        PREFIX_HEADER + "ex:s4 pko-ind:requiresPadlock [ a pko-ind:StandardPadlock ] .",
        PREFIX_HEADER
        + "ex:s4 pko-ind:requiresPadlock _:p .\n_:p a pko-ind:StandardPadlock .",
    ),
    (  # 6: blank-node property list as subject
        PREFIX_HEADER + "[ a pplan:Step ; dct:title \"anon\" ] .",
        PREFIX_HEADER + "_:s a pplan:Step .\n_:s dct:title \"anon\" .",
    ),
    (  # 7: anonymous blank as object
        PREFIX_HEADER + "ex:a pko:hasStep [] .",
        PREFIX_HEADER + "ex:a pko:hasStep _:x .",
    ),
    (  # 8: nested property lists
        PREFIX_HEADER
        + "ex:a pko:hasStep [ a pplan:Step ; pko-ind:requiresPadlock [ a pko-ind:Padlock ] ] .",
        PREFIX_HEADER
        + "ex:a pko:hasStep _:s .\n_:s a pplan:Step .\n_:s pko-ind:requiresPadlock _:p .\n_:p a pko-ind:Padlock .",
    ),
    (  # 9: integer shorthand
        PREFIX_HEADER + "ex:d ex:n 120 .",
        PREFIX_HEADER + 'ex:d ex:n "120"^^xsd:integer .',
    ),
    (  # 10: decimal shorthand
        PREFIX_HEADER + "ex:d ex:n 1.5 .",
        PREFIX_HEADER + 'ex:d ex:n "1.5"^^xsd:decimal .',
    ),
    (  # 11: double shorthand
        PREFIX_HEADER + "ex:d ex:n 1.0e3 .",
        PREFIX_HEADER + 'ex:d ex:n "1.0e3"^^xsd:double .',
    ),
    (  # 12: boolean shorthand
        PREFIX_HEADER + "ex:d ex:flag true, false .",
        PREFIX_HEADER + 'ex:d ex:flag "true"^^xsd:boolean .\nex:d ex:flag "false"^^xsd:boolean .',
    ),
    (  # 13: language tags
        PREFIX_HEADER + 'ex:a dct:title "Plan"@en ; dct:title "Piano"@it .',
        PREFIX_HEADER + 'ex:a dct:title "Plan"@en .\nex:a dct:title "Piano"@it .',
    ),
    (  # 14: long string vs escaped newline
        PREFIX_HEADER + 'ex:a dct:description """line one\nline two""" .',
        PREFIX_HEADER + 'ex:a dct:description "line one\\nline two" .',
    ),
    (  # 15: single-quoted strings
        PREFIX_HEADER + "ex:a dct:title 'single' ; dct:description '''long single''' .",
        PREFIX_HEADER + 'ex:a dct:title "single" .\nex:a dct:description "long single" .',
    ),
    (  # 16: \\u escapes vs literal characters
        PREFIX_HEADER + 'ex:a dct:title "caf\\u00E9" .',
        PREFIX_HEADER + 'ex:a dct:title "café" .',
    ),
    (  # 17: prefixed names vs angle IRIs
        PREFIX_HEADER + "ex:a pko:executes ex:b .",
        "<http://example.org/a> <https://w3id.org/pko#executes> <http://example.org/b> .",
    ),
    (  # 18: @base-relative references
        "@base <http://example.org/> .\n<proc/1> <p> <proc/2> .",
        "<http://example.org/proc/1> <http://example.org/p> <http://example.org/proc/2> .",
    ),
    (  # 19: trailing semicolon before the dot
        PREFIX_HEADER + "ex:a dct:title \"T\" ; .",
        PREFIX_HEADER + 'ex:a dct:title "T" .',
    ),
    (  # 20: empty prefix label and SPARQL-style directives
        "PREFIX : <http://e/>\n:a :b :c .",
        "@prefix : <http://e/> .\n:a :b :c .",
    ),
]


class TestParser:
    def test_padlock_bnode_doc_has_two_triples(self):
        text = PREFIX_HEADER + "ex:s4 pko-ind:requiresPadlock [ a pko-ind:StandardPadlock ] ."
        graph, _ = parse_turtle(text)
        assert len(graph) == 2
        padlocks = list(graph.match(None, Iri("https://w3id.org/pko/ind#requiresPadlock"), None))
        assert len(padlocks) == 1
        node = padlocks[0].object
        assert isinstance(node, BlankNode)
        assert Triple(node, RDF.type, Iri("https://w3id.org/pko/ind#StandardPadlock")) in graph

    def test_minimal_document(self):
        graph, prefixes = parse_turtle("@prefix : <http://e/> . :a :b :c .")
        assert len(graph) == 1
        assert prefixes[""] == Iri("http://e/")

    @pytest.mark.parametrize("sugared,expanded", SUGAR_PAIRS)
    def test_sugar_pairs_denote_identical_graphs(self, sugared, expanded):
        g1, _ = parse_turtle(sugared)
        g2, _ = parse_turtle(expanded)
        assert isomorphic(g1, g2)

    def test_unknown_prefix_is_a_diagnostic(self):
        with pytest.raises(TurtleParseError) as err:
            parse_turtle("foo:a foo:b foo:c .")
        assert "unknown prefix" in err.value.diagnostics[0].message
        assert err.value.diagnostics[0].line == 1

    def test_collections_are_rejected_with_dedicated_diagnostic(self):
        with pytest.raises(TurtleParseError) as err:
            parse_turtle("@prefix : <http://e/> . :a :b ( :c :d ) .")
        assert "collections" in err.value.diagnostics[0].message

    def test_relative_iri_without_base(self):
        with pytest.raises(TurtleParseError) as err:
            parse_turtle("<a> <http://e/p> <http://e/o> .")
        assert "relative IRI" in err.value.diagnostics[0].message

    def test_error_positions_are_line_and_column(self):
        with pytest.raises(TurtleParseError) as err:
            parse_turtle("@prefix : <http://e/> .\n:a :b\n  %%% .")
        diag = err.value.diagnostics[0]
        assert diag.line == 3
        assert diag.column == 3

    def test_datatyped_and_language_literals(self):
        text = PREFIX_HEADER + 'ex:a ex:p "5"^^xsd:integer ; ex:q "hi"@en-US .'
        graph, _ = parse_turtle(text)
        objs = {t.object for t in graph}
        assert Literal("5", datatype=XSD.integer) in objs
        assert Literal("hi", language="en-US") in objs

    def test_redeclared_prefix_warns_but_parses(self):
        text = (
            "@prefix x: <http://one.example/> .\n"
            "@prefix x: <http://two.example/> .\n"
            "x:a x:b x:c ."
        )
        graph, _, warnings = parse_turtle_verbose(text)
        assert len(graph) == 1
        assert len(warnings) == 1
        assert warnings[0].severity == "warning"
        # the triple uses the latest binding
        assert Triple(
            Iri("http://two.example/a"),
            Iri("http://two.example/b"),
            Iri("http://two.example/c"),
        ) in graph

    def test_blank_label_scoping(self):
        text = "@prefix : <http://e/> . _:n0 :p _:n1 . _:n1 :p _:n0 ."
        graph, _ = parse_turtle(text)
        assert len(graph.blank_nodes()) == 2
        assert len(graph) == 2

    def test_comments_ignored(self):
        text = "# leading comment\n@prefix : <http://e/> . # trailing\n:a :b :c . # done"
        graph, _ = parse_turtle(text)
        assert len(graph) == 1


class TestRoundTrips:
    def all_documents(self) -> list[str]:
        docs = [fixture_text("loto.ttl"), fixture_text("recipe.ttl")]
        for sugared, expanded in SUGAR_PAIRS:
            docs.append(sugared)
            docs.append(expanded)
        return docs

    def test_round_trip_suite(self):
        docs = self.all_documents()
        assert len(docs) >= 30
        for doc in docs:
            original, _ = parse_turtle(doc)
            for fmt in ("turtle", "ntriples"):
                opts = SerializationOptions(format=fmt, prefixes=original.prefixes)
                reparsed, _ = parse_turtle(serialize(original, opts))
                assert isomorphic(original, reparsed), f"{fmt} round trip failed for:\n{doc}"

    def test_serialize_is_deterministic(self, loto):
        for fmt in ("turtle", "ntriples", "jsonld"):
            opts = SerializationOptions(format=fmt, prefixes=loto.prefixes)
            assert serialize(loto, opts) == serialize(loto, opts)

    def test_determinism_across_insertion_orders(self, loto):
        triples = list(loto)
        rng = random.Random(7)
        for _ in range(3):
            rng.shuffle(triples)
            shuffled = Graph(triples, prefixes=loto.prefixes)
            assert serialize_turtle(shuffled) == serialize_turtle(loto)
            assert serialize_ntriples(shuffled) == serialize_ntriples(loto)
            assert serialize_jsonld(shuffled) == serialize_jsonld(loto)

    def test_empty_graph_serializations(self):
        g = Graph()
        assert serialize_ntriples(g) == ""
        assert serialize_turtle(g) == ""
        doc = json.loads(serialize_jsonld(g))
        assert doc["@graph"] == []


class TestFuzzDiagnostics:
    def test_reported_line_contains_injected_character(self):
        doc = fixture_text("loto.ttl")
        rng = random.Random(20241011)
        failures = 0
        for _ in range(300):
            char = rng.choice(["|", "`", "~", "\x01", "}"])
            pos = rng.randrange(len(doc))
            mutated = doc[:pos] + char + doc[pos:]
            try:
                parse_turtle(mutated)
            except TurtleParseError as err:
                failures += 1
                d = err.diagnostics[0]
                line_text = mutated.splitlines()[d.line - 1]
                assert char in line_text, (
                    f"diagnostic line {d.line} does not contain {char!r}: {line_text!r}"
                )
        assert failures > 50  # the majority of injections must be caught


class TestNTriples:
    def test_canonical_sorted_output(self, loto):
        lines = serialize_ntriples(loto).splitlines()
        assert lines == sorted(lines, key=lambda l: l.encode("utf-8"))
        assert all(line.endswith(" .") for line in lines)

    def test_escapes(self):
        g = Graph([Triple(Iri("http://e/a"), Iri("http://e/p"), Literal('say "hi"\n\t\\'))])
        out = serialize_ntriples(g)
        assert '"say \\"hi\\"\\n\\t\\\\"' in out
        reparsed, _ = parse_turtle(out)
        assert isomorphic(g, reparsed)


def _expand_compact(name: str, context: dict) -> str:
    if name.startswith("_:"):
        return name
    prefix, sep, local = name.partition(":")
    if sep and prefix in context:
        return context[prefix] + local
    return name


def _jsonld_triples(doc: dict) -> set[tuple]:
    """Independent JSON-LD walker: node objects back to triples."""
    context = doc.get("@context", {})
    triples: set[tuple] = set()

    def term_of(value) -> tuple:
        if isinstance(value, str):
            return ("literal", value, XSD.string.value, None)
        if "@id" in value:
            return ("node", _expand_compact(value["@id"], context))
        lexical = value["@value"]
        if "@language" in value:
            return ("literal", lexical, RDF.langString.value, value["@language"])
        datatype = _expand_compact(value.get("@type", "xsd:string"), context)
        return ("literal", lexical, datatype, None)

    for node in doc.get("@graph", []):
        subject = _expand_compact(node["@id"], context)
        for key, raw in node.items():
            if key == "@id":
                continue
            values = raw if isinstance(raw, list) else [raw]
            if key == "@type":
                for v in values:
                    triples.add((subject, RDF.type.value, ("node", _expand_compact(v, context))))
                continue
            predicate = _expand_compact(key, context)
            for v in values:
                triples.add((subject, predicate, term_of(v)))
    return triples


def _graph_triples(graph: Graph) -> set[tuple]:
    out = set()
    for t in graph:
        s = f"_:{t.subject.label}" if isinstance(t.subject, BlankNode) else t.subject.value
        if isinstance(t.object, Literal):
            o = ("literal", t.object.lexical, t.object.datatype.value, t.object.language)
        elif isinstance(t.object, BlankNode):
            o = ("node", f"_:{t.object.label}")
        else:
            o = ("node", t.object.value)
        out.add((s, t.predicate.value, o))
    return out


class TestJsonLd:
    def test_single_type_triple(self):
        g = Graph([Triple(Iri("http://example.org/a"), RDF.type, PKO.Procedure)])
        doc = json.loads(serialize_jsonld(g))
        assert len(doc["@graph"]) == 1
        node = doc["@graph"][0]
        assert node["@type"] == "pko:Procedure"
        assert doc["@context"]["pko"] == "https://w3id.org/pko#"

    def test_walker_recovers_fixture_triples(self, loto):
        doc = json.loads(serialize_jsonld(loto))
        assert _jsonld_triples(doc) == _graph_triples(loto)

    def test_walker_recovers_recipe_triples(self, recipe):
        doc = json.loads(serialize_jsonld(recipe))
        assert _jsonld_triples(doc) == _graph_triples(recipe)

    def test_sorted_keys(self, loto):
        text = serialize_jsonld(loto)
        doc = json.loads(text)
        assert text == json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
