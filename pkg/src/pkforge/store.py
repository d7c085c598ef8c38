"""In-memory triple store with SPO / POS / OSP indexes and subclass-closure inference.

The store keeps set semantics (duplicate inserts are no-ops) and all three
indexes in lockstep. Concurrency contract: single writer, many readers;
Graph values can be handed between threads but must not be mutated while read.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from itertools import permutations
from pathlib import Path

from .vocab import (
    DCAT,
    Iri,
    PKO,
    PKO_IND,
    PPLAN,
    PrefixMap,
    PROV,
    RDF,
    XSD,
    default_prefixes,
)


class MalformedTriple(ValueError):
    """Literal subject or a non-IRI predicate."""


class CyclicHierarchy(ValueError):
    """The schema's subclass relation contains a nontrivial cycle."""


@dataclass(frozen=True)
class BlankNode:
    label: str


class Literal:
    """An RDF literal; compares lexically (no datatype-aware comparison).

    A language tag forces rdf:langString; otherwise the datatype defaults
    to xsd:string.
    """

    __slots__ = ("lexical", "datatype", "language")

    def __init__(self, lexical: str, datatype: Iri | None = None, language: str | None = None):
        self.lexical = lexical
        self.language = language
        if language is not None:
            if datatype is not None and datatype != RDF.langString:
                raise ValueError("language-tagged literals must use rdf:langString")
            self.datatype = RDF.langString
        else:
            self.datatype = datatype if datatype is not None else XSD.string

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Literal)
            and self.lexical == other.lexical
            and self.datatype == other.datatype
            and self.language == other.language
        )

    def __hash__(self) -> int:
        return hash((self.lexical, self.datatype, self.language))

    def __repr__(self) -> str:
        if self.language:
            return f"Literal({self.lexical!r}, lang={self.language!r})"
        if self.datatype != XSD.string:
            return f"Literal({self.lexical!r}, {self.datatype.value!r})"
        return f"Literal({self.lexical!r})"


Term = Iri | BlankNode | Literal


def term_sort_key(term: Term) -> tuple:
    """Total order over terms: IRIs, then blanks, then literals."""
    if isinstance(term, Iri):
        return (0, term.value)
    if isinstance(term, BlankNode):
        return (1, term.label)
    return (2, term.lexical, term.datatype.value, term.language or "")


@dataclass(frozen=True)
class Triple:
    subject: Iri | BlankNode
    predicate: Iri
    object: Term

    def __post_init__(self) -> None:
        if isinstance(self.subject, Literal):
            raise MalformedTriple("literal subject")
        if not isinstance(self.subject, (Iri, BlankNode)):
            raise MalformedTriple(f"bad subject: {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise MalformedTriple("predicate must be an IRI")
        if not isinstance(self.object, (Iri, BlankNode, Literal)):
            raise MalformedTriple(f"bad object: {self.object!r}")

    def sort_key(self) -> tuple:
        return (
            term_sort_key(self.subject),
            term_sort_key(self.predicate),
            term_sort_key(self.object),
        )


class Graph:
    """A set of triples indexed three ways; match() picks the index for the
    bound-position prefix and yields in that index's deterministic order."""

    def __init__(self, triples: Iterable[Triple] = (), prefixes: PrefixMap | None = None):
        self._spo: dict = {}
        self._pos: dict = {}
        self._osp: dict = {}
        self._size = 0
        self.prefixes = prefixes if prefixes is not None else default_prefixes()
        for t in triples:
            self.add(t)

    def __len__(self) -> int:
        return self._size

    def __contains__(self, t: Triple) -> bool:
        try:
            return t.object in self._spo[t.subject][t.predicate]
        except KeyError:
            return False

    def __iter__(self) -> Iterator[Triple]:
        return self.match()

    def add(self, t: Triple) -> bool:
        """Insert a triple; returns False when it was already present."""
        if not isinstance(t, Triple):
            raise MalformedTriple(f"not a triple: {t!r}")
        if t in self:
            return False
        self._spo.setdefault(t.subject, {}).setdefault(t.predicate, set()).add(t.object)
        self._pos.setdefault(t.predicate, {}).setdefault(t.object, set()).add(t.subject)
        self._osp.setdefault(t.object, {}).setdefault(t.subject, set()).add(t.predicate)
        self._size += 1
        return True

    def discard(self, t: Triple) -> bool:
        if t not in self:
            return False
        for index, key in ((self._spo, (t.subject, t.predicate, t.object)),
                           (self._pos, (t.predicate, t.object, t.subject)),
                           (self._osp, (t.object, t.subject, t.predicate))):
            a, b, c = key
            index[a][b].discard(c)
            if not index[a][b]:
                del index[a][b]
            if not index[a]:
                del index[a]
        self._size -= 1
        return True

    def update(self, triples: Iterable[Triple]) -> None:
        for t in triples:
            self.add(t)

    def copy(self) -> "Graph":
        return Graph(self, prefixes=self.prefixes)

    def match(
        self,
        s: Iri | BlankNode | None = None,
        p: Iri | None = None,
        o: Term | None = None,
    ) -> Iterator[Triple]:
        key = term_sort_key
        if s is not None and p is not None and o is not None:
            t = Triple(s, p, o)
            if t in self:
                yield t
        elif s is not None and p is not None:
            for obj in sorted(self._spo.get(s, {}).get(p, ()), key=key):
                yield Triple(s, p, obj)
        elif s is not None and o is not None:
            for pred in sorted(self._osp.get(o, {}).get(s, ()), key=key):
                yield Triple(s, pred, o)
        elif p is not None and o is not None:
            for sub in sorted(self._pos.get(p, {}).get(o, ()), key=key):
                yield Triple(sub, p, o)
        elif s is not None:
            for pred in sorted(self._spo.get(s, {}), key=key):
                for obj in sorted(self._spo[s][pred], key=key):
                    yield Triple(s, pred, obj)
        elif p is not None:
            for obj in sorted(self._pos.get(p, {}), key=key):
                for sub in sorted(self._pos[p][obj], key=key):
                    yield Triple(sub, p, obj)
        elif o is not None:
            for sub in sorted(self._osp.get(o, {}), key=key):
                for pred in sorted(self._osp[o][sub], key=key):
                    yield Triple(sub, pred, o)
        else:
            for sub in sorted(self._spo, key=key):
                for pred in sorted(self._spo[sub], key=key):
                    for obj in sorted(self._spo[sub][pred], key=key):
                        yield Triple(sub, pred, obj)

    def subjects(self, p: Iri | None = None, o: Term | None = None) -> list:
        return sorted({t.subject for t in self.match(None, p, o)}, key=term_sort_key)

    def objects(self, s: Iri | BlankNode | None = None, p: Iri | None = None) -> list:
        return sorted({t.object for t in self.match(s, p, None)}, key=term_sort_key)

    def value(self, s: Iri | BlankNode, p: Iri) -> Term | None:
        for t in self.match(s, p, None):
            return t.object
        return None

    def blank_nodes(self) -> set[BlankNode]:
        nodes: set[BlankNode] = set()
        for t in self:
            if isinstance(t.subject, BlankNode):
                nodes.add(t.subject)
            if isinstance(t.object, BlankNode):
                nodes.add(t.object)
        return nodes


@dataclass(frozen=True)
class SchemaHierarchy:
    """Subclass / subproperty edges (child, parent); transitively closed on use."""

    subclass_edges: frozenset[tuple[Iri, Iri]]
    subproperty_edges: frozenset[tuple[Iri, Iri]] = frozenset()

    def ancestors(self) -> dict[Iri, set[Iri]]:
        """Transitive parents per class. Raises CyclicHierarchy on a
        nontrivial cycle; reflexive edges are ignored."""
        children: dict[Iri, set[Iri]] = {}
        for child, parent in self.subclass_edges:
            if child == parent:
                continue
            children.setdefault(child, set()).add(parent)
        result: dict[Iri, set[Iri]] = {}
        in_progress: set[Iri] = set()

        def walk(node: Iri) -> set[Iri]:
            if node in result:
                return result[node]
            if node in in_progress:
                raise CyclicHierarchy(f"subclass cycle through {node.value}")
            in_progress.add(node)
            acc: set[Iri] = set()
            for parent in children.get(node, ()):
                acc.add(parent)
                acc |= walk(parent)
            in_progress.discard(node)
            if node in acc:
                raise CyclicHierarchy(f"subclass cycle through {node.value}")
            result[node] = acc
            return acc

        for node in list(children):
            walk(node)
        return result


def default_schema() -> SchemaHierarchy:
    """The shipped class hierarchy of the procedural-knowledge vocabulary."""
    edges = {
        (PKO.Procedure, PPLAN.Plan),
        (PKO.Procedure, DCAT.Resource),
        (PKO.ProcedureExecution, PROV.Activity),
        (PKO.StepExecution, PROV.Activity),
        (PPLAN.MultiStep, PPLAN.Step),
        (PROV.Organization, PROV.Agent),
        (PKO_IND.Machine, PKO_IND.Device),
        (PKO_IND.Factory, PKO_IND.Location),
        (PKO_IND.StandardPadlock, PKO_IND.Padlock),
        (PKO_IND.ElectricalEnergy, PKO_IND.EnergySource),
        (PKO_IND.HydraulicEnergy, PKO_IND.EnergySource),
    }
    return SchemaHierarchy(frozenset(edges))


def materialize_subclass_closure(graph: Graph, schema: SchemaHierarchy) -> Graph:
    """Return a new graph with every rdf:type assertion propagated to all
    transitive superclasses. Original triples are kept untouched."""
    ancestors = schema.ancestors()
    out = graph.copy()
    for t in graph.match(None, RDF.type, None):
        cls = t.object
        if isinstance(cls, Iri):
            for parent in ancestors.get(cls, ()):
                out.add(Triple(t.subject, RDF.type, parent))
    return out


def save_snapshot(graph: Graph, path: str | Path) -> None:
    """Write the graph as canonical (bytewise-sorted) N-Triples, UTF-8, LF."""
    from .rdfio import serialize_ntriples

    Path(path).write_text(serialize_ntriples(graph), encoding="utf-8", newline="\n")


def load_snapshot(path: str | Path) -> Graph:
    """Load a snapshot written by save_snapshot. Raises TurtleParseError with
    a line number on corrupt input, OSError on unreadable paths."""
    from .rdfio import parse_turtle

    text = Path(path).read_text(encoding="utf-8")
    graph, _ = parse_turtle(text)
    return graph


def _signature(graph: Graph, colors: dict[BlankNode, int]) -> dict[BlankNode, tuple]:
    sigs: dict[BlankNode, list] = {b: [] for b in colors}

    def code(term: Term) -> tuple:
        # uniform ("b", color) / ("g", ...) shape keeps the tuples comparable
        if isinstance(term, BlankNode):
            return ("b", colors[term])
        return ("g",) + term_sort_key(term)

    for t in graph:
        if isinstance(t.subject, BlankNode):
            sigs[t.subject].append(("s", code(t.predicate), code(t.object)))
        if isinstance(t.object, BlankNode):
            sigs[t.object].append(("o", code(t.subject), code(t.predicate)))
    return {b: tuple(sorted(sig)) for b, sig in sigs.items()}


def _refine(graph: Graph) -> dict[BlankNode, int]:
    colors = {b: 0 for b in graph.blank_nodes()}
    while True:
        sigs = _signature(graph, colors)
        palette = {sig: i for i, sig in enumerate(sorted(set(sigs.values())))}
        new = {b: palette[sigs[b]] for b in colors}
        if new == colors:
            return colors
        colors = new


def _substitute(t: Triple, mapping: dict[BlankNode, BlankNode]) -> Triple:
    s = mapping.get(t.subject, t.subject) if isinstance(t.subject, BlankNode) else t.subject
    o = mapping.get(t.object, t.object) if isinstance(t.object, BlankNode) else t.object
    return Triple(s, t.predicate, o)


def isomorphic(a: Graph, b: Graph) -> bool:
    """Graph equality up to consistent blank-node renaming."""
    if len(a) != len(b):
        return False
    blanks_a, blanks_b = a.blank_nodes(), b.blank_nodes()
    if len(blanks_a) != len(blanks_b):
        return False
    if not blanks_a:
        return set(a) == set(b)
    ca, cb = _refine(a), _refine(b)
    sig_a = _signature(a, ca)
    sig_b = _signature(b, cb)
    groups_a: dict[tuple, list[BlankNode]] = {}
    groups_b: dict[tuple, list[BlankNode]] = {}
    for n, sig in sig_a.items():
        groups_a.setdefault(sig, []).append(n)
    for n, sig in sig_b.items():
        groups_b.setdefault(sig, []).append(n)
    if set(groups_a) != set(groups_b):
        return False
    if any(len(groups_a[g]) != len(groups_b[g]) for g in groups_a):
        return False
    triples_b = set(b)

    group_list = [(sorted(groups_a[g], key=term_sort_key), groups_b[g]) for g in sorted(groups_a)]

    def backtrack(gi: int, mapping: dict[BlankNode, BlankNode]) -> bool:
        if gi == len(group_list):
            return {_substitute(t, mapping) for t in a} == triples_b
        nodes_a, nodes_b = group_list[gi]
        for perm in permutations(nodes_b):
            mapping.update(dict(zip(nodes_a, perm)))
            if backtrack(gi + 1, mapping):
                return True
        for n in nodes_a:
            mapping.pop(n, None)
        return False

    return backtrack(0, {})
