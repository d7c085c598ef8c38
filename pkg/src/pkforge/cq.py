"""Competency-question catalog and its conjunctive-pattern evaluator.

Queries are basic graph patterns with optional transitive atoms
(`pko:hasStep*` style). Evaluation is a backtracking join over the store's
match() streams; rows are distinct and deterministically sorted, so the
result is independent of atom order.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .store import Graph, Literal, Term, term_sort_key
from .vocab import Iri, PrefixMap, default_prefixes, expand


class UnknownQuery(KeyError):
    pass


class UnboundParameter(ValueError):
    pass


class CatalogSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class PatternAtom:
    subject: Var | Term
    predicate: Iri
    object: Var | Term
    transitive: bool = False


@dataclass(frozen=True)
class CompetencyQuery:
    id: str
    question: str
    parameters: tuple[str, ...]
    projection: tuple[str, ...]
    pattern: tuple[PatternAtom, ...]

    def __post_init__(self) -> None:
        in_pattern = {
            t.name
            for atom in self.pattern
            for t in (atom.subject, atom.object)
            if isinstance(t, Var)
        }
        missing = [v for v in self.projection if v not in in_pattern]
        if missing:
            raise CatalogSyntaxError(f"{self.id}: projected variables not in pattern: {missing}")


@dataclass(frozen=True)
class ResultTable:
    columns: tuple[str, ...]
    rows: tuple[tuple[Term, ...], ...]

    def to_json(self, prefixes: PrefixMap | None = None) -> str:
        pm = prefixes or default_prefixes()
        payload = {
            "columns": list(self.columns),
            "rows": [[_term_json(cell, pm) for cell in row] for row in self.rows],
        }
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_tsv(self, prefixes: PrefixMap | None = None) -> str:
        pm = prefixes or default_prefixes()
        lines = ["\t".join(self.columns)]
        for row in self.rows:
            lines.append("\t".join(_term_text(cell, pm) for cell in row))
        return "\n".join(lines) + "\n"


def _term_json(term: Term, pm: PrefixMap) -> dict:
    if isinstance(term, Iri):
        return {"type": "iri", "value": term.value}
    if isinstance(term, Literal):
        out = {"type": "literal", "value": term.lexical}
        if term.language:
            out["language"] = term.language
        else:
            out["datatype"] = term.datatype.value
        return out
    return {"type": "blank", "value": term.label}


def _term_text(term: Term, pm: PrefixMap) -> str:
    if isinstance(term, Iri):
        return term.value
    if isinstance(term, Literal):
        return term.lexical
    return f"_:{term.label}"


def _parse_pattern_term(token: str, pm: PrefixMap) -> Var | Term:
    if token.startswith("?"):
        return Var(token[1:])
    if token.startswith("<") and token.endswith(">"):
        return Iri(token[1:-1])
    return expand(token, pm)


def load_catalog(text: str, prefixes: PrefixMap | None = None) -> list[CompetencyQuery]:
    pm = prefixes or default_prefixes()
    queries: list[CompetencyQuery] = []
    block: dict[str, list[str]] = {}

    def flush() -> None:
        if not block:
            return
        try:
            qid = block["id"][0]
            question = block["question"][0]
        except KeyError as exc:
            raise CatalogSyntaxError(f"catalog block missing {exc}") from None
        params = tuple(block.get("param", ()))
        select = tuple(" ".join(block.get("select", [""])).split())
        atoms = []
        for line in block.get("where", ()):
            parts = line.split()
            if len(parts) != 3:
                raise CatalogSyntaxError(f"{qid}: pattern atom needs 3 terms: {line!r}")
            s_tok, p_tok, o_tok = parts
            transitive = p_tok.endswith("*")
            if transitive:
                p_tok = p_tok[:-1]
            predicate = _parse_pattern_term(p_tok, pm)
            if isinstance(predicate, Var) or not isinstance(predicate, Iri):
                raise CatalogSyntaxError(f"{qid}: predicate must be an IRI: {line!r}")
            atoms.append(
                PatternAtom(
                    _parse_pattern_term(s_tok, pm),
                    predicate,
                    _parse_pattern_term(o_tok, pm),
                    transitive,
                )
            )
        queries.append(CompetencyQuery(qid, question, params, select, tuple(atoms)))
        block.clear()

    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            flush()
            continue
        if line.startswith("#"):
            continue
        key, _, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if not value and key != "select":
            raise CatalogSyntaxError(f"bad catalog line: {raw!r}")
        block.setdefault(key, []).append(value)
    flush()
    return queries


@lru_cache(maxsize=1)
def catalog() -> tuple[CompetencyQuery, ...]:
    text = resources.files("pkforge.data").joinpath("cq_catalog.txt").read_text("utf-8")
    return tuple(load_catalog(text))


def find(query_id: str) -> CompetencyQuery:
    for q in catalog():
        if q.id == query_id:
            return q
    raise UnknownQuery(query_id)


def _transitive_targets(store: Graph, start: Term, predicate: Iri) -> list[Term]:
    seen: set[Term] = set()
    frontier = [start]
    while frontier:
        node = frontier.pop()
        if isinstance(node, Literal):
            continue
        for t in store.match(node, predicate, None):
            if t.object not in seen:
                seen.add(t.object)
                frontier.append(t.object)
    return sorted(seen, key=term_sort_key)


def _transitive_sources(store: Graph, end: Term, predicate: Iri) -> list[Term]:
    seen: set[Term] = set()
    frontier = [end]
    while frontier:
        node = frontier.pop()
        for t in store.match(None, predicate, node):
            if t.subject not in seen:
                seen.add(t.subject)
                frontier.append(t.subject)
    return sorted(seen, key=term_sort_key)


def _atom_solutions(store: Graph, atom: PatternAtom, binding: dict[str, Term]):
    def resolve(term: Var | Term) -> Term | None:
        if isinstance(term, Var):
            return binding.get(term.name)
        return term

    s, o = resolve(atom.subject), resolve(atom.object)

    def emit(subject: Term, obj: Term):
        new = dict(binding)
        if isinstance(atom.subject, Var):
            new[atom.subject.name] = subject
        if isinstance(atom.object, Var):
            new[atom.object.name] = obj
        return new

    if not atom.transitive:
        if isinstance(s, Literal):
            return
        for t in store.match(s, atom.predicate, o):
            yield emit(t.subject, t.object)
        return

    if s is not None and o is not None:
        if not isinstance(s, Literal) and o in _transitive_targets(store, s, atom.predicate):
            yield dict(binding)
    elif s is not None:
        if isinstance(s, Literal):
            return
        for target in _transitive_targets(store, s, atom.predicate):
            yield emit(s, target)
    elif o is not None:
        for source in _transitive_sources(store, o, atom.predicate):
            yield emit(source, o)
    else:
        subjects = {t.subject for t in store.match(None, atom.predicate, None)}
        for subject in sorted(subjects, key=term_sort_key):
            for target in _transitive_targets(store, subject, atom.predicate):
                yield emit(subject, target)


def run(store: Graph, q: CompetencyQuery, bindings: Mapping[str, Term] | None = None) -> ResultTable:
    """Evaluate a query; all declared parameters must be bound."""
    given = dict(bindings or {})
    missing = [p for p in q.parameters if p not in given]
    if missing:
        raise UnboundParameter(f"{q.id}: unbound parameters: {', '.join(missing)}")
    solutions: list[dict[str, Term]] = [given]
    for atom in q.pattern:
        solutions = [new for sol in solutions for new in _atom_solutions(store, atom, sol)]
        if not solutions:
            break
    rows = {tuple(sol[v] for v in q.projection) for sol in solutions}
    ordered = tuple(sorted(rows, key=lambda row: tuple(term_sort_key(c) for c in row)))
    return ResultTable(tuple(q.projection), ordered)


def run_by_id(store: Graph, query_id: str, bindings: Mapping[str, Term] | None = None) -> ResultTable:
    return run(store, find(query_id), bindings)
