"""Turtle parsing and deterministic Turtle / N-Triples / JSON-LD serialization.

The parser covers the W3C Turtle grammar minus collections: prefix/base
directives (both @ and SPARQL styles), prefixed names, angle-bracket IRIs,
the `a` keyword, `;` and `,` sugar, blank-node property lists, all four
string quoting styles with escapes, language tags, `^^` datatypes, and
numeric/boolean shorthand. Collections `( ... )` are rejected with a
dedicated diagnostic.

Serializers are pure functions of (graph, options): identical input yields
byte-identical output.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from urllib.parse import urljoin

from .store import BlankNode, Graph, Literal, Term, Triple, term_sort_key
from .vocab import Iri, PrefixMap, RDF, XSD, default_prefixes, shrink


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: str = "error"  # error | warning

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


class TurtleParseError(ValueError):
    """Raised on the first error-severity diagnostic; warnings never raise."""

    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics))


@dataclass(frozen=True)
class SerializationOptions:
    format: str  # turtle | ntriples | jsonld
    prefixes: PrefixMap
    deterministic: bool = True


# --- tokenizer -------------------------------------------------------------

_PN_BASE = (
    "A-Za-z\u00c0-\u00d6\u00d8-\u00f6\u00f8-\u02ff\u0370-\u037d\u037f-\u1fff"
    "\u200c-\u200d\u2070-\u218f\u2c00-\u2fef\u3001-\ud7ff\uf900-\ufdcf"
    "\ufdf0-\ufffd\U00010000-\U000effff"
)
_PN_U = _PN_BASE + "_"
_PN = _PN_U + r"\-0-9\u00b7\u0300-\u036f\u203f-\u2040"
_ESC = r"\\[_~.\-!$&'()*+,;=/?#@%]"
_PLX = rf"(?:%[0-9A-Fa-f]{{2}}|{_ESC})"

_RE_PN_PREFIX = re.compile(rf"[{_PN_BASE}](?:[{_PN}.]*[{_PN}])?")
_RE_PN_LOCAL = re.compile(
    rf"(?:[{_PN_U}:0-9]|{_PLX})(?:(?:[{_PN}.:]|{_PLX})*(?:[{_PN}:]|{_PLX}))?"
)
_RE_BLANK = re.compile(rf"_:[{_PN_U}0-9](?:[{_PN}.]*[{_PN}])?")
_RE_IRIREF = re.compile(r'<(?:[^\x00-\x20<>"{}|^`\\]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*>')
_RE_LANGTAG = re.compile(r"@[A-Za-z]+(?:-[A-Za-z0-9]+)*")
_RE_DOUBLE = re.compile(r"[+-]?(?:\d+\.\d*[eE][+-]?\d+|\.\d+[eE][+-]?\d+|\d+[eE][+-]?\d+)")
_RE_DECIMAL = re.compile(r"[+-]?\d*\.\d+")
_RE_INTEGER = re.compile(r"[+-]?\d+")
_RE_KEYWORD = re.compile(r"(?:a|true|false|PREFIX|BASE|prefix|base)\b")
_RE_SCHEME = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:")

_UCHAR = re.compile(r"\\u([0-9A-Fa-f]{4})|\\U([0-9A-Fa-f]{8})")
_ECHARS = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


@dataclass(frozen=True)
class _Token:
    kind: str
    value: object
    line: int
    col: int


class _Abort(Exception):
    def __init__(self, diag: ParseDiagnostic):
        self.diag = diag


def _unescape_uchars(text: str, line: int, col: int) -> str:
    def sub(m: re.Match) -> str:
        code = int(m.group(1) or m.group(2), 16)
        if code > 0x10FFFF:
            raise _Abort(ParseDiagnostic(line, col, f"codepoint out of range: {m.group(0)}"))
        return chr(code)

    return _UCHAR.sub(sub, text)


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _advance(self, n: int) -> None:
        chunk = self.text[self.pos : self.pos + n]
        newlines = chunk.count("\n")
        if newlines:
            self.line += newlines
            self.col = n - chunk.rfind("\n")
        else:
            self.col += n
        self.pos += n

    def _skip_trivia(self) -> None:
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\r\n":
                self._advance(1)
            elif ch == "#":
                end = self.text.find("\n", self.pos)
                self._advance((end if end != -1 else len(self.text)) - self.pos)
            else:
                return

    def _string(self) -> _Token:
        line, col = self.line, self.col
        text, pos = self.text, self.pos
        quote = text[pos]
        long = text[pos : pos + 3] in ('"""', "'''")
        delim = quote * 3 if long else quote
        self._advance(len(delim))
        chars: list[str] = []
        while True:
            if self.pos >= len(text):
                raise _Abort(ParseDiagnostic(self.line, self.col, "unterminated string"))
            ch = text[self.pos]
            if text.startswith(delim, self.pos):
                self._advance(len(delim))
                return _Token("string", "".join(chars), line, col)
            if ch == "\\":
                if self.pos + 1 >= len(text):
                    raise _Abort(ParseDiagnostic(self.line, self.col, "dangling escape"))
                nxt = text[self.pos + 1]
                if nxt in _ECHARS:
                    chars.append(_ECHARS[nxt])
                    self._advance(2)
                elif nxt in "uU":
                    width = 4 if nxt == "u" else 8
                    hexpart = text[self.pos + 2 : self.pos + 2 + width]
                    if len(hexpart) < width or not re.fullmatch(r"[0-9A-Fa-f]+", hexpart):
                        raise _Abort(ParseDiagnostic(self.line, self.col, "bad \\u escape"))
                    code = int(hexpart, 16)
                    if code > 0x10FFFF:
                        raise _Abort(ParseDiagnostic(self.line, self.col, "codepoint out of range"))
                    chars.append(chr(code))
                    self._advance(2 + width)
                else:
                    raise _Abort(
                        ParseDiagnostic(self.line, self.col, f"unknown escape \\{nxt}")
                    )
            elif not long and ch in "\n\r":
                raise _Abort(ParseDiagnostic(self.line, self.col, "newline in single-line string"))
            else:
                chars.append(ch)
                self._advance(1)

    def next_token(self) -> _Token:
        self._skip_trivia()
        line, col = self.line, self.col
        if self.pos >= len(self.text):
            return _Token("eof", None, line, col)
        text, pos = self.text, self.pos
        ch = text[pos]
        if ch == "<":
            m = _RE_IRIREF.match(text, pos)
            if not m:
                raise _Abort(ParseDiagnostic(line, col, "malformed IRI reference"))
            raw = m.group(0)[1:-1]
            self._advance(len(m.group(0)))
            return _Token("iriref", _unescape_uchars(raw, line, col), line, col)
        if ch in "\"'":
            return self._string()
        if ch == "@":
            m = _RE_LANGTAG.match(text, pos)
            if not m:
                raise _Abort(ParseDiagnostic(line, col, "malformed @ directive or language tag"))
            self._advance(len(m.group(0)))
            return _Token("atword", m.group(0)[1:], line, col)
        if text.startswith("^^", pos):
            self._advance(2)
            return _Token("caretcaret", "^^", line, col)
        if ch in ".;,[]()":
            # a dot may open a decimal literal (".5")
            if ch == "." and pos + 1 < len(text) and text[pos + 1].isdigit():
                pass
            else:
                self._advance(1)
                return _Token("punct", ch, line, col)
        m = _RE_DOUBLE.match(text, pos)
        if m:
            self._advance(len(m.group(0)))
            return _Token("double", m.group(0), line, col)
        m = _RE_DECIMAL.match(text, pos)
        if m:
            self._advance(len(m.group(0)))
            return _Token("decimal", m.group(0), line, col)
        m = _RE_INTEGER.match(text, pos)
        if m:
            self._advance(len(m.group(0)))
            return _Token("integer", m.group(0), line, col)
        if text.startswith("_:", pos):
            m = _RE_BLANK.match(text, pos)
            if not m:
                raise _Abort(ParseDiagnostic(line, col, "malformed blank node label"))
            self._advance(len(m.group(0)))
            return _Token("blank", m.group(0)[2:], line, col)
        # prefixed name: optional PN_PREFIX, ':', optional PN_LOCAL
        m = _RE_PN_PREFIX.match(text, pos)
        head = m.group(0) if m else ""
        if text.startswith(":", pos + len(head)):
            local_start = pos + len(head) + 1
            lm = _RE_PN_LOCAL.match(text, local_start)
            local = lm.group(0) if lm else ""
            self._advance(len(head) + 1 + len(local))
            return _Token("pname", (head, _unescape_local(local)), line, col)
        if m and _RE_KEYWORD.fullmatch(head):
            self._advance(len(head))
            return _Token("keyword", head, line, col)
        raise _Abort(ParseDiagnostic(line, col, f"unexpected character {ch!r}"))


def _unescape_local(local: str) -> str:
    return re.sub(r"\\(.)", r"\1", local)


# --- parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.scanner = _Scanner(text)
        self.graph = Graph()
        self.prefixes: dict[str, Iri] = {}
        self.base: str | None = None
        self.warnings: list[ParseDiagnostic] = []
        self._blank_map: dict[str, BlankNode] = {}
        self._blank_count = 0
        self._tok: _Token | None = None

    def _peek(self) -> _Token:
        if self._tok is None:
            self._tok = self.scanner.next_token()
        return self._tok

    def _next(self) -> _Token:
        tok = self._peek()
        self._tok = None
        return tok

    def _expect_punct(self, ch: str) -> None:
        tok = self._next()
        if tok.kind != "punct" or tok.value != ch:
            raise _Abort(
                ParseDiagnostic(tok.line, tok.col, f"expected {ch!r}, found {tok.value!r}")
            )

    def _fresh_blank(self) -> BlankNode:
        node = BlankNode(f"b{self._blank_count}")
        self._blank_count += 1
        return node

    def _labeled_blank(self, label: str) -> BlankNode:
        if label not in self._blank_map:
            self._blank_map[label] = self._fresh_blank()
        return self._blank_map[label]

    def _resolve_iri(self, raw: str, tok: _Token) -> Iri:
        if not _RE_SCHEME.match(raw):
            if self.base is None:
                raise _Abort(
                    ParseDiagnostic(tok.line, tok.col, f"relative IRI without base: <{raw}>")
                )
            raw = urljoin(self.base, raw)
        try:
            return Iri(raw)
        except ValueError as exc:
            raise _Abort(ParseDiagnostic(tok.line, tok.col, str(exc)))

    def _expand_pname(self, tok: _Token) -> Iri:
        label, local = tok.value
        if label not in self.prefixes:
            raise _Abort(ParseDiagnostic(tok.line, tok.col, f"unknown prefix {label!r}"))
        try:
            return Iri(self.prefixes[label].value + local)
        except ValueError as exc:
            raise _Abort(ParseDiagnostic(tok.line, tok.col, str(exc)))

    def parse(self) -> tuple[Graph, PrefixMap]:
        while True:
            tok = self._peek()
            if tok.kind == "eof":
                break
            if tok.kind == "atword" and tok.value in ("prefix", "base"):
                self._next()
                self._directive(tok.value, sparql_style=False)
            elif tok.kind == "keyword" and tok.value in ("PREFIX", "BASE", "prefix", "base"):
                self._next()
                self._directive(tok.value.lower(), sparql_style=True)
            else:
                self._triples()
                self._expect_punct(".")
        pm = PrefixMap(self.prefixes)
        self.graph.prefixes = pm.merged_over(default_prefixes())
        return self.graph, pm

    def _directive(self, which: str, sparql_style: bool) -> None:
        if which == "prefix":
            tok = self._next()
            if tok.kind != "pname" or tok.value[1]:
                raise _Abort(ParseDiagnostic(tok.line, tok.col, "expected prefix label ending in ':'"))
            label = tok.value[0]
            iri_tok = self._next()
            if iri_tok.kind != "iriref":
                raise _Abort(ParseDiagnostic(iri_tok.line, iri_tok.col, "expected namespace IRI"))
            namespace = self._resolve_iri(iri_tok.value, iri_tok)
            if label in self.prefixes and self.prefixes[label] != namespace:
                self.warnings.append(
                    ParseDiagnostic(
                        tok.line, tok.col,
                        f"prefix {label!r} redeclared to a different namespace",
                        severity="warning",
                    )
                )
            self.prefixes[label] = namespace
        else:
            iri_tok = self._next()
            if iri_tok.kind != "iriref":
                raise _Abort(ParseDiagnostic(iri_tok.line, iri_tok.col, "expected base IRI"))
            self.base = self._resolve_iri(iri_tok.value, iri_tok).value
        if not sparql_style:
            self._expect_punct(".")

    def _triples(self) -> None:
        tok = self._peek()
        if tok.kind == "punct" and tok.value == "[":
            subject = self._bnode_property_list()
            if not (self._peek().kind == "punct" and self._peek().value == "."):
                self._predicate_object_list(subject)
            return
        subject = self._subject()
        self._predicate_object_list(subject)

    def _subject(self) -> Iri | BlankNode:
        tok = self._next()
        if tok.kind == "iriref":
            return self._resolve_iri(tok.value, tok)
        if tok.kind == "pname":
            return self._expand_pname(tok)
        if tok.kind == "blank":
            return self._labeled_blank(tok.value)
        if tok.kind == "punct" and tok.value == "(":
            raise _Abort(
                ParseDiagnostic(tok.line, tok.col, "collections '( ... )' are not supported")
            )
        raise _Abort(ParseDiagnostic(tok.line, tok.col, f"expected subject, found {tok.value!r}"))

    def _verb(self) -> Iri:
        tok = self._next()
        if tok.kind == "keyword" and tok.value == "a":
            return RDF.type
        if tok.kind == "iriref":
            return self._resolve_iri(tok.value, tok)
        if tok.kind == "pname":
            return self._expand_pname(tok)
        raise _Abort(ParseDiagnostic(tok.line, tok.col, f"expected predicate, found {tok.value!r}"))

    def _predicate_object_list(self, subject: Iri | BlankNode) -> None:
        while True:
            predicate = self._verb()
            self._object_list(subject, predicate)
            tok = self._peek()
            if tok.kind == "punct" and tok.value == ";":
                while self._peek().kind == "punct" and self._peek().value == ";":
                    self._next()
                nxt = self._peek()
                if nxt.kind == "punct" and nxt.value in (".", "]"):
                    return
                continue
            return

    def _object_list(self, subject: Iri | BlankNode, predicate: Iri) -> None:
        while True:
            obj = self._object()
            self.graph.add(Triple(subject, predicate, obj))
            tok = self._peek()
            if tok.kind == "punct" and tok.value == ",":
                self._next()
                continue
            return

    def _bnode_property_list(self) -> BlankNode:
        self._expect_punct("[")
        node = self._fresh_blank()
        tok = self._peek()
        if tok.kind == "punct" and tok.value == "]":
            self._next()
            return node
        self._predicate_object_list(node)
        self._expect_punct("]")
        return node

    def _object(self) -> Term:
        tok = self._peek()
        if tok.kind == "iriref":
            self._next()
            return self._resolve_iri(tok.value, tok)
        if tok.kind == "pname":
            self._next()
            return self._expand_pname(tok)
        if tok.kind == "blank":
            self._next()
            return self._labeled_blank(tok.value)
        if tok.kind == "punct" and tok.value == "[":
            return self._bnode_property_list()
        if tok.kind == "punct" and tok.value == "(":
            raise _Abort(
                ParseDiagnostic(tok.line, tok.col, "collections '( ... )' are not supported")
            )
        if tok.kind == "string":
            self._next()
            follow = self._peek()
            if follow.kind == "atword":
                self._next()
                if not _RE_LANGTAG.fullmatch("@" + follow.value):
                    raise _Abort(
                        ParseDiagnostic(follow.line, follow.col, "malformed language tag")
                    )
                return Literal(tok.value, language=follow.value)
            if follow.kind == "caretcaret":
                self._next()
                dt_tok = self._next()
                if dt_tok.kind == "iriref":
                    return Literal(tok.value, datatype=self._resolve_iri(dt_tok.value, dt_tok))
                if dt_tok.kind == "pname":
                    return Literal(tok.value, datatype=self._expand_pname(dt_tok))
                raise _Abort(
                    ParseDiagnostic(dt_tok.line, dt_tok.col, "expected datatype IRI after ^^")
                )
            return Literal(tok.value)
        if tok.kind == "integer":
            self._next()
            return Literal(tok.value, datatype=XSD.integer)
        if tok.kind == "decimal":
            self._next()
            return Literal(tok.value, datatype=XSD.decimal)
        if tok.kind == "double":
            self._next()
            return Literal(tok.value, datatype=XSD.double)
        if tok.kind == "keyword" and tok.value in ("true", "false"):
            self._next()
            return Literal(tok.value, datatype=XSD.boolean)
        raise _Abort(ParseDiagnostic(tok.line, tok.col, f"expected object, found {tok.value!r}"))


def parse_turtle_verbose(text: str) -> tuple[Graph, PrefixMap, list[ParseDiagnostic]]:
    """Parse Turtle, returning the graph, its declared prefixes, and any
    warning diagnostics. Error diagnostics abort via TurtleParseError."""
    parser = _Parser(text)
    try:
        graph, pm = parser.parse()
    except _Abort as exc:
        raise TurtleParseError([exc.diag]) from None
    return graph, pm, parser.warnings


def parse_turtle(text: str) -> tuple[Graph, PrefixMap]:
    graph, pm, _ = parse_turtle_verbose(text)
    return graph, pm


# --- serializers -----------------------------------------------------------

_RE_SAFE_LOCAL = re.compile(rf"(?:[{_PN_U}0-9](?:[{_PN}]*[{_PN}])?)?")
_RE_SAFE_PREFIX = re.compile(rf"(?:[{_PN_BASE}](?:[{_PN}.]*[{_PN}])?)?")
_SHORTHAND = {
    XSD.integer: _RE_INTEGER,
    XSD.decimal: _RE_DECIMAL,
    XSD.double: _RE_DOUBLE,
    XSD.boolean: re.compile(r"true|false"),
}


def _escape_string(value: str) -> str:
    out = []
    for ch in value:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _nt_term(term: Term) -> str:
    if isinstance(term, Iri):
        return f"<{term.value}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    body = f'"{_escape_string(term.lexical)}"'
    if term.language:
        return f"{body}@{term.language}"
    if term.datatype != XSD.string:
        return f"{body}^^<{term.datatype.value}>"
    return body


def serialize_ntriples(graph: Graph) -> str:
    lines = [
        f"{_nt_term(t.subject)} {_nt_term(t.predicate)} {_nt_term(t.object)} ."
        for t in graph
    ]
    lines.sort(key=lambda line: line.encode("utf-8"))
    return "".join(line + "\n" for line in lines)


class _Compactor:
    """Shrinks IRIs, remembering which prefixes actually got used."""

    def __init__(self, prefixes: PrefixMap, require_safe_local: bool):
        self.prefixes = prefixes
        self.require_safe_local = require_safe_local
        self.used: set[str] = set()

    def compact(self, iri: Iri) -> str | None:
        name = shrink(iri, self.prefixes)
        if name.startswith("<"):
            return None
        label, _, local = name.partition(":")
        if self.require_safe_local and not (
            _RE_SAFE_LOCAL.fullmatch(local) and _RE_SAFE_PREFIX.fullmatch(label)
        ):
            return None
        self.used.add(label)
        return name


def _turtle_term(term: Term, compactor: _Compactor) -> str:
    if isinstance(term, Iri):
        name = compactor.compact(term)
        return name if name is not None else f"<{term.value}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    pattern = _SHORTHAND.get(term.datatype)
    if pattern and pattern.fullmatch(term.lexical) and term.language is None:
        return term.lexical
    body = f'"{_escape_string(term.lexical)}"'
    if term.language:
        return f"{body}@{term.language}"
    if term.datatype != XSD.string:
        return f"{body}^^{_turtle_term(term.datatype, compactor)}"
    return body


def serialize_turtle(graph: Graph, prefixes: PrefixMap | None = None) -> str:
    pm = prefixes if prefixes is not None else graph.prefixes
    compactor = _Compactor(pm, require_safe_local=True)
    by_subject: dict = {}
    for t in graph:
        by_subject.setdefault(t.subject, {}).setdefault(t.predicate, []).append(t.object)

    blocks: list[str] = []
    for subject in sorted(by_subject, key=term_sort_key):
        preds = by_subject[subject]
        lines: list[str] = []
        ordered = sorted(preds, key=lambda p: (p != RDF.type, term_sort_key(p)))
        for predicate in ordered:
            rendered_p = "a" if predicate == RDF.type else _turtle_term(predicate, compactor)
            objects = ", ".join(
                _turtle_term(o, compactor)
                for o in sorted(preds[predicate], key=term_sort_key)
            )
            lines.append(f"{rendered_p} {objects}")
        subject_str = _turtle_term(subject, compactor)
        body = " ;\n    ".join(lines)
        blocks.append(f"{subject_str} {body} .")

    header = [
        f"@prefix {label}: <{pm[label].value}> ."
        for label in sorted(compactor.used)
    ]
    parts = []
    if header:
        parts.append("\n".join(header))
    parts.extend(blocks)
    return "\n\n".join(parts) + ("\n" if parts else "")


def _jsonld_value(term: Term, compactor: _Compactor) -> object:
    if isinstance(term, Iri):
        name = compactor.compact(term)
        return {"@id": name if name is not None else term.value}
    if isinstance(term, BlankNode):
        return {"@id": f"_:{term.label}"}
    if term.language:
        return {"@value": term.lexical, "@language": term.language}
    if term.datatype != XSD.string:
        name = compactor.compact(term.datatype)
        return {"@value": term.lexical, "@type": name if name is not None else term.datatype.value}
    return term.lexical


def serialize_jsonld(graph: Graph, prefixes: PrefixMap | None = None) -> str:
    pm = prefixes if prefixes is not None else graph.prefixes
    compactor = _Compactor(pm, require_safe_local=False)

    def node_id(term: Term) -> str:
        if isinstance(term, BlankNode):
            return f"_:{term.label}"
        assert isinstance(term, Iri)
        name = compactor.compact(term)
        return name if name is not None else term.value

    by_subject: dict = {}
    for t in graph:
        by_subject.setdefault(t.subject, {}).setdefault(t.predicate, []).append(t.object)

    nodes = []
    for subject in sorted(by_subject, key=term_sort_key):
        node: dict[str, object] = {"@id": node_id(subject)}
        preds = by_subject[subject]
        for predicate in sorted(preds, key=term_sort_key):
            objects = sorted(preds[predicate], key=term_sort_key)
            if predicate == RDF.type:
                types = [node_id(o) for o in objects if isinstance(o, Iri)]
                node["@type"] = types[0] if len(types) == 1 else types
                continue
            key = compactor.compact(predicate)
            values = [_jsonld_value(o, compactor) for o in objects]
            node[key if key is not None else predicate.value] = (
                values[0] if len(values) == 1 else values
            )
        nodes.append(node)

    context = {label: pm[label].value for label in sorted(compactor.used)}
    doc = {"@context": context, "@graph": nodes}
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def serialize(graph: Graph, opts: SerializationOptions) -> str:
    if opts.format == "turtle":
        return serialize_turtle(graph, opts.prefixes)
    if opts.format == "ntriples":
        return serialize_ntriples(graph)
    if opts.format == "jsonld":
        return serialize_jsonld(graph, opts.prefixes)
    raise ValueError(f"unknown serialization format {opts.format!r}")
