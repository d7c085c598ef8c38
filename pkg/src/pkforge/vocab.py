"""IRIs, namespace prefixes, and the controlled vocabularies used across the toolkit.

Every ontology symbol the toolkit emits or recognizes lives in the packaged
``data/terms.catalog`` file; this module loads it and exposes the namespaces
as attribute-style helpers (``PKO.hasStep`` etc.).
"""

from __future__ import annotations

import os
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources


class UnknownPrefix(KeyError):
    """A prefixed name uses a label that the prefix map does not bind."""


@dataclass(frozen=True)
class Iri:
    """An absolute IRI. Equality is plain string equality, no normalization."""

    value: str

    def __post_init__(self) -> None:
        if not self.value:
            raise ValueError("IRI must be non-empty")
        if "://" not in self.value and not self.value.startswith("urn:"):
            raise ValueError(f"not an absolute IRI or URN: {self.value!r}")

    def __str__(self) -> str:
        return self.value


class Namespace:
    """Attribute access mints terms: ``PKO.hasStep`` -> Iri(...#hasStep)."""

    def __init__(self, base: str):
        self.base = base

    def term(self, local: str) -> Iri:
        return Iri(self.base + local)

    def __getattr__(self, local: str) -> Iri:
        if local.startswith("_"):
            raise AttributeError(local)
        return self.term(local)

    def __contains__(self, iri: object) -> bool:
        return isinstance(iri, Iri) and iri.value.startswith(self.base)


PKO = Namespace("https://w3id.org/pko#")
PKO_IND = Namespace("https://w3id.org/pko/ind#")
PPLAN = Namespace("http://purl.org/net/p-plan#")
PROV = Namespace("http://www.w3.org/ns/prov#")
DCAT = Namespace("http://www.w3.org/ns/dcat#")
DCT = Namespace("http://purl.org/dc/terms/")
TIME = Namespace("http://www.w3.org/2006/time#")
ADMS = Namespace("http://www.w3.org/ns/adms#")
M4ING = Namespace("http://w3id.org/nfdi4ing/metadata4ing#")
PRO = Namespace("http://purl.org/spar/pro/")
RDF = Namespace("http://www.w3.org/1999/02/22-rdf-syntax-ns#")
RDFS = Namespace("http://www.w3.org/2000/01/rdf-schema#")
XSD = Namespace("http://www.w3.org/2001/XMLSchema#")


class PrefixMap(Mapping[str, Iri]):
    """Immutable prefix-label -> namespace map. Labels are unique; '' is legal."""

    def __init__(self, entries: Mapping[str, Iri] | Iterable[tuple[str, Iri]] = ()):
        pairs = list(entries.items()) if isinstance(entries, Mapping) else list(entries)
        seen: dict[str, Iri] = {}
        for label, ns in pairs:
            if label in seen and seen[label] != ns:
                raise ValueError(f"prefix {label!r} bound twice")
            seen[label] = ns
        self._entries = seen

    def __getitem__(self, label: str) -> Iri:
        return self._entries[label]

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def with_binding(self, label: str, namespace: Iri) -> "PrefixMap":
        merged = dict(self._entries)
        merged[label] = namespace
        return PrefixMap(merged)

    def merged_over(self, base: "PrefixMap") -> "PrefixMap":
        merged = dict(base._entries)
        merged.update(self._entries)
        return PrefixMap(merged)

    def __repr__(self) -> str:
        return f"PrefixMap({self._entries!r})"


def default_prefixes(overrides: Mapping[str, str] | None = None) -> PrefixMap:
    """The shipped prefix bindings.

    The pko / pko-ind namespaces can be overridden (the published ontology may
    use a different IRI scheme) via the ``overrides`` argument or the
    PKF_NS_PKO / PKF_NS_PKO_IND environment variables.
    """
    pko = PKO.base
    pko_ind = PKO_IND.base
    if overrides:
        pko = overrides.get("pko", pko)
        pko_ind = overrides.get("pko-ind", pko_ind)
    pko = os.environ.get("PKF_NS_PKO", pko)
    pko_ind = os.environ.get("PKF_NS_PKO_IND", pko_ind)
    return PrefixMap(
        {
            "pko": Iri(pko),
            "pko-ind": Iri(pko_ind),
            "pplan": Iri(PPLAN.base),
            "prov": Iri(PROV.base),
            "dcat": Iri(DCAT.base),
            "dct": Iri(DCT.base),
            "time": Iri(TIME.base),
            "adms": Iri(ADMS.base),
            "m4ing": Iri(M4ING.base),
            "pro": Iri(PRO.base),
            "rdf": Iri(RDF.base),
            "rdfs": Iri(RDFS.base),
            "xsd": Iri(XSD.base),
        }
    )


def expand(name: str, prefixes: PrefixMap) -> Iri:
    """Expand a prefixed name (``pko:Procedure``) to its IRI.

    Splits on the first colon; the local part may itself contain colons.
    Raises UnknownPrefix when the label has no binding.
    """
    label, _, local = name.partition(":")
    if label not in prefixes:
        raise UnknownPrefix(label)
    return Iri(prefixes[label].value + local)


def shrink(iri: Iri, prefixes: PrefixMap) -> str:
    """Compact an IRI to ``label:local`` under the longest matching namespace.

    Falls back to the ``<iri>`` angle-bracket form when nothing matches.
    """
    best: tuple[str, Iri] | None = None
    for label, ns in prefixes.items():
        if iri.value.startswith(ns.value):
            if best is None or len(ns.value) > len(best[1].value):
                best = (label, ns)
    if best is None:
        return f"<{iri.value}>"
    label, ns = best
    return f"{label}:{iri.value[len(ns.value):]}"


@dataclass(frozen=True)
class VocabTerm:
    curie: str
    iri: Iri
    kind: str  # class | object-property | datatype-property | individual
    flag: str  # paper | provisional | standard | extension
    vocab: str | None = None  # controlled vocabulary this individual belongs to


@dataclass(frozen=True)
class ControlledVocab:
    name: str
    members: tuple[Iri, ...]

    def __contains__(self, iri: object) -> bool:
        return iri in self.members


@lru_cache(maxsize=None)
def term_table(prefixes: PrefixMap | None = None) -> tuple[VocabTerm, ...]:
    """Load the canonical term catalog shipped with the package."""
    pm = prefixes or default_prefixes()
    text = resources.files("pkforge.data").joinpath("terms.catalog").read_text("utf-8")
    terms: list[VocabTerm] = []
    seen: set[str] = set()
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("version"):
            continue
        cols = line.split("\t")
        curie, kind, flag = cols[0], cols[1], cols[2]
        vocab = cols[3] if len(cols) > 3 else None
        if curie in seen:
            raise ValueError(f"duplicate catalog term {curie}")
        seen.add(curie)
        terms.append(VocabTerm(curie, expand(curie, pm), kind, flag, vocab))
    return tuple(terms)


def terms_by_curie() -> Mapping[str, VocabTerm]:
    return {t.curie: t for t in term_table()}


def _vocab(name: str) -> ControlledVocab:
    members = tuple(t.iri for t in term_table() if t.vocab == name)
    return ControlledVocab(name, members)


def procedure_statuses() -> ControlledVocab:
    return _vocab("ProcedureStatus")


def execution_statuses() -> ControlledVocab:
    return _vocab("ExecutionStatus")
