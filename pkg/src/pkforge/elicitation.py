"""Elicitation documents: the JSON wire format the authoring form speaks.

A document mirrors the typed model (procedure, nested steps, satellites such
as actions and padlocks). Entities can be given as bare IRI strings or as
objects with optional id / label / description / type; ids are minted
deterministically from the procedure IRI when absent, so resubmitting an
unchanged document produces the identical graph.
"""

from __future__ import annotations

import json
import os
import re
import uuid
from importlib import resources
from typing import Any

import jsonschema

from .mapper import lower_procedure
from .model import ErrorDef, Procedure, Step
from .store import Graph, Literal, Triple
from .vocab import (
    DCAT,
    DCT,
    Iri,
    M4ING,
    PKO,
    PKO_IND,
    PROV,
    RDF,
    UnknownPrefix,
    default_prefixes,
    expand,
    shrink,
)


class ElicitationError(ValueError):
    """The document violates the schema or references unknown names."""

    def __init__(self, messages: list[str]):
        self.messages = messages
        super().__init__("; ".join(messages))


_SCHEMA: dict | None = None


def schema() -> dict:
    global _SCHEMA
    if _SCHEMA is None:
        text = resources.files("pkforge.data").joinpath("elicitation.schema.json").read_text("utf-8")
        _SCHEMA = json.loads(text)
    return _SCHEMA


def check_document(doc: Any) -> None:
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        raise ElicitationError(
            [f"{'/'.join(str(p) for p in e.absolute_path) or '<root>'}: {e.message}" for e in errors]
        )


def default_base() -> str:
    return os.environ.get("PKF_BASE", "http://example.org/").rstrip("/") + "/"


def _slug(text: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-")
    return slug or "item"


def _resolve_iri(value: str) -> Iri:
    if "://" in value or value.startswith("urn:"):
        return Iri(value)
    try:
        return expand(value, default_prefixes())
    except (UnknownPrefix, ValueError):
        raise ElicitationError([f"cannot resolve {value!r} as an IRI or CURIE"]) from None


def _resolve_status(value: str) -> Iri:
    if ":" in value:
        return _resolve_iri(value)
    return PKO.term(value)


class _GraphBuilder:
    def __init__(self, procedure_id: Iri):
        self.procedure_id = procedure_id
        self.satellites: list[Triple] = []

    def entity(self, value: Any, kind: str, default_type: Iri | None) -> Iri:
        """Resolve an entity reference, minting + describing it if needed."""
        if isinstance(value, str):
            return _resolve_iri(value)
        eid = value.get("id")
        label = value.get("label")
        if eid is None:
            if not label:
                raise ElicitationError([f"{kind} entity needs an id or a label"])
            eid = f"{self.procedure_id.value}/{kind}/{_slug(label)}"
        node = _resolve_iri(eid)
        etype = default_type
        if value.get("type"):
            etype = _resolve_iri(value["type"])
        if etype is not None:
            self.satellites.append(Triple(node, RDF.type, etype))
        if label:
            self.satellites.append(Triple(node, DCT.title, Literal(label)))
        if value.get("description"):
            self.satellites.append(Triple(node, DCT.description, Literal(value["description"])))
        return node

    def entities(self, values: list | None, kind: str, default_type: Iri | None) -> tuple[Iri, ...]:
        return tuple(self.entity(v, kind, default_type) for v in (values or ()))

    def target(self, value: Any) -> Iri | None:
        if value is None:
            return None
        if isinstance(value, str):
            return _resolve_iri(value)
        machine_fields = any(k in value for k in ("machine_type", "location", "manufacturer"))
        default_type = PKO_IND.Machine if machine_fields else None
        node = self.entity(
            {k: value.get(k) for k in ("id", "label", "description", "type") if value.get(k)},
            "target",
            default_type,
        )
        if value.get("machine_type"):
            self.satellites.append(
                Triple(node, PKO_IND.hasMachineType, self.entity(value["machine_type"], "machine-type", PKO_IND.MachineType))
            )
        if value.get("location"):
            self.satellites.append(
                Triple(node, PKO_IND.hasLocation, self.entity(value["location"], "location", PKO_IND.Location))
            )
        if value.get("manufacturer"):
            self.satellites.append(
                Triple(node, PKO_IND.wasManufacturedBy, self.entity(value["manufacturer"], "manufacturer", PROV.Organization))
            )
        return node


def _build_steps(
    builder: _GraphBuilder,
    docs: list[dict],
    parent_path: str,
) -> tuple[tuple[Iri, ...], list[Step], list[ErrorDef]]:
    ids: list[Iri] = []
    steps: list[Step] = []
    errors: list[ErrorDef] = []
    for position, doc in enumerate(docs, start=1):
        path = f"{parent_path}{position}" if not parent_path else f"{parent_path}.{position}"
        sid = _resolve_iri(doc.get("id") or f"{builder.procedure_id.value}/Step/{path}")
        ids.append(sid)
        kind = doc["kind"]
        substep_ids: tuple[Iri, ...] = ()
        if kind == "multistep":
            subdocs = doc.get("substeps") or []
            if not subdocs:
                raise ElicitationError([f"step {path}: multistep needs substeps"])
            substep_ids, substeps, suberrors = _build_steps(builder, subdocs, path)
            steps_to_add = substeps
            errors.extend(suberrors)
        else:
            if doc.get("substeps"):
                raise ElicitationError([f"step {path}: atomic step cannot have substeps"])
            steps_to_add = []
        duration = doc.get("expected_duration_s")
        duration_node = None
        if doc.get("duration_id"):
            duration_node = _resolve_iri(doc["duration_id"])
        step = Step(
            id=sid,
            label=doc["label"],
            kind=kind,
            description=doc.get("description"),
            substeps=substep_ids,
            actions=builder.entities(doc.get("actions"), "action", PKO.Action),
            functions=builder.entities(doc.get("functions"), "function", PKO.Function),
            tools=builder.entities(doc.get("tools"), "tool", M4ING.Tool),
            verification=(
                builder.entity(doc["verification"], "verification", PKO.StepVerification)
                if doc.get("verification")
                else None
            ),
            expertise_level=(
                builder.entity(doc["expertise_level"], "level", PKO.ExpertiseLevel)
                if doc.get("expertise_level")
                else None
            ),
            expected_duration_s=duration,
            duration_node=duration_node,
            ppe=builder.entities(doc.get("ppe"), "ppe", PKO_IND.PersonalProtectiveEquipment),
            padlocks=builder.entities(doc.get("padlocks"), "padlock", PKO_IND.Padlock),
            energy_sources=builder.entities(
                doc.get("energy_sources"), "energy", PKO_IND.EnergySource
            ),
        )
        steps.append(step)
        steps.extend(steps_to_add)
        for edoc in doc.get("errors") or ():
            eid = edoc.get("id") or f"{builder.procedure_id.value}/error/{len(errors) + 1}"
            error = ErrorDef(
                id=_resolve_iri(eid),
                error_code=edoc.get("error_code"),
                fallback_step=_resolve_iri(edoc["fallback_step"]) if edoc.get("fallback_step") else None,
            )
            errors.append(error)
            builder.satellites.append(Triple(sid, PKO.mayRaise, error.id))
    return tuple(ids), steps, errors


def procedure_from_document(doc: Any) -> tuple[Iri, Graph]:
    """Validate an elicitation document and lower it to its graph."""
    check_document(doc)
    body = doc["procedure"]
    pid = _resolve_iri(body.get("id") or f"{default_base()}procedure/{uuid.uuid4()}")
    builder = _GraphBuilder(pid)
    step_ids, steps, errors = _build_steps(builder, body["steps"], "")
    procedure = Procedure(
        id=pid,
        title=body["title"],
        status=_resolve_status(body["status"]),
        description=body.get("description"),
        procedure_type=(
            builder.entity(body["type"], "type", PKO.ProcedureType) if body.get("type") else None
        ),
        target=builder.target(body.get("target")),
        steps=step_ids,
        version_of=_resolve_iri(body["version_of"]) if body.get("version_of") else None,
        next_version=_resolve_iri(body["next_version"]) if body.get("next_version") else None,
        previous_version=(
            _resolve_iri(body["previous_version"]) if body.get("previous_version") else None
        ),
        adopted_by=(
            builder.entity(body["adopted_by"], "organization", PROV.Organization)
            if body.get("adopted_by")
            else None
        ),
        references=builder.entities(body.get("references"), "resource", DCAT.Resource),
        extracted_from=(
            builder.entity(body["extracted_from"], "resource", DCAT.Resource)
            if body.get("extracted_from")
            else None
        ),
    )
    graph = lower_procedure(procedure, steps, errors, tuple(builder.satellites))
    return pid, graph


def _entity_document(graph: Graph, node: Iri, default_type: Iri | None) -> Any:
    doc: dict[str, Any] = {"id": node.value}
    title = graph.value(node, DCT.title)
    if isinstance(title, Literal):
        doc["label"] = title.lexical
    description = graph.value(node, DCT.description)
    if isinstance(description, Literal):
        doc["description"] = description.lexical
    types = [t for t in graph.objects(node, RDF.type) if isinstance(t, Iri)]
    reported = [t for t in types if t != default_type]
    if reported and default_type is not None:
        doc["type"] = shrink(reported[0], default_prefixes())
    if len(doc) == 1:
        return node.value
    return doc


def document_from_graph(graph: Graph, pid: Iri) -> dict:
    """Rebuild the elicitation view of a stored procedure (best effort:
    unknown extra triples stay in the graph, not in the document)."""
    from .mapper import lift_procedure

    bundle = lift_procedure(graph, pid)
    procedure = bundle.procedure
    steps_by_id = {s.id: s for s in bundle.steps}
    errors_by_step: dict[Iri, list[ErrorDef]] = {}
    for error in bundle.errors:
        for t in graph.match(None, PKO.mayRaise, error.id):
            if isinstance(t.subject, Iri):
                errors_by_step.setdefault(t.subject, []).append(error)

    def step_doc(sid: Iri) -> dict:
        step = steps_by_id[sid]
        doc: dict[str, Any] = {"id": sid.value, "label": step.label, "kind": step.kind}
        if step.description:
            doc["description"] = step.description
        if step.kind == "multistep":
            doc["substeps"] = [step_doc(sub) for sub in step.substeps]
        if step.actions:
            doc["actions"] = [_entity_document(graph, a, PKO.Action) for a in step.actions]
        if step.functions:
            doc["functions"] = [_entity_document(graph, f, PKO.Function) for f in step.functions]
        if step.tools:
            doc["tools"] = [_entity_document(graph, t, M4ING.Tool) for t in step.tools]
        if step.verification:
            doc["verification"] = _entity_document(graph, step.verification, PKO.StepVerification)
        if step.expertise_level:
            doc["expertise_level"] = _entity_document(graph, step.expertise_level, PKO.ExpertiseLevel)
        if step.expected_duration_s is not None:
            doc["expected_duration_s"] = step.expected_duration_s
            if step.duration_node:
                doc["duration_id"] = step.duration_node.value
        if step.ppe:
            doc["ppe"] = [
                _entity_document(graph, p, PKO_IND.PersonalProtectiveEquipment) for p in step.ppe
            ]
        if step.padlocks:
            doc["padlocks"] = [_entity_document(graph, p, PKO_IND.Padlock) for p in step.padlocks]
        if step.energy_sources:
            doc["energy_sources"] = [
                _entity_document(graph, e, PKO_IND.EnergySource) for e in step.energy_sources
            ]
        if sid in errors_by_step:
            doc["errors"] = [
                {
                    "id": e.id.value,
                    **({"error_code": e.error_code} if e.error_code else {}),
                    **({"fallback_step": e.fallback_step.value} if e.fallback_step else {}),
                }
                for e in errors_by_step[sid]
            ]
        return doc

    body: dict[str, Any] = {
        "id": procedure.id.value,
        "title": procedure.title,
        "status": shrink(procedure.status, default_prefixes()),
        "steps": [step_doc(sid) for sid in procedure.steps],
    }
    if procedure.description:
        body["description"] = procedure.description
    if procedure.procedure_type:
        body["type"] = _entity_document(graph, procedure.procedure_type, PKO.ProcedureType)
    if procedure.target:
        target_doc = _entity_document(graph, procedure.target, PKO_IND.Machine)
        if isinstance(target_doc, str):
            target_doc = {"id": target_doc}
        machine_type = graph.value(procedure.target, PKO_IND.hasMachineType)
        location = graph.value(procedure.target, PKO_IND.hasLocation)
        manufacturer = graph.value(procedure.target, PKO_IND.wasManufacturedBy)
        if isinstance(machine_type, Iri):
            target_doc["machine_type"] = _entity_document(graph, machine_type, PKO_IND.MachineType)
        if isinstance(location, Iri):
            target_doc["location"] = _entity_document(graph, location, PKO_IND.Location)
        if isinstance(manufacturer, Iri):
            target_doc["manufacturer"] = _entity_document(graph, manufacturer, PROV.Organization)
        if list(target_doc) == ["id"]:
            body["target"] = target_doc["id"]
        else:
            body["target"] = target_doc
    if procedure.adopted_by:
        body["adopted_by"] = _entity_document(graph, procedure.adopted_by, PROV.Organization)
    if procedure.references:
        body["references"] = [
            _entity_document(graph, r, DCAT.Resource) for r in procedure.references
        ]
    if procedure.extracted_from:
        body["extracted_from"] = _entity_document(graph, procedure.extracted_from, DCAT.Resource)
    if procedure.version_of:
        body["version_of"] = procedure.version_of.value
    if procedure.previous_version:
        body["previous_version"] = procedure.previous_version.value
    if procedure.next_version:
        body["next_version"] = procedure.next_version.value
    return {"procedure": body}
