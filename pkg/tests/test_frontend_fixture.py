"""Keeps the frontend's committed expected-graph fixture in sync with the
package fixtures (regenerate it from procedure_subgraph if this fails)."""

from __future__ import annotations

from pathlib import Path

from pkforge.fixtures import loto_graph
from pkforge.mapper import procedure_subgraph
from pkforge.rdfio import serialize_ntriples

from conftest import LOTO_PROCEDURE

FIXTURE = Path(__file__).parent.parent / "frontend" / "test" / "fixtures" / "loto-procedure.nt"


def test_frontend_expected_graph_is_current():
    expected = serialize_ntriples(procedure_subgraph(loto_graph(), LOTO_PROCEDURE))
    assert FIXTURE.read_text(encoding="utf-8") == expected
