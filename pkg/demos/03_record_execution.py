"""Replay the worked execution: John Doe locks the electrical energy point,
takes a minute longer than expected, and asks about the padlock key."""

from datetime import datetime, timezone

from pkforge import loto_graph
from pkforge.cq import run_by_id
from pkforge.mapper import lower_execution
from pkforge.session import overrun_report, start_execution
from pkforge.vocab import Iri, PKO


def at(h, m, s=0):
    return datetime(2024, 10, 11, h, m, s, tzinfo=timezone.utc)


g = loto_graph()
procedure = Iri("http://example.org/LOTO-condenser-MSK")
step4 = Iri("http://example.org/LOTO-condenser-MSK/Step/4")
agent = Iri("http://example.org/JohnDoe")

session = start_execution(g, procedure, agent, at(12, 20))
session.start_step(step4, at(12, 33))
session.end_step(step4, at(12, 36))
session.ask_question("Where should I keep the key of the padlock?", at(12, 36, 30))
trace = session.finish(PKO.completed, at(12, 50))
print(f"finished execution {trace.id.value}\n")

print("overrun report:")
for row in overrun_report(trace, g).rows:
    print(f"  {row.step.value}")
    print(f"    expected {row.expected_s:g} s, actual {row.actual_s:g} s, delta {row.delta_s:+g} s")

g.update(lower_execution(trace))
table = run_by_id(g, "CQ09", {"execution": trace.id})
print("\nquestions asked during this execution:")
for text, who in table.rows:
    print(f"  {who.value}: {text.lexical!r}")
