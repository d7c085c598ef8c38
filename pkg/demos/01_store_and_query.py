"""Load the lockout/tagout example, poke at the triple store, and answer
the catalog's competency questions against it."""

from pkforge import loto_graph
from pkforge.cq import catalog, run
from pkforge.vocab import Iri, PKO, shrink

g = loto_graph()
print(f"LOTO graph: {len(g)} triples\n")

procedure = Iri("http://example.org/LOTO-condenser-MSK")
step4 = Iri("http://example.org/LOTO-condenser-MSK/Step/4")
execution = Iri("http://example.org/LOTO-condenser-MSK/execution/2024-10-11-jdoe")

print("Steps of the procedure (raw match):")
for t in g.match(procedure, PKO.hasStep, None):
    print("  ", t.object.value)

bindings = {"procedure": procedure, "step": step4, "execution": execution}
print("\nCompetency questions:")
for q in catalog():
    given = {p: bindings[p] for p in q.parameters}
    table = run(g, q, given)
    print(f"\n{q.id}: {q.question}")
    for row in table.rows:
        cells = [shrink(c, g.prefixes) if isinstance(c, Iri) else c.lexical for c in row]
        print("   ", " | ".join(cells))
