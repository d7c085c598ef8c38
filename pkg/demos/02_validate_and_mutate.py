"""Run the shape rules over the clean fixture, then break it on purpose and
watch the right rule light up."""

from pkforge import loto_graph
from pkforge.store import Triple
from pkforge.validation import builtin_rules, validate
from pkforge.vocab import Iri, PKO

g = loto_graph()
print(f"{len(builtin_rules())} built-in rules\n")

report = validate(g)
print(f"clean fixture conforms: {report.conforms} ({len(report.findings)} findings)")

step4 = Iri("http://example.org/LOTO-condenser-MSK/Step/4")
g.discard(Triple(step4, PKO.nextStep, Iri("http://example.org/LOTO-condenser-MSK/Step/5")))
g.add(Triple(step4, PKO.nextStep, step4))
print("\nredirecting Step/4's nextStep to itself...\n")

print(validate(g).to_text())
