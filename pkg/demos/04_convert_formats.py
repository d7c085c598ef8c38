"""One graph, three serializations: Turtle, canonical N-Triples, JSON-LD."""

from pkforge import recipe_graph
from pkforge.rdfio import parse_turtle, serialize_jsonld, serialize_ntriples, serialize_turtle
from pkforge.store import isomorphic

g = recipe_graph()

turtle = serialize_turtle(g)
print("--- Turtle (first 12 lines) ---")
print("\n".join(turtle.splitlines()[:12]))

ntriples = serialize_ntriples(g)
print("\n--- canonical N-Triples (first 4 lines) ---")
print("\n".join(ntriples.splitlines()[:4]))

jsonld = serialize_jsonld(g)
print("\n--- JSON-LD (first 12 lines) ---")
print("\n".join(jsonld.splitlines()[:12]))

round_tripped, _ = parse_turtle(turtle)
print(f"\nturtle round trip isomorphic: {isomorphic(g, round_tripped)}")
print(f"determinism: {serialize_turtle(g) == turtle}")
