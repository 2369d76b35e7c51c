"""Counting quantifiers from the ground up.

A sentence E2 x E2 y | E(x,y) asks for at least two values of x such that,
for each of them, at least two values of y satisfy the matrix.  This script
walks through evaluation, the two-player witness game, and strategy
extraction on small graphs.
"""

from cqcsp import (
    build_template,
    canonical_query,
    clique,
    cycle,
    evaluate,
    extract_strategy,
    parse_sentence,
    render_strategy,
    verify_strategy,
)

k2 = build_template(clique(2))
k3 = build_template(clique(3))
c4 = build_template(cycle(4))

# The canonical query of the 3-clique lists its six directed edges and asks
# for a homomorphic image: the identity map makes it true.
phi = canonical_query(k3)
print("canonical 3-clique query:", phi)
print("  on the 3-clique:", evaluate(k3, phi))

# Counting thresholds are strictly stronger than bare existence.
s = parse_sentence("E2 x E2 y | E(x,y)")
print("\nE2 x E2 y | E(x,y)")
print("  on the 2-clique:", evaluate(k2, s), " (each vertex has 1 neighbour)")
print("  on the 3-clique:", evaluate(k3, s), " (each vertex has 2 neighbours)")

# Counting quantifiers do not commute with themselves: swapping two
# adjacent quantifiers can change the verdict.
a = parse_sentence("E2 x E3 y | E(x,y)")
b = parse_sentence("E3 y E2 x | E(x,y)")
print("\nnon-commutativity on the 3-clique:")
print("  E2 x E3 y | E(x,y):", evaluate(k3, a))
print("  E3 y E2 x | E(x,y):", evaluate(k3, b))

# A winning strategy offers a witness set at each quantifier; an adversary
# picks one element of each offer.  Extraction returns the canonical tree
# (smallest winning elements first); verification replays every play.
w = extract_strategy(c4, s)
print("\nwitness strategy for E2 x E2 y | E(x,y) on the 4-cycle:")
print(render_strategy(w))
print("verified:", verify_strategy(c4, s, w))

# Any valid tree is accepted, e.g. offering the two colour classes.
from cqcsp import StrategyNode

leaf = StrategyNode()
alternating = StrategyNode(
    (0, 2),
    (StrategyNode((1, 3), (leaf, leaf)), StrategyNode((1, 3), (leaf, leaf))),
)
print("colour-class strategy verified:", verify_strategy(c4, s, alternating))
