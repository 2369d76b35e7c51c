"""Isolating a shortest cycle with threshold-2 quantifiers.

On a bipartite template whose shortest cycle has length six, a threshold-2
spine of diameter length plus one candidate chain per window forces at
least one candidate block onto a genuine 6-cycle in some play of every
winning strategy.  The 18-vertex hairy template (a 6-cycle with two
pendant leaves per vertex) is the example where waiting for a later window
is unavoidable.
"""

from cqcsp import (
    build_template,
    evaluate,
    extract_strategy,
    hairy_cycle,
    isolation_spine,
)
from cqcsp.model import require_graph
from cqcsp.reductions import isolation_blocks

hairy = build_template(hairy_cycle(6))
spine = isolation_spine(hairy)
blocks = isolation_blocks(hairy)
print(f"hairy template: {hairy.domain_size} vertices")
print(f"spine sentence: {len(spine.prefix)} variables,"
      f" {sum(1 for q in spine.prefix if q.threshold == 2)} at threshold 2")
print("candidate blocks:")
for cyc in blocks:
    print("  " + " - ".join(cyc))

print("\nspine satisfiable:", evaluate(hairy, spine))
strategy = extract_strategy(hairy, spine)

g = require_graph(hairy)
index = spine.var_index()


def faithful(vals, cyc):
    vv = [vals[index[u]] for u in cyc]
    return len(set(vv)) == len(vv) and all(
        vv[(t + 1) % len(vv)] in g.adj[vv[t]] for t in range(len(vv))
    )


leaves = []


def walk(node, depth, assign):
    if depth == len(spine.prefix):
        leaves.append(list(assign))
        return
    for v, child in zip(node.offer, node.children):
        assign.append(v)
        walk(child, depth + 1, assign)
        assign.pop()


walk(strategy, 0, [])
hits = [vals for vals in leaves if any(faithful(vals, c) for c in blocks)]
print(f"plays in the extracted strategy: {len(leaves)}")
print(f"plays mapping a candidate block onto a true 6-cycle: {len(hits)}")
example = hits[0]
for b, cyc in enumerate(blocks, start=1):
    if faithful(example, cyc):
        image = [example[index[u]] for u in cyc]
        print(f"example: block {b} lands on cycle {image}")
        break
