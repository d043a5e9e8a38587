"""
A small K_4-free graph with few independent vertices
====================================================

Build the r = s = 2 instance on the 3-sphere, check that it has no K_4,
and compare its edge count against the cap prediction.
"""

from ramsey_turan import ConstructionParams, assemble_construction, density_report
from ramsey_turan.verification import alpha_r_bounds, verify_freeness

params = ConstructionParams(r=2, s=2, z=40, k=3, epsilon=0.4, t=4, seed=1)
out = assemble_construction(params)
g = out.graph
print("N =", g.n, " edges =", g.num_edges, " ledger:", out.edge_counts)
print("base hypergraph:", out.base.num_edges, "edges; blown up:", out.blown.num_edges)

# clique numbers: at most r inside each side, at most r + s - 1 overall
for line in verify_freeness(out, 2, 2).lines():
    print(line)

# a greedy + local search lower bound on the independence number
rep = alpha_r_bounds(g, 2, seed=0)
print("independent set found:", rep.lower, "of", g.n)

# cross edges should match c^l / 4 exactly, where c is the cap fraction of P
d = density_report(out)
print("density %.4f  target %s  cap fraction %.4f  cross %.5f vs %.5f" % (
    d["density"], d["target_exact"], d["cap_fraction"], d["cross_density"], d["predicted_cross_density"]))
