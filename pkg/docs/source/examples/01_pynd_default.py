"""
01 - Decomposing a graph
========================

In this example we decompose a small rMAT graph with the default options.
"""

from pynd import ND
from pynd.graph import generate_rmat

g = generate_rmat(scale=8, edge_factor=16, seed=0)
print(g)

###############################################################################
# k-truss decomposition
# ---------------------
#
# The pair (2, 3) peels edges by their number of triangles. ``fit`` orients
# the graph and builds the table of its edges, ``extract`` runs the peeling.

res = ND(r=2, s=3).fit(g).extract()
print("rounds:", res.rho, "largest core:", res.max_core)
print(res.histogram())

###############################################################################
# Triangles in 4-cliques
# ----------------------
#
# The result maps clique indices to core numbers. ``cliques`` gives the
# vertices of every clique in the labels of the input graph.

res = ND(r=3, s=4).fit(g).extract()

for clique, core in sorted(res.cliques(), key=lambda item: -item[1])[:5]:
    print(clique, core)

print(res.core_of(clique))
