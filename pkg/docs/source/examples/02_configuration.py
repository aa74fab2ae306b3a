"""
02 - Tuning the decomposition
=============================

In this example we explore the clique table, aggregation and bucketing
options. Every configuration gives the same core numbers.
"""

from pynd import ND
from pynd.graph import generate_rmat

g = generate_rmat(scale=9, edge_factor=16, seed=3)

###############################################################################
# Clique table levels
# -------------------
#
# A one-level table keys every triangle by its three vertices. With two
# levels the first vertex is stored once, in a top-level array, and the
# last-level tables only keep the remaining two vertices.

for levels in (1, 2, 3):
    model = ND(r=3, s=4, levels=levels).fit(g)
    print(levels, model.extract().table.memory_report())

###############################################################################
# Aggregation and bucketing
# -------------------------
#
# The set of cliques updated in a round is collected by a flag array, a list
# buffer or a hash set. Buckets are either an open window over the lowest
# values or one bucket per value.

for aggregation in ND.valid_aggregation():
    for bucket in ND.valid_bucket():
        res = ND(r=3, s=4, aggregation=aggregation,
                 bucket=bucket).fit(g).extract()
        print(aggregation, bucket, res.rho, res.timings["peel"])

###############################################################################
# Graph contraction
# -----------------
#
# While peeling edges, adjacency lists which lost many neighbors are rebuilt
# without the peeled edges.

res = ND(r=2, s=3, contract=True,
         contract_edge_factor=0.5).fit(g).extract(instrument=True)
print("contractions:", res.trace.contractions)
