"""
03 - Summarizing core numbers
=============================

In this example we summarize the distribution of core numbers and compare
the decomposition with the brute-force reference.
"""

import pandas as pd

from pynd import ND
from pynd import oracle
from pynd._summary import summarize_cores
from pynd.graph import generate_gnp

g = generate_gnp(30, 0.4, seed=1)
res = ND(r=2, s=4).fit(g).extract()

###############################################################################
# Summaries
# ---------
#
# Several summaries of the core numbers are available. The report of the
# ``pynd decompose`` command uses the default ones.

print(summarize_cores(res.core))
print(summarize_cores(res.core, summary=["median", "iq_range", "skewness"]))

frame = pd.DataFrame(list(res.cliques()), columns=["clique", "core"])
print(frame.groupby("core").size())

###############################################################################
# Brute-force reference
# ---------------------
#
# On small graphs, every s-clique can be enumerated directly and the
# decomposition recomputed one clique at a time.

expected = oracle.oracle_nucleus(g, 2, 4)
print(expected.cores == res.as_dict())
