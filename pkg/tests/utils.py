""" Utils Module.

    Useful functions to help in the tests.
"""
import itertools

import networkx as nx
import numpy as np

from pynd import graph

# Seven vertices a..g: K5 on a..e, f joined to a, b, e and g to c, d.
EXAMPLE_LABELS = "abcdefg"

EXAMPLE_EDGES = [
    (u, v) for u, v in itertools.combinations(range(5), 2)
] + [(0, 5), (1, 5), (4, 5), (2, 6), (3, 6)]

GRAPHS_ = {}


def _build(name):
    if name == "example":
        src, dst = zip(*EXAMPLE_EDGES)
        return graph.UndirectedGraph.from_edges(src, dst, n=7)

    if name.startswith("K"):
        n = int(name[1:])
        src, dst = np.triu_indices(n, k=1)
        return graph.UndirectedGraph.from_edges(src, dst, n=n)

    if name.startswith("path"):
        n = int(name[4:])
        return graph.UndirectedGraph.from_edges(range(n - 1), range(1, n),
                                                n=n)

    if name == "bipartite":
        nx_graph = nx.complete_bipartite_graph(4, 5)
        src, dst = zip(*nx_graph.edges())
        return graph.UndirectedGraph.from_edges(src, dst, n=9)

    if name == "empty":
        return graph.UndirectedGraph.from_edges([], [], n=0)

    raise KeyError(name)


def load_graph(name):
    """Returns a named test graph, built once."""
    if name not in GRAPHS_:
        GRAPHS_[name] = _build(name)

    return GRAPHS_[name]


def example_clique(labels):
    """Sorted vertex ids of a clique written in letters, e.g. ``"bef"``."""
    return tuple(sorted(EXAMPLE_LABELS.index(label) for label in labels))


def random_graph(n, p, seed):
    return graph.generate_gnp(n, p, seed=seed)


def to_networkx(g):
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(g.n))
    src, dst = g.edges()
    nx_graph.add_edges_from(zip(src.tolist(), dst.tolist()))
    return nx_graph
