"""Serial brute-force references for small graphs."""
import typing as t
import itertools

from pynd import graph

DEFAULT_CAP = 40
"""Largest number of vertices accepted by the brute-force routines."""


class OracleResult:
    """Reference nucleus decomposition.

    Attributes
    ----------
    cores : :obj:`dict`
        Core number of every r-clique, keyed by its sorted vertices.

    rho : :obj:`int`
        Number of peeling rounds.

    s_clique_count : :obj:`int`
        Number of s-cliques of the graph.
    """

    def __init__(self, cores: t.Dict[t.Tuple[int, ...], int], rho: int,
                 s_clique_count: int) -> None:
        self.cores = cores
        self.rho = rho
        self.s_clique_count = s_clique_count

    def __repr__(self) -> str:
        return "OracleResult(cliques={0}, rho={1}, s_cliques={2})".format(
            len(self.cores), self.rho, self.s_clique_count)


def _check_cap(g: graph.UndirectedGraph, cap: int) -> None:
    if g.n > cap:
        raise ValueError("Brute-force enumeration refused for n={0} "
                         "(cap is {1}).".format(g.n, cap))


def _adjacency(g: graph.UndirectedGraph) -> t.List[t.Set[int]]:
    """Adjacency sets keeping only edges stored in both directions."""
    stored = [set(g.neighbors_of(v).tolist()) for v in range(g.n)]
    return [{u for u in nbrs if v in stored[u]}
            for v, nbrs in enumerate(stored)]


def brute_cliques(g: graph.UndirectedGraph,
                  c: int,
                  cap: int = DEFAULT_CAP) -> t.Set[t.Tuple[int, ...]]:
    """All c-cliques of ``g`` by checking every c-subset of vertices."""
    _check_cap(g, cap)

    if c < 1:
        raise ValueError('Invalid "c" argument ({0}). '
                         "Expecting an integer >= 1.".format(c))

    adj = _adjacency(g)

    return {
        subset
        for subset in itertools.combinations(range(g.n), c)
        if all(v in adj[u] for u, v in itertools.combinations(subset, 2))
    }


def oracle_nucleus(g: graph.UndirectedGraph,
                   r: int,
                   s: int,
                   cap: int = DEFAULT_CAP) -> OracleResult:
    """Peel one bucket at a time, recounting everything each round.

    An s-clique survives while all of its r-subsets survive. Every round
    removes the r-cliques whose count is at most the current level, so the
    rounds match the ones of :func:`pynd.peeling.nucleus_decomposition`.
    """
    _check_cap(g, cap)

    r_cliques = brute_cliques(g, r, cap)
    s_cliques = [
        tuple(itertools.combinations(clique, r))
        for clique in sorted(brute_cliques(g, s, cap))
    ]

    alive = set(r_cliques)
    cores = {}  # type: t.Dict[t.Tuple[int, ...], int]
    level = 0
    rho = 0

    while alive:
        counts = dict.fromkeys(alive, 0)

        for subsets in s_cliques:
            if all(sub in alive for sub in subsets):
                for sub in subsets:
                    counts[sub] += 1

        low = min(counts.values())
        level = max(level, low)
        rho += 1

        for clique, count in counts.items():
            if count <= level:
                cores[clique] = level
                alive.discard(clique)

    return OracleResult(cores, rho, len(s_cliques))


def kcore_numbers(g: graph.UndirectedGraph) -> t.Dict[int, int]:
    """Core number of every vertex by repeated minimum-degree removal."""
    adj = _adjacency(g)
    degree = {v: len(nbrs) for v, nbrs in enumerate(adj)}
    cores = {}  # type: t.Dict[int, int]
    level = 0

    while degree:
        v = min(degree, key=lambda u: (degree[u], u))
        level = max(level, degree[v])
        cores[v] = level
        del degree[v]

        for u in adj[v]:
            if u in degree:
                degree[u] -= 1

    return cores
