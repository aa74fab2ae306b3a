"""Graph ingestion, synthetic generation and orientation.

Graphs are stored in CSR form: ``offsets`` has ``n + 1`` entries and the
adjacency list of vertex ``v`` is ``neighbors[offsets[v]:offsets[v + 1]]``,
sorted and duplicate-free. Every finished graph is immutable, so it can be
shared between worker threads without locking.
"""
import typing as t
import heapq

import numpy as np
import pandas as pd
import scipy.sparse

CACHE_MAGIC = b"NUCGRAPH1\n"
"""Header of the binary graph cache."""


class EdgeListParseError(ValueError):
    """Raised for a malformed line of a SNAP edge list."""

    def __init__(self, lineno: int, line: str) -> None:
        self.lineno = lineno
        self.line = line
        super().__init__("Malformed edge list line {0}: {1!r}. Expecting "
                         "two non-negative integers.".format(lineno, line))


class GraphCacheError(ValueError):
    """Raised when a binary graph cache has an unknown header."""


class UndirectedGraph:
    """Simple undirected graph in CSR form.

    Every edge is stored in both directions, so ``offsets[n] == 2m``.
    Graphs returned by :func:`contract` may keep stale entries in lists
    that were not rebuilt; an edge exists in such graphs only when both
    directions are stored.

    Attributes
    ----------
    offsets : :obj:`np.ndarray`
        Start of each adjacency list, with ``n + 1`` entries.

    neighbors : :obj:`np.ndarray`
        Concatenated adjacency lists.

    labels : :obj:`np.ndarray` or None
        Input id of every vertex, kept by :func:`parse_edge_list`.
    """

    def __init__(self, offsets: np.ndarray, neighbors: np.ndarray) -> None:
        self.offsets = np.asarray(offsets, dtype=np.int64)
        self.neighbors = np.asarray(neighbors, dtype=np.int64)
        self.labels = None  # type: t.Optional[np.ndarray]

    def label_of(self, v: int) -> int:
        """Input id of vertex ``v`` (``v`` itself if none was recorded)."""
        return v if self.labels is None else int(self.labels[v])

    @classmethod
    def from_edges(cls,
                   src: t.Sequence[int],
                   dst: t.Sequence[int],
                   n: t.Optional[int] = None) -> "UndirectedGraph":
        """Build a graph from endpoint arrays.

        Edges are symmetrized; duplicates and self-loops are dropped.
        """
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)

        if n is None:
            n = int(max(src.max(initial=-1), dst.max(initial=-1))) + 1

        if n == 0:
            return cls(np.zeros(1, dtype=np.int64),
                       np.zeros(0, dtype=np.int64))

        keep = src != dst
        src, dst = src[keep], dst[keep]

        rows = np.concatenate((src, dst))
        cols = np.concatenate((dst, src))
        adj = scipy.sparse.coo_matrix(
            (np.ones(rows.size, dtype=np.int32), (rows, cols)),
            shape=(n, n)).tocsr()
        adj.sum_duplicates()
        adj.sort_indices()

        return cls(adj.indptr, adj.indices)

    @property
    def n(self) -> int:
        return len(self.offsets) - 1

    @property
    def m(self) -> int:
        return len(self.neighbors) // 2

    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def degree(self, v: int) -> int:
        return int(self.offsets[v + 1] - self.offsets[v])

    def neighbors_of(self, v: int) -> np.ndarray:
        return self.neighbors[self.offsets[v]:self.offsets[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        """Check whether ``v`` is stored in the adjacency list of ``u``."""
        nbrs = self.neighbors_of(u)
        pos = np.searchsorted(nbrs, v)
        return bool(pos < nbrs.size and nbrs[pos] == v)

    def edges(self) -> t.Tuple[np.ndarray, np.ndarray]:
        """Undirected edges as ``(src, dst)`` arrays with ``src < dst``."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        dst = self.neighbors
        keep = src < dst
        return src[keep], dst[keep]

    def __eq__(self, other: t.Any) -> bool:
        if not isinstance(other, UndirectedGraph):
            return NotImplemented

        return (np.array_equal(self.offsets, other.offsets)
                and np.array_equal(self.neighbors, other.neighbors))

    def __repr__(self) -> str:
        return "UndirectedGraph(n={0}, m={1})".format(self.n, self.m)


class Ordering:
    """Total order of the vertices.

    Attributes
    ----------
    position : :obj:`np.ndarray`
        Rank of every vertex, a permutation of ``0..n-1``.

    degeneracy : :obj:`int`
        Largest number of higher-ranked neighbors of any vertex. For
        :func:`degeneracy_order` this is the degeneracy of the graph.
    """

    def __init__(self, position: np.ndarray, degeneracy: int) -> None:
        self.position = np.asarray(position, dtype=np.int64)
        self.degeneracy = degeneracy

    @classmethod
    def identity(cls, graph: UndirectedGraph) -> "Ordering":
        position = np.arange(graph.n, dtype=np.int64)
        return cls(position, _forward_degree(graph, position))

    @property
    def order(self) -> np.ndarray:
        """Vertices sorted by rank."""
        return np.argsort(self.position, kind="stable")

    def __len__(self) -> int:
        return len(self.position)


class DirectedGraph:
    """Acyclic orientation of an undirected graph.

    Edges point from lower to higher rank and every out-adjacency list is
    sorted by rank. The compiled kernels work in rank space: vertex ``v``
    is row ``rank[v]`` of ``rank_offsets`` and ``rank_neighbors`` holds the
    ranks of its out-neighbors in increasing order.

    Attributes
    ----------
    order : :obj:`np.ndarray`
        Vertex of every rank (inverse permutation of ``rank``).

    rank_offsets : :obj:`np.ndarray`
        Start of the out-list of every rank, with ``n + 1`` entries.

    rank_neighbors : :obj:`np.ndarray`
        Concatenated out-lists in rank space.
    """

    def __init__(self,
                 rank: np.ndarray,
                 out_offsets: np.ndarray,
                 out_neighbors: np.ndarray) -> None:
        self.rank = np.asarray(rank, dtype=np.int64)
        self.out_offsets = np.asarray(out_offsets, dtype=np.int64)
        self.out_neighbors = np.asarray(out_neighbors, dtype=np.int64)
        out_deg = np.diff(self.out_offsets)
        self.max_out_degree = int(out_deg.max(initial=0))

        self.rank_list = self.rank.tolist()
        self.order = np.argsort(self.rank, kind="stable")

        self.rank_offsets = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(out_deg[self.order], out=self.rank_offsets[1:])

        src_rank = np.repeat(self.rank, out_deg)
        by_src = np.argsort(src_rank, kind="stable")
        self.rank_neighbors = np.ascontiguousarray(
            self.rank[self.out_neighbors][by_src])

    @property
    def n(self) -> int:
        return len(self.out_offsets) - 1

    @property
    def num_edges(self) -> int:
        return len(self.out_neighbors)

    def out_degrees(self) -> np.ndarray:
        return np.diff(self.out_offsets)

    def out_list(self, v: int) -> t.List[int]:
        return self.out_neighbors[
            self.out_offsets[v]:self.out_offsets[v + 1]].tolist()

    def by_rank(self, vertices: t.Iterable[int]) -> t.List[int]:
        """Sort ``vertices`` by rank."""
        return sorted(vertices, key=self.rank_list.__getitem__)

    def __repr__(self) -> str:
        return "DirectedGraph(n={0}, edges={1}, max_out_degree={2})".format(
            self.n, self.num_edges, self.max_out_degree)


def _is_vertex_id(token: str) -> bool:
    return token.isascii() and token.isdigit()


def parse_edge_list(text: t.Union[str, t.Iterable[str]]) -> UndirectedGraph:
    """Parse a SNAP plain-text edge list.

    Lines are either comments starting with ``#`` or two whitespace
    separated non-negative integers. Vertex ids are densified to
    ``0..n-1`` in order of first appearance; duplicate edges and
    self-loops are dropped, but a vertex seen only in a self-loop is
    still a vertex.

    Parameters
    ----------
    text : :obj:`str` or iterable of :obj:`str`
        Whole file content, or an iterable of lines (e.g. an open file).

    Raises
    ------
    EdgeListParseError
        If a line is malformed. The error carries the 1-based line number.
    """
    if isinstance(text, str):
        text = text.splitlines()

    raw_ids = []  # type: t.List[int]

    for lineno, line in enumerate(text, 1):
        stripped = line.strip()

        if not stripped or stripped.startswith("#"):
            continue

        tokens = stripped.split()

        if len(tokens) != 2 or not all(map(_is_vertex_id, tokens)):
            raise EdgeListParseError(lineno, line.rstrip("\n"))

        raw_ids.append(int(tokens[0]))
        raw_ids.append(int(tokens[1]))

    if not raw_ids:
        return UndirectedGraph.from_edges([], [], n=0)

    codes, uniques = pd.factorize(np.asarray(raw_ids))

    g = UndirectedGraph.from_edges(codes[0::2], codes[1::2],
                                   n=len(uniques))
    g.labels = np.asarray(uniques)
    return g


def serialize_edge_list(graph: UndirectedGraph) -> str:
    """Write ``graph`` as a SNAP edge list.

    Each undirected edge is written once as ``u v`` with ``u < v``. A
    vertex that would otherwise appear out of order (or not at all) is
    declared by a self-loop line, so :func:`parse_edge_list` reproduces
    the same vertex ids.
    """
    src, dst = graph.edges()
    lines = ["# Nodes: {0} Edges: {1}".format(graph.n, src.size)]
    next_id = 0

    def declare(vertex: int) -> None:
        """Introduce every id below ``vertex``."""
        nonlocal next_id
        while next_id < vertex:
            lines.append("{0} {0}".format(next_id))
            next_id += 1

    for u, v in zip(src.tolist(), dst.tolist()):
        declare(u)

        # "u u+1" introduces both ids by itself.
        if next_id != u or v != u + 1:
            declare(u + 1)
            declare(v)

        lines.append("{0} {1}".format(u, v))
        next_id = max(next_id, v + 1)

    declare(graph.n)

    return "\n".join(lines) + "\n"


def write_edge_list(graph: UndirectedGraph, path: str) -> None:
    with open(path, "w") as f_out:
        f_out.write(serialize_edge_list(graph))


def read_edge_list(path: str) -> UndirectedGraph:
    with open(path) as f_in:
        return parse_edge_list(f_in)


def save_graph(graph: UndirectedGraph, path: str) -> None:
    """Store ``graph`` in the binary cache format."""
    with open(path, "wb") as f_out:
        f_out.write(CACHE_MAGIC)
        np.save(f_out, graph.offsets, allow_pickle=False)
        np.save(f_out, graph.neighbors, allow_pickle=False)


def load_graph(path: str) -> UndirectedGraph:
    """Load a graph written by :func:`save_graph`.

    Raises
    ------
    GraphCacheError
        If the file does not start with the expected header.
    """
    with open(path, "rb") as f_in:
        header = f_in.read(len(CACHE_MAGIC))

        if header != CACHE_MAGIC:
            raise GraphCacheError("Unknown graph cache header {0!r} in "
                                  '"{1}".'.format(header, path))

        offsets = np.load(f_in, allow_pickle=False)
        neighbors = np.load(f_in, allow_pickle=False)

    return UndirectedGraph(offsets, neighbors)


def generate_rmat(scale: int,
                  edge_factor: int = 16,
                  a: float = 0.5,
                  b: float = 0.1,
                  c: float = 0.1,
                  d: float = 0.3,
                  seed: int = 0) -> UndirectedGraph:
    """Generate an rMAT graph with ``2**scale`` vertices.

    ``edge_factor * 2**scale`` directed pairs are sampled by recursive
    quadrant selection with probabilities ``a`` (top-left), ``b``
    (top-right), ``c`` (bottom-left) and ``d`` (bottom-right). The pairs
    are symmetrized, and duplicates and self-loops removed.
    """
    if isinstance(scale, bool) or not isinstance(scale, int) or scale < 1:
        raise ValueError('Invalid "scale" argument ({0}). '
                         "Expecting an integer >= 1.".format(scale))

    if (isinstance(edge_factor, bool) or not isinstance(edge_factor, int)
            or edge_factor < 1):
        raise ValueError('Invalid "edge_factor" argument ({0}). '
                         "Expecting a positive integer.".format(edge_factor))

    probs = np.array([a, b, c, d], dtype=float)

    if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-9:
        raise ValueError("rMAT probabilities must be non-negative and sum "
                         "to 1 (got a={0}, b={1}, c={2}, d={3}).".format(
                             a, b, c, d))

    rng = np.random.default_rng(seed)
    num_pairs = edge_factor << scale
    src = np.zeros(num_pairs, dtype=np.int64)
    dst = np.zeros(num_pairs, dtype=np.int64)

    for _ in range(scale):
        rnd = rng.random(num_pairs)
        lower = rnd >= a + b
        right = ((rnd >= a) & (rnd < a + b)) | (rnd >= a + b + c)
        src = (src << 1) | lower
        dst = (dst << 1) | right

    return UndirectedGraph.from_edges(src, dst, n=1 << scale)


def generate_gnp(n: int, p: float, seed: int = 0) -> UndirectedGraph:
    """Erdos-Renyi graph: every pair is an edge with probability ``p``."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ValueError('Invalid "n" argument ({0}). '
                         "Expecting a non-negative integer.".format(n))

    if not 0.0 <= p <= 1.0:
        raise ValueError('Invalid "p" argument ({0}). '
                         "Expecting a float in [0, 1].".format(p))

    rng = np.random.default_rng(seed)
    src, dst = np.triu_indices(n, k=1)
    keep = rng.random(src.size) < p
    return UndirectedGraph.from_edges(src[keep], dst[keep], n=n)


def _forward_degree(graph: UndirectedGraph, position: np.ndarray) -> int:
    """Largest number of higher-ranked neighbors of a vertex."""
    src = np.repeat(np.arange(graph.n, dtype=np.int64), graph.degrees())
    later = position[src] < position[graph.neighbors]
    return int(np.bincount(src[later], minlength=graph.n).max(initial=0))


def degeneracy_order(graph: UndirectedGraph) -> Ordering:
    """Order vertices by repeatedly removing a minimum-degree vertex.

    A bucket queue keyed by residual degree holds a min-heap of vertex ids
    per bucket, so ties are broken by the smallest id. The minimum residual
    degree drops by at most one per removal.
    """
    n = graph.n
    deg = graph.degrees().tolist()
    buckets = [[] for _ in range(max(deg, default=0) + 1)
               ]  # type: t.List[t.List[int]]

    for v in range(n):
        buckets[deg[v]].append(v)

    removed = bytearray(n)
    position = np.empty(n, dtype=np.int64)
    degeneracy = 0
    low = 0

    for step in range(n):
        while True:
            while not buckets[low]:
                low += 1

            v = heapq.heappop(buckets[low])

            if not removed[v] and deg[v] == low:
                break

        removed[v] = 1
        position[v] = step
        degeneracy = max(degeneracy, low)

        for u in graph.neighbors_of(v).tolist():
            if not removed[u]:
                deg[u] -= 1
                heapq.heappush(buckets[deg[u]], u)

        low = max(low - 1, 0)

    return Ordering(position, degeneracy)


def degree_order(graph: UndirectedGraph) -> Ordering:
    """Order vertices by (degree, id)."""
    order = np.lexsort((np.arange(graph.n), graph.degrees()))
    position = np.empty(graph.n, dtype=np.int64)
    position[order] = np.arange(graph.n, dtype=np.int64)
    return Ordering(position, _forward_degree(graph, position))


def orient(graph: UndirectedGraph, ordering: Ordering) -> DirectedGraph:
    """Direct every edge from the lower to the higher ranked endpoint."""
    pos = ordering.position
    src = np.repeat(np.arange(graph.n, dtype=np.int64), graph.degrees())
    dst = graph.neighbors

    keep = pos[src] < pos[dst]
    src, dst = src[keep], dst[keep]

    sort_ind = np.lexsort((pos[dst], src))
    src, dst = src[sort_ind], dst[sort_ind]

    out_offsets = np.zeros(graph.n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=graph.n), out=out_offsets[1:])

    return DirectedGraph(pos, out_offsets, dst)


def relabel(graph: UndirectedGraph, ordering: Ordering) -> UndirectedGraph:
    """Rename every vertex ``v`` to ``ordering.position[v]``."""
    pos = ordering.position
    src = np.repeat(np.arange(graph.n, dtype=np.int64), graph.degrees())
    return UndirectedGraph.from_edges(pos[src], pos[graph.neighbors],
                                      n=graph.n)


def contraction_candidates(graph: UndirectedGraph,
                           per_vertex_loss: np.ndarray,
                           loss_fraction: float = 0.25) -> np.ndarray:
    """Boolean mask of vertices whose adjacency list should be rebuilt."""
    loss = np.asarray(per_vertex_loss)
    return (loss > 0) & (loss >= loss_fraction * graph.degrees())


def contract(graph: UndirectedGraph,
             alive_edge: t.Callable[[np.ndarray, np.ndarray], np.ndarray],
             per_vertex_loss: np.ndarray,
             loss_fraction: float = 0.25) -> UndirectedGraph:
    """Drop dead edges from the lists of vertices that lost many neighbors.

    Only vertices selected by :func:`contraction_candidates` have their
    lists filtered; every other list is copied as is. ``alive_edge`` gets
    the arrays ``(v, u)`` of all entries of the selected lists at once and
    returns a boolean mask. Filtered lists remain sorted.
    """
    rebuilt = contraction_candidates(graph, per_vertex_loss, loss_fraction)

    if not rebuilt.any():
        return graph

    src = np.repeat(np.arange(graph.n, dtype=np.int64), graph.degrees())
    keep = np.ones(graph.neighbors.size, dtype=bool)
    check = rebuilt[src]
    keep[check] = np.asarray(
        alive_edge(src[check], graph.neighbors[check]), dtype=bool)

    offsets = np.zeros(graph.n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src[keep], minlength=graph.n), out=offsets[1:])

    return UndirectedGraph(offsets, graph.neighbors[keep])
