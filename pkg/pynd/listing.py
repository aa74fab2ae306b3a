"""Parallel c-clique listing over a low out-degree orientation.

A c-clique is discovered exactly once, from its lowest-ranked vertex,
by repeatedly intersecting the candidate set with the out-neighbors of
the vertex just added. Listing runs in rank space (see
:class:`pynd.graph.DirectedGraph`) on compiled kernels: the outermost
levels of the recursion are expanded into a batch of tasks, and every
task is then finished by an iterative depth-first search. Each task
writes its cliques to rows reserved beforehand by a prefix sum over the
per-task counts.
"""
import typing as t

import numba
import numpy as np

from pynd import graph
from pynd._internal import process_generic_option
from pynd._parallel import exclusive_sum, num_threads

CliqueCallback = t.Callable[[t.Tuple[int, ...]], None]

PARALLEL_DEPTH = 2
"""Number of outermost recursion levels expanded into parallel tasks."""

SKEW_FACTOR = 8
"""Size ratio above which intersections binary search the longer side."""


@numba.njit(cache=True)
def _search_merge(small: np.ndarray, big: np.ndarray, out: np.ndarray,
                  fill: bool) -> int:
    k = 0
    lo = 0

    for x in small:
        lo += np.searchsorted(big[lo:], x)

        if lo == big.size:
            break

        if big[lo] == x:
            if fill:
                out[k] = x

            k += 1
            lo += 1

    return k


@numba.njit(cache=True)
def _merge(a: np.ndarray, b: np.ndarray, out: np.ndarray, fill: bool) -> int:
    if a.size * SKEW_FACTOR < b.size:
        return _search_merge(a, b, out, fill)

    if b.size * SKEW_FACTOR < a.size:
        return _search_merge(b, a, out, fill)

    i = j = k = 0

    while i < a.size and j < b.size:
        if a[i] < b[j]:
            i += 1

        elif a[i] > b[j]:
            j += 1

        else:
            if fill:
                out[k] = a[i]

            k += 1
            i += 1
            j += 1

    return k


@numba.njit(cache=True)
def intersect_sorted(a: np.ndarray, b: np.ndarray, out: np.ndarray) -> int:
    """Intersection of two increasing arrays, written to ``out``.

    Returns the number of common values written.
    """
    return _merge(a, b, out, True)


@numba.njit(cache=True)
def _intersect_size(a: np.ndarray, b: np.ndarray) -> int:
    # ``a`` stands in for the output, which is never written when counting.
    return _merge(a, b, a, False)


@numba.njit(cache=True)
def _extend(offsets: np.ndarray,
            neighbors: np.ndarray,
            cand: np.ndarray,
            rl: int,
            prefix: np.ndarray,
            out: np.ndarray,
            start: int,
            fill: bool) -> int:
    """Depth-first listing of the ``rl``-cliques inside ``cand``.

    With ``fill`` every clique is written as ``prefix`` followed by its
    vertices in increasing rank, from row ``start`` of ``out`` on.
    Returns the number of cliques.
    """
    width = cand.size
    num_fixed = prefix.size

    if width < rl:
        return 0

    if rl == 1:
        if fill:
            for i in range(width):
                out[start + i, :num_fixed] = prefix
                out[start + i, num_fixed] = cand[i]

        return width

    stack = np.empty((rl, width), dtype=np.int64)
    size = np.zeros(rl, dtype=np.int64)
    pos = np.zeros(rl, dtype=np.int64)
    chosen = np.empty(rl, dtype=np.int64)

    stack[0, :] = cand
    size[0] = width
    depth = 0
    count = 0

    while depth >= 0:
        if pos[depth] >= size[depth]:
            depth -= 1
            continue

        v = stack[depth, pos[depth]]
        pos[depth] += 1
        chosen[depth] = v

        if depth == rl - 1:
            if fill:
                out[start + count, :num_fixed] = prefix
                out[start + count, num_fixed:] = chosen

            count += 1
            continue

        rest = stack[depth, pos[depth]:size[depth]]
        out_v = neighbors[offsets[v]:offsets[v + 1]]

        if depth == rl - 2 and not fill:
            count += _intersect_size(rest, out_v)
            continue

        found = intersect_sorted(rest, out_v, stack[depth + 1])

        if found >= rl - depth - 1:
            depth += 1
            size[depth] = found
            pos[depth] = 0

    return count


@numba.njit(cache=True, parallel=True)
def _extend_batch(offsets: np.ndarray,
                  neighbors: np.ndarray,
                  prefixes: np.ndarray,
                  cand_flat: np.ndarray,
                  cand_ptr: np.ndarray,
                  rl: int,
                  out: np.ndarray,
                  starts: np.ndarray,
                  schedule: np.ndarray,
                  fill: bool) -> np.ndarray:
    counts = np.zeros(cand_ptr.size - 1, dtype=np.int64)

    for i in numba.prange(schedule.size):
        task = schedule[i]
        counts[task] = _extend(offsets, neighbors,
                               cand_flat[cand_ptr[task]:cand_ptr[task + 1]],
                               rl, prefixes[task], out, starts[task], fill)

    return counts


@numba.njit(cache=True, parallel=True)
def _expand_sizes(offsets: np.ndarray,
                  neighbors: np.ndarray,
                  cand_flat: np.ndarray,
                  cand_ptr: np.ndarray,
                  task_of: np.ndarray) -> np.ndarray:
    sizes = np.empty(cand_flat.size, dtype=np.int64)

    for j in numba.prange(cand_flat.size):
        v = cand_flat[j]
        end = cand_ptr[task_of[j] + 1]
        sizes[j] = _intersect_size(cand_flat[j + 1:end],
                                   neighbors[offsets[v]:offsets[v + 1]])

    return sizes


@numba.njit(cache=True, parallel=True)
def _expand_fill(offsets: np.ndarray,
                 neighbors: np.ndarray,
                 cand_flat: np.ndarray,
                 cand_ptr: np.ndarray,
                 task_of: np.ndarray,
                 picked: np.ndarray,
                 new_ptr: np.ndarray) -> np.ndarray:
    new_flat = np.empty(new_ptr[-1], dtype=np.int64)

    for i in numba.prange(picked.size):
        j = picked[i]
        v = cand_flat[j]
        end = cand_ptr[task_of[j] + 1]
        intersect_sorted(cand_flat[j + 1:end],
                         neighbors[offsets[v]:offsets[v + 1]],
                         new_flat[new_ptr[i]:new_ptr[i + 1]])

    return new_flat


def _expand(dg: graph.DirectedGraph,
            prefixes: np.ndarray,
            cand_flat: np.ndarray,
            cand_ptr: np.ndarray,
            rl: int) -> t.Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Turn every (task, candidate) pair into a task one level deeper."""
    task_of = np.repeat(np.arange(cand_ptr.size - 1, dtype=np.int64),
                        np.diff(cand_ptr))
    sizes = _expand_sizes(dg.rank_offsets, dg.rank_neighbors, cand_flat,
                          cand_ptr, task_of)

    picked = np.flatnonzero(sizes >= rl - 1)
    new_ptr = exclusive_sum(sizes[picked])
    new_flat = _expand_fill(dg.rank_offsets, dg.rank_neighbors, cand_flat,
                            cand_ptr, task_of, picked, new_ptr)

    new_prefixes = np.hstack((prefixes[task_of[picked]],
                              cand_flat[picked, np.newaxis]))

    return np.ascontiguousarray(new_prefixes), new_flat, new_ptr


def _schedule(num_tasks: int) -> np.ndarray:
    """Fixed shuffle of the tasks, spreading heavy ones over the threads."""
    return np.random.default_rng(num_tasks).permutation(num_tasks)


def _prepare(dg: graph.DirectedGraph,
             prefixes: np.ndarray,
             cand_flat: np.ndarray,
             cand_ptr: np.ndarray,
             rl: int,
             depth: int) -> t.Tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    prefixes = np.ascontiguousarray(prefixes, dtype=np.int64)
    cand_flat = np.ascontiguousarray(cand_flat, dtype=np.int64)
    cand_ptr = np.ascontiguousarray(cand_ptr, dtype=np.int64)

    while depth > 0 and rl > 1 and cand_flat.size:
        prefixes, cand_flat, cand_ptr = _expand(dg, prefixes, cand_flat,
                                                cand_ptr, rl)
        rl -= 1
        depth -= 1

    return prefixes, cand_flat, cand_ptr, rl


def extend_rows(dg: graph.DirectedGraph,
                prefixes: np.ndarray,
                cand_flat: np.ndarray,
                cand_ptr: np.ndarray,
                rl: int,
                depth: int = PARALLEL_DEPTH) -> np.ndarray:
    """Every ``rl``-clique extension of a batch of partial cliques.

    Everything is in rank space.

    Parameters
    ----------
    prefixes : :obj:`np.ndarray`
        One partial clique per row (all rows of equal length, possibly 0).

    cand_flat, cand_ptr : :obj:`np.ndarray`
        Candidates of task ``i`` are ``cand_flat[cand_ptr[i]:cand_ptr[i+1]]``,
        increasing, each adjacent to every vertex of ``prefixes[i]``.

    rl : :obj:`int`
        Number of vertices to add.

    depth : :obj:`int`, optional
        Number of levels expanded into parallel tasks before the
        depth-first search.

    Returns
    -------
    :obj:`np.ndarray`
        One row per clique: the prefix followed by the added ranks, which
        increase. Rows of one input task are consecutive.
    """
    width = prefixes.shape[1] + rl
    prefixes, cand_flat, cand_ptr, rl = _prepare(dg, prefixes, cand_flat,
                                                 cand_ptr, rl, depth)
    num_tasks = cand_ptr.size - 1
    schedule = _schedule(num_tasks)
    starts = np.zeros(num_tasks + 1, dtype=np.int64)

    counts = _extend_batch(dg.rank_offsets, dg.rank_neighbors, prefixes,
                           cand_flat, cand_ptr, rl,
                           np.empty((0, width), dtype=np.int64), starts,
                           schedule, False)

    starts = exclusive_sum(counts)
    rows = np.empty((starts[-1], width), dtype=np.int64)

    _extend_batch(dg.rank_offsets, dg.rank_neighbors, prefixes, cand_flat,
                  cand_ptr, rl, rows, starts, schedule, True)

    return rows


def count_extensions(dg: graph.DirectedGraph,
                     prefixes: np.ndarray,
                     cand_flat: np.ndarray,
                     cand_ptr: np.ndarray,
                     rl: int,
                     depth: int = PARALLEL_DEPTH) -> int:
    """Number of rows :func:`extend_rows` would return."""
    prefixes, cand_flat, cand_ptr, rl = _prepare(dg, prefixes, cand_flat,
                                                 cand_ptr, rl, depth)
    num_tasks = cand_ptr.size - 1
    width = prefixes.shape[1] + rl

    counts = _extend_batch(dg.rank_offsets, dg.rank_neighbors, prefixes,
                           cand_flat, cand_ptr, rl,
                           np.empty((0, width), dtype=np.int64),
                           np.zeros(num_tasks + 1, dtype=np.int64),
                           _schedule(num_tasks), False)

    return int(counts.sum())


def _whole_graph(dg: graph.DirectedGraph
                 ) -> t.Tuple[np.ndarray, np.ndarray, np.ndarray]:
    return (np.empty((1, 0), dtype=np.int64),
            np.arange(dg.n, dtype=np.int64),
            np.array([0, dg.n], dtype=np.int64))


def clique_rows(dg: graph.DirectedGraph, c: int) -> np.ndarray:
    """Every c-clique as a row of increasing ranks."""
    return extend_rows(dg, *_whole_graph(dg), c)


def intersect(base: t.Sequence[int], v: int,
              dg: graph.DirectedGraph) -> t.List[int]:
    """Candidates of ``base`` that are out-neighbors of ``v``.

    Both inputs are sorted by rank and so is the result.
    """
    base_ranks = dg.rank[np.asarray(base, dtype=np.int64)]
    rank_v = dg.rank[v]
    out_v = dg.rank_neighbors[
        dg.rank_offsets[rank_v]:dg.rank_offsets[rank_v + 1]]

    common = np.empty(min(base_ranks.size, out_v.size), dtype=np.int64)
    found = intersect_sorted(base_ranks, out_v, common)
    return dg.order[common[:found]].tolist()


def rec_list_cliques(dg: graph.DirectedGraph,
                     candidates: t.Iterable[int],
                     rl: int,
                     clique: t.Sequence[int],
                     func: CliqueCallback,
                     threads: t.Optional[int] = 1) -> None:
    """Call ``func`` once for every clique extending ``clique``.

    Parameters
    ----------
    dg : :obj:`DirectedGraph`
        Orientation used to bound the candidate sets.

    candidates : iterable of :obj:`int`
        Vertices sorted by rank, each adjacent to every vertex of
        ``clique``.

    rl : :obj:`int`
        Number of vertices still to be added.

    clique : sequence of :obj:`int`
        Partial clique. It is passed to ``func`` as a prefix of every
        emitted tuple.

    func : callable
        Called with ``clique + (v_1, ..., v_rl)``, the added vertices in
        rank order.

    threads : :obj:`int`, optional
        Threads of the listing kernels. The cliques are collected in
        parallel; ``func`` is then called from the calling thread, task by
        task, and an exception raised by it stops the iteration.
    """
    if rl < 1:
        raise ValueError('Invalid "rl" argument ({0}). '
                         "Expecting an integer >= 1.".format(rl))

    clique = np.asarray(tuple(clique), dtype=np.int64)
    cand = dg.rank[np.fromiter(candidates, dtype=np.int64)]

    with num_threads(threads):
        rows = extend_rows(dg, dg.rank[clique].reshape(1, clique.size), cand,
                           np.array([0, cand.size], dtype=np.int64), rl)

    for row in dg.order[rows].tolist():
        func(tuple(row))


def orient_by(g: graph.UndirectedGraph,
              orientation: str = "degeneracy") -> graph.DirectedGraph:
    """Orient ``g`` with the named vertex ordering."""
    orientation = process_generic_option(orientation, "orientation")

    if orientation == "degree":
        return graph.orient(g, graph.degree_order(g))

    return graph.orient(g, graph.degeneracy_order(g))


def list_cliques(dg: graph.DirectedGraph,
                 c: int,
                 threads: t.Optional[int] = 1) -> t.List[t.Tuple[int, ...]]:
    """Every c-clique of the oriented graph, vertices in rank order."""
    with num_threads(threads):
        rows = clique_rows(dg, c)

    return [tuple(row) for row in dg.order[rows].tolist()]


def count_cliques(g: graph.UndirectedGraph,
                  c: int,
                  threads: t.Optional[int] = 1,
                  orientation: str = "degeneracy") -> int:
    """Number of c-cliques of ``g``.

    Raises
    ------
    ValueError
        If ``c`` is not a positive integer.
    """
    if isinstance(c, bool) or not isinstance(c, int) or c < 1:
        raise ValueError('Invalid "c" argument ({0}). '
                         "Expecting an integer >= 1.".format(c))

    if g.n == 0:
        return 0

    dg = orient_by(g, orientation)

    with num_threads(threads):
        return count_extensions(dg, *_whole_graph(dg), c)
