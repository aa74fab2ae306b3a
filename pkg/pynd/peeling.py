"""Peeling of r-cliques by their s-clique counts.

Counts are kept in fixed point: one s-clique is worth ``L`` units, where
``L = lcm(1..binomial(s, r))``. When an s-clique is destroyed in a round
where ``a`` of its r-subsets are peeled together, each of the ``a`` peeled
subsets that discovers it subtracts ``L / a`` from every surviving subset,
so survivors lose exactly ``L`` in total.
"""
import typing as t
import dataclasses
import itertools
import os

import numba
import numpy as np

from pynd import _internal
from pynd import aggregation
from pynd import bucketing
from pynd import graph
from pynd import listing
from pynd import table
from pynd._internal import fixed_point_scale
from pynd._parallel import exclusive_sum, num_threads
from pynd.listing import intersect_sorted

UNPEELED = 0
PEELING = 1
PEELED = 2

__all__ = [
    "FixedPoint",
    "PeelConfig",
    "PeelResult",
    "PeelState",
    "PeelTrace",
    "Workspace",
    "InvariantViolation",
    "count_phase",
    "fixed_point_scale",
    "nucleus_decomposition",
    "prepare",
    "run",
    "update_round",
]


class InvariantViolation(RuntimeError):
    """Raised when the table and the graph disagree or a count drops
    below zero."""


class FixedPoint:
    """Fixed-point arithmetic of the s-clique counts.

    Attributes
    ----------
    scale : :obj:`int`
        Units per s-clique (``L``).

    subsets : :obj:`int`
        Number of r-subsets of an s-clique.
    """

    def __init__(self, r: int, s: int) -> None:
        self.scale = fixed_point_scale(r, s)
        self.subsets = _internal.binom(s, r)

    def share(self, num_peeled: int) -> int:
        """Decrement applied to each survivor by one of ``num_peeled``."""
        return self.scale // num_peeled

    def whole(
            self,
            count: t.Union[int, np.ndarray]) -> t.Union[int, np.ndarray]:
        return count // self.scale


class PeelState:
    """Status and core number of every r-clique index."""

    def __init__(self, size: int) -> None:
        self.status = np.full(size, UNPEELED, dtype=np.int8)
        self.core = np.full(size, -1, dtype=np.int64)
        self.finished = 0

    def begin(self, ids: np.ndarray, level: int) -> None:
        self.status[ids] = PEELING
        self.core[ids] = level
        self.finished += len(ids)

    def end(self, ids: np.ndarray) -> None:
        self.status[ids] = PEELED


class PeelTrace:
    """Per-run instrumentation.

    Attributes
    ----------
    decrements : :obj:`dict`
        Total share subtracted on behalf of every destroyed s-clique,
        keyed by its sorted vertices (original labels).

    levels : :obj:`list` of :obj:`int`
        Extracted bucket value of every round.

    rounds : :obj:`list` of :obj:`tuple`
        ``(k, |A|, |U|)`` of every round.

    misaligned : :obj:`int`
        Number of quiescent counts found not to be a multiple of ``L``.
    """

    def __init__(self, labels: np.ndarray) -> None:
        self.decrements = {}  # type: t.Dict[t.Tuple[int, ...], int]
        self.levels = []  # type: t.List[int]
        self.rounds = []  # type: t.List[t.Tuple[int, int, int]]
        self.misaligned = 0
        self.contractions = 0
        self._labels = labels

    def record(self, clique: t.Sequence[int], share: int) -> None:
        key = tuple(sorted(int(self._labels[v]) for v in clique))
        self.decrements[key] = self.decrements.get(key, 0) + share


@dataclasses.dataclass
class PeelConfig:
    """Tunables of a decomposition.

    ``None`` entries take defaults depending on ``(r, s)``; see
    :meth:`resolve`.
    """
    levels: t.Optional[int] = None
    contiguous: bool = True
    inverse_map: str = "pointer"
    relabel: t.Optional[bool] = None
    aggregation: t.Optional[str] = None
    buffer_size: int = _internal.DEFAULT_BUFFER_SIZE
    contract: t.Optional[bool] = None
    bucket: str = "open"
    orientation: str = "degeneracy"
    threads: t.Optional[int] = None
    window: int = _internal.DEFAULT_WINDOW
    contract_edge_factor: float = _internal.CONTRACT_EDGE_FACTOR
    contract_loss_fraction: float = _internal.CONTRACT_LOSS_FRACTION
    seed: int = 0

    def resolve(self, r: int, s: int,
                suppress_warnings: bool = False) -> "PeelConfig":
        """Validated copy with every default filled in for ``(r, s)``.

        Edge peeling with triangles, ``(2, 3)``, defaults to hash-table
        aggregation with graph contraction and no relabeling. Every other
        ``(r, s)`` defaults to the list buffer with relabeling.
        """
        _internal.check_rs(r, s)
        edge_peeling = (r, s) == (2, 3)

        levels = _internal.check_positive_int(self.levels, "levels",
                                              allow_none=True)
        if levels is None:
            levels = min(_internal.DEFAULT_LEVELS, r)

        elif r == 1 and levels > 1:
            _internal.warn('"levels" is ignored for r = 1 (got {0}).'.format(
                levels), UserWarning, suppress_warnings)
            levels = 1

        elif levels > r:
            raise ValueError('Invalid "levels" argument ({0}). Expecting an '
                             "integer in [1, r={1}].".format(levels, r))

        contract = self.contract
        if contract is None:
            contract = edge_peeling

        elif contract and not edge_peeling:
            _internal.warn("Graph contraction only applies to (r, s) = "
                           "(2, 3) and is ignored.", UserWarning,
                           suppress_warnings)
            contract = False

        threads = _internal.check_positive_int(self.threads, "threads",
                                               allow_none=True)

        resolved = dataclasses.replace(
            self,
            levels=levels,
            inverse_map=_internal.process_generic_option(
                self.inverse_map, "inverse"),
            relabel=(not edge_peeling if self.relabel is None else
                     bool(self.relabel)),
            aggregation=_internal.process_generic_option(
                self.aggregation or ("hash" if edge_peeling else
                                     "list-buffer"), "aggregation"),
            buffer_size=_internal.check_positive_int(self.buffer_size,
                                                     "buffer_size"),
            contract=bool(contract),
            bucket=_internal.process_generic_option(self.bucket, "bucket"),
            orientation=_internal.process_generic_option(
                self.orientation, "orientation"),
            threads=threads or os.cpu_count() or 1,
            window=_internal.check_positive_int(self.window, "window"),
            contract_edge_factor=_internal.check_fraction(
                self.contract_edge_factor, "contract_edge_factor",
                upper=float("inf")),
            contract_loss_fraction=_internal.check_fraction(
                self.contract_loss_fraction, "contract_loss_fraction"),
        )

        # Raises for a pointer inverse map over split tables.
        resolved.table_config()

        return resolved

    def table_config(self) -> table.TableConfig:
        return table.TableConfig(levels=self.levels or 1,
                                 contiguous=self.contiguous,
                                 inverse_map=self.inverse_map,
                                 seed=self.seed)

    def as_dict(self) -> t.Dict[str, t.Any]:
        return dataclasses.asdict(self)


class Workspace:
    """Graph, orientation and table prepared for peeling.

    Attributes
    ----------
    graph : :obj:`UndirectedGraph`
        Working graph (relabeled when ``config.relabel``).

    labels : :obj:`np.ndarray`
        Original label of every working vertex.

    position : :obj:`np.ndarray`
        Working label of every original vertex.
    """

    def __init__(self, r: int, s: int, config: PeelConfig,
                 g: graph.UndirectedGraph, dg: graph.DirectedGraph,
                 ordering: graph.Ordering, labels: np.ndarray,
                 position: np.ndarray, tbl: table.CliqueTable,
                 timings: t.Dict[str, float]) -> None:
        self.r = r
        self.s = s
        self.config = config
        self.graph = g
        self.dg = dg
        self.ordering = ordering
        self.labels = labels
        self.position = position
        self.table = tbl
        self.timings = timings


class PeelResult:
    """Outcome of a nucleus decomposition.

    Attributes
    ----------
    core : :obj:`np.ndarray`
        Core number of every r-clique index of :attr:`table`.

    rho : :obj:`int`
        Number of peeling rounds.

    max_core : :obj:`int`
        Largest core number (0 without r-cliques).

    timings : :obj:`dict`
        Wall time of the ``orient``, ``build``, ``count`` and ``peel``
        phases, in seconds.

    config : :obj:`dict`
        Resolved configuration, with ``r`` and ``s``.

    trace : :obj:`PeelTrace` or None
        Instrumentation, when requested.
    """

    def __init__(self, core: np.ndarray, rho: int,
                 timings: t.Dict[str, float], config: t.Dict[str, t.Any],
                 workspace: Workspace,
                 trace: t.Optional[PeelTrace] = None) -> None:
        self.core = core
        self.rho = rho
        self.max_core = int(core.max(initial=0))
        self.timings = timings
        self.config = config
        self.table = workspace.table
        self.labels = workspace.labels
        self.position = workspace.position
        self.trace = trace

    def __len__(self) -> int:
        return self.core.size

    def histogram(self) -> t.Dict[int, int]:
        """Number of r-cliques per core number."""
        values, counts = np.unique(self.core, return_counts=True)
        return dict(zip(values.tolist(), counts.tolist()))

    def cliques(
            self,
            tbl: t.Optional[table.CliqueTable] = None
    ) -> t.Iterator[t.Tuple[t.Tuple[int, ...], int]]:
        """Iterate over ``(vertices, core)`` in original vertex labels."""
        tbl = tbl or self.table
        for idx, vertices in tbl.cliques():
            yield (tuple(sorted(int(self.labels[v]) for v in vertices)),
                   int(self.core[idx]))

    def as_dict(self) -> t.Dict[t.Tuple[int, ...], int]:
        return dict(self.cliques())

    def core_of(self, clique: t.Sequence[int]) -> int:
        """Core number of an r-clique given in original labels."""
        working = [int(self.position[v]) for v in clique]
        return int(self.core[self.table.index_of(working)])


def prepare(g: graph.UndirectedGraph,
            r: int,
            s: int,
            config: t.Optional[PeelConfig] = None,
            verbose: bool = False,
            suppress_warnings: bool = False) -> Workspace:
    """Orient (and relabel) ``g`` and build the table of its r-cliques."""
    config = (config or PeelConfig()).resolve(r, s, suppress_warnings)
    timings = {}  # type: t.Dict[str, float]

    def _orient() -> t.Tuple[graph.UndirectedGraph, graph.DirectedGraph,
                             graph.Ordering, np.ndarray, np.ndarray]:
        if config.orientation == "degree":
            ordering = graph.degree_order(g)

        else:
            ordering = graph.degeneracy_order(g)

        if config.relabel:
            work = graph.relabel(g, ordering)
            labels = ordering.order
            return (work, graph.orient(work, graph.Ordering.identity(work)),
                    ordering, labels, ordering.position)

        identity = np.arange(g.n, dtype=np.int64)
        return g, graph.orient(g, ordering), ordering, identity, identity

    if verbose:
        print("Orienting graph (n={0}, m={1})...".format(g.n, g.m))

    (work, dg, ordering, labels, position), timings["orient"] = \
        _internal.timeit(_orient)

    if verbose:
        print("Building table of {0}-cliques ({1} levels)...".format(
            r, config.levels))

    tbl, timings["build"] = _internal.timeit(
        table.build_table, work, dg, r, config.table_config(),
        config.threads)

    return Workspace(r, s, config, work, dg, ordering, labels, position, tbl,
                     timings)


@numba.njit(cache=True, parallel=True)
def _common_neighbors(offsets: np.ndarray,
                      neighbors: np.ndarray,
                      cliques: np.ndarray,
                      out: np.ndarray,
                      starts: np.ndarray,
                      fill: bool) -> np.ndarray:
    """Vertices adjacent to every vertex of each row of ``cliques``.

    Lists must be sorted by id, and so is every result. With ``fill`` the
    result of row ``i`` is written from ``out[starts[i]]`` on.
    """
    sizes = np.zeros(cliques.shape[0], dtype=np.int64)

    for i in numba.prange(cliques.shape[0]):
        first = cliques[i, 0]
        for v in cliques[i]:
            if offsets[v + 1] - offsets[v] < offsets[first + 1] - \
                    offsets[first]:
                first = v

        common = neighbors[offsets[first]:offsets[first + 1]].copy()
        scratch = np.empty(common.size, dtype=np.int64)
        found = common.size

        for v in cliques[i]:
            if v != first and found:
                found = intersect_sorted(
                    common[:found], neighbors[offsets[v]:offsets[v + 1]],
                    scratch)
                common[:found] = scratch[:found]

        sizes[i] = found

        if fill:
            out[starts[i]:starts[i] + found] = common[:found]

    return sizes


def _subset_columns(r: int, s: int) -> np.ndarray:
    """Column positions of the r-subsets of a row of ``s`` vertices."""
    return np.array(list(itertools.combinations(range(s), r)),
                    dtype=np.int64).reshape(-1, r)


def _subset_indices(rows: np.ndarray, tbl: table.CliqueTable,
                    r: int, s: int) -> np.ndarray:
    """Table index of every r-subset of every s-clique of ``rows``.

    Rows list vertices in rank order.

    Raises
    ------
    InvariantViolation
        If some r-subset is missing from ``tbl``.
    """
    columns = _subset_columns(r, s)
    idx = tbl.lookup_subsets(rows, columns)

    if np.any(idx < 0):
        row, col = np.argwhere(idx < 0)[0]
        raise InvariantViolation(
            "r-clique {0} of s-clique {1} is not in the table.".format(
                tuple(rows[row, columns[col]].tolist()),
                tuple(rows[row].tolist())))

    return idx


def count_phase(g: graph.UndirectedGraph,
                dg: graph.DirectedGraph,
                r: int,
                s: int,
                tbl: table.CliqueTable,
                threads: t.Optional[int] = 1,
                fixed: t.Optional[FixedPoint] = None) -> None:
    """Add ``L`` to every r-subset of every s-clique.

    Raises
    ------
    InvariantViolation
        If some r-subset of an s-clique is missing from ``tbl``.
    """
    # pylint: disable=W0613
    scale = (fixed or FixedPoint(r, s)).scale

    with num_threads(threads):
        rows = dg.order[listing.clique_rows(dg, s)]
        idx = _subset_indices(rows, tbl, r, s)

    tbl.counts += scale * np.bincount(idx.ravel(),
                                      minlength=tbl.total_cliques)


def _destroyed(g: graph.UndirectedGraph,
               dg: graph.DirectedGraph,
               peeled: np.ndarray,
               tbl: table.CliqueTable,
               r: int,
               s: int) -> np.ndarray:
    """Every s-clique containing a peeled r-clique, once per such subset.

    Rows list vertices in rank order.
    """
    cliques = tbl.vertices_many(peeled)
    sizes = _common_neighbors(g.offsets, g.neighbors, cliques,
                              np.empty(0, dtype=np.int64),
                              np.zeros(len(cliques) + 1, dtype=np.int64),
                              False)
    cand_ptr = exclusive_sum(sizes)
    common = np.empty(cand_ptr[-1], dtype=np.int64)
    _common_neighbors(g.offsets, g.neighbors, cliques, common, cand_ptr,
                      True)

    # Candidates of every peeled clique, in rank space and sorted.
    cand_rank = dg.rank[common]
    owner = np.repeat(np.arange(len(cliques), dtype=np.int64), sizes)
    cand_flat = cand_rank[np.lexsort((cand_rank, owner))]

    prefixes = np.sort(dg.rank[cliques], axis=1)
    rows = listing.extend_rows(dg, prefixes, cand_flat, cand_ptr, s - r)

    return dg.order[np.sort(rows, axis=1)]


def update_round(g: graph.UndirectedGraph,
                 dg: graph.DirectedGraph,
                 peeled: np.ndarray,
                 tbl: table.CliqueTable,
                 state: PeelState,
                 agg: aggregation.UpdateAggregator,
                 r: int,
                 s: int,
                 fixed: t.Optional[FixedPoint] = None,
                 threads: t.Optional[int] = 1,
                 trace: t.Optional[PeelTrace] = None) -> np.ndarray:
    """Discount the s-cliques destroyed by peeling ``peeled``.

    Every s-clique containing some peeled r-clique ``R`` is listed from
    the common neighbors of ``R``. It is skipped if one of its r-subsets
    was peeled in an earlier round. Otherwise, with ``a`` of its subsets
    being peeled now, each surviving subset loses ``L / a`` and is claimed
    into the aggregator.

    Returns
    -------
    :obj:`np.ndarray`
        Sorted indices of the r-cliques whose count changed.
    """
    fixed = fixed or FixedPoint(r, s)

    with num_threads(threads):
        rows = _destroyed(g, dg, np.asarray(peeled, dtype=np.int64), tbl,
                          r, s)
        idx = _subset_indices(rows, tbl, r, s)

        statuses = state.status[idx]
        live = ~np.any(statuses == PEELED, axis=1)
        shares = fixed.scale // np.count_nonzero(
            statuses[live] == PEELING, axis=1)

        survivors = statuses[live] == UNPEELED
        touched = idx[live][survivors]
        tbl.add_counts(touched,
                       -np.broadcast_to(shares[:, np.newaxis],
                                        survivors.shape)[survivors])
        agg.claim_many(touched)

    if trace is not None:
        for clique, share in zip(rows[live].tolist(), shares.tolist()):
            trace.record(clique, share)

    changed = agg.finalize()
    counts = tbl.counts[changed]

    if np.any(counts < 0):
        raise InvariantViolation(
            "Negative s-clique count for r-clique {0}.".format(
                tbl.vertices_of(int(changed[np.argmax(counts < 0)]))))

    return changed


def run(ws: Workspace,
        verbose: bool = False,
        instrument: bool = False,
        corrupt_index: t.Optional[int] = None,
        suppress_warnings: bool = False) -> PeelResult:
    """Count s-cliques and peel the r-cliques of a prepared workspace.

    Parameters
    ----------
    instrument : :obj:`bool`, optional
        Record the per s-clique decrements and the extracted levels in
        :attr:`PeelResult.trace`.

    corrupt_index : :obj:`int`, optional
        Add one s-clique to this index after counting. Only useful to
        check that validation detects wrong results.
    """
    r, s, config, tbl = ws.r, ws.s, ws.config, ws.table
    fixed = FixedPoint(r, s)
    timings = dict(ws.timings)
    trace = PeelTrace(ws.labels) if instrument else None

    if verbose:
        print("Counting {0}-cliques...".format(s))

    _, timings["count"] = _internal.timeit(count_phase, ws.graph, ws.dg, r,
                                           s, tbl, config.threads, fixed)

    if corrupt_index is not None:
        tbl.add_count(corrupt_index, fixed.scale)

    def _peel() -> t.Tuple[np.ndarray, int]:
        state = PeelState(tbl.total_cliques)
        counts = tbl.counts
        buckets = bucketing.init_buckets(fixed.whole(counts),
                                         impl=config.bucket,
                                         window=config.window,
                                         suppress_warnings=suppress_warnings)
        agg = aggregation.UpdateAggregator(config.aggregation,
                                           tbl.total_cliques,
                                           threads=config.threads,
                                           buffer_size=config.buffer_size)
        contraction = _Contraction(ws, state) if config.contract else None
        work = ws.graph
        rounds = 0

        while state.finished < tbl.total_cliques:
            level, peeled = buckets.next_bucket()
            rounds += 1
            state.begin(peeled, level)

            if verbose:
                print("Round {0}: k={1}, |A|={2}".format(
                    rounds, level, peeled.size))

            agg.begin_round(peeled.size, level, fixed.subsets - 1)
            changed = update_round(work, ws.dg, peeled, tbl, state, agg, r,
                                   s, fixed, config.threads, trace)
            state.end(peeled)

            buckets.update_buckets(
                zip(changed.tolist(), fixed.whole(counts[changed]).tolist()))

            if trace is not None:
                trace.levels.append(level)
                trace.rounds.append((level, peeled.size, changed.size))
                live = state.status != PEELED
                trace.misaligned += int(
                    np.count_nonzero(counts[live] % fixed.scale))

            if contraction is not None:
                work = contraction.step(work, peeled)

        if trace is not None and contraction is not None:
            trace.contractions = contraction.performed

        return state.core, rounds

    (core, rho), timings["peel"] = _internal.timeit(_peel)

    result_config = dict(config.as_dict(), r=r, s=s)
    return PeelResult(core, rho, timings, result_config, ws, trace)


class _Contraction:
    """Drops peeled edges from the working graph during (2, 3) peeling."""

    def __init__(self, ws: Workspace, state: PeelState) -> None:
        self.table = ws.table
        self.state = state
        self.loss = np.zeros(ws.graph.n, dtype=np.int64)
        self.threshold = ws.config.contract_edge_factor * ws.graph.n
        self.fraction = ws.config.contract_loss_fraction
        self.since_last = 0
        self.performed = 0

    def _alive(self, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
        idx = self.table.index_many(np.column_stack((src, dst)))
        alive = np.zeros(idx.size, dtype=bool)
        found = idx >= 0
        alive[found] = self.state.status[idx[found]] != PEELED
        return alive

    def step(self, work: graph.UndirectedGraph,
             peeled: np.ndarray) -> graph.UndirectedGraph:
        np.add.at(self.loss, self.table.vertices_many(peeled).ravel(), 1)
        self.since_last += peeled.size

        if self.since_last < self.threshold:
            return work

        rebuilt = graph.contraction_candidates(work, self.loss,
                                               self.fraction)
        work = graph.contract(work, self._alive, self.loss, self.fraction)
        self.loss[rebuilt] = 0
        self.since_last = 0
        self.performed += 1

        return work


def nucleus_decomposition(g: graph.UndirectedGraph,
                          r: int,
                          s: int,
                          config: t.Optional[PeelConfig] = None,
                          verbose: bool = False,
                          instrument: bool = False,
                          corrupt_index: t.Optional[int] = None,
                          suppress_warnings: bool = False,
                          **kwargs) -> PeelResult:
    """(r, s) nucleus decomposition of ``g``.

    Every r-clique gets the largest ``c`` such that it belongs to a
    subgraph in which each r-clique lies in at least ``c`` s-cliques.

    Parameters
    ----------
    g : :obj:`UndirectedGraph`
        Input graph.

    r, s : :obj:`int`
        Clique sizes, ``1 <= r < s``.

    config : :obj:`PeelConfig`, optional
        Tunables. Keyword arguments are accepted as a shortcut and
        override the matching fields of ``config``.

    Returns
    -------
    :obj:`PeelResult`
    """
    config = config or PeelConfig()

    if kwargs:
        config = dataclasses.replace(config, **kwargs)

    ws = prepare(g, r, s, config, verbose=verbose,
                 suppress_warnings=suppress_warnings)

    return run(ws, verbose=verbose, instrument=instrument,
               corrupt_index=corrupt_index,
               suppress_warnings=suppress_warnings)
