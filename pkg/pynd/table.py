"""Table of r-cliques with a per-clique s-clique count.

The table has ``levels`` levels. Every intermediate level is keyed by a
single vertex, and the last level holds linear probing hash tables keyed
by the remaining ``r - levels + 1`` vertices packed into one 64-bit word.
With two levels the first one is a plain array over the vertices; deeper
levels are sorted arrays of child ranks searched by bisection.

The index of an r-clique is the number of occupied last-level cells that
come before its cell when the last-level tables are laid end to end. It
does not depend on whether the tables share one memory block, and it is
dense on ``0..total_cliques - 1``.

Cells whose top bit is set are free. A free cell and the barrier cell
placed after every table (contiguous layout) store, in the remaining
bits, the id of the intermediate node that owns the table.

Lookups, inverse lookups and insertions run in compiled batch kernels.
"""
import typing as t
import dataclasses

import numba
import numpy as np
from numba.typed import List

from pynd import graph
from pynd import listing
from pynd._internal import (MASK64, hash_capacity, mix64,
                             process_generic_option)
from pynd._parallel import exclusive_sum, num_threads

EMPTY_FLAG = 1 << 63
"""Top bit marking a free cell."""

KEY_MASK = EMPTY_FLAG - 1

KEY_BITS = 63

_GOLDEN = 0x9E3779B97F4A7C15

_EMPTY = np.uint64(EMPTY_FLAG)

_KEY_MASK = np.uint64(KEY_MASK)

VERTEX_BYTES = 4

POINTER_BYTES = 8


class KeyCapacityError(ValueError):
    """Raised when packed last-level keys do not fit a machine word."""


class CliqueNotFoundError(KeyError):
    """Raised by :meth:`CliqueTable.index_of` for a non-clique."""


@dataclasses.dataclass(frozen=True)
class TableConfig:
    """Layout of a :class:`CliqueTable`.

    Attributes
    ----------
    levels : :obj:`int`
        Number of levels, at least 1 and at most ``r``.

    contiguous : :obj:`bool`
        Whether all last-level tables share one memory block.

    inverse_map : :obj:`str`
        Method used by :meth:`CliqueTable.vertices_of`, either ``binary``
        or ``pointer``. ``pointer`` requires a contiguous layout.

    seed : :obj:`int`
        Seed of the key hash function.
    """
    levels: int = 2
    contiguous: bool = True
    inverse_map: str = "pointer"
    seed: int = 0

    def __post_init__(self) -> None:
        if (isinstance(self.levels, bool) or not isinstance(self.levels, int)
                or self.levels < 1):
            raise ValueError('Invalid "levels" argument ({0}). '
                             "Expecting a positive integer.".format(
                                 self.levels))

        inverse_map = process_generic_option(self.inverse_map, "inverse")
        object.__setattr__(self, "inverse_map", inverse_map)

        if inverse_map == "pointer" and not self.contiguous:
            raise ValueError('"pointer" inverse map requires a contiguous '
                             'table. Use "binary" or contiguous=True.')




_TABLE_TYPE = numba.types.uint64[::1]


@numba.njit(cache=True)
def _pack(vertices: np.ndarray, bits: np.uint64) -> np.uint64:
    key = np.uint64(0)

    for v in vertices:
        key = (key << bits) | np.uint64(v)

    return key


@numba.njit(cache=True)
def _unpack(key: np.uint64, out: np.ndarray, bits: np.uint64,
            vmask: np.uint64) -> None:
    for j in range(out.size - 1, -1, -1):
        out[j] = np.int64(key & vmask)
        key = key >> bits


@numba.njit(cache=True)
def _lookup(vertices, split, rank, first_level, node_rank, node_off,
            child_ptr, child_off, tables, slot_index, slot_off, seed, bits):
    """Index of the clique ``vertices`` (given in rank order), or -1."""
    tid = 0

    if split == 1:
        tid = first_level[vertices[0]]

    elif split > 1:
        for depth in range(split):
            lo = child_ptr[child_off[depth] + tid]
            hi = child_ptr[child_off[depth] + tid + 1]
            base = node_off[depth]
            want = rank[vertices[depth]]
            pos = lo + np.searchsorted(node_rank[base + lo:base + hi], want)

            if pos == hi or node_rank[base + pos] != want:
                return -1

            tid = pos

    if tid < 0 or tid >= len(tables):
        return -1

    table = tables[tid]
    cap = table.size
    key = _pack(vertices[split:], bits)
    pos = np.int64(mix64(key ^ seed) & np.uint64(cap - 1))

    for _ in range(cap):
        cell = table[pos]

        if cell == key:
            return slot_index[slot_off[tid] + pos]

        if cell >= _EMPTY:
            return -1

        pos = (pos + 1) & (cap - 1)

    return -1


@numba.njit(cache=True, parallel=True)
def _lookup_rows(rows, split, rank, first_level, node_rank, node_off,
                 child_ptr, child_off, tables, slot_index, slot_off, seed,
                 bits):
    out = np.empty(rows.shape[0], dtype=np.int64)

    for i in numba.prange(rows.shape[0]):
        out[i] = _lookup(rows[i], split, rank, first_level, node_rank,
                         node_off, child_ptr, child_off, tables, slot_index,
                         slot_off, seed, bits)

    return out


@numba.njit(cache=True, parallel=True)
def _lookup_subsets(rows, combos, split, rank, first_level, node_rank,
                    node_off, child_ptr, child_off, tables, slot_index,
                    slot_off, seed, bits):
    num_rows = rows.shape[0]
    num_subsets, size = combos.shape
    out = np.empty((num_rows, num_subsets), dtype=np.int64)

    for i in numba.prange(num_rows):
        sub = np.empty(size, dtype=np.int64)

        for c in range(num_subsets):
            for j in range(size):
                sub[j] = rows[i, combos[c, j]]

            out[i, c] = _lookup(sub, split, rank, first_level, node_rank,
                                node_off, child_ptr, child_off, tables,
                                slot_index, slot_off, seed, bits)

    return out


@numba.njit(cache=True, parallel=True)
def _insert_tables(tables, keys, key_ptr, seed):
    """Insert ``keys[key_ptr[i]:key_ptr[i + 1]]``, in order, into table i."""
    for tid in numba.prange(len(tables)):
        table = tables[tid]
        cap = table.size

        for j in range(key_ptr[tid], key_ptr[tid + 1]):
            key = keys[j]
            pos = np.int64(mix64(key ^ seed) & np.uint64(cap - 1))

            while table[pos] < _EMPTY:
                pos = (pos + 1) & (cap - 1)

            table[pos] = key


@numba.njit(cache=True, parallel=True)
def _vertices_by_pointer(idx, cells, index_cell, node_vertex, node_parent,
                         node_off, split, width, bits, vmask):
    out = np.empty((idx.size, split + width), dtype=np.int64)

    for i in numba.prange(idx.size):
        pos = index_cell[idx[i]]
        _unpack(cells[pos], out[i, split:], bits, vmask)

        if split == 0:
            continue

        pos += 1
        while cells[pos] < _EMPTY:
            pos += 1

        node = np.int64(cells[pos] & _KEY_MASK)

        for depth in range(split - 1, -1, -1):
            out[i, depth] = node_vertex[node_off[depth] + node]
            node = node_parent[node_off[depth] + node]

    return out


@numba.njit(cache=True, parallel=True)
def _vertices_by_search(idx, prefix_sizes, tables, index_slot, slot_off,
                        node_vertex, node_prefix, node_off, prefix_off,
                        split, width, bits, vmask):
    out = np.empty((idx.size, split + width), dtype=np.int64)

    for i in numba.prange(idx.size):
        x = idx[i]
        tid = np.searchsorted(prefix_sizes, x, side="right") - 1
        key = tables[tid][index_slot[x] - slot_off[tid]]
        _unpack(key, out[i, split:], bits, vmask)

        for depth in range(split):
            bounds = node_prefix[prefix_off[depth]:prefix_off[depth + 1]]
            node = np.searchsorted(bounds, x, side="right") - 1
            out[i, depth] = node_vertex[node_off[depth] + node]

    return out


@numba.njit(cache=True)
def _scatter_add(counts: np.ndarray, idx: np.ndarray,
                 deltas: np.ndarray) -> None:
    for i in range(idx.size):
        counts[idx[i]] += deltas[i]


def _flatten(arrays: t.List[np.ndarray]) -> t.Tuple[np.ndarray, np.ndarray]:
    """Concatenation of ``arrays`` and the offset of each one."""
    offsets = exclusive_sum([len(arr) for arr in arrays])

    if not arrays:
        return np.zeros(0, dtype=np.int64), offsets

    return np.concatenate(arrays).astype(np.int64), offsets


def _unique_rows(rows: np.ndarray) -> t.Tuple[np.ndarray, np.ndarray]:
    """Sorted distinct rows and the position of every row among them."""
    if len(rows) == 0:
        return rows, np.zeros(0, dtype=np.int64)

    heads, inverse = np.unique(rows, axis=0, return_inverse=True)
    return heads, inverse.reshape(-1)


def pack_keys(vertices: np.ndarray, bits: int) -> np.ndarray:
    """Pack every row of ``vertices`` into a 64-bit key."""
    keys = np.zeros(len(vertices), dtype=np.uint64)
    shift = np.uint64(bits)

    for col in range(vertices.shape[1]):
        keys = (keys << shift) | vertices[:, col].astype(np.uint64)

    return keys


class CliqueTable:
    """Maps every r-clique of a graph to a dense index and a count.

    Build instances with :func:`build_table`.

    Attributes
    ----------
    r : :obj:`int`
        Clique size.

    levels : :obj:`int`
        Effective number of levels.

    total_cliques : :obj:`int`
        Number of stored r-cliques.

    prefix_sizes : :obj:`np.ndarray`
        Index of the first clique of every last-level table, followed by
        ``total_cliques``.

    counts : :obj:`np.ndarray`
        Fixed-point s-clique count of every index.
    """

    def __init__(self, n: int, r: int, config: TableConfig,
                 rank: t.Sequence[int]) -> None:
        self.n = n
        self.r = r
        self.config = config
        self.levels = 1 if r == 1 else config.levels
        self.split = self.levels - 1
        self.width = r - self.split
        self.bits = max((n - 1).bit_length(), 1)
        self.rank = np.asarray(rank, dtype=np.int64)
        self._order = np.argsort(self.rank, kind="stable")
        self._bits = np.uint64(self.bits)
        self._vmask = np.uint64((1 << self.bits) - 1)
        self._seed = np.uint64((config.seed * _GOLDEN) & MASK64)

        if self.width * self.bits > KEY_BITS:
            raise KeyCapacityError(
                "Packed keys of {0} vertices need {1} bits, but only {2} "
                "are available. Use more levels (got {3}).".format(
                    self.width, self.width * self.bits, KEY_BITS,
                    self.levels))

        # Intermediate nodes, one list entry per level.
        self.node_vertex = []  # type: t.List[np.ndarray]
        self.node_parent = []  # type: t.List[np.ndarray]
        self.node_prefix = []  # type: t.List[np.ndarray]
        self._first_level = np.full(n, -1, dtype=np.int64)

        self.capacity = np.zeros(0, dtype=np.int64)
        self.table_start = np.zeros(0, dtype=np.int64)
        self.prefix_sizes = np.zeros(1, dtype=np.int64)
        self.cells = np.zeros(0, dtype=np.uint64)
        self._views = []  # type: t.List[np.ndarray]
        self._tables = List.empty_list(_TABLE_TYPE)

        self.total_cliques = 0
        self.counts = np.zeros(0, dtype=np.int64)

    def __len__(self) -> int:
        return self.total_cliques

    def __repr__(self) -> str:
        return ("CliqueTable(r={0}, levels={1}, total_cliques={2}, "
                "contiguous={3})".format(self.r, self.levels,
                                         self.total_cliques,
                                         self.config.contiguous))

    @property
    def num_tables(self) -> int:
        return len(self._views)

    def table_cells(self, tid: int) -> np.ndarray:
        """Cells of the last-level table ``tid``, barrier excluded."""
        return self._views[tid]

    def _layout(self, heads: np.ndarray, occupancy: np.ndarray) -> None:
        """Create intermediate nodes and empty last-level tables.

        Row ``i`` of ``heads`` holds the ranks of the vertices shared by
        the cliques of table ``i``. Rows must be sorted, so that every node
        covers a contiguous range of indices.
        """
        occupancy = np.asarray(occupancy, dtype=np.int64)
        self.prefix_sizes = exclusive_sum(occupancy)
        self.total_cliques = int(self.prefix_sizes[-1])

        node_rank, child_ptr = [], []
        parent_of_table = np.zeros(len(occupancy), dtype=np.int64)
        num_parents = 1

        for depth in range(self.split):
            nodes, node_of_table = _unique_rows(heads[:, :depth + 1])
            parents = np.full(len(nodes), -1, dtype=np.int64)

            if depth:
                parents[node_of_table] = parent_of_table
                child_ptr.append(np.searchsorted(
                    parents, np.arange(num_parents + 1)))

            else:
                child_ptr.append(np.array([0, len(nodes)]))

            first_table = np.searchsorted(node_of_table,
                                          np.arange(len(nodes)))
            self.node_prefix.append(np.append(
                self.prefix_sizes[first_table], self.total_cliques))
            self.node_vertex.append(self._order[nodes[:, depth]])
            self.node_parent.append(parents)
            node_rank.append(nodes[:, depth])

            parent_of_table = node_of_table
            num_parents = len(nodes)

        if self.split == 1:
            self._first_level[self.node_vertex[0]] = np.arange(
                len(self.node_vertex[0]), dtype=np.int64)

        self._node_rank, self._node_off = _flatten(node_rank)
        self._child_ptr, self._child_off = _flatten(child_ptr)
        self._node_vertex, _ = _flatten(self.node_vertex)
        self._node_parent, _ = _flatten(self.node_parent)
        self._node_prefix, self._prefix_off = _flatten(self.node_prefix)

        self.capacity = np.asarray(
            [hash_capacity(occ) for occ in occupancy.tolist()],
            dtype=np.int64)
        self._slot_off = exclusive_sum(self.capacity)
        owner = np.arange(len(occupancy), dtype=np.uint64) | _EMPTY

        if self.config.contiguous:
            self.table_start = (self._slot_off[:-1] +
                                np.arange(len(occupancy), dtype=np.int64))
            self.cells = np.repeat(owner, self.capacity + 1)
            self._views = [
                self.cells[start:start + cap] for start, cap in zip(
                    self.table_start.tolist(), self.capacity.tolist())
            ]

        else:
            self._views = [
                np.full(cap, cell, dtype=np.uint64)
                for cap, cell in zip(self.capacity.tolist(), owner)
            ]

        for cells in self._views:
            self._tables.append(cells)

        self.counts = np.zeros(self.total_cliques, dtype=np.int64)

    def _finalize(self) -> None:
        """Map occupied cells to indices and back."""
        if self._views:
            flat = np.concatenate(self._views)

        else:
            flat = np.zeros(0, dtype=np.uint64)

        occupied = flat < _EMPTY
        self._slot_index = np.where(occupied, np.cumsum(occupied) - 1, -1)
        self._index_slot = np.flatnonzero(occupied)

        owner = np.repeat(np.arange(self.num_tables, dtype=np.int64),
                          np.diff(self.prefix_sizes))
        self._index_cell = self._index_slot + owner

        self._lookup_args = (self.split, self.rank, self._first_level,
                             self._node_rank, self._node_off,
                             self._child_ptr, self._child_off, self._tables,
                             self._slot_index, self._slot_off, self._seed,
                             self._bits)

    def _check_index(self, idx: int) -> int:
        idx = int(idx)

        if not 0 <= idx < self.total_cliques:
            raise IndexError("Clique index {0} out of range [0, {1}).".format(
                idx, self.total_cliques))

        return idx

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        """Index of every row of vertices given in rank order (-1 if none)."""
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        return _lookup_rows(rows, *self._lookup_args)

    def lookup_subsets(self, rows: np.ndarray,
                       combos: np.ndarray) -> np.ndarray:
        """Index of the r-subset ``rows[i, combos[j]]`` at ``[i, j]``.

        Rows list vertices in rank order and every row of ``combos`` is an
        increasing tuple of ``r`` column positions. Missing subsets get -1.
        """
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        combos = np.ascontiguousarray(combos, dtype=np.int64)
        return _lookup_subsets(rows, combos, *self._lookup_args)

    def index_many(self, cliques: np.ndarray) -> np.ndarray:
        """Like :meth:`lookup` for rows of vertices in any order."""
        cliques = np.asarray(cliques, dtype=np.int64)
        by_rank = np.argsort(self.rank[cliques], axis=1, kind="stable")
        return self.lookup(np.take_along_axis(cliques, by_rank, axis=1))

    def index_of(self, clique: t.Sequence[int]) -> int:
        """Index of the r-clique ``clique``.

        The vertices may be given in any order.

        Raises
        ------
        CliqueNotFoundError
            If ``clique`` is not an r-clique stored in the table.
        """
        clique = tuple(clique)

        if (len(clique) != self.r or len(set(clique)) != self.r or not all(
                isinstance(v, (int, np.integer)) and 0 <= v < self.n
                for v in clique)):
            raise CliqueNotFoundError(clique)

        idx = int(self.index_many(np.array([clique]))[0])

        if idx < 0:
            raise CliqueNotFoundError(clique)

        return idx

    def vertices_many(self, idx: np.ndarray) -> np.ndarray:
        """Vertices (in rank order) of every index of ``idx``, one per row.

        Raises
        ------
        IndexError
            If some index is not in ``0..total_cliques - 1``.
        """
        idx = np.ascontiguousarray(idx, dtype=np.int64)

        if idx.size and (idx.min() < 0 or idx.max() >= self.total_cliques):
            bad = idx[(idx < 0) | (idx >= self.total_cliques)][0]
            self._check_index(bad)

        if self.config.inverse_map == "pointer":
            return _vertices_by_pointer(idx, self.cells, self._index_cell,
                                        self._node_vertex, self._node_parent,
                                        self._node_off, self.split,
                                        self.width, self._bits, self._vmask)

        return _vertices_by_search(idx, self.prefix_sizes, self._tables,
                                   self._index_slot, self._slot_off,
                                   self._node_vertex, self._node_prefix,
                                   self._node_off, self._prefix_off,
                                   self.split, self.width, self._bits,
                                   self._vmask)

    def vertices_of(self, idx: int) -> t.Tuple[int, ...]:
        """Vertices (in rank order) of the r-clique with index ``idx``.

        Raises
        ------
        IndexError
            If ``idx`` is not in ``0..total_cliques - 1``.
        """
        idx = self._check_index(idx)
        return tuple(self.vertices_many(np.array([idx]))[0].tolist())

    def add_count(self, idx: int, delta: int) -> int:
        """Add ``delta`` to the count of ``idx``; returns the old count."""
        idx = self._check_index(idx)
        old = int(self.counts[idx])
        self.counts[idx] = old + delta
        return old

    def add_counts(self, idx: np.ndarray, deltas: np.ndarray) -> None:
        """Add ``deltas[i]`` to the count of ``idx[i]``, repeats included."""
        _scatter_add(self.counts, np.ascontiguousarray(idx, dtype=np.int64),
                     np.ascontiguousarray(deltas, dtype=np.int64))

    def get_count(self, idx: int) -> int:
        return int(self.counts[self._check_index(idx)])

    def cliques(self) -> t.Iterator[t.Tuple[int, t.Tuple[int, ...]]]:
        """Iterate over ``(index, vertices)`` pairs."""
        rows = self.vertices_many(np.arange(self.total_cliques))
        for idx, vertices in enumerate(rows.tolist()):
            yield idx, tuple(vertices)

    def memory_report(self) -> t.Dict[str, t.Any]:
        """Key and pointer storage of the table.

        One unit is one vertex or one pointer. The one-level table stores
        ``r`` vertices per clique; the two-level table stores one pointer
        per vertex plus ``r - 1`` vertices per clique. Deeper tables store
        a vertex and a pointer per intermediate entry, and last-level keys
        made of a single vertex keep a pointer to their owner. Bytes count
        4 per vertex and 8 per pointer.
        """
        total = self.total_cliques
        entries = [len(vertices) for vertices in self.node_vertex]

        if self.levels == 1:
            vertex_units, pointer_units = self.r * total, 0

        elif self.levels == 2:
            vertex_units, pointer_units = (self.r - 1) * total, self.n

        else:
            vertex_units = sum(entries) + self.width * total
            pointer_units = sum(entries) + (total if self.width == 1 else 0)

        return {
            "levels": self.levels,
            "total_cliques": total,
            "key_units": vertex_units + pointer_units,
            "key_memory_bytes": (VERTEX_BYTES * vertex_units +
                                 POINTER_BYTES * pointer_units),
            "slots_per_level": entries + [total],
            "capacity": int(self.capacity.sum()) + (
                self.num_tables if self.config.contiguous else 0),
            "tables": self.num_tables,
        }




def build_table(g: graph.UndirectedGraph,
                dg: graph.DirectedGraph,
                r: int,
                config: t.Optional[TableConfig] = None,
                threads: t.Optional[int] = 1) -> CliqueTable:
    """Build the table of all r-cliques of ``g``.

    The r-cliques are listed in rank space and grouped by their first
    ``levels - 1`` vertices, one last-level table per group. Keys are
    inserted table by table in ascending order, so indices do not depend
    on the number of threads.

    Raises
    ------
    ValueError
        If ``r < 1`` or ``config.levels > r`` (for ``r > 1``).
    KeyCapacityError
        If packed last-level keys exceed 63 bits.
    """
    if isinstance(r, bool) or not isinstance(r, int) or r < 1:
        raise ValueError('Invalid "r" argument ({0}). '
                         "Expecting an integer >= 1.".format(r))

    if config is None:
        config = TableConfig(levels=min(2, r))

    if r > 1 and config.levels > r:
        raise ValueError('Invalid "levels" argument ({0}). Expecting an '
                         'integer in [1, r={1}].'.format(config.levels, r))

    tbl = CliqueTable(g.n, r, config, dg.rank)
    split = tbl.split

    with num_threads(threads):
        rows = listing.clique_rows(dg, r)

        if split:
            heads, table_of = _unique_rows(rows[:, :split])

        else:
            heads = np.zeros((min(len(rows), 1), 0), dtype=np.int64)
            table_of = np.zeros(len(rows), dtype=np.int64)

        occupancy = np.bincount(table_of, minlength=len(heads))
        keys = pack_keys(dg.order[rows[:, split:]], tbl.bits)
        by_table = np.lexsort((keys, table_of))

        tbl._layout(heads, occupancy)
        _insert_tables(tbl._tables, keys[by_table],
                       exclusive_sum(occupancy), tbl._seed)
        tbl._finalize()

    return tbl
