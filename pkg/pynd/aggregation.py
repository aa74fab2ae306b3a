"""Collection of the r-cliques whose counts changed in a peeling round.

Three strategies are available:

    1. ``array``: a single shared cursor reserves one slot per claim.

    2. ``list-buffer``: every partition reserves blocks of ``buffer_size``
       slots at once and fills them privately; unused slots are filtered
       out when the round is finalized.

    3. ``hash``: a hash set sized for the round, from the number of
       peeled cliques and their counts, cleared every round.

In every strategy a clique is claimed by its first toucher only. Claims
come in batches. ``list-buffer`` and ``hash`` split a batch into
``threads`` partitions by ``idx % threads`` and claim the partitions in
parallel; a clique always falls in the same partition, so no two threads
ever write the same stamp, slot or hash segment.
"""
import typing as t

import numba
import numpy as np

from pynd import _internal
from pynd._internal import mix64
from pynd._parallel import exclusive_sum


@numba.njit(cache=True)
def _claim_array(ids: np.ndarray, stamps: np.ndarray, round_: int,
                 slots: np.ndarray, cursor: int) -> t.Tuple[np.ndarray, int]:
    won = np.zeros(ids.size, dtype=np.bool_)

    for j in range(ids.size):
        idx = ids[j]

        if stamps[idx] != round_:
            stamps[idx] = round_
            slots[cursor] = idx
            cursor += 1
            won[j] = True

    return won, cursor


@numba.njit(cache=True, parallel=True)
def _claim_blocks(ids: np.ndarray, seg_ptr: np.ndarray, stamps: np.ndarray,
                  round_: int, slots: np.ndarray,
                  region: np.ndarray) -> np.ndarray:
    won = np.zeros(ids.size, dtype=np.bool_)

    for part in numba.prange(seg_ptr.size - 1):
        pos = region[part]

        for j in range(seg_ptr[part], seg_ptr[part + 1]):
            idx = ids[j]

            if stamps[idx] != round_:
                stamps[idx] = round_
                slots[pos] = idx
                pos += 1
                won[j] = True

    return won


@numba.njit(cache=True, parallel=True)
def _claim_segments(ids: np.ndarray, seg_ptr: np.ndarray, table: np.ndarray,
                    seg_cap: int, fill: np.ndarray) -> np.ndarray:
    won = np.zeros(ids.size, dtype=np.bool_)
    mask = seg_cap - 1

    for part in numba.prange(seg_ptr.size - 1):
        base = part * seg_cap

        for j in range(seg_ptr[part], seg_ptr[part + 1]):
            idx = ids[j]
            pos = np.int64(mix64(np.uint64(idx)) & np.uint64(mask))

            while table[base + pos] != -1 and table[base + pos] != idx:
                pos = (pos + 1) & mask

            if table[base + pos] == -1:
                table[base + pos] = idx
                fill[part] += 1
                won[j] = True

    return won


class UpdateAggregator:
    """Round-scoped set ``U`` of r-clique indices.

    Parameters
    ----------
    strategy : :obj:`str`
        One of ``array``, ``list-buffer`` or ``hash``.

    capacity : :obj:`int`
        Number of r-cliques, an upper bound for the size of ``U``.

    threads : :obj:`int`, optional
        Number of partitions claimed in parallel.

    buffer_size : :obj:`int`, optional
        Block size of the ``list-buffer`` strategy.
    """

    def __init__(self,
                 strategy: str,
                 capacity: int,
                 threads: int = 1,
                 buffer_size: int = _internal.DEFAULT_BUFFER_SIZE) -> None:
        self.strategy = _internal.process_generic_option(
            strategy, "aggregation")
        self.capacity = capacity
        self.threads = max(threads, 1)
        self.buffer_size = _internal.check_positive_int(
            buffer_size, "buffer_size")
        self.round = -1

        self._cursor = 0
        self._stamps = np.zeros(0, dtype=np.int64)
        self._slots = np.zeros(0, dtype=np.int64)
        self._set = np.zeros(0, dtype=np.int64)
        self._fill = np.zeros(self.threads, dtype=np.int64)
        self._seg_cap = 1

        if self.strategy != "hash":
            self._stamps = np.full(capacity, -1, dtype=np.int64)
            extra = 0
            if self.strategy == "list-buffer":
                extra = (self.threads + 1) * self.buffer_size

            self._slots = np.full(capacity + extra, -1, dtype=np.int64)

    def begin_round(self, num_peeled: int = 0, level: int = 0,
                    fanout: int = 1) -> None:
        """Start a round where ``num_peeled`` cliques of count ``level``
        are peeled, each s-clique touching at most ``fanout`` others."""
        self.round += 1
        self._cursor = 0

        if self.strategy == "hash":
            bound = min(self.capacity, num_peeled * level * fanout)
            self._reset_set(_internal.hash_capacity(
                -(-bound // self.threads) + 1))

    def _reset_set(self, seg_cap: int) -> None:
        self._seg_cap = seg_cap
        self._set = np.full(self.threads * seg_cap, -1, dtype=np.int64)
        self._fill = np.zeros(self.threads, dtype=np.int64)

    def _partition(self, ids: np.ndarray
                   ) -> t.Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Group ``ids`` by owner partition, keeping their order."""
        owner = ids % self.threads
        order = np.argsort(owner, kind="stable")
        seg_ptr = exclusive_sum(np.bincount(owner, minlength=self.threads))
        return order, ids[order], seg_ptr

    def claim_many(self, ids: np.ndarray) -> np.ndarray:
        """Record every index of ``ids`` unless already claimed this round.

        Returns a boolean mask over ``ids``, True where the index was
        claimed: only at the first occurrence of a new index.
        """
        ids = np.ascontiguousarray(ids, dtype=np.int64)

        if self.strategy == "array":
            won, self._cursor = _claim_array(ids, self._stamps, self.round,
                                             self._slots, self._cursor)
            return won

        order, grouped, seg_ptr = self._partition(ids)
        seg_len = np.diff(seg_ptr)

        if self.strategy == "list-buffer":
            blocks = -(-seg_len // self.buffer_size)
            region = self._cursor + exclusive_sum(blocks * self.buffer_size)
            self._reserve(int(region[-1]))
            won = _claim_blocks(grouped, seg_ptr, self._stamps, self.round,
                                self._slots, region)
            self._cursor = int(region[-1])

        else:
            need = self._fill + seg_len
            if (3 * need > 2 * self._seg_cap).any():
                self._rehash(_internal.hash_capacity(int(need.max()) + 1))

            won = _claim_segments(grouped, seg_ptr, self._set,
                                  self._seg_cap, self._fill)

        result = np.empty(ids.size, dtype=bool)
        result[order] = won
        return result

    def claim(self, idx: int) -> bool:
        """Record ``idx`` unless already claimed in this round.

        Returns True for the first caller only.
        """
        return bool(self.claim_many(np.array([idx]))[0])

    def _reserve(self, end: int) -> None:
        """Make room for slots up to ``end``."""
        if end > self._slots.size:
            self._slots = np.concatenate(
                (self._slots,
                 np.full(end - self._slots.size + self.capacity, -1,
                         dtype=np.int64)))

    def _rehash(self, seg_cap: int) -> None:
        claimed = self._set[self._set >= 0]
        self._reset_set(seg_cap)
        _, grouped, seg_ptr = self._partition(claimed)
        _claim_segments(grouped, seg_ptr, self._set, self._seg_cap,
                        self._fill)

    def finalize(self) -> np.ndarray:
        """Sorted, duplicate-free indices claimed in this round."""
        if self.strategy == "hash":
            return np.sort(self._set[self._set >= 0])

        used = self._slots[:self._cursor]

        if self.strategy == "list-buffer":
            claimed = used[used >= 0]
            used[:] = -1

        else:
            claimed = used.copy()

        return np.sort(claimed)


def aggregator_claim(agg: UpdateAggregator, idx: int) -> bool:
    return agg.claim(idx)
