"""Bucketing structures grouping identifiers by their current value.

Two implementations are provided:

    1. ``open``: only a constant window of the lowest buckets is
       materialized; everything above it sits in an overflow bucket,
       which is re-bucketed when the window runs empty.

    2. ``dense``: one bucket per possible value, searched upwards from
       the last extracted bucket in regions of doubling width.

Both extract the same ``(k, A)`` sequence for the same inputs and
updates.
"""
import typing as t

import numpy as np

from pynd import _internal

DENSE_RANGE_FACTOR = 64
"""Dense buckets warn when the value range exceeds this many times the
number of identifiers."""


class BucketsExhausted(LookupError):
    """Raised by ``next_bucket`` once every identifier was extracted."""


class ExtractedIdentifierError(RuntimeError):
    """Raised when updating an identifier that was already extracted."""


class BucketStructure:
    """Base class of the bucketing structures.

    Attributes
    ----------
    values : :obj:`np.ndarray`
        Current bucket of every identifier.

    current_level : :obj:`int`
        Value of the last extracted bucket (0 before the first one).

    history : :obj:`list` of :obj:`int`
        Values of every extracted bucket, in extraction order.
    """

    impl = ""

    def __init__(self, values: t.Sequence[int]) -> None:
        self.values = np.array(values, dtype=np.int64).reshape(-1)

        if np.any(self.values < 0):
            raise ValueError("Bucket values must be non-negative.")

        self.extracted = np.zeros(self.values.size, dtype=bool)
        self.remaining = self.values.size
        self.current_level = 0
        self.history = []  # type: t.List[int]

    def __len__(self) -> int:
        return self.values.size

    @property
    def exhausted(self) -> bool:
        return self.remaining == 0

    def next_bucket(self) -> t.Tuple[int, np.ndarray]:
        """Extract the lowest non-empty bucket.

        Returns
        -------
        tuple(int, :obj:`np.ndarray`)
            The bucket value ``k`` and its identifiers, sorted.

        Raises
        ------
        BucketsExhausted
            If every identifier was already extracted.
        """
        if self.remaining == 0:
            raise BucketsExhausted("No identifiers left to extract.")

        k, ids = self._pop_min()
        ids = np.array(sorted(ids), dtype=np.int64)

        self.extracted[ids] = True
        self.remaining -= ids.size
        self.current_level = k
        self.history.append(k)

        return k, ids

    def update_buckets(self,
                       updates: t.Iterable[t.Tuple[int, int]]) -> None:
        """Move identifiers to ``max(new_value, current_level)``.

        Raises
        ------
        ExtractedIdentifierError
            If some identifier was already extracted.
        """
        for ident, new_value in updates:
            ident = int(ident)

            if self.extracted[ident]:
                raise ExtractedIdentifierError(
                    "Identifier {0} was extracted at an earlier "
                    "round.".format(ident))

            new_value = max(int(new_value), self.current_level)
            old_value = int(self.values[ident])

            if new_value != old_value:
                self.values[ident] = new_value
                self._move(ident, old_value, new_value)

    def _pop_min(self) -> t.Tuple[int, t.Iterable[int]]:
        raise NotImplementedError

    def _move(self, ident: int, old_value: int, new_value: int) -> None:
        raise NotImplementedError


class OpenBuckets(BucketStructure):
    """Bucketing with a window of ``window`` materialized buckets."""

    impl = "open"

    def __init__(self, values: t.Sequence[int],
                 window: int = _internal.DEFAULT_WINDOW) -> None:
        super().__init__(values)
        self.window_size = _internal.check_positive_int(window, "window")
        self.base = 0
        self.window = []  # type: t.List[t.Set[int]]
        self.overflow = set(range(self.values.size))
        self._advance()

    def _slot(self, value: int) -> t.Set[int]:
        offset = value - self.base

        if 0 <= offset < self.window_size:
            return self.window[offset]

        return self.overflow

    def _advance(self) -> None:
        """Re-bucket the overflow into a window starting at its minimum."""
        pending = self.overflow
        self.overflow = set()
        self.window = [set() for _ in range(self.window_size)]

        if pending:
            self.base = int(self.values[list(pending)].min())

        for ident in pending:
            self._slot(int(self.values[ident])).add(ident)

    def _pop_min(self) -> t.Tuple[int, t.Iterable[int]]:
        while True:
            for offset, bucket in enumerate(self.window):
                if bucket:
                    self.window[offset] = set()
                    return self.base + offset, bucket

            self._advance()

    def _move(self, ident: int, old_value: int, new_value: int) -> None:
        self._slot(old_value).discard(ident)
        self._slot(new_value).add(ident)

        if new_value < self.base:
            for bucket in self.window:
                self.overflow |= bucket

            self._advance()


class DenseBuckets(BucketStructure):
    """Bucketing with one bucket per possible value.

    The lowest non-empty bucket is searched from the previously popped
    bucket ``p`` in the regions ``[p + 2**i - 1, p + 2**(i + 1) - 1)``,
    each region scanned at once over the bucket sizes.
    """

    impl = "dense"

    def __init__(self, values: t.Sequence[int]) -> None:
        super().__init__(values)
        num_buckets = int(self.values.max(initial=0)) + 1
        self.sizes = np.bincount(self.values, minlength=num_buckets)
        self.buckets = [[] for _ in range(num_buckets)
                        ]  # type: t.List[t.List[int]]

        for ident, value in enumerate(self.values.tolist()):
            self.buckets[value].append(ident)

        self.last = 0

    def _find_min(self) -> int:
        start, lo, width = self.last, self.last, 1

        while lo < self.sizes.size:
            hi = min(start + 2 * width - 1, self.sizes.size)
            non_empty = np.flatnonzero(self.sizes[lo:hi])

            if non_empty.size:
                return lo + int(non_empty[0])

            lo, width = hi, 2 * width

        raise BucketsExhausted("No identifiers left to extract.")

    def _pop_min(self) -> t.Tuple[int, t.Iterable[int]]:
        k = self._find_min()
        # Lists may hold stale entries of identifiers that moved away.
        ids = {
            ident
            for ident in self.buckets[k]
            if not self.extracted[ident] and self.values[ident] == k
        }
        self.buckets[k] = []
        self.sizes[k] = 0
        self.last = k
        return k, ids

    def _move(self, ident: int, old_value: int, new_value: int) -> None:
        if new_value >= self.sizes.size:
            grow = new_value + 1 - self.sizes.size
            self.sizes = np.concatenate(
                (self.sizes, np.zeros(grow, dtype=self.sizes.dtype)))
            self.buckets.extend([] for _ in range(grow))

        self.sizes[old_value] -= 1
        self.sizes[new_value] += 1
        self.buckets[new_value].append(ident)


def init_buckets(values: t.Sequence[int],
                 impl: str = "open",
                 window: int = _internal.DEFAULT_WINDOW,
                 suppress_warnings: bool = False) -> BucketStructure:
    """Create a bucketing structure over the initial ``values``."""
    impl = _internal.process_generic_option(impl, "bucket")

    if impl == "dense":
        values = np.asarray(values, dtype=np.int64)
        value_range = int(values.max(initial=0)) + 1

        if value_range > DENSE_RANGE_FACTOR * max(values.size, 1):
            _internal.warn("Dense buckets allocate {0} buckets for {1} "
                           'identifiers. Consider the "open" '
                           "implementation.".format(value_range, values.size),
                           RuntimeWarning, suppress_warnings)

        return DenseBuckets(values)

    return OpenBuckets(values, window=window)


def next_bucket(buckets: BucketStructure) -> t.Tuple[int, np.ndarray]:
    return buckets.next_bucket()


def update_buckets(buckets: BucketStructure,
                   updates: t.Iterable[t.Tuple[int, int]]) -> None:
    buckets.update_buckets(updates)
