"""Test module for the bucketing structures."""
import numpy as np
import pytest

from pynd import bucketing

GNAME = "bucketing"

IMPLS = ["open", "dense"]


def _drain(buckets):
    levels = []
    while not buckets.exhausted:
        k, ids = bucketing.next_bucket(buckets)
        levels.append((k, ids.tolist()))

    return levels


class TestBuckets:
    """TestClass dedicated to extraction and updates of buckets."""

    @pytest.mark.parametrize("impl", IMPLS)
    def test_example_initial_buckets(self, impl):
        # cdg; abf, aef, bef; nine triangles at 2; abe at 3.
        values = [0, 1, 1, 1, 3] + [2] * 9
        buckets = bucketing.init_buckets(values, impl=impl)

        assert bucketing.next_bucket(buckets)[0] == 0
        k, ids = bucketing.next_bucket(buckets)
        assert k == 1 and ids.tolist() == [1, 2, 3]

        bucketing.update_buckets(buckets, [(4, 2)])
        k, ids = bucketing.next_bucket(buckets)
        assert k == 2 and ids.tolist() == [4] + list(range(5, 14))
        assert buckets.exhausted

    @pytest.mark.parametrize("impl", IMPLS)
    def test_clamp_to_current_level(self, impl):
        buckets = bucketing.init_buckets([5, 7, 9], impl=impl)
        assert bucketing.next_bucket(buckets)[0] == 5

        bucketing.update_buckets(buckets, [(2, 1)])
        assert buckets.values[2] == 5

        k, ids = bucketing.next_bucket(buckets)
        assert k == 5 and ids.tolist() == [2]
        assert bucketing.next_bucket(buckets)[0] == 7

    @pytest.mark.parametrize("impl", IMPLS)
    def test_update_below_lowest_bucket(self, impl):
        buckets = bucketing.init_buckets([3, 4, 20], impl=impl, window=4)
        bucketing.update_buckets(buckets, [(0, 1)])

        assert _drain(buckets) == [(1, [0]), (4, [1]), (20, [2])]

    @pytest.mark.parametrize("impl", IMPLS)
    @pytest.mark.parametrize("seed", range(5))
    def test_random_monotone_and_complete(self, impl, seed):
        rng = np.random.default_rng(seed)
        values = rng.integers(0, 200, size=300)
        buckets = bucketing.init_buckets(values, impl=impl, window=4)
        reference = values.copy()
        extracted = []
        level = 0

        while not buckets.exhausted:
            k, ids = buckets.next_bucket()
            live = np.flatnonzero(reference >= 0)
            assert k == max(level, reference[live].min())
            assert ids.tolist() == np.flatnonzero(reference == k).tolist()

            level = k
            extracted.extend(ids.tolist())
            reference[ids] = -1

            live = np.flatnonzero(reference >= 0)
            if live.size:
                moved = rng.choice(live, size=min(10, live.size),
                                   replace=False)
                new_values = reference[moved] - rng.integers(0, 30,
                                                             moved.size)
                buckets.update_buckets(zip(moved, new_values))
                reference[moved] = np.maximum(new_values, level)

        assert sorted(extracted) == list(range(values.size))
        assert buckets.history == sorted(buckets.history)

    @pytest.mark.parametrize("window", [1, 4, 64])
    @pytest.mark.parametrize("seed", range(4))
    def test_open_and_dense_agree(self, window, seed):
        rng = np.random.default_rng(seed)
        values = rng.integers(0, 120, size=200)
        open_ = bucketing.init_buckets(values, impl="open", window=window)
        dense = bucketing.init_buckets(values, impl="dense")

        while not open_.exhausted:
            k, ids = open_.next_bucket()
            exp_k, exp_ids = dense.next_bucket()
            assert k == exp_k
            assert ids.tolist() == exp_ids.tolist()

            live = np.flatnonzero(~open_.extracted)
            if live.size:
                moved = rng.choice(live, size=min(8, live.size),
                                   replace=False)
                updates = list(zip(
                    moved.tolist(),
                    (open_.values[moved] -
                     rng.integers(-5, 40, moved.size)).tolist()))
                open_.update_buckets(updates)
                dense.update_buckets(updates)

        assert dense.exhausted
        assert open_.history == dense.history

    @pytest.mark.parametrize("impl", IMPLS)
    def test_drain_order(self, impl):
        values = [4, 0, 4, 17, 2, 2, 50]
        assert _drain(bucketing.init_buckets(values, impl=impl)) == [
            (0, [1]), (2, [4, 5]), (4, [0, 2]), (17, [3]), (50, [6])]

    def test_open_window_overflow(self):
        buckets = bucketing.OpenBuckets([0, 100, 1000], window=2)
        assert _drain(buckets) == [(0, [0]), (100, [1]), (1000, [2])]

    @pytest.mark.parametrize("impl", IMPLS)
    def test_update_extracted(self, impl):
        buckets = bucketing.init_buckets([0, 1], impl=impl)
        bucketing.next_bucket(buckets)

        with pytest.raises(bucketing.ExtractedIdentifierError):
            bucketing.update_buckets(buckets, [(0, 3)])

    @pytest.mark.parametrize("impl", IMPLS)
    def test_exhausted(self, impl):
        buckets = bucketing.init_buckets([3], impl=impl)
        bucketing.next_bucket(buckets)

        with pytest.raises(bucketing.BucketsExhausted):
            bucketing.next_bucket(buckets)

    @pytest.mark.parametrize("impl", IMPLS)
    def test_empty(self, impl):
        buckets = bucketing.init_buckets([], impl=impl)
        assert buckets.exhausted and len(buckets) == 0

    def test_negative_values(self):
        with pytest.raises(ValueError):
            bucketing.init_buckets([1, -1])

    def test_invalid_impl(self):
        with pytest.raises(ValueError):
            bucketing.init_buckets([1], impl="sparse")

    def test_dense_range_warning(self):
        with pytest.warns(RuntimeWarning):
            bucketing.init_buckets([0, 10 ** 6], impl="dense")
