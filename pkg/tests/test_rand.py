import math

import numpy as np
import pytest

from hadamard_ga import rand
from hadamard_ga.rand import RngStream, shuffle_column

from conftest import random_balanced


class TestDeterminism:
    def test_same_stream_same_sequence(self):
        a = RngStream(42, 0)
        b = RngStream(42, 0)
        assert [a.next_u64() for _ in range(50)] == [b.next_u64() for _ in range(50)]

    def test_different_ids_differ(self):
        a = RngStream(42, 0)
        b = RngStream(42, 1)
        assert [a.next_u64() for _ in range(8)] != [b.next_u64() for _ in range(8)]

    def test_counter_addressing_is_random_access(self):
        seq = [RngStream(7, 3).next_u64() for _ in range(10)]
        jumped = RngStream(7, 3, counter=5)
        assert [jumped.next_u64() for _ in range(5)] == seq[5:]

    def test_uniform_array_matches_scalar_draws(self):
        a = RngStream(99, 12)
        b = RngStream(99, 12)
        arr = a.uniform_array(1, 11, 1000)
        scalars = [b.uniform_int(1, 11) for _ in range(1000)]
        assert arr.tolist() == scalars

    def test_vectorized_keys_match_scalar_key(self):
        ids = np.array([0, 1, 2, 1 << 60, (1 << 64) - 1], dtype=np.uint64)
        keys = rand.stream_keys(5, ids)
        for sid, key in zip(ids, keys):
            assert int(key) == rand._stream_key(5, int(sid))

    def test_vectorized_words_match_scalar(self):
        key = rand._stream_key(5, 17)
        words = rand.stream_words(np.uint64(key), np.arange(20, dtype=np.uint64))
        stream = RngStream(5, 17)
        assert [int(w) for w in words] == [stream.next_u64() for _ in range(20)]


class TestUniformInt:
    def test_degenerate_range(self):
        s = RngStream(1)
        assert all(s.uniform_int(5, 5) == 5 for _ in range(10))

    def test_empty_range_raises(self):
        with pytest.raises(ValueError):
            RngStream(1).uniform_int(3, 2)

    def test_bounds_inclusive(self):
        s = RngStream(2)
        draws = s.uniform_array(1, 3, 10_000)
        assert draws.min() == 1 and draws.max() == 3

    def test_frequencies_within_five_sigma(self):
        # 10^5 draws over the 11 values of [1, 11]
        n = 100_000
        draws = RngStream(424242, 9).uniform_array(1, 11, n)
        p = 1 / 11
        sigma = math.sqrt(n * p * (1 - p))
        counts = np.bincount(draws, minlength=12)[1:]
        assert counts.sum() == n
        assert (np.abs(counts - n * p) <= 5 * sigma).all()


class TestPermutation:
    def test_is_permutation(self):
        perm = RngStream(3).permutation(100)
        assert sorted(perm.tolist()) == list(range(100))

    def test_uniform_over_s4(self):
        # chi-square over all 24 permutations of 4 elements,
        # 10^5 trials, 99% critical value for 23 dof is 41.64
        trials = 100_000
        counts = {}
        for i in range(trials):
            key = tuple(RngStream(777, i).permutation(4).tolist())
            counts[key] = counts.get(key, 0) + 1
        assert len(counts) == 24
        expected = trials / 24
        chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
        assert chi2 < 41.64


class TestShuffleColumn:
    def test_preserves_multiset_and_other_columns(self, np_rng):
        for trial in range(200):
            q = random_balanced(np_rng, 8)
            before = q.copy()
            col = int(np_rng.integers(1, 8))
            shuffle_column(q, col, RngStream(11, trial))
            assert sorted(q[:, col]) == sorted(before[:, col])
            others = [j for j in range(8) if j != col]
            assert np.array_equal(q[:, others], before[:, others])

    def test_all_plus_column_unchanged(self):
        q = np.ones((4, 4), dtype=np.int8)
        out = shuffle_column(q, 2, RngStream(5))
        assert (out == 1).all()

    def test_column_zero_rejected(self):
        q = np.ones((4, 4), dtype=np.int8)
        with pytest.raises(IndexError):
            shuffle_column(q, 0, RngStream(5))

    def test_column_out_of_range_rejected(self):
        q = np.ones((4, 4), dtype=np.int8)
        with pytest.raises(IndexError):
            shuffle_column(q, 4, RngStream(5))

    def test_balanced_arrangements_uniform(self):
        # column (+,+,-,-) has 6 distinct arrangements; chi-square with
        # 5 dof at 99% is 15.09; 6*10^4 seeded trials
        trials = 60_000
        counts = {}
        for i in range(trials):
            q = np.ones((4, 4), dtype=np.int8)
            q[0:2, 1] = -1
            shuffle_column(q, 1, RngStream(31337, i))
            key = tuple(q[:, 1].tolist())
            counts[key] = counts.get(key, 0) + 1
        assert len(counts) == 6
        expected = trials / 6
        chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
        assert chi2 < 15.09
