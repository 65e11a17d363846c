import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hadamard_ga import core

from conftest import oracle_f1, oracle_f2, oracle_gram, parse_block, random_balanced

ALL_ONES_4 = np.ones((4, 4), dtype=np.int8)

H4 = parse_block(
    """
    ++++
    +-+-
    ++--
    +--+
    """
)

# 4x4 reference case with one non-orthogonal column pair; Gram values were
# computed with the per-pair dot-product oracle and frozen here.
KNOWN_CASE = parse_block(
    """
    -+++
    -+--
    +-+-
    +--+
    """
)
KNOWN_CASE_GRAM = [[4, -4, 0, 0], [-4, 4, 0, 0], [0, 0, 4, 0], [0, 0, 0, 4]]


class TestAsSignMatrix:
    def test_accepts_lists(self):
        q = core.as_sign_matrix([[1, -1], [-1, 1]])
        assert q.dtype == np.int8

    def test_rejects_zero_entries(self):
        with pytest.raises(ValueError, match="entries"):
            core.as_sign_matrix([[1, 0], [1, 1]])

    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            core.as_sign_matrix(np.ones((2, 3), dtype=np.int8))

    def test_rejects_magnitudes(self):
        with pytest.raises(ValueError):
            core.as_sign_matrix([[2, 1], [1, 1]])


class TestGram:
    def test_all_ones(self):
        assert (core.gram(ALL_ONES_4) == 4).all()

    def test_sylvester_h4_is_diagonal(self):
        assert np.array_equal(core.gram(H4), 4 * np.eye(4, dtype=np.int32))

    def test_known_case_matches_frozen_oracle_values(self):
        g = core.gram(KNOWN_CASE)
        assert g.tolist() == KNOWN_CASE_GRAM
        assert oracle_gram(KNOWN_CASE) == KNOWN_CASE_GRAM

    def test_matches_oracle_on_random_balanced(self, np_rng):
        for _ in range(20):
            q = random_balanced(np_rng, 12)
            assert core.gram(q).tolist() == oracle_gram(q)

    def test_symmetry_and_diagonal(self, np_rng):
        for order in (4, 8, 12, 16, 20):
            q = random_balanced(np_rng, order)
            g = core.gram(q)
            assert np.array_equal(g, g.T)
            assert (np.diag(g) == order).all()


class TestFitness:
    def test_all_ones_values(self):
        assert core.fitness_f1(ALL_ONES_4) == 48
        assert core.fitness_f2(ALL_ONES_4) == 12

    def test_hadamard_is_zero(self):
        assert core.fitness_f1(H4) == 0
        assert core.fitness_f2(H4) == 0

    def test_known_case(self):
        assert core.fitness_f2(KNOWN_CASE) == oracle_f2(KNOWN_CASE) == 2
        assert core.fitness_f1(KNOWN_CASE) == oracle_f1(KNOWN_CASE) == 8

    def test_matches_oracles_on_random_balanced(self, np_rng):
        for _ in range(20):
            q = random_balanced(np_rng, 12)
            assert core.fitness_f1(q) == oracle_f1(q)
            assert core.fitness_f2(q) == oracle_f2(q)

    def test_row_permutation_preserves_gram(self, np_rng):
        q = random_balanced(np_rng, 12)
        perm = np_rng.permutation(12)
        assert np.array_equal(core.gram(q), core.gram(q[perm]))

    def test_row_negation_preserves_abs_gram_and_fitness(self, np_rng):
        q = random_balanced(np_rng, 12)
        flipped = q.copy()
        flipped[3] *= -1
        assert np.array_equal(np.abs(core.gram(q)), np.abs(core.gram(flipped)))
        assert core.fitness_f1(q) == core.fitness_f1(flipped)
        assert core.fitness_f2(q) == core.fitness_f2(flipped)


@settings(max_examples=200, deadline=None)
@given(order=st.sampled_from([4, 8, 12, 16, 20]), seed=st.integers(0, 2**31))
def test_fitness_properties(order, seed):
    rng = np.random.default_rng(seed)
    q = random_balanced(rng, order)
    f1 = core.fitness_f1(q)
    f2 = core.fitness_f2(q)
    assert f1 >= 0 and f2 >= 0
    assert f2 <= f1
    assert (f1 == 0) == (f2 == 0) == core.is_hadamard(q)


class TestIsHadamard:
    def test_sylvester_h4(self):
        assert core.is_hadamard(H4)

    def test_all_ones_is_not(self):
        assert not core.is_hadamard(ALL_ONES_4)

    def test_sylvester_h8(self):
        h8 = core.sylvester(3)
        assert core.is_hadamard(h8)
        # cross-check with the independent oracle
        g = oracle_gram(h8)
        assert all(g[i][j] == (8 if i == j else 0) for i in range(8) for j in range(8))

    def test_orders_one_and_two(self):
        assert core.is_hadamard([[1]])
        assert core.is_hadamard([[1, 1], [1, -1]])


class TestSylvester:
    def test_power_zero(self):
        assert core.sylvester(0).tolist() == [[1]]

    def test_power_one(self):
        assert core.sylvester(1).tolist() == [[1, 1], [1, -1]]

    def test_power_five_is_hadamard(self):
        h = core.sylvester(5)
        assert h.shape == (32, 32)
        assert core.is_hadamard(h)

    def test_all_powers_within_cap(self):
        for power in range(11):
            assert core.is_hadamard(core.sylvester(power))

    def test_cap_exceeded(self):
        with pytest.raises(ValueError, match="size limit"):
            core.sylvester(11)

    def test_negative_power(self):
        with pytest.raises(ValueError):
            core.sylvester(-1)


class TestIsBalanced:
    def test_fresh_balanced(self, np_rng):
        assert core.is_balanced(random_balanced(np_rng, 8))

    def test_all_ones_is_not(self):
        assert not core.is_balanced(ALL_ONES_4)

    def test_wrong_order(self):
        assert not core.is_balanced(core.sylvester(1))
