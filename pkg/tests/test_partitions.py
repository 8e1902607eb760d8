"""Tests for liblab.partitions: the partition lattice, chichi classes and Fibonacci weights."""
import itertools

import numpy as np
import pytest

from liblab.errors import CapacityError, ShapeError, ValidationError
from liblab.partitions import (
    PHI_MINUS,
    PHI_PLUS,
    FibonacciVariate,
    SetPartition,
    all_partitions,
    bell_number,
    block_product,
    chichi_indicator_table,
    chichi_table_check,
    clump,
    clump_classes,
    clump_equivalent,
    crude_bounds_check,
    distinct_sum_by_mobius,
    fibonacci_moment,
    fibonacci_weight,
    fibonacci_weight_monte_carlo,
    fibonacci_weight_reduced,
    in_part_chichi,
    mobius_inversion_check,
    mobius_zero,
    part_chi,
    part_chichi,
    partition_of_tuple,
    random_chichi_table,
    refinements,
    refines,
    sample_fibonacci_array,
    sum_over_refined,
)


class TestSetPartition:
    def test_bell_numbers(self):
        expected = [1, 1, 2, 5, 15, 52, 203, 877]
        assert [bell_number(ell) for ell in range(8)] == expected
        assert [len(all_partitions(ell)) for ell in range(8)] == expected

    def test_enumeration_is_unique(self):
        partitions = all_partitions(5)
        assert len(set(partitions)) == len(partitions)

    def test_enumeration_cap(self):
        with pytest.raises(CapacityError):
            all_partitions(11)

    def test_rejects_bad_rgs(self):
        with pytest.raises(ValidationError):
            SetPartition((1, 0))
        with pytest.raises(ValidationError):
            SetPartition((0, 2))

    def test_blocks_and_string(self):
        p = SetPartition.from_blocks([[1, 3], [2]])
        assert p.rgs == (0, 1, 0)
        assert p.blocks() == (frozenset({1, 3}), frozenset({2}))
        assert str(p) == "{{1,3},{2}}"
        assert p.block_of(3) == frozenset({1, 3})

    def test_from_blocks_rejects_gaps(self):
        with pytest.raises(ShapeError):
            SetPartition.from_blocks([[1], [3]])
        with pytest.raises(ValidationError):
            SetPartition.from_blocks([[1, 2], [2]])

    def test_partition_of_tuple(self):
        assert partition_of_tuple((5, 7, 5, 9)) == SetPartition((0, 1, 0, 2))

    def test_refines(self):
        bottom, top = SetPartition.minimal(3), SetPartition.maximal(3)
        middle = SetPartition((0, 0, 1))
        assert refines(bottom, middle) and refines(middle, top)
        assert not refines(top, middle)
        with pytest.raises(ShapeError):
            refines(bottom, SetPartition.minimal(4))

    def test_refinements_of_top_are_everything(self):
        assert len(set(refinements(SetPartition.maximal(4)))) == 15
        assert list(refinements(SetPartition.minimal(3))) == [SetPartition.minimal(3)]


class TestMobius:
    def test_values(self):
        assert mobius_zero(SetPartition.minimal(4)) == 1
        assert mobius_zero(SetPartition.maximal(4)) == -6
        assert mobius_zero(SetPartition((0, 0, 1, 1))) == 1

    @pytest.mark.parametrize("ell", range(1, 6))
    def test_inversion_holds(self, ell):
        assert mobius_inversion_check(ell)

    def test_inversion_detects_wrong_table(self):
        assert not mobius_inversion_check(3, lambda p: 0)

    def test_crude_bounds(self):
        assert all(crude_bounds_check(ell) for ell in range(1, 7))
        with pytest.raises(CapacityError):
            crude_bounds_check(9)


class TestSums:
    def test_sum_product_formula(self, generator):
        tables = generator.standard_normal((3, 4)) + 1j * generator.standard_normal((3, 4))
        for p in all_partitions(3):
            assert sum_over_refined(tables, p) == pytest.approx(block_product(tables, p), abs=1e-10)

    def test_distinct_sum_matches_enumeration(self, generator):
        tables = generator.standard_normal((3, 6))
        tables -= tables.mean(axis=1, keepdims=True)
        excluded = (0, 4)
        allowed = [i for i in range(6) if i not in excluded]
        brute = sum(
            tables[0, i] * tables[1, j] * tables[2, k] for i, j, k in itertools.permutations(allowed, 3)
        )
        assert distinct_sum_by_mobius(tables, excluded) == pytest.approx(brute, abs=1e-10)

    def test_distinct_sum_without_exclusions(self, generator):
        tables = generator.standard_normal((2, 5))
        tables -= tables.mean(axis=1, keepdims=True)
        brute = sum(tables[0, i] * tables[1, j] for i in range(5) for j in range(5) if i != j)
        assert distinct_sum_by_mobius(tables) == pytest.approx(brute, abs=1e-10)


class TestChiClasses:
    def test_class_counts(self):
        assert len(part_chichi(2)) == 0
        assert len(part_chichi(4)) == 3
        assert len(part_chi(4)) == 4

    def test_chichi_membership(self):
        assert in_part_chichi(SetPartition.from_blocks([[1, 3], [2, 4]]))
        assert not in_part_chichi(SetPartition.from_blocks([[1, 2], [3, 4]]))
        with pytest.raises(ShapeError):
            in_part_chichi(SetPartition.maximal(3))

    def test_clump(self):
        assert clump(SetPartition.from_blocks([[1, 2], [3, 4]])) == frozenset()
        assert clump(SetPartition.from_blocks([[1, 2], [3, 4, 5, 6]])) == frozenset({3, 4, 5, 6})

    def test_clump_equivalence(self):
        assert clump_equivalent((1, 1, 2, 2), (3, 3, 4, 4))
        assert not clump_equivalent((1, 2, 1, 2), (1, 3, 1, 3))
        assert clump_equivalent((1, 2, 1, 2), (1, 2, 1, 2))
        assert not clump_equivalent((1, 1, 2, 2), (1, 1, 1, 1))
        with pytest.raises(ShapeError):
            clump_equivalent((1, 2, 3), (1, 2, 3))

    def test_clump_classes_small(self):
        classes = clump_classes(2, 1)
        assert classes.shape == (2, 2)
        np.testing.assert_array_equal(classes.chi, [True, False, False, True])
        assert not classes.chichi.any()
        assert classes.class_count == 3
        assert classes.class_ids[0] == classes.class_ids[3]

    def test_clump_classes_cap(self):
        with pytest.raises(CapacityError):
            clump_classes(100, 4)

    def test_random_table_is_chichi_class(self, generator):
        table = random_chichi_table(6, 1, generator)
        assert np.abs(table).max() == pytest.approx(1.0)
        assert chichi_table_check(table, 6, 1)

    def test_table_check_rejects(self, generator):
        table = random_chichi_table(6, 1, generator)
        broken = table.copy()
        broken[0, 0] += 0.5
        assert not chichi_table_check(broken, 6, 1)
        leaking = table.copy()
        leaking[0, 1] = 1.0
        assert not chichi_table_check(leaking, 6, 1)

    def test_indicator_table(self):
        table = chichi_indicator_table(3, 2)
        assert table.shape == (3,) * 4
        assert table[0, 1, 0, 1] == 1.0
        assert table[0, 0, 1, 1] == 0.0
        assert table[0, 0, 0, 0] == 1.0
        assert chichi_table_check(table, 3, 2)


class TestFibonacci:
    def test_roots(self):
        assert PHI_PLUS * PHI_MINUS == pytest.approx(-1.0)
        FibonacciVariate(PHI_PLUS)
        with pytest.raises(ValidationError):
            FibonacciVariate(1.0)

    def test_moments(self):
        assert [fibonacci_moment(k) for k in range(1, 11)] == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34]
        assert fibonacci_moment(0) == 1
        with pytest.raises(CapacityError):
            fibonacci_moment(41)

    def test_sample_moments(self, rng):
        phi = sample_fibonacci_array(200_000, rng.generator())
        assert phi.mean() == pytest.approx(0.0, abs=0.01)
        assert (phi**2).mean() == pytest.approx(1.0, abs=0.01)
        assert set(np.unique(phi)) == {PHI_MINUS, PHI_PLUS}

    @pytest.mark.parametrize(
        "t, expected",
        [
            ((1, 1), 0),
            ((1, 2, 1, 2), 1),
            ((1, 1, 1, 1), 1),
            ((1, 1, 1, 1, 1, 1), 1),
            ((1, 2, 1, 3), 0),
            ((1, 2, 2, 1), 1),
        ],
    )
    def test_weight_values(self, t, expected):
        assert fibonacci_weight(t) == expected
        assert fibonacci_weight_reduced(t) == expected

    def test_weight_forms_agree(self):
        for t in itertools.product(range(3), repeat=6):
            assert fibonacci_weight(t) == fibonacci_weight_reduced(t)

    def test_weight_nonnegative_and_positive_on_chichi(self):
        for t in itertools.product(range(4), repeat=6):
            weight = fibonacci_weight(t)
            assert weight >= 0
            if in_part_chichi(partition_of_tuple(t)):
                assert weight >= 1

    def test_monte_carlo_agrees(self, rng):
        t = (1, 1, 1, 2, 2, 1)
        mean, se = fibonacci_weight_monte_carlo(t, 20_000, rng.generator())
        assert abs(mean - fibonacci_weight(t)) <= 5 * se + 1e-9

    def test_odd_length_rejected(self):
        with pytest.raises(ShapeError):
            fibonacci_weight((1, 2, 3))
