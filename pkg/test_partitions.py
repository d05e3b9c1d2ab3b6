"""Tests for the partitions module."""

import unittest
from fractions import Fraction
from math import factorial

from hypothesis import given
from hypothesis import strategies as st
from partitions import (
    Partition,
    conjugate,
    h_value,
    hook_count,
    inner,
    insertion_position,
    multiplicities,
    n_stat,
    n_stat_from_conjugate,
    norm_sq,
    parse_partition,
    partition_count,
    partitions_of,
    phi,
    shift,
    subtract,
)


class TestPartitionType(unittest.TestCase):
    """Construction, printing and parsing"""

    def test_validation(self):
        """Parts must be positive and weakly decreasing"""
        with self.assertRaises(ValueError):
            Partition((1, 2))
        with self.assertRaises(ValueError):
            Partition((2, 0))

    def test_print_and_parse(self):
        """Partitions print as (6,2,1,1) and parse back"""
        lam = Partition((6, 2, 1, 1))
        self.assertEqual(str(lam), "(6,2,1,1)")
        self.assertEqual(parse_partition("(6,2,1,1)"), lam)
        self.assertEqual(parse_partition("()"), Partition(()))

    def test_zero_extension(self):
        """part(i) is zero past the length"""
        lam = Partition((3, 1))
        self.assertEqual([lam.part(i) for i in range(1, 5)], [3, 1, 0, 0])


class TestStatistics(unittest.TestCase):
    """conjugate, n, inner products, multiplicities, hooks"""

    def test_conjugate_examples(self):
        """(3,2)' = (2,2,1) and (n)' = (1^n)"""
        self.assertEqual(conjugate(Partition((3, 2))), Partition((2, 2, 1)))
        self.assertEqual(conjugate(Partition((4,))), Partition((1, 1, 1, 1)))

    def test_conjugate_is_involution(self):
        """(lam')' = lam and sizes agree, n <= 20"""
        for n in range(21):
            for lam in partitions_of(n):
                self.assertEqual(conjugate(conjugate(lam)), lam)
                self.assertEqual(conjugate(lam).size, n)

    def test_n_stat(self):
        """n((1,1,1)) = 3, n((n)) = 0, both formulas and the norm identity agree"""
        self.assertEqual(n_stat(Partition((1, 1, 1))), 3)
        self.assertEqual(n_stat(Partition((5,))), 0)
        for n in range(13):
            for lam in partitions_of(n):
                self.assertEqual(n_stat(lam), n_stat_from_conjugate(lam))
                self.assertEqual(2 * n_stat(lam), norm_sq(conjugate(lam)) - n)

    def test_inner(self):
        """<(2,1),(1,1,1)> = 3 and <lam, empty> = 0"""
        self.assertEqual(inner(Partition((2, 1)), Partition((1, 1, 1))), 3)
        self.assertEqual(inner(Partition((4, 2)), Partition(())), 0)

    def test_inner_conjugates_is_sum_of_minima(self):
        """<lam', mu'> = sum_{i,j} min(lam_i, mu_j) for a, b <= 8"""
        for a in range(1, 9):
            for b in range(1, 9):
                for lam in partitions_of(a):
                    for mu in partitions_of(b):
                        minima = sum(min(x, y) for x in lam for y in mu)
                        self.assertEqual(inner(conjugate(lam), conjugate(mu)), minima)

    def test_multiplicities(self):
        """(3,2,2,1) -> [1,2,1]; (1^n) -> [n]; m = lam' - L lam'"""
        self.assertEqual(multiplicities(Partition((3, 2, 2, 1))), [1, 2, 1])
        self.assertEqual(multiplicities(Partition((1, 1, 1, 1))), [4])
        for n in range(1, 13):
            for lam in partitions_of(n):
                lam_c = conjugate(lam)
                diff = subtract(lam_c.parts, shift(lam_c.parts))
                expected = list(diff) + [0] * (len(lam_c) - len(diff))
                self.assertEqual(multiplicities(lam), expected)
                self.assertEqual(sum(multiplicities(lam)), len(lam))

    def test_hook_count(self):
        """f^(n) = 1, f^(2,1) = 2, (f^lam)^2 <= n! and sum (f^lam)^2 = n!"""
        self.assertEqual(hook_count(Partition((6,))), 1)
        self.assertEqual(hook_count(Partition((2, 1))), 2)
        for n in range(13):
            for lam in partitions_of(n):
                self.assertLessEqual(hook_count(lam) ** 2, factorial(n))
        for n in range(11):
            self.assertEqual(sum(hook_count(lam) ** 2 for lam in partitions_of(n)), factorial(n))


class TestEnumeration(unittest.TestCase):
    """partitions_of and p(n)"""

    def test_p4(self):
        """p(4) = 5 in lexicographically decreasing order"""
        expected = [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
        self.assertEqual([lam.parts for lam in partitions_of(4)], expected)

    def test_counts(self):
        """p(0) = 1, p(10) = 42 and enumeration agrees with the recurrence"""
        self.assertEqual(partition_count(0), 1)
        self.assertEqual(partition_count(10), 42)
        for n in range(25):
            lams = partitions_of(n)
            self.assertEqual(len(lams), partition_count(n))
            self.assertEqual(len(set(lams)), len(lams))


class TestPhi(unittest.TestCase):
    """The row-insertion map"""

    def test_worked_example(self):
        """phi_6((3,2,2,1,1,1,1)) = (3,2,2,2,1,1,1) with row 6 moved to position 2"""
        mu, w = phi(Partition((3, 2, 2, 1, 1, 1, 1)), 6)
        self.assertEqual(mu, Partition((3, 2, 2, 2, 1, 1, 1)))
        self.assertEqual(w, (1, 3, 4, 5, 6, 2, 7))

    def test_new_row_and_first_row(self):
        """phi_{l+1} appends a 1 and phi_1((n)) = (n+1)"""
        self.assertEqual(phi(Partition((3, 1)), 3)[0], Partition((3, 1, 1)))
        self.assertEqual(phi(Partition((4,)), 1)[0], Partition((5,)))
        self.assertEqual(phi(Partition(()), 1), (Partition((1,)), (1,)))

    def test_out_of_range(self):
        """r must lie in 1..l+1"""
        with self.assertRaises(ValueError):
            phi(Partition((2, 1)), 4)

    def test_permutation_contract(self):
        """mu_{w(i)} = lam_i for i != r and mu_{w(r)} = lam_r + 1, n <= 8"""
        for n in range(9):
            for lam in partitions_of(n):
                for r in range(1, len(lam) + 2):
                    mu, w = phi(lam, r)
                    self.assertEqual(mu.size, n + 1)
                    self.assertEqual(sorted(w), list(range(1, len(w) + 1)))
                    for i in range(1, len(w) + 1):
                        grow = 1 if i == r else 0
                        self.assertEqual(mu.part(w[i - 1]), lam.part(i) + grow)

    def test_insertion_position(self):
        """A block goes before equal-sized blocks"""
        self.assertEqual(insertion_position([3, 2, 1], 3), 0)
        self.assertEqual(insertion_position([3, 2, 2, 1], 2), 1)


class TestH(unittest.TestCase):
    """h(v) = ||v||^2 - ||v - Lv||^2"""

    def test_examples(self):
        """h((1)) = 0 and h((2,1)) = 3"""
        self.assertEqual(h_value([1]), 0)
        self.assertEqual(h_value([2, 1]), 3)
        self.assertEqual(h_value([2, 1, 1]), 4)


@given(
    st.lists(st.fractions(min_value=0, max_value=10, max_denominator=12), max_size=6),
    st.sampled_from([Fraction(-2), Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(3)]),
)
def test_h_homogeneous(values, c):
    """h(cv) = c^2 h(v)"""
    assert h_value([c * v for v in values]) == c * c * h_value(values)
