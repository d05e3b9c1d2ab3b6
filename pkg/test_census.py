"""Tests for the census module."""

import unittest
from fractions import Fraction

import numpy as np
import pytest
from census import (
    CensusInvariantError,
    ShapeStratum,
    ShardTask,
    centralizer_dim_u,
    centralizer_subspace_u,
    class_count,
    comm_strata,
    expected_class_degree,
    format_polynomial,
    interpolate_class_polynomial,
    lagrange_coefficients,
    run_census,
    shape_census,
    shard_tasks,
    upper_matrix,
    upper_positions,
    verify_worst_gap,
)
from config import BudgetExceededError
from field import make_field
from gaparray import g_worst, subspace_dim
from hypothesis import given, settings
from hypothesis import strategies as st
from matrix import Matrix, jordan_matrix
from partitions import Partition, partitions_of

F2 = make_field(2)
F3 = make_field(3)
F4 = make_field(2, 2)

SHAPE_3 = Partition((3,))
SHAPE_21 = Partition((2, 1))
SHAPE_111 = Partition((1, 1, 1))


class TestCoordinates(unittest.TestCase):
    """Strictly upper-triangular coordinates and centralizers"""

    def test_upper_positions_row_major(self):
        """Positions are enumerated row by row."""
        self.assertEqual(upper_positions(3), [(0, 1), (0, 2), (1, 2)])
        self.assertEqual(upper_positions(1), [])

    def test_upper_matrix(self):
        """Values fill the upper positions in row-major order."""
        a = upper_matrix((1, 0, 1), 3, F2)
        np.testing.assert_array_equal(a.entries, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])

    def test_centralizer_of_zero_is_everything(self):
        """C_U(0) is the whole strictly upper space."""
        zero = Matrix(np.zeros((4, 4), dtype=np.int64), F3)
        self.assertEqual(centralizer_dim_u(zero), 6)

    def test_centralizer_of_regular_nilpotent(self):
        """C_U(J_n) is spanned by J, ..., J^(n-1)."""
        for n in range(1, 6):
            self.assertEqual(centralizer_dim_u(jordan_matrix((n,), F2)), n - 1)

    def test_centralizer_subspace_matches_dimension(self):
        """The embedded subspace has the counted dimension and commutes with A."""
        a = upper_matrix((1, 0, 0, 1, 0, 1), 4, F3)
        space = centralizer_subspace_u(a)
        self.assertEqual(space.dim, centralizer_dim_u(a))
        for b in space.matrices():
            self.assertTrue(b.is_strictly_upper())
            self.assertEqual(a @ b, b @ a)

    def test_rejects_non_upper(self):
        """A lower entry is a precondition violation."""
        with self.assertRaises(ValueError):
            centralizer_dim_u(Matrix([[0, 0], [1, 0]], F2))


class TestSharding(unittest.TestCase):
    """Shards partition the enumeration in a fixed order"""

    def test_shards_cover_every_matrix_once(self):
        """Concatenated shards enumerate q^N distinct matrices."""
        tasks = shard_tasks(3, F3)
        self.assertEqual(len(tasks), 9)
        seen = [m for task in tasks for m in task.matrices()]
        self.assertEqual(len(seen), 27)
        self.assertEqual(len(set(seen)), 27)

    def test_small_n_uses_shorter_prefix(self):
        """n = 2 has a single upper entry to shard on."""
        tasks = shard_tasks(2, F2)
        self.assertEqual([task.prefix for task in tasks], [(0,), (1,)])

    def test_shard_task_prefix(self):
        """Every matrix of a shard starts with its prefix."""
        task = ShardTask(3, F2, (1, 0))
        for m in task.matrices():
            self.assertEqual((int(m.entries[0, 1]), int(m.entries[0, 2])), (1, 0))

    def test_stratum_merge(self):
        """Counts and comm add, the centralizer maximum is kept."""
        stratum = ShapeStratum(2, 8, 2)
        stratum.merge(ShapeStratum(1, 16, 4))
        self.assertEqual((stratum.count, stratum.comm, stratum.max_centralizer_dim), (3, 24, 4))


class TestCensusSmall(unittest.TestCase):
    """U_3(2) by hand: 8 matrices, 40 commuting pairs, 5 classes"""

    @classmethod
    def setUpClass(cls):
        cls.record = run_census(3, F2, pairs=True)

    def test_totals(self):
        """Burnside: 40 commuting pairs over |U| = 8 gives 5 classes."""
        self.assertEqual(self.record.total_comm_pairs, 40)
        self.assertEqual(self.record.class_count, 5)

    def test_shape_counts(self):
        """F_(3) = 2, F_(2,1) = 5, F_(1,1,1) = 1."""
        self.assertEqual(self.record.shape_counts(), {SHAPE_3: 2, SHAPE_21: 5, SHAPE_111: 1})

    def test_comm_strata(self):
        """comm((3)) = 8, comm((2,1)) = 24, comm((1,1,1)) = 8."""
        comm = {lam: stratum.comm for lam, stratum in self.record.per_shape.items()}
        self.assertEqual(comm, {SHAPE_3: 8, SHAPE_21: 24, SHAPE_111: 8})

    def test_max_centralizer_matches_worst_gap(self):
        """For (2,1) the largest centralizer has dimension dim C(G^(2,1)) = 3."""
        self.assertEqual(self.record.per_shape[SHAPE_21].max_centralizer_dim, 3)
        self.assertEqual(subspace_dim(g_worst(SHAPE_21)), 3)

    def test_pair_strata_are_symmetric_and_sum_to_comm(self):
        """comm(lambda, mu) = comm(mu, lambda) and the rows add up to comm(lambda)."""
        pairs = self.record.per_shape_pair
        for (lam, mu), count in pairs.items():
            self.assertEqual(pairs.get((mu, lam)), count)
        self.assertEqual(sum(pairs.values()), 40)
        for lam, stratum in self.record.per_shape.items():
            self.assertEqual(sum(c for (x, _), c in pairs.items() if x == lam), stratum.comm)

    def test_every_check_passes(self):
        """The bounds hold and the pair strata bound is included."""
        names = [check.name for check in self.record.checks]
        self.assertIn("main_bound", names)
        self.assertIn("pair_strata_bound", names)
        self.assertTrue(self.record.passed)

    def test_to_json(self):
        """Big integers are decimal strings and shapes follow partition order."""
        payload = self.record.to_json()
        self.assertEqual(payload["schema"], 1)
        self.assertEqual(payload["class_count"], "5")
        self.assertEqual(payload["total_comm_pairs"], "40")
        self.assertEqual([entry["shape"] for entry in payload["per_shape"]], ["(3)", "(2,1)", "(1,1,1)"])
        self.assertEqual(payload["per_shape"][1]["worst_gap_dim"], 3)

    def test_csv_rows(self):
        """The CSV table has a header and one row per shape."""
        rows = self.record.csv_rows()
        self.assertEqual(rows[0][0], "shape")
        self.assertEqual(rows[2], ["(2,1)", "5", "24", "3", "3"])

    def test_invariant_check_catches_bad_totals(self):
        """A tampered total breaks the Burnside identity."""
        self.record.total_comm_pairs += 1
        try:
            with self.assertRaises(CensusInvariantError):
                self.record.check_invariants()
        finally:
            self.record.total_comm_pairs -= 1


class TestCensusKnownCounts(unittest.TestCase):
    """Class counts of small unitriangular groups"""

    def test_u2_is_abelian(self):
        """k(U_2(q)) = q."""
        for spec in (F2, F3, F4):
            self.assertEqual(class_count(2, spec).class_count, spec.q)

    def test_u3(self):
        """k(U_3(q)) = q^2 + q - 1."""
        for spec in (F2, F3, F4):
            q = spec.q
            self.assertEqual(class_count(3, spec).class_count, q * q + q - 1)

    def test_u4_over_f2_and_f3(self):
        """k(U_4(2)) = 16 and k(U_4(3)) = 57."""
        self.assertEqual(class_count(4, F2).class_count, 16)
        self.assertEqual(class_count(4, F3).class_count, 57)

    def test_shape_census_sums_to_group_order(self):
        """sum F_lambda = q^N."""
        counts = shape_census(4, F3)
        self.assertEqual(sum(counts.values()), 3**6)
        self.assertEqual(set(counts), set(partitions_of(4)))

    def test_u1(self):
        """U_1 is trivial."""
        record = run_census(1, F3)
        self.assertEqual((record.class_count, record.total_comm_pairs), (1, 1))

    def test_budget_refusal(self):
        """q^N above the budget is refused unless overridden."""
        with self.assertRaises(BudgetExceededError):
            run_census(4, F2, budget=10)
        self.assertEqual(run_census(3, F2, budget=4, override=True).class_count, 5)

    def test_pairs_budget(self):
        """Pair strata need q^2N within the budget."""
        with self.assertRaises(BudgetExceededError):
            comm_strata(3, F2, pairs=True, budget=32)

    def test_rejects_n_zero(self):
        """n must be positive."""
        with self.assertRaisesRegex(ValueError, "--n"):
            run_census(0, F2)


def test_worker_count_does_not_change_the_result():
    """Two worker processes give byte-identical output."""
    serial = run_census(3, F3, pairs=True, workers=1).to_json()
    parallel = run_census(3, F3, pairs=True, workers=2).to_json()
    assert serial == parallel


class TestWorstGap(unittest.TestCase):
    """Conjugated centralizers lie in C(G^lambda)"""

    def test_small_sizes(self):
        """No violations for n <= 4 over F_2 and n <= 3 over F_3."""
        for n, spec in ((2, F2), (3, F2), (4, F2), (3, F3)):
            report = verify_worst_gap(n, spec)
            self.assertTrue(report.passed, report.witnesses[:1])
            self.assertEqual(report.checked, spec.q ** (n * (n - 1) // 2))

    def test_max_dim_bounded_by_worst_gap_dim(self):
        """The observed centralizer dimension never exceeds dim C(G^lambda)."""
        report = verify_worst_gap(4, F2)
        for lam, dim in report.max_dim_by_shape.items():
            self.assertLessEqual(dim, subspace_dim(g_worst(lam)))
        payload = report.to_json()
        self.assertEqual(payload["violations"], 0)


class TestInterpolation(unittest.TestCase):
    """Exact Lagrange interpolation of class counts"""

    def test_expected_degree(self):
        """Nearest integer to (n^2 + 6n) / 12."""
        self.assertEqual([expected_class_degree(n) for n in (2, 3, 4)], [1, 2, 3])

    def test_lagrange_u3(self):
        """5, 11, 19, 29 lie on q^2 + q - 1."""
        coefficients = lagrange_coefficients([(2, 5), (3, 11), (4, 19), (5, 29)])
        self.assertEqual(coefficients, [-1, 1, 1])
        self.assertEqual(format_polynomial(coefficients), "q^2 + q - 1")

    def test_u3_polynomial(self):
        """n = 3 over four fields certifies degree 2."""
        poly = interpolate_class_polynomial(3, [2, 3, 4, 5], [5, 11, 19, 29])
        self.assertTrue(poly.passed)
        self.assertEqual(poly.degree, 2)
        self.assertEqual(poly.to_json()["coefficients"], ["-1", "1", "1"])
        self.assertEqual(poly.at(7), 55)

    def test_u4_polynomial(self):
        """n = 4 over five fields is 2q^3 + q^2 - 2q."""
        poly = interpolate_class_polynomial(4, [2, 3, 4, 5, 7], [16, 57, 136, 265, 721])
        self.assertTrue(poly.passed)
        self.assertEqual(str(poly), "2q^3 + q^2 - 2q")

    def test_inconsistent_counts_fail(self):
        """A perturbed count gives a non-integral interpolant of the wrong degree."""
        with self.assertLogs("unitriangular_census", level="WARNING"):
            poly = interpolate_class_polynomial(3, [2, 3, 4, 5], [5, 11, 19, 30])
        self.assertFalse(poly.integral)
        self.assertEqual(poly.coefficients[-1], Fraction(1, 6))
        self.assertFalse(poly.passed)

    def test_too_few_points(self):
        """Certifying degree 2 needs four points."""
        with self.assertRaisesRegex(ValueError, "at least 4"):
            interpolate_class_polynomial(3, [2, 3, 4], [5, 11, 19])

    def test_only_certified_sizes(self):
        """n = 5 and n = 1 are refused and the message names --n."""
        for n in (1, 5):
            with self.assertRaisesRegex(ValueError, "--n"):
                interpolate_class_polynomial(n, [2, 3, 4, 5, 7, 8, 9], [1] * 7)

    def test_bad_field_orders(self):
        """Orders must be distinct prime powers and match the counts."""
        with self.assertRaises(ValueError):
            interpolate_class_polynomial(3, [2, 3, 6, 5], [5, 11, 19, 29])
        with self.assertRaises(ValueError):
            interpolate_class_polynomial(3, [2, 2, 4, 5], [5, 5, 19, 29])
        with self.assertRaises(ValueError):
            interpolate_class_polynomial(3, [2, 3, 4, 5], [5, 11, 19])

    def test_format_polynomial_edge_cases(self):
        """Zero, negative leading terms and rational coefficients."""
        self.assertEqual(format_polynomial([Fraction(0)]), "0")
        self.assertEqual(format_polynomial([Fraction(1), Fraction(0), Fraction(-3)]), "-3q^2 + 1")
        self.assertEqual(format_polynomial([Fraction(1, 2), Fraction(1)]), "q + 1/2")


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=1, max_size=4))
def test_interpolation_recovers_integer_polynomials(coefficients):
    """Sampling a polynomial at enough points and interpolating gives it back."""
    while len(coefficients) > 1 and coefficients[-1] == 0:
        coefficients = coefficients[:-1]
    xs = [2, 3, 4, 5, 7]
    points = [(x, sum(c * x**d for d, c in enumerate(coefficients))) for x in xs]
    assert lagrange_coefficients(points) == [Fraction(c) for c in coefficients]


@pytest.mark.parametrize("n", [2, 3])
def test_census_over_extension_field(n):
    """F_4 matches the polynomial count at q = 4."""
    expected = {2: 4, 3: 19}[n]
    assert class_count(n, F4).class_count == expected
