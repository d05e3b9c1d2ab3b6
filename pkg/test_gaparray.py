"""Tests for the gaparray module."""

import random
import unittest

import numpy as np
from field import make_field
from gaparray import (
    GapArray,
    GapLemmaReport,
    all_gap_arrays,
    basis,
    g_max,
    g_min,
    g_worst,
    g_worst_size,
    gap_array_count,
    LevelCase,
    _level_inputs,
    is_r_valid,
    le,
    lemma_sides,
    membership,
    psi,
    psi_worst_cells,
    subspace_dim,
    verify_gap_lemma,
)
from matrix import Matrix, DimensionMismatchError, centralizer, contains, jordan_matrix
from partitions import Partition, conjugate, norm_sq, partitions_of, phi

F2 = make_field(2)
F7 = make_field(7)

LAMBDA_6211 = Partition((6, 2, 1, 1))
G_6211 = GapArray(LAMBDA_6211, ((2, 4, 6, 5), (1, 0, 1, 2), (0, 1, 1, 0), (1, 0, 0, 0)))

# Free cells of the 10 x 10 template for G_6211, one entry per letter
TEMPLATE = {
    "a3": [(1, 3), (2, 4), (3, 5), (4, 6)],
    "a4": [(1, 4), (2, 5), (3, 6)],
    "a5": [(1, 5), (2, 6)],
    "a6": [(1, 6)],
    "b5": [(1, 7), (2, 8)],
    "b6": [(1, 8)],
    "c6": [(1, 10)],
    "d2": [(7, 6)],
    "e1": [(7, 7), (8, 8)],
    "e2": [(7, 8)],
    "f2": [(7, 9)],
    "g1": [(9, 6)],
    "h1": [(9, 10)],
    "i1": [(10, 8)],
    "j1": [(10, 9)],
    "k1": [(10, 10)],
}


def template_matrix(values: dict, spec) -> Matrix:
    entries = np.zeros((10, 10), dtype=np.int64)
    for letter, cells in TEMPLATE.items():
        for i, j in cells:
            entries[i - 1, j - 1] = values.get(letter, 0)
    return Matrix(entries, spec)


def small_arrays(max_n: int):
    for n in range(1, max_n + 1):
        for lam in partitions_of(n):
            arrays, _ = all_gap_arrays(lam, limit=400, seed=n)
            yield from arrays


class TestGapArrayType(unittest.TestCase):
    """Construction and serialization"""

    def test_cell_bounds(self):
        """Cells outside max(0, lam_i - lam_j) .. lam_i are rejected"""
        with self.assertRaises(ValueError):
            GapArray(Partition((2, 1)), ((0, 0), (0, 0)))
        with self.assertRaises(ValueError):
            GapArray(Partition((2, 1)), ((3, 1), (0, 0)))
        with self.assertRaises(ValueError):
            GapArray(Partition((2, 1)), ((1, 1),))

    def test_json_round_trip(self):
        """to_json / from_json preserve the array"""
        payload = G_6211.to_json()
        self.assertEqual(payload["type"], [6, 2, 1, 1])
        self.assertEqual(GapArray.from_json(payload), G_6211)

    def test_counts(self):
        """gap_array_count matches enumeration for n <= 3"""
        for n in range(1, 4):
            for lam in partitions_of(n):
                arrays, sampled = all_gap_arrays(lam)
                self.assertFalse(sampled)
                self.assertEqual(len(arrays), gap_array_count(lam))
                self.assertEqual(len(set(arrays)), len(arrays))

    def test_sampling_is_seeded(self):
        """Past the limit a reproducible sample of distinct arrays is returned"""
        lam = Partition((1, 1, 1, 1))
        first, sampled = all_gap_arrays(lam, limit=50, seed=3)
        second, _ = all_gap_arrays(lam, limit=50, seed=3)
        self.assertTrue(sampled)
        self.assertEqual(first, second)
        self.assertEqual(len(set(first)), 50)


class TestSubspaces(unittest.TestCase):
    """C(G), its dimension and membership"""

    def test_worked_template(self):
        """The 10 x 10 template of type (6,2,1,1) spans a 16-dimensional C(G)"""
        self.assertEqual(subspace_dim(G_6211), 16)
        self.assertEqual(basis(G_6211, F7).dim, 16)
        rng = random.Random(1)
        values = {letter: rng.randrange(1, 7) for letter in TEMPLATE}
        x = template_matrix(values, F7)
        self.assertTrue(membership(x, G_6211))
        self.assertTrue(contains(basis(G_6211, F7), x))
        for letter in TEMPLATE:
            single = template_matrix({letter: 1}, F7)
            self.assertTrue(membership(single, G_6211))

    def test_template_breaks(self):
        """Breaking a Toeplitz diagonal or filling a gap leaves C(G)"""
        x = template_matrix({"a3": 1}, F7)
        entries = x.entries.copy()
        entries[3, 5] = 2
        self.assertFalse(membership(Matrix(entries, F7), G_6211))
        entries = np.zeros((10, 10), dtype=np.int64)
        entries[0, 8] = 1
        self.assertFalse(membership(Matrix(entries, F7), G_6211))

    def test_extremes(self):
        """g_max gives the zero space; g_min gives dimension ||lam'||^2"""
        for n in range(1, 8):
            for lam in partitions_of(n):
                self.assertEqual(subspace_dim(g_max(lam)), 0)
                self.assertEqual(subspace_dim(g_min(lam)), norm_sq(conjugate(lam)))

    def test_dimension_formula(self):
        """dim basis(G) = n l - |G| for gap arrays with n <= 5"""
        for g in small_arrays(5):
            self.assertEqual(basis(g, F2).dim, subspace_dim(g))

    def test_membership_matches_basis(self):
        """membership agrees with span membership on random combinations"""
        rng = random.Random(2)
        for g in small_arrays(4):
            space = basis(g, F2)
            coefficients = np.array([rng.randrange(2) for _ in range(space.dim)], dtype=np.int64)
            pick = F2.v_matmul(coefficients.reshape(1, -1), space.basis).reshape(-1)
            n = g.type_partition.size
            self.assertTrue(membership(Matrix(pick.reshape(n, n), F2), g))
            noise = Matrix(np.array([rng.randrange(2) for _ in range(n * n)]).reshape(n, n), F2)
            self.assertEqual(membership(noise, g), contains(space, noise))

    def test_zero_and_jordan_members(self):
        """0 lies in every C(G) and J_lam lies in C(g_min)"""
        for n in range(1, 6):
            for lam in partitions_of(n):
                zero = Matrix(np.zeros((n, n), dtype=np.int64), F2)
                self.assertTrue(membership(zero, g_worst(lam)))
                self.assertTrue(membership(jordan_matrix(lam, F2), g_min(lam)))

    def test_size_mismatch(self):
        """Matrices of the wrong size are rejected"""
        with self.assertRaises(DimensionMismatchError):
            membership(jordan_matrix((2,), F2), G_6211)

    def test_full_centralizer(self):
        """C(g_min(lam)) = C_M(J_lam) for lam of n <= 6 over F_2"""
        for n in range(1, 7):
            for lam in partitions_of(n):
                self.assertEqual(basis(g_min(lam), F2), centralizer(jordan_matrix(lam, F2)))


class TestOrder(unittest.TestCase):
    """le and r-validity"""

    def test_le_reflexive_and_min(self):
        """G <= G and g_min <= G"""
        for g in small_arrays(3):
            self.assertTrue(le(g, g))
            self.assertTrue(le(g_min(g.type_partition), g))

    def test_le_is_reverse_containment(self):
        """le(G, H) iff C(H) is a subspace of C(G); all pairs for small types, sampled pairs otherwise"""
        rng = random.Random(4)
        for n in range(1, 4):
            for lam in partitions_of(n):
                arrays, _ = all_gap_arrays(lam)
                spaces = [basis(g, F2) for g in arrays]
                indices = range(len(arrays))
                if len(arrays) <= 32:
                    pairs = [(i, j) for i in indices for j in indices]
                else:
                    pairs = [(rng.choice(indices), rng.choice(indices)) for _ in range(300)]
                for i, j in pairs:
                    self.assertEqual(le(arrays[i], arrays[j]), spaces[j].is_subspace_of(spaces[i]))

    def test_le_type_mismatch(self):
        """Arrays of different types are not comparable"""
        with self.assertRaises(ValueError):
            le(g_min(Partition((2,))), g_min(Partition((1, 1))))

    def test_r_validity(self):
        """[[1,1],[2,2]] of type (2,2) is not 1-valid and 1 x 1 arrays are"""
        self.assertFalse(is_r_valid(GapArray(Partition((2, 2)), ((1, 1), (2, 2))), 1))
        self.assertTrue(is_r_valid(GapArray(Partition((3,)), ((2,),)), 1))
        with self.assertRaises(ValueError):
            is_r_valid(G_6211, 5)

    def test_worst_array_valid_everywhere(self):
        """G^lam is r-valid for every r, lam of n <= 10"""
        for n in range(1, 11):
            for lam in partitions_of(n):
                g = g_worst(lam)
                for r in range(1, len(lam) + 1):
                    self.assertTrue(is_r_valid(g, r))


class TestPsi(unittest.TestCase):
    """The insertion map on gap arrays"""

    def test_worked_chain(self):
        """psi_2, psi_4, psi_4 on the (3,2,1) example"""
        g = GapArray(Partition((3, 2, 1)), ((1, 1, 2), (1, 1, 1), (0, 0, 1)))
        g, _ = psi(g, 2)
        self.assertEqual(g.cells, ((1, 2, 2), (0, 1, 2), (0, 0, 1)))
        self.assertEqual(g.type_partition, Partition((3, 3, 1)))
        g, _ = psi(g, 4)
        self.assertEqual(g.cells, ((1, 2, 2, 2), (0, 1, 2, 2), (1, 1, 1, 1), (0, 0, 0, 1)))
        g, _ = psi(g, 4)
        self.assertEqual(g.cells, ((1, 2, 1, 2), (0, 1, 1, 2), (1, 1, 1, 1), (1, 1, 0, 1)))
        self.assertEqual(g.type_partition, Partition((3, 3, 2, 1)))

    def test_small_cases(self):
        """psi_1 on the empty array and psi_2 on [1] of type (1)"""
        empty = GapArray(Partition(()), ())
        self.assertEqual(psi(empty, 1)[0], GapArray(Partition((1,)), ((1,),)))
        g, w = psi(GapArray(Partition((1,)), ((1,),)), 2)
        self.assertEqual(g.cells, ((1, 1), (0, 1)))
        self.assertEqual(w, (2, 1))

    def test_out_of_range(self):
        """r must lie in 1..l+1"""
        with self.assertRaises(ValueError):
            psi(G_6211, 6)

    def test_permutation_is_phi(self):
        """psi_r uses the permutation of phi_r and lands in type phi_r(lam)"""
        for g in small_arrays(4):
            lam = g.type_partition
            for r in range(1, len(lam) + 2):
                h, w = psi(g, r)
                self.assertEqual((h.type_partition, w), phi(lam, r))

    def test_worst_array_monotone(self):
        """G^{phi_r(lam)} <= psi_r(G^lam) for lam of n <= 12"""
        for n in range(0, 13):
            for lam in partitions_of(n):
                for r in range(1, len(lam) + 2):
                    h, _ = psi(g_worst(lam), r)
                    self.assertTrue(le(g_worst(h.type_partition), h))

    def test_worst_cells(self):
        """psi_r(G^lam) matches its cell description for n <= 10"""
        for n in range(0, 11):
            for lam in partitions_of(n):
                for r in range(1, len(lam) + 2):
                    self.assertTrue(psi_worst_cells(lam, r))


class TestWorstArray(unittest.TestCase):
    """G^lambda"""

    def test_display(self):
        """G^(6,3,1,1,1) as displayed"""
        expected = (
            (1, 3, 5, 5, 5),
            (0, 1, 2, 2, 2),
            (0, 0, 1, 1, 1),
            (0, 0, 0, 1, 1),
            (0, 0, 0, 0, 1),
        )
        self.assertEqual(g_worst(Partition((6, 3, 1, 1, 1))).cells, expected)
        self.assertEqual(g_worst(Partition((4,))).cells, ((1,),))

    def test_size_formula(self):
        """|G^lam| agrees with the closed form for n <= 14"""
        for n in range(0, 15):
            for lam in partitions_of(n):
                self.assertEqual(g_worst(lam).size, g_worst_size(lam))


class TestGapLemma(unittest.TestCase):
    """Y_A (overline C(G) meet C_M(A)) Y_A^-1 = C(psi_r(G))"""

    def test_small_sizes_over_f2(self):
        """Every r-valid G and every level input, n <= 4, q = 2"""
        for n in range(2, 5):
            report = verify_gap_lemma(n, F2)
            self.assertTrue(report.passed, report.failures[:1])
            self.assertGreater(report.checked, 0)
            self.assertFalse(report.sampled)

    def test_n5_over_f2_is_exhaustive(self):
        """n = 5, q = 2 runs over every gap array of every type"""
        report = verify_gap_lemma(5, F2)
        self.assertFalse(report.sampled)
        self.assertTrue(report.passed, report.failures[:1])
        self.assertGreater(report.checked, 65536)

    def test_sampling_is_opt_in_and_reported(self):
        """A sample limit below the array count marks the report as sampled"""
        report = verify_gap_lemma(4, F2, sample_limit=10)
        self.assertTrue(report.sampled)
        self.assertTrue(report.passed)
        self.assertTrue(report.to_json()["sampled"])

    def test_q3(self):
        """n = 3 over F_3"""
        self.assertTrue(verify_gap_lemma(3, make_field(3)).passed)

    def test_report_json(self):
        """The report serializes its counts"""
        payload = GapLemmaReport(n=3, q=2, checked=5).to_json()
        self.assertEqual(payload["checked"], 5)
        self.assertEqual(payload["failures"], [])

    def test_n_must_be_at_least_two(self):
        """A level needs a previous size"""
        with self.assertRaises(ValueError):
            verify_gap_lemma(1, F2)


def test_skipping_the_column_decrement_breaks_psi(monkeypatch):
    """Without step 2 the worked chain and the lemma both fail"""
    import gaparray  # pylint: disable=import-outside-toplevel

    monkeypatch.setattr(gaparray, "_decrement_column", lambda cells, r: None)
    g = GapArray(Partition((3, 2, 1)), ((1, 1, 2), (1, 1, 1), (0, 0, 1)))
    assert gaparray.psi(g, 2)[0].cells != ((1, 2, 2), (0, 1, 2), (0, 0, 1))
    assert not gaparray.verify_gap_lemma(2, F2).passed


class TestLevelCase(unittest.TestCase):
    """The prepared check against the two subspaces computed directly"""

    def test_agrees_with_direct_subspaces(self):
        """holds(G, H) is exactly Y (overline C(G) meet C_M(A)) Y^-1 == C(H), n = 3"""
        for mu in partitions_of(2):
            arrays, _ = all_gap_arrays(mu)
            for a in _level_inputs(mu, F2):
                case = LevelCase(a, mu)
                candidates, _ = all_gap_arrays(case.result_shape, limit=40, seed=7)
                for g in arrays:
                    lhs, rhs = lemma_sides(a, g)
                    target, _ = psi(g, case.r)
                    self.assertEqual(case.holds(g, target), lhs == rhs)
                    for h in candidates:
                        self.assertEqual(case.holds(g, h), lhs == basis(h, F2), (str(mu), a.entries.tolist(), h.cells))

    def test_psi_target_matches_direct_subspaces_n4(self):
        """For r-valid G at n = 4 the direct computation confirms the target"""
        for mu in partitions_of(3):
            arrays, _ = all_gap_arrays(mu, limit=30, seed=11)
            for a in _level_inputs(mu, F2):
                case = LevelCase(a, mu)
                for g in arrays:
                    if case.r <= len(mu) and not is_r_valid(g, case.r):
                        continue
                    lhs, rhs = lemma_sides(a, g)
                    self.assertEqual(lhs, rhs)
                    self.assertTrue(case.holds(g, psi(g, case.r)[0]))

    def test_wrong_shape_fails(self):
        """A target of another type never matches"""
        mu = Partition((1,))
        a = next(_level_inputs(mu, F2))
        case = LevelCase(a, mu)
        self.assertEqual(case.result_shape, Partition((1, 1)))
        other = g_worst(Partition((2,)))
        self.assertFalse(case.holds(g_worst(mu), other))
