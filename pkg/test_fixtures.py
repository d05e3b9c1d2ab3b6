"""Tests for the fixtures module: the committed values and the brute-force oracles."""

import json
import math
import os
import unittest

import pytest
from census import run_census
from constants import DEFAULT_FIXTURES_FILE
from field import make_field
from fixtures import (
    load_fixtures,
    oracle_class_count,
    oracle_comm_count,
    oracle_shape,
    oracle_shape_counts,
    oracle_syt,
    oracle_syt_square_sum,
)
from partitions import Partition, hook_count, partitions_of

FIXTURES_PATH = os.path.join(os.path.dirname(__file__), DEFAULT_FIXTURES_FILE)


class TestCommittedFixtures(unittest.TestCase):
    """The fixture file itself"""

    @classmethod
    def setUpClass(cls):
        cls.fixtures = load_fixtures(FIXTURES_PATH)

    def test_every_entry_has_provenance(self):
        """Each fixture names its oracle and the date it was committed."""
        for fixture in self.fixtures.values():
            self.assertTrue(fixture.oracle, fixture.key)
            self.assertIn("date", fixture.provenance)

    def test_expected_keys(self):
        """The acceptance suite finds every key it reads."""
        for key in (
            "gap_array.worked_example",
            "psi.worked_chain",
            "g_worst.display",
            "conjugation.worked_example",
            "class_count",
            "comm_pairs",
            "shape_counts.n3.q2",
            "class_polynomial",
            "commuting_probability",
            "syt",
            "rank_census.a2.b2.q2",
            "beta",
        ):
            self.assertIn(key, self.fixtures)

    def test_comm_pairs_match_the_oracle(self):
        """Committed commuting-pair counts are what the oracle computes."""
        for key, value in self.fixtures["comm_pairs"].value.items():
            n, q = (int(x) for x in key.split(","))
            self.assertEqual(oracle_comm_count(n, q), int(value), key)

    def test_class_counts_within_oracle_range(self):
        """Class counts for n <= 3 over F_2 and F_3 agree with the oracle."""
        counts = self.fixtures["class_count"].value
        for n in ("2", "3"):
            for q in ("2", "3"):
                self.assertEqual(oracle_class_count(int(n), int(q)), int(counts[n][q]))

    def test_conjugation_files_exist(self):
        """Matrix files named by the conjugation fixture sit beside it."""
        directory = os.path.dirname(FIXTURES_PATH)
        for case in self.fixtures["conjugation.worked_example"].value["cases"]:
            self.assertTrue(os.path.exists(os.path.join(directory, case["file"])))


def write_fixture_file(path, entries, schema=1):
    path.write_text(json.dumps({"schema": schema, "fixtures": entries}), encoding="utf-8")
    return str(path)


def test_load_rejects_wrong_schema(tmp_path):
    """A schema other than 1 is refused."""
    path = write_fixture_file(tmp_path / "f.json", [], schema=2)
    with pytest.raises(ValueError, match="schema"):
        load_fixtures(path)


def test_load_rejects_duplicate_keys(tmp_path):
    """Every key appears once."""
    entry = {"key": "k", "value": 1, "provenance": {"oracle": "o", "date": "2026-10-18"}}
    path = write_fixture_file(tmp_path / "f.json", [entry, entry])
    with pytest.raises(ValueError, match="duplicate"):
        load_fixtures(path)


def test_load_rejects_missing_provenance(tmp_path):
    """A value without its oracle is refused."""
    path = write_fixture_file(tmp_path / "f.json", [{"key": "k", "value": 1, "provenance": {"date": "x"}}])
    with pytest.raises(ValueError, match="provenance"):
        load_fixtures(path)


def test_load_rejects_missing_key(tmp_path):
    """Every entry needs a key."""
    path = write_fixture_file(tmp_path / "f.json", [{"value": 1, "provenance": {"oracle": "o", "date": "d"}}])
    with pytest.raises(ValueError, match="without a key"):
        load_fixtures(path)


class TestPairOracle(unittest.TestCase):
    """Commuting pairs by multiplying every pair"""

    def test_small_values(self):
        """U_3(2) has 40 commuting pairs and the abelian U_2(3) has 3^2."""
        self.assertEqual(oracle_comm_count(3, 2), 40)
        self.assertEqual(oracle_comm_count(2, 3), 9)
        self.assertEqual(oracle_comm_count(1, 2), 1)

    def test_agrees_with_census(self):
        """The oracle and the centralizer-dimension census agree."""
        for n, q in ((3, 3), (4, 2)):
            self.assertEqual(oracle_comm_count(n, q), run_census(n, make_field(q)).total_comm_pairs)

    def test_size_guard(self):
        """Only n <= 4 and q in {2, 3}."""
        with self.assertRaises(ValueError):
            oracle_comm_count(5, 2)
        with self.assertRaises(ValueError):
            oracle_comm_count(2, 5)


class TestTableauOracle(unittest.TestCase):
    """Standard Young tableaux by generation"""

    def test_small_shapes(self):
        """(2,1) has 2 tableaux and a single row has 1."""
        self.assertEqual(oracle_syt((2, 1)), 2)
        self.assertEqual(oracle_syt((5,)), 1)
        self.assertEqual(oracle_syt((3, 2, 1)), 16)

    def test_matches_hook_formula(self):
        """Generation and the hook formula agree for n <= 7."""
        for n in range(1, 8):
            for lam in partitions_of(n):
                self.assertEqual(oracle_syt(lam.parts), hook_count(lam), str(lam))

    def test_square_sum(self):
        """sum (f^lambda)^2 = n!."""
        for n in range(1, 8):
            self.assertEqual(oracle_syt_square_sum(n), math.factorial(n))

    def test_guards(self):
        """Non-partitions and n > 8 are rejected."""
        with self.assertRaises(ValueError):
            oracle_syt((1, 2))
        with self.assertRaises(ValueError):
            oracle_syt((5, 4))


class TestShapeOracle(unittest.TestCase):
    """Jordan types by a separate elimination"""

    def test_regular_nilpotent(self):
        """J_3 has type (3)."""
        self.assertEqual(oracle_shape([[0, 1, 0], [0, 0, 1], [0, 0, 0]], 2), (3,))

    def test_zero(self):
        """The zero matrix has type (1, ..., 1)."""
        self.assertEqual(oracle_shape([[0, 0], [0, 0]], 3), (1, 1))

    def test_not_nilpotent(self):
        """A unipotent matrix is not nilpotent."""
        with self.assertRaises(ValueError):
            oracle_shape([[1, 0], [0, 1]], 2)

    def test_shape_counts_n3(self):
        """F_(3)(2) = 2, F_(2,1)(2) = 5, F_(1,1,1)(2) = 1."""
        self.assertEqual(oracle_shape_counts(3, 2), {(3,): 2, (2, 1): 5, (1, 1, 1): 1})

    def test_agrees_with_census(self):
        """The oracle strata equal the census strata for n = 4 over F_3."""
        census = run_census(4, make_field(3)).shape_counts()
        oracle = {Partition(k): v for k, v in oracle_shape_counts(4, 3).items()}
        self.assertEqual(census, oracle)


if __name__ == "__main__":
    unittest.main()
