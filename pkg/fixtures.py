"""Regression fixtures and the brute-force oracles that produced them.

The oracles use plain lists of residues, literal matrix products and their
own Gaussian elimination, and import nothing from the field, matrix, census
or partitions modules. They only handle prime q.

Fixture file layout:

    {"schema": 1,
     "fixtures": [{"key": ..., "value": ..., "provenance":
                   {"oracle": ..., "parameters": {...}, "date": "YYYY-MM-DD"}}]}
"""

import itertools
import json
from dataclasses import dataclass, field
from math import factorial

from constants import SCHEMA_VERSION

ORACLE_SIZES = {2: 4, 3: 4}
ORACLE_SYT_MAX = 8


@dataclass(frozen=True)
class Fixture:
    """One committed expected value."""

    key: str
    value: object
    provenance: dict = field(default_factory=dict)

    @property
    def oracle(self) -> str:
        return self.provenance.get("oracle", "")


def load_fixtures(path: str) -> dict[str, Fixture]:
    """Read a fixture file into a dict keyed by fixture key.

    Raises:
        ValueError: If the file has the wrong schema, a duplicate key or an
            entry without provenance.
    """
    with open(path, "r", encoding="utf-8") as fixture_file:
        payload = json.load(fixture_file)
    if payload.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"{path}: expected schema {SCHEMA_VERSION}, got {payload.get('schema')}")
    fixtures: dict[str, Fixture] = {}
    for entry in payload.get("fixtures", []):
        key = entry.get("key")
        if not key:
            raise ValueError(f"{path}: fixture without a key")
        if key in fixtures:
            raise ValueError(f"{path}: duplicate fixture key {key}")
        provenance = entry.get("provenance")
        if not provenance or "oracle" not in provenance or "date" not in provenance:
            raise ValueError(f"{path}: fixture {key} lacks provenance")
        fixtures[key] = Fixture(key, entry.get("value"), provenance)
    return fixtures


# Commuting pairs by literal enumeration


def _check_oracle_size(n: int, q: int) -> None:
    if q not in ORACLE_SIZES:
        raise ValueError(f"the pair oracle handles q in {sorted(ORACLE_SIZES)}, got {q}")
    if not 1 <= n <= ORACLE_SIZES[q]:
        raise ValueError(f"the pair oracle handles 1 <= n <= {ORACLE_SIZES[q]} for q={q}, got {n}")


def _upper_matrices(n: int, q: int) -> list[list[list[int]]]:
    cells = [(i, j) for i in range(n) for j in range(n) if i < j]
    result = []
    for values in itertools.product(range(q), repeat=len(cells)):
        rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for (i, j), value in zip(cells, values):
            rows[i][j] = value
        result.append(rows)
    return result


def _product(x: list[list[int]], y: list[list[int]], q: int) -> list[list[int]]:
    n = len(x)
    return [[sum(x[i][t] * y[t][j] for t in range(n)) % q for j in range(n)] for i in range(n)]


def oracle_comm_count(n: int, q: int) -> int:
    """|{(g, h) in U_n(q)^2 : gh = hg}| by multiplying every pair.

    Raises:
        ValueError: Outside n <= 4, q in {2, 3}.
    """
    _check_oracle_size(n, q)
    group = _upper_matrices(n, q)
    count = 0
    for g in group:
        for h in group:
            if _product(g, h, q) == _product(h, g, q):
                count += 1
    return count


def oracle_class_count(n: int, q: int) -> int:
    """k(U_n(q)) from the literal pair count."""
    return oracle_comm_count(n, q) // q ** (n * (n - 1) // 2)


# Standard Young tableaux by generation


def oracle_syt(parts: tuple[int, ...]) -> int:
    """Count standard Young tableaux of a shape by filling 1..n one cell at a time.

    Raises:
        ValueError: If the shape is not a partition of n <= 8.
    """
    parts = tuple(parts)
    if any(a < b for a, b in zip(parts, parts[1:])) or any(p < 1 for p in parts):
        raise ValueError(f"{parts} is not a partition")
    if sum(parts) > ORACLE_SYT_MAX:
        raise ValueError(f"the tableau oracle handles n <= {ORACLE_SYT_MAX}, got {sum(parts)}")
    tableaux = []

    def fill(filled: list[int], rows: list[list[int]], value: int) -> None:
        if value > sum(parts):
            tableaux.append([list(row) for row in rows])
            return
        for r, length in enumerate(parts):
            if filled[r] == length:
                continue
            if r > 0 and filled[r - 1] <= filled[r]:
                continue
            filled[r] += 1
            rows[r].append(value)
            fill(filled, rows, value + 1)
            rows[r].pop()
            filled[r] -= 1

    fill([0] * len(parts), [[] for _ in parts], 1)
    return len(tableaux)


def _shapes_of(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _shapes_of(n - first, first):
            yield (first,) + rest


def oracle_syt_square_sum(n: int) -> int:
    """sum over shapes of n of (f^lambda)^2, which must equal n!."""
    return sum(oracle_syt(shape) ** 2 for shape in _shapes_of(n))


# Jordan type by a separate elimination


def _rank_mod(rows: list[list[int]], p: int) -> int:
    work = [list(row) for row in rows]
    rank = 0
    n_cols = len(work[0]) if work else 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, len(work)) if work[r][col] % p), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inverse = pow(work[rank][col], p - 2, p)
        work[rank] = [(v * inverse) % p for v in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col] % p:
                factor = work[r][col]
                work[r] = [(v - factor * w) % p for v, w in zip(work[r], work[rank])]
        rank += 1
    return rank


def oracle_shape(rows: list[list[int]], p: int) -> tuple[int, ...]:
    """Jordan type of a nilpotent matrix over F_p from the ranks of its powers."""
    n = len(rows)
    ranks = [n]
    power = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    while ranks[-1]:
        if len(ranks) > n:
            raise ValueError("matrix is not nilpotent")
        power = _product(power, rows, p)
        ranks.append(_rank_mod(power, p))
    # blocks of size >= s number rank(A^(s-1)) - rank(A^s)
    at_least = [ranks[s - 1] - ranks[s] for s in range(1, len(ranks))]
    sizes = []
    for s, count in enumerate(at_least, start=1):
        exactly = count - (at_least[s] if s < len(at_least) else 0)
        sizes.extend([s] * exactly)
    return tuple(sorted(sizes, reverse=True))


def oracle_shape_counts(n: int, p: int) -> dict[tuple[int, ...], int]:
    """F_lambda(p) for every Jordan type by classifying each strictly upper matrix."""
    _check_oracle_size(n, p)
    counts: dict[tuple[int, ...], int] = {}
    for g in _upper_matrices(n, p):
        nilpotent = [[value if i != j else 0 for j, value in enumerate(row)] for i, row in enumerate(g)]
        shape = oracle_shape(nilpotent, p)
        counts[shape] = counts.get(shape, 0) + 1
    return counts
