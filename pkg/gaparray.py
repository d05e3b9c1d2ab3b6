"""Gap arrays and the subspaces of C_M(J_lambda) they describe.

A gap array of type lambda (l parts) is an l x l integer array G with
max(0, lambda_i - lambda_j) <= G_ij <= lambda_i. On the (i, j)-block of an
n x n matrix (a x b with a = lambda_i, b = lambda_j) the subspace C(G)
allows only Toeplitz diagonals that touch both the top row and the right
column of the block. Such a diagonal is indexed by the row t (1 = top) at
which it meets the right column, and the diagonals with t > a - G_ij are
zero. dim C(G) = n * l - |G|.
"""

import functools
import itertools
import random
from collections import defaultdict
from collections.abc import Iterator
from dataclasses import dataclass, field

import numpy as np
from constants import DEFAULT_SEED, GAP_ARRAY_ENUMERATION_LIMIT
from field import FieldSpec
from gf2 import gf2_rank, pack_rows
from jordan import conjugate_level
from logging_config import get_logger
from matrix import (
    DimensionMismatchError,
    Matrix,
    Subspace,
    array_rank,
    centralizer,
    conjugate_subspace,
    intersect,
    jordan_matrix,
    overline,
)
from partitions import Partition, multiplicities, n_stat, partitions_of, phi

Cells = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class GapArray:
    """An l x l gap array of type lambda."""

    type_partition: Partition
    cells: Cells

    def __post_init__(self):
        cells = tuple(tuple(int(v) for v in row) for row in self.cells)
        lam = self.type_partition
        ell = len(lam)
        if len(cells) != ell or any(len(row) != ell for row in cells):
            raise ValueError(f"gap array of type {lam} must be {ell} x {ell}")
        for i, j in itertools.product(range(1, ell + 1), repeat=2):
            low, high = max(0, lam.part(i) - lam.part(j)), lam.part(i)
            if not low <= cells[i - 1][j - 1] <= high:
                raise ValueError(
                    f"cell ({i},{j}) = {cells[i - 1][j - 1]} outside [{low}, {high}] for type {lam}"
                )
        object.__setattr__(self, "cells", cells)

    @property
    def length(self) -> int:
        return len(self.type_partition)

    @property
    def size(self) -> int:
        """|G|, the sum of the cells."""
        return sum(sum(row) for row in self.cells)

    def cell(self, i: int, j: int) -> int:
        return self.cells[i - 1][j - 1]

    def to_json(self) -> dict:
        return {"type": list(self.type_partition.parts), "cells": [list(row) for row in self.cells]}

    @classmethod
    def from_json(cls, payload: dict) -> "GapArray":
        return cls(Partition(tuple(payload["type"])), tuple(tuple(row) for row in payload["cells"]))

    def __str__(self) -> str:
        return "\n".join(" ".join(str(v) for v in row) for row in self.cells)


def _block_starts(lam: Partition) -> list[int]:
    starts, total = [], 0
    for part in lam:
        starts.append(total)
        total += part
    return starts


def free_diagonals(g: GapArray) -> Iterator[tuple[int, int, int, int]]:
    """Yield (i, j, c, t) for every diagonal of C(g) that may be nonzero.

    c is the column offset of the diagonal inside the (i, j)-block and t its
    length, which is also the row where it meets the right column.
    """
    lam = g.type_partition
    for i, j in itertools.product(range(1, g.length + 1), repeat=2):
        a, b = lam.part(i), lam.part(j)
        for c in range(max(0, b - a), b):
            t = b - c
            if t <= a - g.cell(i, j):
                yield i, j, c, t


def subspace_dim(g: GapArray) -> int:
    """dim C(g) = n * l - |g|."""
    return g.type_partition.size * g.length - g.size


def _basis_vectors(g: GapArray) -> np.ndarray:
    """One 0/1 vector per free diagonal, flattened row-major."""
    lam = g.type_partition
    n = lam.size
    starts = _block_starts(lam)
    vectors = []
    for i, j, c, t in free_diagonals(g):
        x = np.zeros((n, n), dtype=np.int64)
        for k in range(t):
            x[starts[i - 1] + k, starts[j - 1] + k + c] = 1
        vectors.append(x.reshape(-1))
    return np.array(vectors, dtype=np.int64).reshape(-1, n * n)


def basis(g: GapArray, spec: FieldSpec) -> Subspace:
    """The canonical Subspace C(g) of n x n matrices over spec."""
    return Subspace.span(_basis_vectors(g), g.type_partition.size**2, spec)


def membership(x: Matrix, g: GapArray) -> bool:
    """Whether x lies in C(g), read off block by block.

    Raises:
        DimensionMismatchError: If x is not n x n for n = |lambda|.
    """
    lam = g.type_partition
    n = lam.size
    if x.shape != (n, n):
        raise DimensionMismatchError(f"{x.shape} matrix tested against a gap array of size {n}")
    free = {(i, j, c) for i, j, c, _ in free_diagonals(g)}
    starts = _block_starts(lam)
    for i, j in itertools.product(range(1, g.length + 1), repeat=2):
        a, b = lam.part(i), lam.part(j)
        block = x.entries[starts[i - 1] : starts[i - 1] + a, starts[j - 1] : starts[j - 1] + b]
        for c in range(-(a - 1), b):
            diagonal = np.diagonal(block, offset=c)
            if (i, j, c) in free:
                if (diagonal != diagonal[0]).any():
                    return False
            elif diagonal.any():
                return False
    return True


def _check_same_type(g: GapArray, h: GapArray) -> None:
    if g.type_partition != h.type_partition:
        raise ValueError(f"gap arrays of types {g.type_partition} and {h.type_partition}")


def le(g: GapArray, h: GapArray) -> bool:
    """Cellwise g <= h, equivalently C(h) is contained in C(g)."""
    _check_same_type(g, h)
    return all(x <= y for row_g, row_h in zip(g.cells, h.cells) for x, y in zip(row_g, row_h))


def is_r_valid(g: GapArray, r: int) -> bool:
    """Row r dominates every lower row and column r is dominated by every later column.

    Raises:
        ValueError: If r is outside 1..l.
    """
    ell = g.length
    if not 1 <= r <= ell:
        raise ValueError(f"r = {r} outside 1..{ell}")
    for j in range(r + 1, ell + 1):
        for k in range(1, ell + 1):
            if g.cell(j, k) > g.cell(r, k) or g.cell(k, r) > g.cell(k, j):
                return False
    return True


def _append_new_block(cells: list[list[int]], lam: Partition) -> None:
    for row, part in zip(cells, lam):
        row.append(part)
    cells.append([0] * (len(lam) + 1))


def _decrement_column(cells: list[list[int]], r: int) -> None:
    for row in cells:
        if row[r - 1]:
            row[r - 1] -= 1


def _increment_row(cells: list[list[int]], r: int) -> None:
    cells[r - 1] = [v + 1 for v in cells[r - 1]]


def _permute(cells: list[list[int]], w: tuple[int, ...]) -> list[list[int]]:
    size = len(cells)
    moved = [[0] * size for _ in range(size)]
    for i, j in itertools.product(range(size), repeat=2):
        moved[w[i] - 1][w[j] - 1] = cells[i][j]
    return moved


def psi(g: GapArray, r: int) -> tuple[GapArray, tuple[int, ...]]:
    """psi_r: the gap array of type phi_r(lambda) and the permutation w of phi_r.

    1. for r = l + 1, add the column (lambda_1, ..., lambda_l, 0) and a zero row
    2. subtract 1 from each nonzero entry of column r
    3. add 1 to each entry of row r
    4. move row and column r to be the first of their block size

    Raises:
        ValueError: If r is outside 1..l+1.
    """
    lam = g.type_partition
    mu, w = phi(lam, r)
    cells = [list(row) for row in g.cells]
    if r == len(lam) + 1:
        _append_new_block(cells, lam)
    _decrement_column(cells, r)
    _increment_row(cells, r)
    return GapArray(mu, tuple(tuple(row) for row in _permute(cells, w))), w


def g_worst(lam: Partition) -> GapArray:
    """G^lambda: lambda_i - lambda_j above a size drop, 1 on equal sizes with i <= j, else 0."""
    ell = len(lam)
    rows = []
    for i in range(1, ell + 1):
        row = []
        for j in range(1, ell + 1):
            a, b = lam.part(i), lam.part(j)
            if a > b:
                row.append(a - b)
            elif a == b and i <= j:
                row.append(1)
            else:
                row.append(0)
        rows.append(tuple(row))
    return GapArray(lam, tuple(rows))


def g_worst_size(lam: Partition) -> int:
    """|G^lambda| = n l - n - 2 n(lambda) + sum m_i^2 / 2 + l / 2."""
    n, ell = lam.size, len(lam)
    doubled = 2 * (n * ell - n - 2 * n_stat(lam)) + sum(m * m for m in multiplicities(lam)) + ell
    return doubled // 2


def g_min(lam: Partition) -> GapArray:
    """The array with C(G) = C_M(J_lambda)."""
    ell = len(lam)
    return GapArray(
        lam,
        tuple(tuple(max(0, lam.part(i) - lam.part(j)) for j in range(1, ell + 1)) for i in range(1, ell + 1)),
    )


def g_max(lam: Partition) -> GapArray:
    """The array with C(G) = 0."""
    ell = len(lam)
    return GapArray(lam, tuple(tuple(lam.part(i) for _ in range(ell)) for i in range(1, ell + 1)))


def _cell_ranges(lam: Partition) -> list[range]:
    ell = len(lam)
    return [
        range(max(0, lam.part(i) - lam.part(j)), lam.part(i) + 1)
        for i in range(1, ell + 1)
        for j in range(1, ell + 1)
    ]


def gap_array_count(lam: Partition) -> int:
    """The number of gap arrays of type lambda."""
    total = 1
    for cell_range in _cell_ranges(lam):
        total *= len(cell_range)
    return total


def _from_flat(lam: Partition, values) -> GapArray:
    ell = len(lam)
    values = list(values)
    return GapArray(lam, tuple(tuple(values[i * ell : (i + 1) * ell]) for i in range(ell)))


def all_gap_arrays(
    lam: Partition, limit: int = GAP_ARRAY_ENUMERATION_LIMIT, seed: int = DEFAULT_SEED
) -> tuple[list[GapArray], bool]:
    """Every gap array of type lambda, or a seeded sample of `limit` of them.

    Returns the arrays and whether they are a sample.
    """
    ranges = _cell_ranges(lam)
    if gap_array_count(lam) <= limit:
        return [_from_flat(lam, values) for values in itertools.product(*ranges)], False
    rng = random.Random(f"{seed}:{lam}")
    seen: dict[tuple[int, ...], None] = {}
    while len(seen) < limit:
        seen[tuple(rng.choice(cell_range) for cell_range in ranges)] = None
    return [_from_flat(lam, values) for values in seen], True


def psi_worst_cells(lam: Partition, r: int) -> bool:
    """Check psi_r(G^lambda) cell by cell against its closed description.

    With H = psi_r(G^lambda) and w from phi_r: H_{w(r),w(r)} = 1,
    H_{w(r),w(j)} = G_{r,j} + 1, H_{w(i),w(r)} = max(0, G_{i,r} - 1) and
    every other cell is carried over. For r = l + 1 the new row and column
    read as 0 and lambda_i before the update.
    """
    g = g_worst(lam)
    h, w = psi(g, r)
    ell = len(lam)

    def old(i: int, j: int) -> int:
        if i <= ell and j <= ell:
            return g.cell(i, j)
        if i <= ell:
            return lam.part(i)
        return 0

    for i, j in itertools.product(range(1, len(w) + 1), repeat=2):
        if i == r and j == r:
            expected = 1
        elif i == r:
            expected = old(i, j) + 1
        elif j == r:
            expected = max(0, old(i, j) - 1)
        else:
            expected = old(i, j)
        if h.cell(w[i - 1], w[j - 1]) != expected:
            return False
    return True


@dataclass
class GapLemmaReport:
    """Outcome of checking the inductive centralizer lemma at one size."""

    n: int
    q: int
    checked: int = 0
    sampled: bool = False
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "checked": self.checked,
            "sampled": self.sampled,
            "failures": self.failures,
        }


def _level_inputs(mu: Partition, spec: FieldSpec) -> Iterator[Matrix]:
    """Every n x n A with A|_{n-1} = J_mu, a free last column and a zero last row."""
    n = mu.size + 1
    base = np.zeros((n, n), dtype=np.int64)
    base[: n - 1, : n - 1] = jordan_matrix(mu, spec).entries
    for column in itertools.product(range(spec.q), repeat=n - 1):
        entries = base.copy()
        entries[: n - 1, n - 1] = column
        yield Matrix(entries, spec)


def lemma_sides(a: Matrix, g: GapArray) -> tuple[Subspace, Subspace]:
    """Both sides of the lemma for one level input A and one G of type shape(A|_{n-1}).

    Returns Y_A (overline(C(G)) meet C_M(A)) Y_A^-1 and C(psi_r(G)), computed
    as subspaces. r is the block A's last column extends.
    """
    spec = a.spec
    trace = conjugate_level(a, g.type_partition)
    space = overline(basis(g, spec))
    meet = space if a.is_zero() else intersect(space, centralizer(a))
    target, _ = psi(g, trace.extended_block)
    return conjugate_subspace(meet, trace.y), basis(target, spec)


class LevelCase:
    """One level input A, prepared for checking the lemma against many gap arrays.

    With W = Y_A^-1 C(H) Y_A, the lemma for G and H = psi_r(G) says
    overline(C(G)) meet C_M(A) = W. That holds exactly when every conjugated
    diagonal of C(H) commutes with A and lies in overline(C(G)), and the two
    sides have the same dimension. The conjugated diagonals, their
    membership conditions on G and the commutators of the spanning vectors
    of overline(C(G)) depend only on A, so they are computed once here.
    """

    def __init__(self, a: Matrix, mu: Partition):
        self.a = a
        self.mu = mu
        self.spec = a.spec
        trace = conjugate_level(a, mu)
        self.r = trace.extended_block
        self.result_shape = trace.result_shape
        n = a.rows
        jordan_form = trace.y @ a @ trace.y_inv

        self._commutes: dict[tuple[int, int, int], bool] = {}
        self._bounds: dict[tuple[int, int, int], dict[tuple[int, int], int] | None] = {}
        for key, x in _diagonal_matrices(self.result_shape, n, self.spec):
            d = Matrix(x, self.spec)
            self._commutes[key] = jordan_form @ d == d @ jordan_form
            self._bounds[key] = self._membership_bounds((trace.y_inv @ d @ trace.y).entries)

        vectors = [x for _, x in _diagonal_matrices(mu, n, self.spec)] + _last_column_units(n)
        self._row_of = {key: k for k, (key, _) in enumerate(_diagonal_matrices(mu, n, self.spec))}
        self._always = list(range(len(self._row_of), len(vectors)))
        commutators = []
        for x in vectors:
            xm = Matrix(x, self.spec)
            commutators.append(self.spec.v_sub((a @ xm).entries, (xm @ a).entries).reshape(-1))
        self._commutators = np.array(commutators, dtype=np.int64)
        self._packed = pack_rows(self._commutators) if self.spec.q == 2 else None

    def _membership_bounds(self, x: np.ndarray) -> dict[tuple[int, int], int] | None:
        """Cell bounds on G for x in overline(C(G)), or None if no G admits x.

        x is in overline(C(G)) when its last row is zero, its top-left block
        is constant along every diagonal of C_M(J_mu) and zero elsewhere, and
        G_ij <= mu_i - t for each nonzero diagonal of length t in block (i, j).
        """
        m = self.mu.size
        if x[m, :].any():
            return None
        top = x[:m, :m]
        if (top * ~_diagonal_mask(self.mu)).any():
            return None
        bounds: dict[tuple[int, int], int] = {}
        for (i, j, t), rows, cols in _diagonal_positions(self.mu):
            values = top[rows, cols]
            if not values.any():
                continue
            if (values != values[0]).any():
                return None
            limit = self.mu.part(i) - t
            bounds[(i, j)] = min(bounds.get((i, j), limit), limit)
        return bounds

    def _meet_dim(self, g: GapArray) -> int:
        selected = [self._row_of[(i, j, t)] for i, j, _, t in free_diagonals(g)] + self._always
        if self._packed is not None:
            rank = gf2_rank([self._packed[k] for k in selected])
        else:
            rank = array_rank(self._commutators[selected], self.spec)
        return len(selected) - rank

    def holds(self, g: GapArray, target: GapArray) -> bool:
        """Whether Y_A (overline(C(g)) meet C_M(A)) Y_A^-1 = C(target)."""
        if target.type_partition != self.result_shape:
            return False
        keys = [(i, j, t) for i, j, _, t in free_diagonals(target)]
        for key in keys:
            bounds = self._bounds[key]
            if not self._commutes[key] or bounds is None:
                return False
            if any(g.cell(i, j) > limit for (i, j), limit in bounds.items()):
                return False
        return self._meet_dim(g) == len(keys)


@functools.lru_cache(maxsize=None)
def _diagonal_positions(lam: Partition) -> tuple[tuple[tuple[int, int, int], np.ndarray, np.ndarray], ...]:
    """((i, j, t), rows, cols) for every diagonal of C_M(J_lambda), 0-based positions."""
    starts = _block_starts(lam)
    out = []
    for i, j in itertools.product(range(1, len(lam) + 1), repeat=2):
        a, b = lam.part(i), lam.part(j)
        for c in range(max(0, b - a), b):
            t = b - c
            rows = np.array([starts[i - 1] + k for k in range(t)])
            cols = np.array([starts[j - 1] + k + c for k in range(t)])
            out.append(((i, j, t), rows, cols))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def _diagonal_mask(lam: Partition) -> np.ndarray:
    m = lam.size
    mask = np.zeros((m, m), dtype=bool)
    for _, rows, cols in _diagonal_positions(lam):
        mask[rows, cols] = True
    return mask


def _diagonal_matrices(lam: Partition, n: int, spec: FieldSpec) -> list[tuple[tuple[int, int, int], np.ndarray]]:
    """Each diagonal of C_M(J_lambda) as a 0/1 n x n matrix (n >= |lambda|)."""
    out = []
    for key, rows, cols in _diagonal_positions(lam):
        x = np.zeros((n, n), dtype=np.int64)
        x[rows, cols] = 1
        out.append((key, x))
    return out


def _last_column_units(n: int) -> list[np.ndarray]:
    units = []
    for i in range(n - 1):
        x = np.zeros((n, n), dtype=np.int64)
        x[i, n - 1] = 1
        units.append(x)
    return units


def verify_gap_lemma(
    n: int, spec: FieldSpec, sample_limit: int | None = None, seed: int = DEFAULT_SEED
) -> GapLemmaReport:
    """Check Y_A (overline(C(G)) meet C_M(A)) Y_A^-1 = C(psi_r(G)) at size n.

    Runs over every mu of n - 1, every A with A|_{n-1} = J_mu and every
    r-valid G of type mu (r is the block A's last column extends; every G
    qualifies when r = l + 1). With sample_limit set, types with more gap
    arrays than that are sampled and the report says so.
    """
    if n < 2:
        raise ValueError(f"the centralizer lemma needs n >= 2, got {n}")
    report = GapLemmaReport(n=n, q=spec.q)
    for mu in partitions_of(n - 1):
        limit = gap_array_count(mu) if sample_limit is None else sample_limit
        arrays, sampled = all_gap_arrays(mu, limit=limit, seed=seed)
        report.sampled = report.sampled or sampled
        cases_by_r: dict[int, list[LevelCase]] = defaultdict(list)
        for a in _level_inputs(mu, spec):
            case = LevelCase(a, mu)
            cases_by_r[case.r].append(case)
        for r, cases in sorted(cases_by_r.items()):
            for g in arrays:
                if r <= len(mu) and not is_r_valid(g, r):
                    continue
                target, _ = psi(g, r)
                for case in cases:
                    report.checked += 1
                    if not case.holds(g, target):
                        report.failures.append(
                            {"type": str(mu), "r": r, "gap_array": g.to_json(), "a": case.a.entries.tolist()}
                        )
        get_logger().debug("gap lemma n=%s type %s: %s arrays, sampled=%s", n, mu, len(arrays), sampled)
    get_logger().info(
        "gap lemma n=%s q=%s: %s cases, %s failures, sampled=%s",
        n,
        spec.q,
        report.checked,
        len(report.failures),
        report.sampled,
    )
    return report
