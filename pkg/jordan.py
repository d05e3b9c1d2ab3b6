"""Jordan types of nilpotent matrices and the canonical conjugation procedure.

For a strictly upper-triangular A the procedure builds X_A with
X_A A X_A^-1 = J_lambda one size at a time. At each level the input A has
top-left (n-1) x (n-1) block equal to J_mu, and five conjugations bring the
last column into place:

    E      clears the last column outside block bottoms
    Delta  scales the first nonzero last-column entry to 1
    L      clears the remaining block-bottom entries below it
    sigma  cycles the last index into the extended block
    tau    moves the extended block to be the first block of its size

Y_A = tau sigma L Delta E, and X_A = Y_{A'} (X_B (+) 1) with B = A|_{n-1}
and A' = (X_B (+) 1) A (X_B (+) 1)^-1.

Every step checks the property it is supposed to establish and raises
ConjugationInvariantError if it does not hold.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from logging_config import get_logger
from matrix import (
    Matrix,
    extend_by_one,
    identity,
    inverse,
    jordan_matrix,
    permutation_matrix,
    rank,
    restrict,
    transvection,
)
from partitions import Partition, conjugate, insertion_position

STEP_LABELS = ("E", "Delta", "L", "sigma", "tau")


class ConjugationInvariantError(RuntimeError):
    """A step of the conjugation procedure did not establish its claimed property."""


def shape(a: Matrix) -> Partition:
    """The Jordan type of a nilpotent matrix from the ranks of its powers.

    Raises:
        ValueError: If a is not square or not nilpotent.
    """
    if not a.is_square():
        raise ValueError(f"shape needs a square matrix, got {a.shape}")
    n = a.rows
    ranks = [n]
    power = identity(n, a.spec)
    while ranks[-1] > 0:
        if len(ranks) > n:
            raise ValueError("matrix is not nilpotent")
        power = power @ a
        ranks.append(rank(power))
    column_lengths = tuple(ranks[i - 1] - ranks[i] for i in range(1, len(ranks)))
    return conjugate(Partition(column_lengths))


def block_bottoms(sizes: Sequence[int]) -> list[int]:
    """Cumulative sums mu~_s = mu_1 + ... + mu_s (1-based row indices)."""
    bottoms, total = [], 0
    for size in sizes:
        total += size
        bottoms.append(total)
    return bottoms


def _last_column(a: Matrix) -> np.ndarray:
    """Rows 1..n-1 of column n."""
    return a.entries[:-1, -1]


def _check_level_input(a: Matrix, mu: Partition) -> None:
    n = a.rows
    if not a.is_square() or mu.size != n - 1:
        raise ValueError(f"level input of size {a.shape} does not extend a type of size {mu.size}")
    if n > 1 and restrict(a, n - 1) != jordan_matrix(mu, a.spec):
        raise ValueError(f"top-left block is not J_{mu}")
    if a.entries[-1].any():
        raise ValueError("last row of a level input must be zero")


def _conjugate(g: Matrix, g_inv: Matrix, a: Matrix) -> Matrix:
    return g @ a @ g_inv


def _e_factors(a: Matrix) -> list[tuple[int, int]]:
    """(i, A_{i,n}) for the nonzero transvection parameters, i = 1..n-2."""
    column = _last_column(a)
    return [(i, int(column[i - 1])) for i in range(1, a.rows - 1) if column[i - 1]]


def _e_product(a: Matrix, factors: list[tuple[int, int]], sign: int) -> Matrix:
    n, spec = a.rows, a.spec
    result = identity(n, spec)
    for i, value in factors:
        alpha = spec.element(value)
        result = result @ transvection(i + 1, n, alpha if sign > 0 else -alpha, n)
    return result


def step_E(a: Matrix, mu: Partition) -> tuple[Matrix, Matrix]:
    """E_A = prod_i E_{i+1,n}(A_{i,n}) and A^[1] = E_A A E_A^-1.

    The i = n-1 factor would be diagonal and is omitted; row n-1 is always a
    block bottom.
    """
    _check_level_input(a, mu)
    factors = _e_factors(a)
    e = _e_product(a, factors, +1)
    if e != _e_product(a, factors[::-1], +1):
        raise ConjugationInvariantError("transvection factors of E_A do not commute")
    e_inv = _e_product(a, factors[::-1], -1)
    a1 = _conjugate(e, e_inv, a)

    bottoms = set(block_bottoms(mu))
    column = _last_column(a1)
    stray = [i for i in range(1, a.rows) if column[i - 1] and i not in bottoms]
    if stray or restrict(a1, a.rows - 1) != restrict(a, a.rows - 1):
        raise ConjugationInvariantError(f"E step left last-column entries in rows {stray}")
    return e, a1


def step_Delta(a1: Matrix) -> tuple[Matrix, Matrix]:
    """Delta_A = diag(1, ..., 1, x) with x the first nonzero last-column entry."""
    n, spec = a1.rows, a1.spec
    column = _last_column(a1)
    nonzero = np.flatnonzero(column)
    x = int(column[nonzero[0]]) if nonzero.size else 1
    diag = np.eye(n, dtype=np.int64)
    diag_inv = np.eye(n, dtype=np.int64)
    diag[-1, -1] = x
    diag_inv[-1, -1] = spec.inv(x)
    delta, delta_inv = Matrix(diag, spec), Matrix(diag_inv, spec)
    a2 = _conjugate(delta, delta_inv, a1)
    if nonzero.size and int(a2.entries[nonzero[0], -1]) != 1:
        raise ConjugationInvariantError("Delta step did not normalize the leading entry")
    return delta, a2


def extended_block(a: Matrix, mu: Partition) -> tuple[int, tuple[int, ...]]:
    """The block r that the last column extends and the grown block sizes.

    r is the block whose bottom row holds the first nonzero last-column entry,
    or len(mu) + 1 (a new block of size 1) when the last column is zero.
    """
    column = _last_column(a)
    nonzero = np.flatnonzero(column)
    sizes = list(mu.parts)
    if nonzero.size == 0:
        return len(sizes) + 1, tuple(sizes + [1])
    row = int(nonzero[0]) + 1
    bottoms = block_bottoms(sizes)
    if row not in bottoms:
        raise ConjugationInvariantError(f"leading last-column entry in row {row} is not a block bottom")
    r = bottoms.index(row) + 1
    sizes[r - 1] += 1
    return r, tuple(sizes)


def _f_matrix(mu: Partition, j: int, r: int, alpha: int, n: int, spec) -> Matrix:
    """F_{j,r}(alpha) = 1 + alpha sum_k e_{mu~_{j-1}+k, mu~_r - mu_j + k}."""
    bottoms = block_bottoms(mu)
    top_j = bottoms[j - 2] if j > 1 else 0
    entries = np.eye(n, dtype=np.int64)
    for k in range(1, mu.part(j) + 1):
        entries[top_j + k - 1, bottoms[r - 1] - mu.part(j) + k - 1] = alpha
    return Matrix(entries, spec)


def step_L(a2: Matrix, mu: Partition) -> tuple[Matrix, Matrix]:
    """L_A = prod_{j>r} F_{j,r}(-A^[2]_{mu~_j,n}) clears the lower block bottoms."""
    n, spec = a2.rows, a2.spec
    r, _ = extended_block(a2, mu)
    l_mat, l_inv = identity(n, spec), identity(n, spec)
    if r <= len(mu):
        bottoms = block_bottoms(mu)
        column = _last_column(a2)
        for j in range(r + 1, len(mu) + 1):
            value = int(column[bottoms[j - 1] - 1])
            if not value:
                continue
            l_mat = l_mat @ _f_matrix(mu, j, r, spec.neg(value), n, spec)
            l_inv = _f_matrix(mu, j, r, value, n, spec) @ l_inv
    a3 = _conjugate(l_mat, l_inv, a2)

    column = _last_column(a3)
    expected = np.zeros(n - 1, dtype=np.int64)
    if r <= len(mu):
        expected[block_bottoms(mu)[r - 1] - 1] = 1
    if not np.array_equal(column, expected) or restrict(a3, n - 1) != restrict(a2, n - 1):
        raise ConjugationInvariantError("L step did not leave a single 1 in the last column")
    return l_mat, a3


def step_sigma(a3: Matrix, mu: Partition) -> tuple[Matrix, Matrix]:
    """sigma_A = (mu~_r + 1, ..., n) moves the last index into block r."""
    n, spec = a3.rows, a3.spec
    r, sizes = extended_block(a3, mu)
    w = list(range(1, n + 1))
    if r <= len(mu):
        start = block_bottoms(mu)[r - 1] + 1
        for i in range(start, n):
            w[i - 1] = i + 1
        w[n - 1] = start
    sigma = permutation_matrix(w, spec)
    a4 = _conjugate(sigma, sigma.transpose(), a3)
    if a4 != jordan_matrix(sizes, spec):
        raise ConjugationInvariantError(f"sigma step did not produce Jordan blocks {sizes}")
    return sigma, a4


def tau_order(block_sizes: Sequence[int], current: int) -> list[int]:
    """New block order (old 1-based block indices) with the current block moved up.

    Raises:
        ValueError: If the blocks other than `current` are not weakly descending.
    """
    others = [b for b in range(1, len(block_sizes) + 1) if b != current]
    other_sizes = [block_sizes[b - 1] for b in others]
    if any(x < y for x, y in zip(other_sizes, other_sizes[1:])):
        raise ValueError(f"more than one block out of order in {list(block_sizes)}")
    slot = insertion_position(other_sizes, block_sizes[current - 1])
    return others[:slot] + [current] + others[slot:]


def step_tau(a4: Matrix, block_sizes: Sequence[int], current: int) -> tuple[Matrix, Matrix]:
    """tau_A reorders the blocks into weakly descending sizes.

    The current block is placed before every block of equal size; the other
    blocks keep their relative order.
    """
    spec = a4.spec
    if a4 != jordan_matrix(block_sizes, spec):
        raise ValueError("step_tau needs a direct sum of Jordan blocks")
    order = tau_order(block_sizes, current)
    old_starts = [b - s for b, s in zip(block_bottoms(block_sizes), block_sizes)]
    w = [0] * a4.rows
    new_start = 0
    for block in order:
        size = block_sizes[block - 1]
        for t in range(size):
            w[old_starts[block - 1] + t] = new_start + t + 1
        new_start += size
    tau = permutation_matrix(w, spec)
    a5 = _conjugate(tau, tau.transpose(), a4)
    lam = Partition(tuple(sorted(block_sizes, reverse=True)))
    if a5 != jordan_matrix(lam, spec):
        raise ConjugationInvariantError(f"tau step did not produce J_{lam}")
    return tau, a5


@dataclass
class ConjugationTrace:
    # pylint: disable=too-many-instance-attributes
    """One level of the recursion.

    Attributes:
        level (int): Matrix size at this level.
        mu (Partition): Jordan type of the top-left (level-1) block.
        level_input (Matrix): The matrix A' the five steps act on.
        steps (list[tuple[str, Matrix]]): (label, matrix) for E, Delta, L, sigma, tau.
        intermediates (list[Matrix]): A^[1] .. A^[5].
        extended_block (int): The block index r grown at this level.
        result_shape (Partition): The Jordan type after this level.
        y (Matrix): Y = tau sigma L Delta E.
        y_inv (Matrix): Its inverse.
        conjugator (Matrix): The accumulated X for the leading level x level block.
    """

    level: int
    mu: Partition
    level_input: Matrix
    steps: list[tuple[str, Matrix]] = field(default_factory=list)
    intermediates: list[Matrix] = field(default_factory=list)
    extended_block: int = 0
    result_shape: Partition = Partition(())
    y: Matrix | None = None
    y_inv: Matrix | None = None
    conjugator: Matrix | None = None

    def replay(self) -> list[Matrix]:
        """Recompute the intermediates from the level input and the step matrices."""
        state, states = self.level_input, []
        for _, step in self.steps:
            state = step @ state @ inverse(step)
            states.append(state)
        return states

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "input_type": str(self.mu),
            "extended_block": self.extended_block,
            "result_type": str(self.result_shape),
            "level_input": self.level_input.entries.tolist(),
            "steps": [{"label": label, "matrix": m.entries.tolist()} for label, m in self.steps],
            "intermediates": [m.entries.tolist() for m in self.intermediates],
            "conjugator": None if self.conjugator is None else self.conjugator.entries.tolist(),
        }


def conjugate_level(a: Matrix, mu: Partition) -> ConjugationTrace:
    """Run the five steps on A with A|_{n-1} = J_mu and return the level trace."""
    e, a1 = step_E(a, mu)
    delta, a2 = step_Delta(a1)
    l_mat, a3 = step_L(a2, mu)
    r, sizes = extended_block(a3, mu)
    sigma, a4 = step_sigma(a3, mu)
    tau, a5 = step_tau(a4, sizes, r)

    y = tau @ sigma @ l_mat @ delta @ e
    y_inv = inverse(y)
    lam = Partition(tuple(sorted(sizes, reverse=True)))
    return ConjugationTrace(
        level=a.rows,
        mu=mu,
        level_input=a,
        steps=list(zip(STEP_LABELS, (e, delta, l_mat, sigma, tau))),
        intermediates=[a1, a2, a3, a4, a5],
        extended_block=r,
        result_shape=lam,
        y=y,
        y_inv=y_inv,
    )


def canonical_conjugator(a: Matrix) -> tuple[Matrix, list[ConjugationTrace]]:
    """X_A with X_A A X_A^-1 = J_shape(A), plus one trace per level 2..n.

    Raises:
        ValueError: If a is not strictly upper-triangular.
        ConjugationInvariantError: If the result is not the Jordan form.
    """
    if not a.is_strictly_upper():
        raise ValueError("canonical_conjugator needs a strictly upper-triangular matrix")
    spec, n = a.spec, a.rows
    x, x_inv = identity(1, spec), identity(1, spec)
    mu = Partition((1,))
    traces: list[ConjugationTrace] = []
    for m in range(2, n + 1):
        xb, xb_inv = extend_by_one(x), extend_by_one(x_inv)
        a_prime = xb @ restrict(a, m) @ xb_inv
        trace = conjugate_level(a_prime, mu)
        x = trace.y @ xb
        x_inv = xb_inv @ trace.y_inv
        trace.conjugator = x
        traces.append(trace)
        mu = trace.result_shape
        get_logger().debug("level %s: extended block %s, type %s", m, trace.extended_block, mu)
    if x @ a @ x_inv != jordan_matrix(mu, spec):
        raise ConjugationInvariantError("X_A A X_A^-1 is not in Jordan form")
    return x, traces
