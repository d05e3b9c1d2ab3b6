"""Dense exact linear algebra over F_q.

Matrices hold a read-only numpy array of field encodings together with their
FieldSpec. Indices in the public constructors (transvection, permutation_matrix,
Matrix.entry) are 1-based, as in the mathematics; the underlying arrays are
0-based.

Operators on matrix spaces act on n x n matrices flattened to n^2-vectors in
row-major order. Subspaces are stored by their reduced row echelon basis so
that equal subspaces have identical stored data.

Text format (ingestion and output):

    n m q=<p^k>
    n lines of m integer encodings separated by spaces
"""

import itertools
import math
from collections.abc import Iterable, Sequence

import numpy as np
from field import FieldElement, FieldMismatchError, FieldSpec, parse_field_name
from gf2 import gf2_rank, gf2_rref, pack_rows, unpack_rows


class DimensionMismatchError(ValueError):
    """Operand shapes are incompatible."""


class SingularMatrixError(ValueError):
    """The matrix has no inverse."""


def _as_entries(values, spec: FieldSpec) -> np.ndarray:
    arr = np.array(values, dtype=np.int64)
    if arr.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-dimensional array, got shape {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() >= spec.q):
        raise ValueError(f"entries must be encodings in [0, {spec.q})")
    arr.setflags(write=False)
    return arr


class Matrix:
    """An immutable dense matrix over one finite field."""

    def __init__(self, entries, spec: FieldSpec):
        self.spec = spec
        self.entries = _as_entries(entries, spec)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def entry(self, i: int, j: int) -> FieldElement:
        """The (i, j) entry, 1-based."""
        return FieldElement(self.spec, int(self.entries[i - 1, j - 1]))

    def flatten(self) -> np.ndarray:
        return self.entries.reshape(-1)

    def transpose(self) -> "Matrix":
        return Matrix(self.entries.T, self.spec)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not self.entries.any()

    def is_strictly_upper(self) -> bool:
        return self.is_square() and not np.tril(self.entries).any()

    def is_unitriangular(self) -> bool:
        if not self.is_square():
            return False
        return bool((np.diag(self.entries) == 1).all()) and not np.tril(self.entries, -1).any()

    def is_permutation(self) -> bool:
        if not self.is_square():
            return False
        ones = self.entries == 1
        return (
            bool(((self.entries == 0) | ones).all())
            and bool((ones.sum(axis=0) == 1).all())
            and bool((ones.sum(axis=1) == 1).all())
        )

    def power(self, exponent: int) -> "Matrix":
        if exponent < 0:
            return inverse(self).power(-exponent)
        result = identity(self.rows, self.spec)
        for _ in range(exponent):
            result = result @ self
        return result

    def _check(self, other: "Matrix") -> None:
        if other.spec != self.spec:
            raise FieldMismatchError(f"matrices over {self.spec} and {other.spec}")

    def __add__(self, other: "Matrix") -> "Matrix":
        return add(self, other)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return sub(self, other)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mul(self, other)

    def __neg__(self) -> "Matrix":
        return Matrix(self.spec.v_neg(self.entries), self.spec)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.shape == other.shape
            and bool(np.array_equal(self.entries, other.entries))
        )

    def __hash__(self) -> int:
        return hash((self.spec, self.shape, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"Matrix({self.entries.tolist()}, {self.spec})"

    def __str__(self) -> str:
        return format_matrix(self)


def mul(a: Matrix, b: Matrix) -> Matrix:
    """Matrix product.

    Raises:
        DimensionMismatchError: If a.cols != b.rows.
    """
    a._check(b)  # pylint: disable=protected-access
    if a.cols != b.rows:
        raise DimensionMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    return Matrix(a.spec.v_matmul(a.entries, b.entries), a.spec)


def add(a: Matrix, b: Matrix) -> Matrix:
    a._check(b)  # pylint: disable=protected-access
    if a.shape != b.shape:
        raise DimensionMismatchError(f"cannot add {a.shape} and {b.shape}")
    return Matrix(a.spec.v_add(a.entries, b.entries), a.spec)


def sub(a: Matrix, b: Matrix) -> Matrix:
    a._check(b)  # pylint: disable=protected-access
    if a.shape != b.shape:
        raise DimensionMismatchError(f"cannot subtract {b.shape} from {a.shape}")
    return Matrix(a.spec.v_sub(a.entries, b.entries), a.spec)


def zeros(rows: int, cols: int, spec: FieldSpec) -> Matrix:
    return Matrix(np.zeros((rows, cols), dtype=np.int64), spec)


def identity(n: int, spec: FieldSpec) -> Matrix:
    return Matrix(np.eye(n, dtype=np.int64), spec)


def diagonal(values: Sequence[FieldElement], spec: FieldSpec) -> Matrix:
    return Matrix(np.diag([v.value for v in values]).astype(np.int64), spec)


def from_flat(vector: np.ndarray, n: int, spec: FieldSpec) -> Matrix:
    """The n x n matrix whose row-major flattening is vector."""
    return Matrix(np.asarray(vector, dtype=np.int64).reshape(n, n), spec)


# Elimination


def _row_reduce_generic(entries: np.ndarray, spec: FieldSpec) -> tuple[np.ndarray, list[int]]:
    work = np.array(entries, dtype=np.int64)
    n_rows, n_cols = work.shape
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        candidates = np.flatnonzero(work[r:, c])
        if candidates.size == 0:
            continue
        pivot = r + int(candidates[0])
        if pivot != r:
            work[[r, pivot]] = work[[pivot, r]]
        lead = int(work[r, c])
        if lead != 1:
            work[r] = spec.v_mul(work[r], spec.inv(lead))
        others = np.flatnonzero(work[:, c])
        others = others[others != r]
        if others.size:
            factors = work[others, c]
            work[others] = spec.v_sub(work[others], spec.v_mul(factors[:, None], work[r][None, :]))
        pivots.append(c)
        r += 1
    return work[:r], pivots


def row_reduce(entries: np.ndarray, spec: FieldSpec) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form: the nonzero rows and their pivot columns."""
    entries = np.asarray(entries, dtype=np.int64)
    if entries.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-dimensional array, got shape {entries.shape}")
    if spec.q == 2:
        rows, pivots = gf2_rref(pack_rows(entries), entries.shape[1])
        return unpack_rows(rows, entries.shape[1]), pivots
    return _row_reduce_generic(entries, spec)


def array_rank(entries: np.ndarray, spec: FieldSpec) -> int:
    if spec.q == 2:
        return gf2_rank(pack_rows(entries))
    return len(_row_reduce_generic(entries, spec)[1])


def rank(a: Matrix) -> int:
    return array_rank(a.entries, a.spec)


def _kernel_vectors(entries: np.ndarray, spec: FieldSpec) -> np.ndarray:
    n_cols = entries.shape[1]
    reduced, pivots = row_reduce(entries, spec)
    pivot_set = set(pivots)
    free = [c for c in range(n_cols) if c not in pivot_set]
    kernel = np.zeros((len(free), n_cols), dtype=np.int64)
    for idx, f in enumerate(free):
        kernel[idx, f] = 1
        for row, p in enumerate(pivots):
            kernel[idx, p] = spec.neg(int(reduced[row, f]))
    return kernel


def nullspace(a: Matrix) -> "Subspace":
    """The right kernel {x : a x = 0} as a canonical Subspace of F_q^cols."""
    return Subspace.span(_kernel_vectors(a.entries, a.spec), a.cols, a.spec)


def inverse(a: Matrix) -> Matrix:
    """Inverse by Gauss-Jordan elimination of [a | I].

    Raises:
        SingularMatrixError: If a is not square or not invertible.
    """
    if not a.is_square():
        raise SingularMatrixError(f"{a.shape} matrix is not square")
    n = a.rows
    augmented = np.hstack([a.entries, np.eye(n, dtype=np.int64)])
    reduced, pivots = row_reduce(augmented, a.spec)
    if pivots != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return Matrix(reduced[:, n:], a.spec)


# Special matrices


def jordan_matrix(sizes: Iterable[int], spec: FieldSpec) -> Matrix:
    """Block-diagonal nilpotent matrix with superdiagonal-1 blocks of the given sizes.

    Accepts a Partition or any composition of block sizes.
    """
    sizes = list(sizes)
    n = sum(sizes)
    entries = np.zeros((n, n), dtype=np.int64)
    start = 0
    for size in sizes:
        for t in range(size - 1):
            entries[start + t, start + t + 1] = 1
        start += size
    return Matrix(entries, spec)


def transvection(i: int, j: int, alpha: FieldElement, n: int) -> Matrix:
    """The identity plus alpha in position (i, j), 1-based.

    Raises:
        ValueError: If i == j or an index is out of range.
    """
    if i == j:
        raise ValueError(f"transvection needs i != j (got {i}, {j})")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"transvection index ({i}, {j}) outside 1..{n}")
    entries = np.eye(n, dtype=np.int64)
    entries[i - 1, j - 1] = alpha.value
    return Matrix(entries, alpha.spec)


def permutation_matrix(w: Sequence[int], spec: FieldSpec) -> Matrix:
    """P with P[w(i), i] = 1, where w is given as the images (w(1), ..., w(n)).

    Conjugation by P relabels row and column i as w(i).

    Raises:
        ValueError: If w is not a bijection of 1..n.
    """
    n = len(w)
    if sorted(w) != list(range(1, n + 1)):
        raise ValueError(f"{list(w)} is not a permutation of 1..{n}")
    entries = np.zeros((n, n), dtype=np.int64)
    for i, image in enumerate(w):
        entries[image - 1, i] = 1
    return Matrix(entries, spec)


def restrict(a: Matrix, k: int) -> Matrix:
    """The top-left k x k submatrix."""
    if not 1 <= k <= min(a.rows, a.cols):
        raise ValueError(f"restriction size {k} outside 1..{min(a.rows, a.cols)}")
    return Matrix(a.entries[:k, :k], a.spec)


def extend_by_one(a: Matrix) -> Matrix:
    """The direct sum a (+) (1)."""
    n = a.rows
    entries = np.eye(n + 1, dtype=np.int64)
    entries[:n, :n] = a.entries
    return Matrix(entries, a.spec)


# Subspaces


class Subspace:
    """A subspace of F_q^ambient_dim stored by its canonical echelon basis."""

    def __init__(self, basis: np.ndarray, ambient_dim: int, spec: FieldSpec):
        basis = np.array(basis, dtype=np.int64).reshape(-1, ambient_dim)
        basis.setflags(write=False)
        self.basis = basis
        self.ambient_dim = ambient_dim
        self.spec = spec

    @classmethod
    def span(cls, vectors, ambient_dim: int, spec: FieldSpec) -> "Subspace":
        vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, ambient_dim)
        if vectors.shape[0] == 0:
            return cls(np.zeros((0, ambient_dim), dtype=np.int64), ambient_dim, spec)
        reduced, _ = row_reduce(vectors, spec)
        return cls(reduced, ambient_dim, spec)

    @classmethod
    def zero(cls, ambient_dim: int, spec: FieldSpec) -> "Subspace":
        return cls(np.zeros((0, ambient_dim), dtype=np.int64), ambient_dim, spec)

    @classmethod
    def full(cls, ambient_dim: int, spec: FieldSpec) -> "Subspace":
        return cls(np.eye(ambient_dim, dtype=np.int64), ambient_dim, spec)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def matrices(self) -> list[Matrix]:
        """Basis vectors reshaped as square matrices (ambient_dim must be a square)."""
        n = math.isqrt(self.ambient_dim)
        return [from_flat(row, n, self.spec) for row in self.basis]

    def all_vectors(self) -> np.ndarray:
        """Every one of the q^dim vectors, ordered by coefficient tuple."""
        if self.dim == 0:
            return np.zeros((1, self.ambient_dim), dtype=np.int64)
        coefficients = np.array(
            list(itertools.product(range(self.spec.q), repeat=self.dim)), dtype=np.int64
        )
        return self.spec.v_matmul(coefficients, self.basis)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(contains(other, row) for row in self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.ambient_dim == other.ambient_dim
            and bool(np.array_equal(self.basis, other.basis))
        )

    def __hash__(self) -> int:
        return hash((self.spec, self.ambient_dim, self.basis.tobytes()))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim}, {self.spec})"


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.spec != b.spec:
        raise FieldMismatchError(f"subspaces over {a.spec} and {b.spec}")
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError(f"ambient dimensions {a.ambient_dim} and {b.ambient_dim}")


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    return Subspace.span(np.vstack([a.basis, b.basis]), a.ambient_dim, a.spec)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the left kernel of the stacked bases."""
    _check_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim, a.spec)
    stacked = np.vstack([a.basis, b.basis])
    relations = _kernel_vectors(stacked.T, a.spec)
    if relations.shape[0] == 0:
        return Subspace.zero(a.ambient_dim, a.spec)
    vectors = a.spec.v_matmul(relations[:, : a.dim], a.basis)
    return Subspace.span(vectors, a.ambient_dim, a.spec)


def contains(space: Subspace, x) -> bool:
    """Membership of a coordinate vector or a matrix (flattened row-major)."""
    vector = x.flatten() if isinstance(x, Matrix) else np.asarray(x, dtype=np.int64)
    if vector.shape != (space.ambient_dim,):
        raise DimensionMismatchError(
            f"vector of length {vector.size} in ambient dimension {space.ambient_dim}"
        )
    if not vector.any():
        return True
    if space.dim == 0:
        return False
    return array_rank(np.vstack([space.basis, vector]), space.spec) == space.dim


def conjugate_subspace(space: Subspace, g: Matrix) -> Subspace:
    """The subspace {g X g^-1 : X in space} of n x n matrices."""
    n = math.isqrt(space.ambient_dim)
    if n * n != space.ambient_dim or g.shape != (n, n):
        raise DimensionMismatchError(f"cannot conjugate {n}x{n} matrices by {g.shape}")
    g_inv = inverse(g)
    vectors = [(g @ x @ g_inv).flatten() for x in space.matrices()]
    return Subspace.span(vectors, space.ambient_dim, space.spec)


def overline(space: Subspace) -> Subspace:
    """Extend a space of (n-1) x (n-1) matrices to n x n: free last column above the diagonal."""
    m = math.isqrt(space.ambient_dim)
    if m * m != space.ambient_dim:
        raise DimensionMismatchError(f"ambient dimension {space.ambient_dim} is not a square")
    n = m + 1
    vectors = []
    for row in space.basis:
        big = np.zeros((n, n), dtype=np.int64)
        big[:m, :m] = row.reshape(m, m)
        vectors.append(big.reshape(-1))
    for i in range(m):
        big = np.zeros((n, n), dtype=np.int64)
        big[i, n - 1] = 1
        vectors.append(big.reshape(-1))
    return Subspace.span(vectors, n * n, space.spec)


def sylvester_operator(a: Matrix, b: Matrix) -> Matrix:
    """Matrix of X -> aX - Xb on row-major flattened a.rows x b.rows matrices."""
    if not (a.is_square() and b.is_square()):
        raise DimensionMismatchError("sylvester operator needs square matrices")
    a._check(b)  # pylint: disable=protected-access
    left = np.kron(a.entries, np.eye(b.rows, dtype=np.int64))
    right = np.kron(np.eye(a.rows, dtype=np.int64), b.entries.T)
    return Matrix(a.spec.v_sub(left, right), a.spec)


def centralizer(a: Matrix) -> Subspace:
    """C_M(a): every n x n matrix commuting with a."""
    return nullspace(sylvester_operator(a, a))


# Text format


def format_matrix(a: Matrix) -> str:
    lines = [f"{a.rows} {a.cols} {a.spec.name}"]
    lines.extend(" ".join(str(int(v)) for v in row) for row in a.entries)
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> Matrix:
    """Parse the matrix text format.

    Raises:
        ValueError: On a malformed header, wrong row count or wrong row length.
    """
    lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    header = lines[0].split()
    if len(header) != 3:
        raise ValueError(f"matrix header '{lines[0]}' is not 'n m q=<p^k>'")
    n_rows, n_cols = int(header[0]), int(header[1])
    spec = parse_field_name(header[2])
    body = lines[1:]
    if len(body) != n_rows:
        raise ValueError(f"expected {n_rows} matrix rows, found {len(body)}")
    rows = [[int(tok) for tok in line.split()] for line in body]
    for idx, row in enumerate(rows, start=1):
        if len(row) != n_cols:
            raise ValueError(f"row {idx} has {len(row)} entries, expected {n_cols}")
    return Matrix(np.array(rows, dtype=np.int64).reshape(n_rows, n_cols), spec)


def read_matrix_file(path: str) -> Matrix:
    with open(path, "r", encoding="utf-8") as matrix_file:
        return parse_matrix(matrix_file.read())


def write_matrix_file(path: str, a: Matrix) -> None:
    with open(path, "w", encoding="utf-8") as matrix_file:
        matrix_file.write(format_matrix(a))
