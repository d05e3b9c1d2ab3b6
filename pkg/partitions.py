"""Integer-partition combinatorics.

Partitions are stored without trailing zeros and behave as zero-extended
sequences: part(i) is 0 for i > length. The same convention applies to the
exact rational vectors used by the h-function.

Classes:
    Partition: Weakly decreasing positive parts; doubles as a Jordan type.

Functions:
    conjugate, n_stat, inner, norm_sq, multiplicities, hook_count,
    partitions_of, partition_count, phi, insertion_position,
    shift, h_value, parse_partition.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

RationalVector = tuple[Fraction, ...]


@dataclass(frozen=True)
class Partition:
    """A finite weakly decreasing sequence of positive integers."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def part(self, i: int) -> int:
        """The i-th part, 1-based, zero past the length."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def conjugate(self) -> "Partition":
        return conjugate(self)

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"


def parse_partition(text: str) -> Partition:
    """Parse "(6,2,1,1)"; "()" is the empty partition."""
    body = text.strip().lstrip("(").rstrip(")").strip()
    if not body:
        return Partition(())
    return Partition(tuple(int(tok) for tok in body.split(",")))


def conjugate(lam: Partition) -> Partition:
    """lam'_i is the number of parts of size at least i."""
    if not lam.parts:
        return Partition(())
    return Partition(tuple(sum(1 for p in lam.parts if p >= i) for i in range(1, lam.parts[0] + 1)))


def n_stat(lam: Partition) -> int:
    """n(lam) = sum (i-1) lam_i."""
    return sum(i * p for i, p in enumerate(lam.parts))


def n_stat_from_conjugate(lam: Partition) -> int:
    """n(lam) computed as sum C(lam'_i, 2)."""
    return sum(comb(c, 2) for c in conjugate(lam).parts)


def inner(lam: Sequence[int], mu: Sequence[int]) -> int:
    """Inner product of zero-extended sequences."""
    return sum(a * b for a, b in zip(lam, mu))


def norm_sq(lam: Sequence[int]) -> int:
    return inner(lam, lam)


def multiplicities(lam: Partition) -> list[int]:
    """[m_1, m_2, ..., m_{lam_1}] where m_i counts the parts equal to i."""
    if not lam.parts:
        return []
    return [lam.parts.count(i) for i in range(1, lam.parts[0] + 1)]


def hook_count(lam: Partition) -> int:
    """f^lam, the number of standard Young tableaux, by the hook-length formula."""
    lam_c = conjugate(lam)
    product = 1
    for i, row in enumerate(lam.parts, start=1):
        for j in range(1, row + 1):
            product *= (row - j) + (lam_c.part(j) - i) + 1
    return factorial(lam.size) // product


def _partitions(n: int, max_part: int):
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def partitions_of(n: int) -> list[Partition]:
    """All partitions of n in lexicographically decreasing order."""
    if n < 0:
        raise ValueError(f"cannot partition a negative integer ({n})")
    return [Partition(parts) for parts in _partitions(n, n)]


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """p(n) by Euler's pentagonal number recurrence."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total, k = 0, 1
    while True:
        first = k * (3 * k - 1) // 2
        if first > n:
            break
        second = k * (3 * k + 1) // 2
        sign = 1 if k % 2 else -1
        total += sign * (partition_count(n - first) + partition_count(n - second))
        k += 1
    return total


def insertion_position(other_sizes: Iterable[int], size: int) -> int:
    """0-based slot for a block of `size` among descending `other_sizes`.

    The block goes before every block of equal size.
    """
    return sum(1 for s in other_sizes if s > size)


def phi(lam: Partition, r: int) -> tuple[Partition, tuple[int, ...]]:
    """Add a box to row r and re-sort.

    Returns the new partition and the permutation w, given as images
    (w(1), ..., w(l')), with mu_{w(i)} = lam_i for i != r and
    mu_{w(r)} = lam_r + 1. The grown row becomes the first row of its size;
    the other rows keep their relative order.

    Raises:
        ValueError: If r is outside 1..length+1.
    """
    ell = len(lam)
    if not 1 <= r <= ell + 1:
        raise ValueError(f"row {r} outside 1..{ell + 1}")
    sizes = list(lam.parts) + ([0] if r == ell + 1 else [])
    sizes[r - 1] += 1
    total = len(sizes)
    others = [i for i in range(1, total + 1) if i != r]
    target = insertion_position((sizes[i - 1] for i in others), sizes[r - 1]) + 1
    slots = [pos for pos in range(1, total + 1) if pos != target]
    w = [0] * total
    w[r - 1] = target
    for i, pos in zip(others, slots):
        w[i - 1] = pos
    reordered = [0] * total
    for i, size in enumerate(sizes, start=1):
        reordered[w[i - 1] - 1] = size
    return Partition(tuple(reordered)), tuple(w)


def as_vector(values: Iterable) -> RationalVector:
    """Exact rational vector without trailing zeros."""
    vector = [Fraction(v) for v in values]
    while vector and vector[-1] == 0:
        vector.pop()
    return tuple(vector)


def shift(v: Sequence[Fraction]) -> RationalVector:
    """The left shift L: (Lv)_i = v_{i+1}."""
    return as_vector(v[1:])


def subtract(v: Sequence[Fraction], w: Sequence[Fraction]) -> RationalVector:
    length = max(len(v), len(w))
    padded_v = list(v) + [0] * (length - len(v))
    padded_w = list(w) + [0] * (length - len(w))
    return as_vector(a - b for a, b in zip(padded_v, padded_w))


def h_value(v: Sequence) -> Fraction:
    """h(v) = ||v||^2 - ||v - Lv||^2, exact."""
    vec = as_vector(v)
    return Fraction(norm_sq(vec)) - Fraction(norm_sq(subtract(vec, shift(vec))))
