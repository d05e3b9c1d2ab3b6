"""Bit-packed GF(2) elimination.

Rows are Python integers with bit j holding column j. This is the q = 2 fast
path behind matrix.rank and matrix.row_reduce; results are identical to the
generic table-driven elimination.
"""

import numpy as np


def pack_rows(entries: np.ndarray) -> list[int]:
    """Pack a 0/1 array into one integer per row (bit j = column j)."""
    return [sum(1 << int(j) for j in np.flatnonzero(row)) for row in entries]


def unpack_rows(rows: list[int], n_cols: int) -> np.ndarray:
    """Inverse of pack_rows."""
    out = np.zeros((len(rows), n_cols), dtype=np.int64)
    for i, row in enumerate(rows):
        while row:
            low = row & -row
            out[i, low.bit_length() - 1] = 1
            row ^= low
    return out


def gf2_rank(rows: list[int]) -> int:
    """Rank over GF(2) with an XOR basis keyed by lowest set bit."""
    basis: dict[int, int] = {}
    for vec in rows:
        while vec:
            low = vec & -vec
            if low not in basis:
                basis[low] = vec
                break
            vec ^= basis[low]
    return len(basis)


def gf2_rref(rows: list[int], n_cols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form over GF(2).

    Returns the nonzero reduced rows and their pivot columns. Pivots are the
    lowest column indices, matching the generic elimination order.
    """
    work = [row for row in rows if row]
    pivots: list[int] = []
    row_idx = 0
    for col in range(n_cols):
        if row_idx == len(work):
            break
        bit = 1 << col
        pivot = next((r for r in range(row_idx, len(work)) if work[r] & bit), None)
        if pivot is None:
            continue
        work[row_idx], work[pivot] = work[pivot], work[row_idx]
        pivot_row = work[row_idx]
        for r, row in enumerate(work):
            if r != row_idx and row & bit:
                work[r] = row ^ pivot_row
        pivots.append(col)
        row_idx += 1
    return work[:row_idx], pivots
