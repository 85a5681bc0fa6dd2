"""Core matrix operations: orthogonal-array and Latin-hypercube predicates,
level collapse and expansion, and grid stratification counting.

All structural checks use exact integer arithmetic; no tolerances exist here.
Levels are always 0-indexed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import (
    LevelOutOfRange,
    NonDivisibleGrid,
    StrengthMismatch,
    TooLarge,
    UnbalancedColumn,
)
from .rng import as_generator


def as_matrix(matrix) -> np.ndarray:
    """Coerce to a 2-D integer array with nonnegative entries."""
    m = np.asarray(matrix, dtype=int)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if m.size and m.min() < 0:
        raise LevelOutOfRange("matrix entries must be nonnegative")
    return m


def _column_levels(levels, n_cols: int) -> tuple[int, ...]:
    if np.isscalar(levels):
        return (int(levels),) * n_cols
    out = tuple(int(v) for v in levels)
    if len(out) != n_cols:
        raise ValueError(f"got {len(out)} level counts for {n_cols} columns")
    return out


def is_orthogonal_array(matrix, levels, strength: int) -> bool:
    """True iff every `strength`-column projection contains each level
    combination equally often.

    `levels` is one count for all columns or a per-column sequence.  The
    common frequency must be n divided by the product of the chosen level
    counts; if that is not an integer the answer is False.  Entries outside
    their column's range raise LevelOutOfRange.
    """
    m = as_matrix(matrix)
    n, n_cols = m.shape
    lv = _column_levels(levels, n_cols)
    for j, s_j in enumerate(lv):
        if s_j < 1:
            raise ValueError(f"column {j} has level count {s_j}")
        if n and int(m[:, j].max()) >= s_j:
            raise LevelOutOfRange(f"column {j} has entries outside 0..{s_j - 1}")
    if not 1 <= strength <= n_cols:
        raise ValueError(f"strength must be in 1..{n_cols}, got {strength}")
    for cols in itertools.combinations(range(n_cols), strength):
        dims = tuple(lv[c] for c in cols)
        cells = int(np.prod(dims))
        if n % cells:
            return False
        keys = np.ravel_multi_index(tuple(m[:, c] for c in cols), dims)
        counts = np.bincount(keys, minlength=cells)
        if not np.all(counts == n // cells):
            return False
    return True


def is_latin_hypercube(matrix) -> bool:
    """True iff every column is a permutation of 0..n-1."""
    m = as_matrix(matrix)
    n = m.shape[0]
    if m.shape[1] == 0:
        return True
    return bool(np.array_equal(np.sort(m, axis=0), np.broadcast_to(np.arange(n)[:, None], m.shape)))


def level_collapse(matrix, s: int) -> np.ndarray:
    """Entrywise floor division by s, merging each run of s levels into one."""
    if s < 2:
        raise ValueError(f"collapse factor must be at least 2, got {s}")
    return as_matrix(matrix) // s


def level_expand(matrix, rng) -> np.ndarray:
    """Randomized inverse of level_collapse, one column at a time.

    Each column must have some number L of levels, every level occurring
    exactly n/L times; the positions of level i receive a random permutation
    of i*(n/L)..(i+1)*(n/L)-1.  The block size n/L is inferred per column, so
    columns with different level counts are fine.  Collapsing the result by
    n/L restores the input.
    """
    gen = as_generator(rng)
    m = as_matrix(matrix)
    n = m.shape[0]
    out = np.empty_like(m)
    for j in range(m.shape[1]):
        col = m[:, j]
        n_levels = int(col.max()) + 1 if n else 0
        if n_levels == 0 or n % n_levels:
            raise UnbalancedColumn(f"column {j}: {n} rows cannot split into {n_levels} levels")
        block = n // n_levels
        if not np.all(np.bincount(col, minlength=n_levels) == block):
            raise UnbalancedColumn(f"column {j}: levels do not occur {block} times each")
        for lev in range(n_levels):
            pos = np.flatnonzero(col == lev)
            out[pos, j] = lev * block + gen.permutation(block)
    return out


def to_continuous(lh, rng) -> np.ndarray:
    """Map integer Latin-hypercube levels l to points (l+u)/n, u uniform on
    [0,1), giving one point per 1/n interval per column."""
    m = as_matrix(lh)
    if not is_latin_hypercube(m):
        raise ValueError("input is not a Latin hypercube")
    gen = as_generator(rng)
    return (m + gen.random(m.shape)) / m.shape[0]


def is_croa(matrix, s: int) -> bool:
    """Completely resolvable check with the consecutive-block convention.

    True iff the matrix is an orthogonal array of strength min(2, n_cols) at
    s levels and every consecutive block of s rows contains each level
    exactly once in every column.
    """
    m = as_matrix(matrix)
    n, n_cols = m.shape
    if n == 0 or n % s or (m.size and int(m.max()) >= s):
        return False
    if not is_orthogonal_array(m, s, min(2, n_cols)):
        return False
    blocks = m.reshape(n // s, s, n_cols)
    return bool(np.all(np.sort(blocks, axis=1) == np.arange(s)[None, :, None]))


def croa_partition_exists(matrix, s: int) -> bool:
    """Exhaustive search for any row partition into blocks of s rows that
    each contain every level once per column.  Slow; bounded at n <= 16."""
    m = as_matrix(matrix)
    n, n_cols = m.shape
    if n > 16:
        raise TooLarge("exhaustive partition search is limited to 16 rows")
    if n % s or (m.size and int(m.max()) >= s):
        return False
    if not is_orthogonal_array(m, s, min(2, n_cols)):
        return False
    rows = [tuple(r) for r in m]

    def compatible(group, cand):
        return all(all(rows[g][j] != rows[cand][j] for j in range(n_cols)) for g in group)

    def extend(avail, group):
        if len(group) == s:
            return search([i for i in avail if i not in group])
        start = max(group) + 1
        for cand in avail:
            if cand < start or cand in group:
                continue
            if compatible(group, cand):
                if extend(avail, group + [cand]):
                    return True
        return False

    def search(avail):
        if not avail:
            return True
        return extend(avail, [avail[0]])

    return search(list(range(n)))


def grid_stratification(x, y, lx: int, ly: int, gx: int, gy: int) -> bool:
    """True iff collapsing x to gx cells and y to gy cells puts equally many
    points in every cell of the gx-by-gy grid."""
    if gx < 1 or gy < 1 or lx % gx or ly % gy:
        raise NonDivisibleGrid(f"grid {gx}x{gy} does not divide levels {lx}x{ly}")
    cx = np.asarray(x, dtype=int)
    cy = np.asarray(y, dtype=int)
    if cx.shape != cy.shape or cx.ndim != 1:
        raise ValueError("x and y must be 1-D of equal length")
    if cx.size and (cx.min() < 0 or cx.max() >= lx or cy.min() < 0 or cy.max() >= ly):
        raise LevelOutOfRange("column entries outside declared level range")
    n = cx.size
    if n % (gx * gy):
        return False
    keys = (cx // (lx // gx)) * gy + cy // (ly // gy)
    return bool(np.all(np.bincount(keys, minlength=gx * gy) == n // (gx * gy)))


@dataclass(frozen=True)
class OrthogonalArray:
    """An orthogonal array: matrix, per-column level counts, and strength."""

    matrix: np.ndarray
    levels: tuple[int, ...]
    strength: int

    @property
    def n_rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_cols(self) -> int:
        return self.matrix.shape[1]

    def column(self, j: int) -> np.ndarray:
        return self.matrix[:, j]


def make_oa(matrix, levels=None, strength: int = 2) -> OrthogonalArray:
    """Build an OrthogonalArray after verifying the claimed strength.

    Levels default to one plus the per-column maximum.  Raises
    StrengthMismatch when verification fails.
    """
    m = as_matrix(matrix)
    if levels is None:
        lv = tuple(int(m[:, j].max()) + 1 for j in range(m.shape[1]))
    else:
        lv = _column_levels(levels, m.shape[1])
    if not 1 <= strength <= m.shape[1]:
        raise StrengthMismatch(f"claimed strength {strength} impossible for {m.shape[1]} columns")
    if not is_orthogonal_array(m, lv, strength):
        raise StrengthMismatch(f"array fails verification at strength {strength}")
    return OrthogonalArray(m, lv, strength)
