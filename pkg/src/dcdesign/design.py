"""Design objects shared by the construction and verification modules."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class PermutationPlan:
    """Explicit permutation choices for a construction.

    The seed drives anything not given: unset fields are sampled, and the
    level-expansion stream is always derived from it.  Which fields apply
    depends on the construction:

    - stacked-array method: `v` (p permutations of 0..lam-1) and `w`
      (p lists of lam permutations of 0..s-1);
    - replicated-array method: `b_cells` (array of shape (s*s, p, lam),
      each cell a permutation of 0..lam-1) and `w` (p permutations of
      0..s-1);
    - column-selection method: `c_perms` (p level permutations of 0..s-1).
    """

    seed: int = 0
    v: list | None = None
    w: list | None = None
    b_cells: np.ndarray | None = None
    c_perms: list | None = None


@dataclass
class DesignWitness:
    """Decomposition certificate: collapse(d2, s) equals s*b + c."""

    b: np.ndarray
    c: np.ndarray
    plan: PermutationPlan | None = None


@dataclass
class CoupledDesign:
    """A qualitative design d1 (n x q, s levels per column) paired with a
    quantitative Latin hypercube d2 (n x p, levels 0..n-1)."""

    d1: np.ndarray
    d2: np.ndarray
    s: int
    witness: DesignWitness | None = None

    @property
    def n(self) -> int:
        return self.d1.shape[0]

    @property
    def q(self) -> int:
        return self.d1.shape[1]

    @property
    def p(self) -> int:
        return self.d2.shape[1]
