"""Executable checks for doubly coupled designs.

Three independent routes decide the same property and must agree:

- ``check_coupling`` slices rows per level combination and, for coupling
  order omega, demands that every slice's collapsed quantitative values form
  a permutation (the definition, checked directly);
- ``check_projections`` tests the equivalent projection conditions on the
  collapsed quantitative columns: every (qualitative, once-collapsed) pair
  balanced at strength 2, and every (qualitative, qualitative,
  twice-collapsed) triple balanced at strength 3;
- ``witness_decomposition`` recovers the certificate pair (b, c) from the
  collapsed design and tests its triple conditions.

Reports list every offending index tuple, not just the first, so externally
loaded designs get usable diagnostics.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .arrays import grid_stratification, is_croa, is_latin_hypercube, is_orthogonal_array
from .design import CoupledDesign
from .errors import NonDivisibleGrid, OmegaExceedsQ, RunSizeNotDivisible


@dataclass
class StratificationCheck:
    col_i: int
    col_j: int
    grid_x: int
    grid_y: int
    passed: bool


@dataclass
class VerificationReport:
    """Aggregated verdicts; a field left None was not checked.

    `passed` requires every checked condition to hold.  Two fields are
    descriptive and never gate the verdict: `stratification` (which grids a
    particular design family achieves) and `croa_partition` (the
    consecutive-block structure every construction here emits; a valid
    design with reordered rows may satisfy the coupling conditions while
    admitting only a non-consecutive partition).
    """

    n: int
    s: int
    q: int
    p: int
    omega_checked: int | None = None
    d1_is_oa: bool | None = None
    d2_is_lh: bool | None = None
    condition_a: bool | None = None
    condition_b: bool | None = None
    condition_a_failures: list = field(default_factory=list)
    condition_b_failures: list = field(default_factory=list)
    higher_order_failures: list = field(default_factory=list)
    croa_partition: bool | None = None
    witness_check: bool | None = None
    stratification: list[StratificationCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        checked = (
            self.d1_is_oa,
            self.d2_is_lh,
            self.condition_a,
            self.condition_b,
            self.witness_check,
        )
        if any(c is False for c in checked):
            return False
        return not self.higher_order_failures


def _d1_is_oa(design: CoupledDesign) -> bool:
    return is_orthogonal_array(design.d1, design.s, min(2, design.q))


def check_coupling(design: CoupledDesign, omega: int = 2) -> VerificationReport:
    """Definition-based check at coupling order `omega`.

    For every l = 1..omega, every l-subset of qualitative columns, and every
    level combination: the rows of each quantitative column, collapsed by
    s^l, must form a permutation of 0..n/s^l-1.  omega=0 only checks that d2
    is a Latin hypercube.
    """
    n, s, q, p = design.n, design.s, design.q, design.p
    if omega > q:
        raise OmegaExceedsQ(f"omega={omega} exceeds {q} qualitative factors")
    if omega > 0 and n % s**omega:
        raise RunSizeNotDivisible(f"{n} rows not divisible by {s}^{omega}")
    report = VerificationReport(n=n, s=s, q=q, p=p, omega_checked=omega)
    report.d2_is_lh = is_latin_hypercube(design.d2)
    if omega == 0:
        return report
    report.d1_is_oa = _d1_is_oa(design)
    for level in range(1, omega + 1):
        runs = n // s**level
        collapsed = design.d2 // s**level
        expected = np.arange(runs)
        for cols in itertools.combinations(range(q), level):
            keys = np.ravel_multi_index(tuple(design.d1[:, c] for c in cols), (s,) * level)
            groups = [np.flatnonzero(keys == g) for g in range(s**level)]
            for k in range(p):
                ok = all(np.array_equal(np.sort(collapsed[rows, k]), expected) for rows in groups)
                if not ok:
                    if level == 1:
                        report.condition_a_failures.append((cols[0], k))
                    elif level == 2:
                        report.condition_b_failures.append((cols[0], cols[1], k))
                    else:
                        report.higher_order_failures.append((cols, k))
    report.condition_a = not report.condition_a_failures
    if omega >= 2:
        report.condition_b = not report.condition_b_failures
    return report


def check_mcd(design: CoupledDesign) -> VerificationReport:
    """Marginal coupling only (order 1)."""
    return check_coupling(design, omega=1)


def check_projections(design: CoupledDesign) -> VerificationReport:
    """Projection-condition check, equivalent to coupling order 2.

    Condition (a): each (qualitative column, once-collapsed quantitative
    column) pair hits every (level, value) combination exactly once.
    Condition (b): each (qualitative, qualitative, twice-collapsed) triple
    hits every combination exactly once.
    """
    n, s, q, p = design.n, design.s, design.q, design.p
    if n % s**2:
        raise RunSizeNotDivisible(f"{n} rows not divisible by {s}^2")
    report = VerificationReport(n=n, s=s, q=q, p=p, omega_checked=2)
    report.d1_is_oa = _d1_is_oa(design)
    report.d2_is_lh = is_latin_hypercube(design.d2)
    once = design.d2 // s
    twice = design.d2 // s**2
    for i in range(q):
        zi = design.d1[:, i]
        for k in range(p):
            pair = np.column_stack([zi, once[:, k]])
            if not is_orthogonal_array(pair, (s, n // s), 2):
                report.condition_a_failures.append((i, k))
    for i, j in itertools.combinations(range(q), 2):
        cols = (design.d1[:, i], design.d1[:, j])
        for k in range(p):
            triple = np.column_stack([*cols, twice[:, k]])
            if not is_orthogonal_array(triple, (s, s, n // s**2), 3):
                report.condition_b_failures.append((i, j, k))
    report.condition_a = not report.condition_a_failures
    report.condition_b = not report.condition_b_failures
    return report


def witness_decomposition(design: CoupledDesign):
    """Recover the certificate arrays and test their balance conditions.

    Returns (b, c, report) where b is the twice-collapsed design, c the
    remainder with collapse(d2, s) == s*b + c.  The report checks that b and
    c are balanced, that every (z_i, z_j, b_k) triple is fully balanced at
    strength 3, and likewise every (z_i, c_k, b_k) triple.  The verdict
    coincides with check_projections on any input.
    """
    n, s, q, p = design.n, design.s, design.q, design.p
    if n % s**2:
        raise RunSizeNotDivisible(f"{n} rows not divisible by {s}^2")
    once = design.d2 // s
    b = once // s
    c = once - s * b
    report = VerificationReport(n=n, s=s, q=q, p=p, omega_checked=2)
    report.d1_is_oa = _d1_is_oa(design)
    report.d2_is_lh = is_latin_hypercube(design.d2)
    balanced = True
    if p:
        balanced = is_orthogonal_array(b, n // s**2, 1) and is_orthogonal_array(c, s, 1)
    for i in range(q):
        zi = design.d1[:, i]
        for k in range(p):
            triple = np.column_stack([zi, c[:, k], b[:, k]])
            if not is_orthogonal_array(triple, (s, s, n // s**2), 3):
                report.condition_a_failures.append((i, k))
    for i, j in itertools.combinations(range(q), 2):
        cols = (design.d1[:, i], design.d1[:, j])
        for k in range(p):
            triple = np.column_stack([*cols, b[:, k]])
            if not is_orthogonal_array(triple, (s, s, n // s**2), 3):
                report.condition_b_failures.append((i, j, k))
    report.condition_a = not report.condition_a_failures
    report.condition_b = not report.condition_b_failures
    report.witness_check = balanced and report.passed
    return b, c, report


def croa_partition(d1, s: int) -> bool:
    """True iff every consecutive block of s^2 rows is completely resolvable
    (consecutive-block convention)."""
    m = np.asarray(d1, dtype=int)
    n = m.shape[0]
    if n % s**2:
        return False
    blocks = n // s**2
    return all(is_croa(m[b * s**2 : (b + 1) * s**2], s) for b in range(blocks))


def max_qualitative_factors(s: int) -> int:
    """Upper bound on the number of s-level qualitative factors a doubly
    coupled design can carry: q <= s."""
    if s < 2:
        raise ValueError(f"need s >= 2, got {s}")
    return s


def stratification_report(design: CoupledDesign) -> VerificationReport:
    """Report which two-dimensional grid stratifications each quantitative
    pair achieves.

    Grids tried per pair (when the divisibility applies): g x g on the
    twice-collapsed columns with g = n/s^2 (only when the certificate array
    b has strength 2), s^2 x s and s x s^2 on the once-collapsed columns,
    and s x s on the twice-collapsed columns.  Entries are descriptive and
    do not affect the report's pass verdict.
    """
    n, s, p = design.n, design.s, design.p
    report = VerificationReport(n=n, s=s, q=design.q, p=p)
    if p < 2 or n % s**2:
        return report
    once = design.d2 // s
    b = design.d2 // s**2
    g = n // s**2
    b_strength2 = g >= 2 and is_orthogonal_array(b, g, 2)
    lv_once = n // s
    for i, j in itertools.combinations(range(p), 2):
        checks = []
        if b_strength2:
            checks.append((b[:, i], b[:, j], g, g, g, g))
        if lv_once % s**2 == 0:
            checks.append((once[:, i], once[:, j], lv_once, lv_once, s**2, s))
            checks.append((once[:, i], once[:, j], lv_once, lv_once, s, s**2))
        if g % s == 0:
            checks.append((b[:, i], b[:, j], g, g, s, s))
        for x, y, lx, ly, gx, gy in checks:
            try:
                ok = grid_stratification(x, y, lx, ly, gx, gy)
            except NonDivisibleGrid:
                continue
            report.stratification.append(StratificationCheck(i, j, gx, gy, ok))
    return report


def full_report(design: CoupledDesign, omega: int = 2) -> VerificationReport:
    """Everything at once: coupling at `omega`, the witness conditions (an
    order-2 property, so only checked when omega >= 2), the consecutive-block
    partition of d1, and the stratification survey."""
    report = check_coupling(design, omega)
    report.croa_partition = croa_partition(design.d1, design.s)
    if omega >= 2 and design.n % design.s**2 == 0:
        _, _, wreport = witness_decomposition(design)
        report.witness_check = wreport.witness_check
    report.stratification = stratification_report(design).stratification
    return report
