"""Constructions of doubly coupled designs.

Three routes produce a design (d1, d2) together with its certificate
arrays (b, c), where collapse(d2, s) = s*b + c:

- ``construct_c1`` stacks lam strength-2 arrays OA(s^2, q+1, s, 2) given in
  block form, drops the block column to get d1, and builds b from one
  slice permutation per quantitative column and c from per-slice level
  permutations;
- ``construct_c2`` stacks lam copies of a single array and instead
  randomizes b cell-wise: for each of the s^2 base rows, the lam stacked
  entries form a permutation of 0..lam-1;
- ``construct_c3`` starts from a column pool A = OA(n, q+1, s, 2) and a
  companion array B = OA(n, p, n/s^2, 1) whose (a_i, a_j, b_k) triples are
  all fully balanced, selects q columns of A as d1, and derives c by level
  permutations of the leftover column.

Input generators for the third route: ``split_strength3_inputs`` splits a
strength-3 array column-wise, ``regular_inputs`` builds the pool from
linear columns over GF(s) for any prime power s (see the functions for the
canonical column order).

Every constructor verifies its output before returning it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .arrays import OrthogonalArray, is_orthogonal_array, level_expand, make_oa
from .design import CoupledDesign, DesignWitness, PermutationPlan
from .errors import (
    CellNotPermutation,
    DimensionMismatch,
    InfeasibleParameters,
    NotBlockForm,
    NotStrength3,
    PreconditionFailed,
    UTooSmall,
)
from .gf import GaloisField, is_prime_power
from .oabuild import bush_oa, is_block_form, linear_column, normalize_block_form
from .rng import as_generator, derive_seed
from .verify import check_projections, max_qualitative_factors

_EXPAND_STREAM = 1
_SPLIT_STREAM = 2


def _expansion_rng(plan: PermutationPlan):
    return as_generator(derive_seed(plan.seed, _EXPAND_STREAM))


def _check_perm(arr, size: int, what: str) -> np.ndarray:
    a = np.asarray(arr, dtype=int)
    if a.shape != (size,) or not np.array_equal(np.sort(a), np.arange(size)):
        raise CellNotPermutation(f"{what} is not a permutation of 0..{size - 1}")
    return a


def _block_form_input(a: OrthogonalArray) -> OrthogonalArray:
    if is_block_form(a.matrix, a.levels[-1]):
        return a
    warnings.warn("input array reordered into block form", stacklevel=3)
    fixed = normalize_block_form(a)
    if not is_block_form(fixed.matrix, a.levels[-1]):
        raise NotBlockForm("last column cannot be brought into consecutive block form")
    return fixed


def _finish(d1, b, c, s, plan) -> CoupledDesign:
    d2 = level_expand(s * b + c, _expansion_rng(plan))
    design = CoupledDesign(d1=d1, d2=d2, s=s, witness=DesignWitness(b=b, c=c, plan=plan))
    if not np.array_equal(design.d2 // s, s * b + c):
        raise RuntimeError("internal error: expansion broke the certificate identity")
    if not check_projections(design).passed:
        raise RuntimeError("internal error: construction output failed verification")
    return design


def sample_plan_stacked(s: int, lam: int, p: int, seed: int = 0) -> PermutationPlan:
    """Random plan for construct_c1."""
    rng = as_generator(derive_seed(seed, 0))
    v = [rng.permutation(lam) for _ in range(p)]
    w = [[rng.permutation(s) for _ in range(lam)] for _ in range(p)]
    return PermutationPlan(seed=seed, v=v, w=w)


def sample_plan_replicated(s: int, lam: int, p: int, seed: int = 0) -> PermutationPlan:
    """Random plan for construct_c2."""
    rng = as_generator(derive_seed(seed, 0))
    b_cells = np.empty((s * s, p, lam), dtype=int)
    for i in range(s * s):
        for k in range(p):
            b_cells[i, k] = rng.permutation(lam)
    w = [rng.permutation(s) for _ in range(p)]
    return PermutationPlan(seed=seed, b_cells=b_cells, w=w)


def sample_plan_selected(s: int, p: int, seed: int = 0) -> PermutationPlan:
    """Random plan for construct_c3."""
    rng = as_generator(derive_seed(seed, 0))
    return PermutationPlan(seed=seed, c_perms=[rng.permutation(s) for _ in range(p)])


def construct_c1(arrays, p: int, plan: PermutationPlan | None = None, *, seed: int = 0) -> CoupledDesign:
    """Stack lam block-form arrays OA(s^2, q+1, s, 2) and permute.

    d1 drops the shared block column.  Column k of b repeats plan.v[k]
    (a permutation of the lam slices) s^2 times each; column k of c stacks
    plan.w[k][j] (a level permutation per slice) repeated s times.  The
    quantitative design expands s*b + c.  Arrays may be identical or not;
    different ones can raise the strength of d1.
    """
    lam = len(arrays)
    if lam < 1:
        raise DimensionMismatch("need at least one input array")
    arrays = [_block_form_input(a) for a in arrays]
    s = arrays[0].levels[-1]
    shape = (arrays[0].n_rows, arrays[0].n_cols)
    if any((a.n_rows, a.n_cols) != shape or a.levels != arrays[0].levels for a in arrays):
        raise DimensionMismatch("input arrays must share run size, columns, and levels")
    if shape[0] != s * s:
        raise DimensionMismatch(f"expected {s * s} rows per array, got {shape[0]}")
    if plan is None:
        plan = sample_plan_stacked(s, lam, p, seed)
    if plan.v is None or plan.w is None or len(plan.v) != p or len(plan.w) != p:
        raise DimensionMismatch(f"plan must carry {p} slice and {p} level permutations")
    d1 = np.vstack([a.matrix[:, :-1] for a in arrays])
    b = np.column_stack([np.repeat(_check_perm(vk, lam, "slice permutation"), s * s) for vk in plan.v]) if p else np.empty((lam * s * s, 0), dtype=int)
    c_cols = []
    for k in range(p):
        if len(plan.w[k]) != lam:
            raise DimensionMismatch(f"plan.w[{k}] must hold {lam} level permutations")
        c_cols.append(np.concatenate([np.repeat(_check_perm(wkj, s, "level permutation"), s) for wkj in plan.w[k]]))
    c = np.column_stack(c_cols) if p else np.empty((lam * s * s, 0), dtype=int)
    return _finish(d1, b, c, s, plan)


def construct_c2(array: OrthogonalArray, lam: int, p: int, plan: PermutationPlan | None = None, *, seed: int = 0) -> CoupledDesign:
    """Stack lam copies of one block-form array OA(s^2, q+1, s, 2).

    b is assembled cell-wise: entry (i + j*s^2, k) is plan.b_cells[i, k, j],
    and each cell vector plan.b_cells[i, k, :] must be a permutation of
    0..lam-1.  Column k of c tiles one level permutation plan.w[k] across
    all copies.
    """
    a = _block_form_input(array)
    s = a.levels[-1]
    if a.n_rows != s * s:
        raise DimensionMismatch(f"expected {s * s} rows, got {a.n_rows}")
    if lam < 1:
        raise DimensionMismatch(f"need lam >= 1, got {lam}")
    if plan is None:
        plan = sample_plan_replicated(s, lam, p, seed)
    cells = plan.b_cells
    if cells is None or plan.w is None:
        raise DimensionMismatch("plan must carry b_cells and w")
    cells = np.asarray(cells, dtype=int)
    if cells.shape != (s * s, p, lam):
        raise DimensionMismatch(f"b_cells must have shape {(s * s, p, lam)}, got {cells.shape}")
    if len(plan.w) != p:
        raise DimensionMismatch(f"plan must carry {p} level permutations")
    for i in range(s * s):
        for k in range(p):
            _check_perm(cells[i, k], lam, f"b cell ({i}, {k})")
    n = lam * s * s
    d1 = np.vstack([a.matrix[:, :-1]] * lam)
    b = np.empty((n, p), dtype=int)
    for j in range(lam):
        b[j * s * s : (j + 1) * s * s, :] = cells[:, :, j]
    c_cols = [np.tile(np.repeat(_check_perm(plan.w[k], s, "level permutation"), s), lam) for k in range(p)]
    c = np.column_stack(c_cols) if p else np.empty((n, 0), dtype=int)
    return _finish(d1, b, c, s, plan)


def construct_c3(a: OrthogonalArray, b: OrthogonalArray, select, plan: PermutationPlan | None = None, *, seed: int = 0) -> CoupledDesign:
    """Select q columns of the pool A as d1 and permute the leftover column.

    Requires that every (a_i, a_j, b_k) triple over distinct pool columns is
    fully balanced at strength 3 (checked, not assumed).  Column k of c
    applies plan.c_perms[k] to the levels of the one unselected pool column;
    the quantitative design expands s*b + c.
    """
    s = a.levels[0]
    n = a.n_rows
    p = b.n_cols
    if b.n_rows != n:
        raise DimensionMismatch(f"pool has {n} rows but companion has {b.n_rows}")
    if n % s**2:
        raise DimensionMismatch(f"{n} rows not divisible by {s}^2")
    if p and set(b.levels) != {n // s**2}:
        raise DimensionMismatch(f"companion columns must have {n // s**2} levels")
    select = tuple(int(i) for i in select)
    if len(set(select)) != len(select) or len(select) != a.n_cols - 1:
        raise DimensionMismatch(f"select must name {a.n_cols - 1} distinct pool columns")
    if any(i < 0 or i >= a.n_cols for i in select):
        raise DimensionMismatch("select index out of range")
    for i in range(a.n_cols):
        for j in range(i + 1, a.n_cols):
            for k in range(p):
                triple = np.column_stack([a.matrix[:, i], a.matrix[:, j], b.matrix[:, k]])
                if not is_orthogonal_array(triple, (s, s, n // s**2), 3):
                    raise PreconditionFailed(f"triple (a{i}, a{j}, b{k}) is not fully balanced")
    if plan is None:
        plan = sample_plan_selected(s, p, seed)
    if plan.c_perms is None or len(plan.c_perms) != p:
        raise DimensionMismatch(f"plan must carry {p} level permutations")
    (astar_index,) = set(range(a.n_cols)) - set(select)
    astar = a.matrix[:, astar_index]
    d1 = a.matrix[:, list(select)]
    c_cols = [_check_perm(plan.c_perms[k], s, "level permutation")[astar] for k in range(p)]
    c = np.column_stack(c_cols) if p else np.empty((n, 0), dtype=int)
    return _finish(d1, b.matrix.copy(), c, s, plan)


def split_strength3_inputs(g: OrthogonalArray, q: int, rng=None, shuffle: bool = False):
    """Split a strength-3 array OA(s^3, m, s, 3) column-wise into a pool of
    q+1 columns and a companion of the remaining m-q-1 columns.

    Any three distinct columns of g are fully balanced, so the pair
    automatically satisfies the construct_c3 precondition.  The default
    split takes the first q+1 columns; pass shuffle=True for a random one.
    """
    s = g.levels[0]
    if g.strength < 3 or not is_orthogonal_array(g.matrix, g.levels, 3):
        raise NotStrength3("input array must have verified strength 3")
    if g.n_rows != s**3:
        raise DimensionMismatch(f"expected {s**3} rows, got {g.n_rows}")
    m = g.n_cols
    if q < 1 or q + 1 > m:
        raise DimensionMismatch(f"need 1 <= q <= {m - 1}, got q={q}")
    order = as_generator(rng).permutation(m) if shuffle else np.arange(m)
    pool = g.matrix[:, order[: q + 1]]
    companion = g.matrix[:, order[q + 1 :]]
    a = OrthogonalArray(pool, (s,) * (q + 1), 2)
    b = OrthogonalArray(companion, (s,) * (m - q - 1), 1)
    return a, b


def regular_inputs(field: GaloisField, u: int):
    """Pool and companion arrays from linear columns over GF(s), u >= 3.

    Writing the row index in base s, digit d1 (weight s) is x1, digit d0
    (weight 1) is x2, and digit d_{v+1} (weight s^{v+1}) is x_{v+2}.  The
    pool A holds x1, x2, then x1 + mu*x2 for mu = 1..s-1: s+1 columns, any
    two linearly independent.  For each extra digit v there is a block
    R_v = (a_1 + mu*x_{v+2}, ..., a_{s+1} + mu*x_{v+2} for mu = 1..s-1,
    then x_{v+2}): s^2 columns, each involving x_{v+2}.

    The companion B concatenates s^2 groups of u-2 columns: group f combines
    the f-th column of every R_v through the circulant integer weight matrix
    whose first column is (s^{u-3}, ..., s, 1), turning each group into
    columns at s^{u-2} levels.  The weights act on digit positions, so this
    is plain integer arithmetic, not field arithmetic.
    """
    if u < 3:
        raise UTooSmall(f"need u >= 3, got {u}")
    s = field.order
    pos_x1, pos_x2 = u - 2, u - 1

    def spec(entries: dict[int, int]) -> np.ndarray:
        v = np.zeros(u, dtype=int)
        for pos, coef in entries.items():
            v[pos] = coef
        return v

    a_specs = [spec({pos_x1: 1}), spec({pos_x2: 1})]
    a_specs += [spec({pos_x1: 1, pos_x2: mu}) for mu in range(1, s)]
    a_mat = np.column_stack([linear_column(field, u, sp) for sp in a_specs])

    t_dim = u - 2
    weight = np.empty((t_dim, t_dim), dtype=int)
    for i in range(t_dim):
        for j in range(t_dim):
            weight[i, j] = s ** (u - 3 - ((i - j) % t_dim))

    groups = []
    r_blocks = []
    for v in range(1, u - 1):
        pos_extra = u - 2 - v
        cols = []
        for mu in range(1, s):
            for base in a_specs:
                shifted = base.copy()
                shifted[pos_extra] = mu
                cols.append(linear_column(field, u, shifted))
        cols.append(linear_column(field, u, spec({pos_extra: 1})))
        r_blocks.append(np.column_stack(cols))
    for f in range(s * s):
        stack = np.column_stack([r_blocks[v][:, f] for v in range(t_dim)])
        groups.append(stack @ weight)
    b_mat = np.hstack(groups)

    a = make_oa(a_mat, s, 2)
    b = make_oa(b_mat, s ** (u - 2), 1)
    return a, b


@dataclass
class DesignFamily:
    """Everything needed to sample one design: the method name (matching
    the command-line vocabulary), the design parameters, and any explicit
    input arrays.  Per-seed randomness is the permutation plan plus the
    level expansion, and for the split method the column split when
    shuffle_split is set."""

    method: str
    s: int
    q: int
    p: int
    lam: int = 1
    u: int = 3
    arrays: list | None = None
    g: OrthogonalArray | None = None
    a: OrthogonalArray | None = None
    b: OrthogonalArray | None = None
    select: tuple | None = None
    shuffle_split: bool = False


def _default_block_array(s: int, q: int) -> OrthogonalArray:
    base = bush_oa(GaloisField(s), 2)
    cols = list(range(q)) + [s]
    return OrthogonalArray(base.matrix[:, cols], (s,) * (q + 1), 2)


def check_feasible(family: DesignFamily) -> None:
    """Raise InfeasibleParameters when a bound or capacity is violated."""
    s, q, p = family.s, family.q, family.p
    if s < 2:
        raise InfeasibleParameters(f"need at least 2 levels, got s={s}")
    bound = max_qualitative_factors(s)
    if q > bound:
        raise InfeasibleParameters(f"q={q} exceeds the maximum number of qualitative factors for s={s} (q <= s)")
    if q < 1:
        raise InfeasibleParameters(f"need at least one qualitative factor, got q={q}")
    if p < 0:
        raise InfeasibleParameters(f"negative quantitative factor count p={p}")
    method = family.method
    if method in ("c1", "c2"):
        if family.lam < 1:
            raise InfeasibleParameters(f"need lam >= 1, got {family.lam}")
        if family.arrays is None and not is_prime_power(s):
            raise InfeasibleParameters(f"s={s} is not a prime power; supply catalogue arrays for it")
        if family.arrays is not None and any(a.n_cols != q + 1 for a in family.arrays):
            raise InfeasibleParameters(f"input arrays must have q+1={q + 1} columns")
    elif method == "c3-case1":
        if family.g is None:
            if not is_prime_power(s) or s < 3:
                raise InfeasibleParameters(f"no built-in strength-3 array for s={s}; supply one with --g")
            m = s + 1
        else:
            m = family.g.n_cols
        if q + 1 + p > m:
            raise InfeasibleParameters(f"q+1+p={q + 1 + p} exceeds the {m} available columns")
    elif method == "c3-case2":
        if not is_prime_power(s):
            raise InfeasibleParameters(f"s={s} is not a prime power")
        if family.u < 3:
            raise InfeasibleParameters(f"need u >= 3, got u={family.u}")
        if p > (family.u - 2) * s * s:
            raise InfeasibleParameters(f"p={p} exceeds the {(family.u - 2) * s * s} available columns")
    elif method == "c3-custom":
        if family.a is None or family.b is None:
            raise InfeasibleParameters("custom method needs explicit pool and companion arrays")
        if q + 1 != family.a.n_cols:
            raise InfeasibleParameters(f"pool has {family.a.n_cols} columns; q must be {family.a.n_cols - 1}")
    else:
        raise InfeasibleParameters(f"unknown method {method!r}")


def _family_inputs(family: DesignFamily, seed: int):
    s, q, p = family.s, family.q, family.p
    method = family.method
    if method == "c1":
        arrays = family.arrays if family.arrays is not None else [_default_block_array(s, q)] * family.lam
        return {"arrays": arrays}
    if method == "c2":
        array = family.arrays[0] if family.arrays else _default_block_array(s, q)
        return {"array": array}
    if method == "c3-case1":
        g = family.g if family.g is not None else bush_oa(GaloisField(s), 3)
        rng = as_generator(derive_seed(seed, _SPLIT_STREAM))
        a, b = split_strength3_inputs(g, q, rng=rng, shuffle=family.shuffle_split)
        if p < b.n_cols:
            b = OrthogonalArray(b.matrix[:, :p], b.levels[:p], 1)
        select = family.select if family.select is not None else tuple(range(q))
        return {"a": a, "b": b, "select": select}
    if method == "c3-case2":
        a, b = regular_inputs(GaloisField(s), family.u)
        a_used = OrthogonalArray(a.matrix[:, : q + 1], (s,) * (q + 1), 2)
        b_used = OrthogonalArray(b.matrix[:, :p], b.levels[:p], 1)
        select = family.select if family.select is not None else tuple(range(1, q + 1))
        return {"a": a_used, "b": b_used, "select": select}
    if method == "c3-custom":
        select = family.select if family.select is not None else tuple(range(1, q + 1))
        b = family.b
        if p < b.n_cols:
            b = OrthogonalArray(b.matrix[:, :p], b.levels[:p], 1)
        return {"a": family.a, "b": b, "select": select}
    raise InfeasibleParameters(f"unknown method {family.method!r}")


def sample_family_plan(family: DesignFamily, seed: int) -> PermutationPlan:
    if family.method == "c1":
        return sample_plan_stacked(family.s, family.lam, family.p, seed)
    if family.method == "c2":
        return sample_plan_replicated(family.s, family.lam, family.p, seed)
    return sample_plan_selected(family.s, family.p, seed)


def construct_from_plan(family: DesignFamily, plan: PermutationPlan, seed: int | None = None) -> CoupledDesign:
    check_feasible(family)
    inputs = _family_inputs(family, plan.seed if seed is None else seed)
    if family.method == "c1":
        return construct_c1(inputs["arrays"], family.p, plan)
    if family.method == "c2":
        return construct_c2(inputs["array"], family.lam, family.p, plan)
    return construct_c3(inputs["a"], inputs["b"], inputs["select"], plan)


def build_design(family: DesignFamily, seed: int = 0) -> CoupledDesign:
    """Sample a plan from `seed` and run the family's construction."""
    check_feasible(family)
    return construct_from_plan(family, sample_family_plan(family, seed), seed)
