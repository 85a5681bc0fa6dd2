import itertools

import numpy as np
import pytest

from dcdesign.design import CoupledDesign

import refdesigns as ref


@pytest.fixture
def design_8run():
    return CoupledDesign(d1=ref.D1_8RUN.copy(), d2=ref.D2_8RUN.copy(), s=2)


@pytest.fixture
def design_27run_stacked():
    d1 = np.vstack([ref.A1_9RUN[:, :3], ref.A2_9RUN[:, :3], ref.A3_9RUN[:, :3]])
    return CoupledDesign(d1=d1, d2=ref.D2_27RUN_STACKED.copy(), s=3)


def naive_oa_check(matrix, levels, strength):
    """Tuple-counting reference for the orthogonal-array predicate, written
    with plain loops and dictionaries."""
    rows = [tuple(int(v) for v in row) for row in np.asarray(matrix)]
    n = len(rows)
    n_cols = len(rows[0]) if rows else 0
    if np.isscalar(levels):
        levels = [int(levels)] * n_cols
    for cols in itertools.combinations(range(n_cols), strength):
        counts = {}
        for combo in itertools.product(*(range(levels[c]) for c in cols)):
            counts[combo] = 0
        for row in rows:
            counts[tuple(row[c] for c in cols)] += 1
        values = set(counts.values())
        if len(values) != 1:
            return False
    return True
