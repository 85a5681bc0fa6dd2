import numpy as np
import pytest

from dcdesign.errors import InverseOfZero, NotPrimePower, TooLarge
from dcdesign.gf import GaloisField, is_prime_power


def axioms_hold(field):
    """Exhaustive field axioms via table indexing."""
    s = field.order
    add, mul = field.add_table, field.mul_table
    if add.min() < 0 or add.max() >= s or mul.min() < 0 or mul.max() >= s:
        return False
    if not (np.array_equal(add, add.T) and np.array_equal(mul, mul.T)):
        return False
    i, j, k = np.indices((s, s, s))
    if not np.array_equal(add[add[i, j], k], add[i, add[j, k]]):
        return False
    if not np.array_equal(mul[mul[i, j], k], mul[i, mul[j, k]]):
        return False
    if not np.array_equal(mul[i, add[j, k]], add[mul[i, j], mul[i, k]]):
        return False
    if not np.array_equal(add[np.arange(s), 0], np.arange(s)):
        return False
    if not np.array_equal(mul[np.arange(s), 1], np.arange(s)):
        return False
    # every element has a negative, every nonzero element an inverse
    if not np.array_equal(np.sort(np.nonzero(add == 0)[0]), np.arange(s)):
        return False
    units = np.nonzero(mul == 1)[0]
    return np.array_equal(np.sort(units), np.arange(1, s))


def test_prime_field_tables_are_modular():
    f = GaloisField(3)
    assert f.add(1, 2) == 0
    assert f.mul(2, 2) == 1
    f5 = GaloisField(5)
    assert f5.add(3, 4) == 2


def test_characteristic_two_self_cancels():
    f = GaloisField(4)
    assert all(f.add(a, a) == 0 for a in range(4))


def test_multiplicative_identity():
    f = GaloisField(4)
    assert all(f.mul(a, 1) == a for a in range(4))


def test_non_prime_power_rejected():
    with pytest.raises(NotPrimePower):
        GaloisField(6)
    with pytest.raises(NotPrimePower):
        GaloisField(12)
    assert not is_prime_power(10)
    assert is_prime_power(27)


def test_order_bound():
    with pytest.raises(TooLarge):
        GaloisField(64)


@pytest.mark.parametrize("s", [2, 3, 4, 5, 7, 8, 9])
def test_axioms_exhaustive(s):
    assert axioms_hold(GaloisField(s))


@pytest.mark.parametrize("s", [16, 25, 27, 32])
def test_axioms_larger_orders(s):
    assert axioms_hold(GaloisField(s))


def test_inverse_table_exhaustive():
    f = GaloisField(9)
    for a in range(1, 9):
        assert f.mul(a, f.inv(a)) == 1
    with pytest.raises(InverseOfZero):
        f.inv(0)


def test_negation():
    f = GaloisField(8)
    for a in range(8):
        assert f.add(a, f.neg(a)) == 0


def test_tables_deterministic():
    a, b = GaloisField(9), GaloisField(9)
    assert np.array_equal(a.add_table, b.add_table)
    assert np.array_equal(a.mul_table, b.mul_table)
