"""Finite-field arithmetic GF(s) for prime-power s, via dense lookup tables.

Element i is the integer value of its coefficient vector in base p, so for
GF(9) = GF(3)[x]/(x^2+1) the element with index 5 = (1,2) is x+2.  The
irreducible polynomial for each extension field is fixed below, which makes
element indexing identical across runs and platforms.  Prime fields are plain
mod-p arithmetic.
"""

from __future__ import annotations

import numpy as np

from .errors import InverseOfZero, NotPrimePower, TooLarge

MAX_ORDER = 32

# Irreducible polynomial per supported extension order, highest degree first.
_IRREDUCIBLE = {
    4: (1, 1, 1),            # x^2 + x + 1
    8: (1, 0, 1, 1),         # x^3 + x + 1
    9: (1, 0, 1),            # x^2 + 1
    16: (1, 0, 0, 1, 1),     # x^4 + x + 1
    25: (1, 0, 2),           # x^2 + 2
    27: (1, 0, 2, 1),        # x^3 + 2x + 1
    32: (1, 0, 0, 1, 0, 1),  # x^5 + x^2 + 1
}


def _prime_power(s: int) -> tuple[int, int]:
    """Return (p, k) with s = p**k, or raise NotPrimePower."""
    if s < 2:
        raise NotPrimePower(f"field order must be at least 2, got {s}")
    p = 2
    while p * p <= s:
        if s % p == 0:
            break
        p += 1
    else:
        return s, 1
    k, m = 0, s
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise NotPrimePower(f"{s} is not a prime power")
    return p, k


def is_prime_power(s: int) -> bool:
    try:
        _prime_power(s)
    except NotPrimePower:
        return False
    return True


def _extension_tables(p: int, k: int, poly) -> tuple[np.ndarray, np.ndarray]:
    """Addition and multiplication tables for GF(p^k) mod a monic `poly`."""
    s = p**k

    def digits(e):
        return [(e // p**i) % p for i in range(k)]

    def undigits(ds):
        return sum(int(d) * p**i for i, d in enumerate(ds))

    add = np.zeros((s, s), dtype=int)
    mul = np.zeros((s, s), dtype=int)
    # x^k is congruent to `head`, coefficients in ascending degree
    head = [(-c) % p for c in reversed(poly[1:])]
    for a in range(s):
        da = digits(a)
        for b in range(s):
            db = digits(b)
            add[a, b] = undigits((x + y) % p for x, y in zip(da, db))
            prod = [0] * (2 * k - 1)
            for i, x in enumerate(da):
                if x:
                    for j, y in enumerate(db):
                        prod[i + j] = (prod[i + j] + x * y) % p
            for d in range(2 * k - 2, k - 1, -1):
                coef = prod[d]
                if coef:
                    prod[d] = 0
                    for i, c in enumerate(head):
                        prod[d - k + i] = (prod[d - k + i] + coef * c) % p
            mul[a, b] = undigits(prod[:k])
    return add, mul


class GaloisField:
    """GF(s) with precomputed tables; immutable after construction.

    Attributes
    ----------
    order : int
        Number of elements s = p^k.
    characteristic : int
        The prime p.
    degree : int
        The extension degree k.
    add_table, mul_table : ndarray
        s x s tables over element indices 0..s-1.  Index 0 is the additive
        identity and index 1 the multiplicative identity.
    """

    def __init__(self, s: int):
        if s > MAX_ORDER:
            raise TooLarge(f"field order {s} exceeds the supported bound {MAX_ORDER}")
        p, k = _prime_power(s)
        self.order = s
        self.characteristic = p
        self.degree = k
        if k == 1:
            idx = np.arange(s)
            self.add_table = (idx[:, None] + idx[None, :]) % s
            self.mul_table = (idx[:, None] * idx[None, :]) % s
        else:
            self.add_table, self.mul_table = _extension_tables(p, k, _IRREDUCIBLE[s])
        self.neg_table = np.nonzero(self.add_table == 0)[1]
        inv = np.zeros(s, dtype=int)
        rows, cols = np.nonzero(self.mul_table == 1)
        inv[rows] = cols
        self.inv_table = inv

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise InverseOfZero("0 has no multiplicative inverse")
        return int(self.inv_table[a])

    def __repr__(self) -> str:
        return f"GaloisField({self.order})"
