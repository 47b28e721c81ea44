"""Finite fields GF(p^m) for the small orders used by the design constructions.

Elements are the integers ``0..q-1``.  An element encodes the coefficient
vector of a polynomial over GF(p) in base ``p``, least significant digit
first, so ``0`` and ``1`` are the field zero and one and the prime subfield
is ``0..p-1``.  Arithmetic runs off precomputed ``q x q`` tables.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .errors import NotPrimePower, UnsupportedField

# Conway polynomials, coefficients listed constant term first.  Only used
# for m > 1; prime fields need no modulus.
IRREDUCIBLE_POLYNOMIALS: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 2): (3, 6, 1),
    (11, 2): (2, 7, 1),
    (13, 2): (2, 12, 1),
}

_EXHAUSTIVE_CHECK_LIMIT = 32


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(n: int) -> tuple[int, int]:
    """Return ``(p, m)`` with ``n == p**m`` and ``p`` prime.

    Raises:
        NotPrimePower: if ``n < 2`` or ``n`` has two distinct prime factors.
    """
    if n < 2:
        raise NotPrimePower(f"{n} is not a prime power")
    p = next(f for f in itertools.count(2) if n % f == 0)
    m, rest = 0, n
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise NotPrimePower(f"{n} is not a prime power")
    return p, m


def _poly_mod(a: list[int], mod: list[int], p: int) -> list[int]:
    a = list(a)
    inv_lead = pow(mod[-1], p - 2, p)
    while len(a) >= len(mod):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(mod)
        if coef:
            for i, c in enumerate(mod):
                a[shift + i] = (a[shift + i] - coef * c) % p
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg < 1 or poly[-1] % p == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = list(low) + [1]
            if not _poly_mod(list(poly), divisor, p):
                return False
    return True


class FiniteField:
    """The field of order ``q = p**m``.

    Construction builds the addition and multiplication tables, then checks
    the field axioms (exhaustively for ``q <= 32``, on a fixed sample above).
    """

    def __init__(self, q: int):
        p, m = prime_power(q)
        self.p, self.m, self.q = p, m, q
        if m == 1:
            self.modulus: tuple[int, ...] = (0, 1)
        else:
            try:
                self.modulus = IRREDUCIBLE_POLYNOMIALS[(p, m)]
            except KeyError:
                raise UnsupportedField(
                    f"no irreducible polynomial recorded for GF({p}^{m})"
                ) from None
        self._add = [[self._encode(self._vec_add(a, b)) for b in range(q)] for a in range(q)]
        self._mul = [[self._encode(self._vec_mul(a, b)) for b in range(q)] for a in range(q)]
        self._neg = [self._add[a].index(0) for a in range(q)]
        self._inv = [0] + [self._mul[a].index(1) for a in range(1, q)]
        self._check_axioms()

    def __repr__(self):
        return f"FiniteField({self.q})"

    # -- element encoding -------------------------------------------------
    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def _encode(self, digits: list[int]) -> int:
        value = 0
        for d in reversed(digits[: self.m]):
            value = value * self.p + d
        return value

    def _vec_add(self, a: int, b: int) -> list[int]:
        return [(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))]

    def _vec_mul(self, a: int, b: int) -> list[int]:
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % self.p
        if self.m > 1:
            prod = _poly_mod(prod, list(self.modulus), self.p)
        return prod + [0] * (self.m - len(prod))

    def _check_axioms(self) -> None:
        q = self.q
        if any(sorted(row) != list(range(q)) for row in self._add):
            raise UnsupportedField(f"GF({q}) addition table is not a Latin square")
        if any(self._mul[a][self._inv[a]] != 1 for a in range(1, q)):
            raise UnsupportedField(f"GF({q}) has an element without an inverse")
        if any(sorted(self._mul[a][1:]) != list(range(1, q)) for a in range(1, q)):
            raise UnsupportedField(f"GF({q}) multiplicative inverses are not unique")
        if q <= _EXHAUSTIVE_CHECK_LIMIT:
            triples = itertools.product(range(q), repeat=3)
        else:
            triples = ((a, (3 * a + 1) % q, (7 * a + 2) % q) for a in range(q))
        add, mul = self._add, self._mul
        for a, b, c in triples:
            if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]:
                raise UnsupportedField(f"GF({q}) fails distributivity at {(a, b, c)}")
            if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                raise UnsupportedField(f"GF({q}) fails associativity at {(a, b, c)}")

    # -- arithmetic -------------------------------------------------------
    @property
    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self._mul[a][self.inv(b)]

    def pow(self, a: int, e: int) -> int:
        result = 1
        base = a
        while e:
            if e & 1:
                result = self._mul[result][base]
            base = self._mul[base][base]
            e >>= 1
        return result

    def subfield(self, order: int) -> list[int]:
        """Elements of the unique subfield of the given order, ascending."""
        sp, sm = prime_power(order)
        if sp != self.p or self.m % sm:
            raise UnsupportedField(f"GF({self.q}) has no subfield of order {order}")
        return [a for a in self.elements if self.pow(a, order) == a]

    def multiplicative_order(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        x, n = a, 1
        while x != 1:
            x = self._mul[x][a]
            n += 1
        return n


@lru_cache(maxsize=None)
def gf(q: int) -> FiniteField:
    """Cached :class:`FiniteField` of order ``q``."""
    return FiniteField(q)
