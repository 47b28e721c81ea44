import itertools

import pytest

from designcache.errors import NotPrimePower
from designcache.gf import IRREDUCIBLE_POLYNOMIALS, FiniteField, gf, is_irreducible, prime_power

PRIME_POWERS_TO_16 = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


@pytest.mark.parametrize("n, expected", [(2, (2, 1)), (8, (2, 3)), (9, (3, 2)), (16, (2, 4)), (49, (7, 2))])
def test_prime_power_decomposition(n, expected):
    assert prime_power(n) == expected


@pytest.mark.parametrize("n", [0, 1, 6, 10, 12, 15])
def test_non_prime_powers_rejected(n):
    with pytest.raises(NotPrimePower):
        prime_power(n)


@pytest.mark.parametrize("pm, poly", sorted(IRREDUCIBLE_POLYNOMIALS.items()))
def test_table_polynomials_are_irreducible(pm, poly):
    p, m = pm
    assert len(poly) == m + 1 and poly[-1] == 1
    assert is_irreducible(poly, p)


def test_reducible_polynomial_detected():
    # x^2 + 1 = (x + 1)^2 over GF(2)
    assert not is_irreducible((1, 0, 1), 2)


@pytest.mark.parametrize("q", PRIME_POWERS_TO_16)
def test_field_axioms_exhaustive(q):
    F = gf(q)
    els = list(F.elements)
    assert len(els) == q
    for a, b in itertools.product(els, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
        if b:
            assert F.mul(F.div(a, b), b) == a
    for a, b, c in itertools.product(els[: min(q, 9)], repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a in els[1:]:
        assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("q", PRIME_POWERS_TO_16)
def test_multiplicative_group_is_cyclic(q):
    F = gf(q)
    assert max(F.multiplicative_order(a) for a in range(1, q)) == q - 1


@pytest.mark.parametrize("q, order", [(4, 2), (9, 3), (16, 4), (16, 2), (8, 2)])
def test_subfield_closed_under_arithmetic(q, order):
    F = gf(q)
    sub = set(F.subfield(order))
    assert len(sub) == order and {0, 1} <= sub
    assert all(F.add(a, b) in sub and F.mul(a, b) in sub for a in sub for b in sub)


def test_prime_field_is_integers_mod_p():
    F = FiniteField(7)
    assert all(F.mul(a, b) == a * b % 7 for a in range(7) for b in range(7))


def test_fields_are_cached():
    assert gf(8) is gf(8)


@pytest.mark.parametrize("pm", sorted(IRREDUCIBLE_POLYNOMIALS))
def test_table_polynomials_are_primitive(pm):
    p, m = pm
    F = gf(p**m)
    # the element x is encoded as p (digit 1 in the x^1 place)
    assert F.multiplicative_order(p) == p**m - 1
