import cmath
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lacunary.group import GroupSpec, GroupSpecError, parse_group

orders_st = st.lists(st.integers(2, 6), min_size=1, max_size=3).map(tuple)


@pytest.mark.parametrize(
    "text, orders",
    [("12", (12,)), ("2,2,3", (2, 2, 3)), ("2^5", (2,) * 5), ("3^2,5", (3, 3, 5)), (" 4 , 2^2 ", (4, 2, 2))],
)
def test_parse_group(text, orders):
    assert parse_group(text).orders == orders


@pytest.mark.parametrize("text", ["", "2,x", "1", "0,3", "2^1", "2^", "^3", "2,,3", "-2"])
def test_parse_group_rejects(text):
    with pytest.raises(GroupSpecError):
        parse_group(text)


def test_order_and_str():
    g = parse_group("2,3,5")
    assert g.N == 30 and g.rank == 3 and str(g) == "2,3,5"
    assert g.exponent == 30
    assert GroupSpec.power(2, 4).exponent == 2


def test_codes_last_factor_fastest():
    g = GroupSpec((2, 3))
    assert [g.decode(c) for c in range(6)] == list(itertools.product(range(2), range(3)))
    assert g.encode((1, 2)) == 5


def test_out_of_range_element():
    with pytest.raises(GroupSpecError):
        GroupSpec.cyclic(5).decode(5)


@given(orders_st, st.data())
@settings(max_examples=60, deadline=None)
def test_arithmetic_matches_digitwise(orders, data):
    g = GroupSpec(orders)
    a = data.draw(st.integers(0, g.N - 1))
    b = data.draw(st.integers(0, g.N - 1))
    da, db = g.decode(a), g.decode(b)
    want = tuple((x + y) % n for x, y, n in zip(da, db, orders))
    assert g.decode(g.add(a, b)) == want
    assert g.add(a, g.neg(a)) == 0
    assert g.sub(g.add(a, b), b) == a
    assert g.decode(g.scale(3, a)) == tuple(3 * x % n for x, n in zip(da, orders))


@given(orders_st, st.data())
@settings(max_examples=60, deadline=None)
def test_pairing_against_formula(orders, data):
    g = GroupSpec(orders)
    xi = data.draw(st.integers(0, g.N - 1))
    x = data.draw(st.integers(0, g.N - 1))
    t = sum(a * b / n for a, b, n in zip(g.decode(xi), g.decode(x), orders))
    assert abs(g.pairing(xi, x) - cmath.exp(2j * cmath.pi * t)) < 1e-12


def test_character_matrix_is_multiplicative():
    g = parse_group("2,4")
    F = g.character_matrix()
    for a in range(g.N):
        for b in range(g.N):
            np.testing.assert_allclose(F[g.add(a, b)], F[a] * F[b], atol=1e-12)


def test_prime_power_base():
    assert parse_group("3^4").prime_power_base() == 3
    assert parse_group("4^2").prime_power_base() is None
    assert parse_group("2,3").prime_power_base() is None
