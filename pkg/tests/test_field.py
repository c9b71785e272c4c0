import itertools

import pytest
from hypothesis import given, strategies as st

from keycast.field import MAX_K, POLYNOMIALS, FieldError, GF2k, add, choose_field, inv, mul


def slow_mul(x, y, k, poly):
    """Schoolbook polynomial product, then long division by ``poly``."""
    prod = 0
    for i in range(k):
        if (y >> i) & 1:
            prod ^= x << i
    for bit in range(2 * k - 2, k - 1, -1):
        if (prod >> bit) & 1:
            prod ^= poly << (bit - k)
    return prod


def test_add_in_gf2_is_xor():
    F = GF2k(1)
    assert F.add(1, 1) == 0
    assert int(add(F.element(1), F.element(1))) == 0


def test_inverse_of_two_in_gf16():
    F = GF2k(4)
    assert F.poly == 0x13
    assert F.mul(2, 9) == 1
    assert F.inv(2) == 9
    # brute-force search for the inverse, independent of the log tables
    assert [y for y in range(16) if slow_mul(2, y, 4, 0x13) == 1] == [9]


@pytest.mark.parametrize("k", range(1, 9))
def test_inverse_law_every_element(k):
    F = GF2k(k)
    for x in range(1, F.order):
        assert F.mul(x, F.inv(x)) == 1
        assert F.inv(F.inv(x)) == x


def test_inv_zero_rejected():
    with pytest.raises(ZeroDivisionError):
        GF2k(3).inv(0)
    with pytest.raises(ZeroDivisionError):
        inv(GF2k(3).element(0))


def test_mixed_fields_rejected():
    with pytest.raises(FieldError):
        add(GF2k(2).element(1), GF2k(3).element(1))
    with pytest.raises(FieldError):
        mul(GF2k(2).element(1), GF2k(3).element(1))


def test_out_of_range_element_rejected():
    with pytest.raises(FieldError):
        GF2k(2).mul(4, 1)


@pytest.mark.parametrize("k", range(1, 5))
def test_axioms_exhaustive_small_fields(k):
    F = GF2k(k)
    q = F.order
    els = range(q)
    for x, y in itertools.product(els, repeat=2):
        assert F.mul(x, y) == slow_mul(x, y, k, POLYNOMIALS[k])
        assert F.mul(x, y) == F.mul(y, x)
    for x, y, z in itertools.product(els, repeat=3):
        assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
        assert F.mul(x, y ^ z) == F.mul(x, y) ^ F.mul(x, z)


@pytest.mark.parametrize("k", range(1, MAX_K + 1))
def test_polynomials_are_primitive(k):
    F = GF2k(k)
    # x = 2 generates the multiplicative group iff its order is 2^k - 1
    if k == 1:
        return
    seen, v = set(), 1
    for _ in range(F.order - 1):
        seen.add(v)
        v = F.mul(v, 2)
    assert len(seen) == F.order - 1 and v == 1


@given(st.integers(5, 16).flatmap(
    lambda k: st.tuples(st.just(k), *(st.integers(0, (1 << k) - 1) for _ in range(3)))))
def test_axioms_random_large_fields(args):
    k, x, y, z = args
    F = GF2k(k)
    assert F.mul(x, y) == slow_mul(x, y, k, POLYNOMIALS[k])
    assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
    assert F.mul(x, y ^ z) == F.mul(x, y) ^ F.mul(x, z)
    if x:
        assert F.inv(F.inv(x)) == x
        assert F.div(F.mul(x, y), x) == y


def test_scale_table_matches_mul():
    F = GF2k(5)
    for c in (0, 1, 7, 31):
        assert F.scale_table(c).tolist() == [F.mul(c, x) for x in range(F.order)]


@pytest.mark.parametrize("colors,k", [(1, 1), (2, 2), (3, 2), (4, 3), (5, 3), (7, 3), (8, 4), (65535, 16)])
def test_choose_field(colors, k):
    F = choose_field(colors)
    assert F.k == k
    assert F.order > colors


def test_choose_field_cap():
    with pytest.raises(FieldError):
        choose_field(70000)


def test_field_json_round_trip():
    F = GF2k(6)
    assert GF2k.from_json(F.to_json()) == F


@pytest.mark.parametrize("bad", [{"k": 0}, {"k": 17}, {"k": 4, "poly": 0x11}])
def test_field_json_rejects_bad_specs(bad):
    with pytest.raises(FieldError):
        GF2k.from_json(bad)
