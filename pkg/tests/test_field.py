import pytest
from hypothesis import given, strategies as st

from mbrsec.errors import BadParams, DivisionByZero, FieldMismatch, NotPrime
from mbrsec.field import FieldSpec, ff_inv, field_new, is_prime, next_prime

SMALL_PRIMES = [2, 3, 5, 7, 11, 13]


def test_field_new_examples():
    assert field_new(13).q == 13
    assert field_new(2).q == 2
    with pytest.raises(NotPrime):
        field_new(12)


@pytest.mark.parametrize("q", [0, 1, -7, 1 << 20])
def test_field_new_rejects_out_of_range(q):
    with pytest.raises(BadParams):
        field_new(q)


def test_inverse_examples():
    F = FieldSpec(13)
    assert ff_inv(F(1)) == F(1)
    assert ff_inv(F(3)) == F(9)
    with pytest.raises(DivisionByZero):
        ff_inv(F(0))


@pytest.mark.parametrize("q", SMALL_PRIMES)
def test_axioms_exhaustive(q):
    F = FieldSpec(q)
    els = F.elements()
    for a in els:
        if a:
            assert a * a.inv() == F(1)
        assert a + (-a) == F(0)
        for b in els:
            assert a + b == b + a
            assert a * b == b * a
            for c in els:
                assert (a + b) + c == a + (b + c)
                assert (a * b) * c == a * (b * c)
                assert a * (b + c) == a * b + a * c


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        FieldSpec(5)(1) + FieldSpec(7)(1)


def test_division_and_powers():
    F = FieldSpec(13)
    assert F(3) / F(3) == F(1)
    assert F(2) ** 12 == F(1)
    assert F(2) ** -1 == F(7)
    assert 5 - F(7) == F(11)


def test_prime_helpers():
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert next_prime(14) == 17
    assert next_prime(41) == 41


@given(st.sampled_from([101, 7919, 65537, 1048573]), st.integers(1, 10**9))
def test_inverse_property(q, a):
    F = FieldSpec(q)
    x = F(a)
    if x:
        assert x * ff_inv(x) == F(1)
