import pytest
from hypothesis import given
from hypothesis import strategies as st

from cachecalc import gf

P = gf.DEFAULT_PRIME
elems = st.integers(min_value=0, max_value=P - 1).map(lambda v: gf.element(v, P))
nonzero = st.integers(min_value=1, max_value=P - 1).map(lambda v: gf.element(v, P))


@given(elems, elems, elems)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(elems)
def test_additive_inverse(a):
    assert int(a + (-a)) == 0
    assert int(a - a) == 0


@given(nonzero)
def test_multiplicative_inverse(a):
    assert int(a * gf.inv(a)) == 1
    assert int(a / a) == 1


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        gf.inv(gf.element(0, P))


def test_mixed_moduli_rejected():
    with pytest.raises(ValueError):
        gf.element(1, 7) + gf.element(1, 11)


def test_prime_validation():
    assert gf.check_prime(7) == 7
    with pytest.raises(gf.ConfigurationError):
        gf.check_prime(8)
    with pytest.raises(gf.ConfigurationError):
        gf.check_prime(2**31 + 11)


def test_set_prime_roundtrip():
    old = gf.set_prime(101)
    try:
        assert gf.get_prime() == 101
        assert int(gf.element(205)) == 3
    finally:
        gf.set_prime(old)
    assert gf.get_prime() == old
