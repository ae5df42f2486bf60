from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from swnfock.numeric import (
    QComplex,
    format_real,
    mode_one,
    mode_zero,
    numeric_mode,
    set_numeric_mode,
    to_mode,
    to_mpq,
    using_mode,
)

rationals = st.fractions(max_denominator=10**6).map(mpq)
qcomplex = st.builds(QComplex, rationals, rationals)


def test_float_converts_exactly():
    assert to_mpq(0.1) == mpq(3602879701896397, 36028797018963968)
    with pytest.raises(ValueError):
        to_mpq(float("nan"))


def test_arithmetic():
    a, b = QComplex(1, 2), QComplex(mpq(1, 2), -1)
    assert a + b == QComplex(mpq(3, 2), 1)
    assert a * b == QComplex(mpq(5, 2), 0)
    assert a / a == 1
    assert 1 - a == QComplex(0, -2)
    assert a.conjugate() == QComplex(1, -2)
    assert a.abs2() == 5


def test_mixed_equality_and_hash():
    assert QComplex(3) == 3 and QComplex(mpq(1, 2)) == 0.5
    assert QComplex(1, 1) == 1 + 1j
    assert hash(QComplex(mpq(7, 4))) == hash(mpq(7, 4))


def test_immutable():
    z = QComplex(1)
    with pytest.raises(AttributeError):
        z.re = mpq(2)


def test_format_real():
    assert format_real(mpq(147, 128)) == "147/128"
    assert format_real(mpq(4, 2)) == "2"
    assert format_real(Fraction(-1, 3)) == "-1/3"
    assert format_real(0.1) == "0.10000000000000001"


def test_modes():
    assert numeric_mode() == "rational"
    with using_mode("float"):
        assert numeric_mode() == "float"
        assert mode_zero() == 0j and isinstance(to_mode(1), complex)
    assert mode_one() == QComplex(1)
    with pytest.raises(ValueError):
        set_numeric_mode("decimal")


@given(qcomplex, qcomplex, qcomplex)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a * a.conjugate()).im == 0
    if b:
        assert (a / b) * b == a
