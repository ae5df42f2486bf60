"""Scalar types and the library-wide numeric mode.

Two modes exist:

``rational``
    Exact complex rationals (:class:`QComplex`, backed by ``gmpy2.mpq``).
    Every exactness claim in the library refers to this mode.
``float``
    IEEE double precision ``complex``.

Step-function data is always held exactly; the mode only decides the type of
engine and series outputs.
"""

from __future__ import annotations

import contextlib
import math
from fractions import Fraction
from numbers import Number
from typing import Iterator, Union

from gmpy2 import mpq

RATIONAL = "rational"
FLOAT = "float"
MODES = (RATIONAL, FLOAT)

_mode = RATIONAL


def numeric_mode() -> str:
    return _mode


def set_numeric_mode(mode: str) -> None:
    global _mode
    if mode not in MODES:
        raise ValueError(f"unknown numeric mode {mode!r}; expected one of {MODES}")
    _mode = mode


@contextlib.contextmanager
def using_mode(mode: str) -> Iterator[None]:
    """Temporarily switch the numeric mode."""
    previous = _mode
    set_numeric_mode(mode)
    try:
        yield
    finally:
        set_numeric_mode(previous)


def resolve_mode(mode: str | None) -> str:
    if mode is None:
        return _mode
    if mode not in MODES:
        raise ValueError(f"unknown numeric mode {mode!r}; expected one of {MODES}")
    return mode


def to_mpq(x) -> mpq:
    """Exact rational from an int, Fraction, mpq, str, or float (floats convert exactly)."""
    if isinstance(x, float) and not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r}")
    return mpq(x)


class QComplex:
    """Exact complex rational ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", to_mpq(re))
        object.__setattr__(self, "im", to_mpq(im))

    def __setattr__(self, name, value):
        raise AttributeError("QComplex is immutable")

    @classmethod
    def coerce(cls, x) -> "QComplex":
        if isinstance(x, QComplex):
            return x
        if isinstance(x, complex):
            return cls(x.real, x.imag)
        if isinstance(x, (int, float, Fraction)) or type(x) is type(mpq(0)):
            return cls(x, 0)
        if isinstance(x, Number):
            return cls(complex(x).real, complex(x).imag)
        raise TypeError(f"cannot convert {type(x).__name__} to QComplex")

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        try:
            o = QComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return QComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = QComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return QComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return QComplex.coerce(other) - self

    def __mul__(self, other):
        try:
            o = QComplex.coerce(other)
        except TypeError:
            return NotImplemented
        if o.im == 0:
            return QComplex(self.re * o.re, self.im * o.re)
        return QComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QComplex.coerce(other)
        d = o.abs2()
        if d == 0:
            raise ZeroDivisionError("QComplex division by zero")
        n = self * o.conjugate()
        return QComplex(n.re / d, n.im / d)

    def __rtruediv__(self, other):
        return QComplex.coerce(other) / self

    def __neg__(self):
        return QComplex(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> "QComplex":
        return QComplex(self.re, -self.im)

    def abs2(self) -> mpq:
        """Exact squared modulus."""
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.hypot(float(self.re), float(self.im))

    # comparison / conversion ----------------------------------------------
    def __eq__(self, other):
        try:
            o = QComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    @property
    def real(self) -> mpq:
        return self.re

    @property
    def imag(self) -> mpq:
        return self.im

    def sort_key(self) -> tuple:
        return (self.re, self.im)

    def __repr__(self):
        if self.im == 0:
            return f"QComplex({self.re})"
        return f"QComplex({self.re}, {self.im})"


ZERO = QComplex(0)
ONE = QComplex(1)

Scalar = Union[QComplex, complex]


def to_mode(x, mode: str | None = None) -> Scalar:
    """Convert a scalar to the representation used by ``mode``."""
    mode = resolve_mode(mode)
    if mode == RATIONAL:
        return QComplex.coerce(x)
    return complex(x)


def mode_zero(mode: str | None = None) -> Scalar:
    return ZERO if resolve_mode(mode) == RATIONAL else 0j


def mode_one(mode: str | None = None) -> Scalar:
    return ONE if resolve_mode(mode) == RATIONAL else 1 + 0j


def real_part(x):
    """Real part, staying exact for rational inputs."""
    if isinstance(x, QComplex):
        return x.re
    return complex(x).real


def format_real(x) -> str:
    """Exact ``num/den`` for rationals, 17 significant digits otherwise."""
    if type(x) is type(mpq(0)) or isinstance(x, Fraction):
        q = mpq(x)
        if q.denominator == 1:
            return str(q.numerator)
        return f"{q.numerator}/{q.denominator}"
    return format(float(x), ".17g")
