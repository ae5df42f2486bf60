"""Test functions: exact step functions on boxes in R^d and sampled functions on R.

Step functions carry exact rational box corners and exact complex-rational
values, so refinement, products and L2 inner products are bit-exact. Sampled
functions are midpoint samples of a complex function on a uniform grid of an
interval; they stand in for general elements of L2 ∩ L∞.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from gmpy2 import mpq

from .errors import DimensionMismatch, IncompatibleGrid
from .numeric import ZERO, QComplex, to_mpq


@dataclass(frozen=True)
class Box:
    """Half-open box ``[lo_1, hi_1) x ... x [lo_d, hi_d)``."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(to_mpq(x) for x in self.lo)
        hi = tuple(to_mpq(x) for x in self.hi)
        if len(lo) != len(hi) or not lo:
            raise ValueError("box corners must have the same positive length")
        for i, (a, b) in enumerate(zip(lo, hi)):
            if not a < b:
                raise ValueError(f"degenerate box along axis {i}: lo={a} hi={b}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def interval(cls, lo, hi) -> "Box":
        return cls((lo,), (hi,))

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def volume(self) -> mpq:
        v = mpq(1)
        for a, b in zip(self.lo, self.hi):
            v *= b - a
        return v

    def center(self) -> tuple:
        return tuple((a + b) / 2 for a, b in zip(self.lo, self.hi))

    def contains(self, point: Sequence) -> bool:
        return all(a <= x < b for a, x, b in zip(self.lo, point, self.hi))

    def intersect(self, other: "Box") -> "Box | None":
        lo = tuple(max(a, b) for a, b in zip(self.lo, other.lo))
        hi = tuple(min(a, b) for a, b in zip(self.hi, other.hi))
        if all(a < b for a, b in zip(lo, hi)):
            return Box(lo, hi)
        return None

    def subtract(self, other: "Box") -> list["Box"]:
        """Disjoint boxes covering ``self \\ other``."""
        if self.intersect(other) is None:
            return [self]
        pieces = []
        lo, hi = list(self.lo), list(self.hi)
        for i in range(self.dim):
            if lo[i] < other.lo[i]:
                pieces.append(Box(tuple(lo[:i]) + (lo[i],) + tuple(lo[i + 1:]),
                                  tuple(hi[:i]) + (other.lo[i],) + tuple(hi[i + 1:])))
                lo[i] = other.lo[i]
            if other.hi[i] < hi[i]:
                pieces.append(Box(tuple(lo[:i]) + (other.hi[i],) + tuple(lo[i + 1:]),
                                  tuple(hi[:i]) + (hi[i],) + tuple(hi[i + 1:])))
                hi[i] = other.hi[i]
        return pieces

    def sort_key(self) -> tuple:
        return (self.lo, self.hi)

    def to_json(self) -> dict:
        return {"lo": [float(x) for x in self.lo], "hi": [float(x) for x in self.hi]}


def _check_disjoint(boxes: Sequence[Box]) -> None:
    if not boxes:
        return
    if boxes[0].dim == 1:
        order = sorted(boxes, key=lambda b: b.lo[0])
        for a, b in zip(order, order[1:]):
            if b.lo[0] < a.hi[0]:
                raise ValueError(f"overlapping cells {a.to_json()} and {b.to_json()}")
        return
    for i, a in enumerate(boxes):
        for b in boxes[i + 1:]:
            if a.intersect(b) is not None:
                raise ValueError(f"overlapping cells {a.to_json()} and {b.to_json()}")


@dataclass(frozen=True)
class StepFunction:
    """Finite combination of indicators of pairwise disjoint boxes."""

    dim: int
    cells: tuple = ()

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")
        cells = tuple((box, QComplex.coerce(v)) for box, v in self.cells)
        for box, _ in cells:
            if box.dim != self.dim:
                raise DimensionMismatch(f"cell of dimension {box.dim} in a dim={self.dim} function")
        _check_disjoint([box for box, _ in cells])
        object.__setattr__(self, "cells", cells)

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, dim: int = 1) -> "StepFunction":
        return cls(dim, ())

    @classmethod
    def indicator(cls, lo, hi, value=1) -> "StepFunction":
        """``value * 1_[lo, hi)``; scalars give an interval, sequences a box."""
        if isinstance(lo, (list, tuple)):
            box = Box(tuple(lo), tuple(hi))
        else:
            box = Box.interval(lo, hi)
        return cls(box.dim, ((box, value),))

    @classmethod
    def from_intervals(cls, pieces: Iterable[tuple]) -> "StepFunction":
        """One-dimensional step function from ``(lo, hi, value)`` triples."""
        return cls(1, tuple((Box.interval(lo, hi), v) for lo, hi, v in pieces))

    @classmethod
    def from_json(cls, data: dict) -> "StepFunction":
        dim = int(data["dim"])
        cells = []
        for cell in data["cells"]:
            value = QComplex(to_mpq(cell.get("re", 0)), to_mpq(cell.get("im", 0)))
            cells.append((Box(tuple(cell["lo"]), tuple(cell["hi"])), value))
        return cls(dim, tuple(cells))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "cells": [
                {**box.to_json(), "re": float(v.re), "im": float(v.im)}
                for box, v in self.cells
            ],
        }

    # queries --------------------------------------------------------------
    @property
    def boxes(self) -> tuple:
        return tuple(box for box, _ in self.cells)

    @property
    def values(self) -> tuple:
        return tuple(v for _, v in self.cells)

    def __call__(self, *point) -> QComplex:
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = tuple(point[0])
        p = tuple(to_mpq(x) for x in point)
        for box, v in self.cells:
            if box.contains(p):
                return v
        return ZERO

    def is_zero(self) -> bool:
        return all(not v for _, v in self.cells)

    def support(self) -> tuple:
        """Boxes carrying a nonzero value."""
        return tuple(box for box, v in self.cells if v)

    def nonzero(self) -> "StepFunction":
        return StepFunction(self.dim, tuple((b, v) for b, v in self.cells if v))

    def canonical(self) -> "StepFunction":
        """Drop zero cells and sort; equal functions on equal partitions compare equal."""
        cells = sorted(((b, v) for b, v in self.cells if v), key=lambda c: c[0].sort_key())
        return StepFunction(self.dim, tuple(cells))

    # arithmetic sugar -----------------------------------------------------
    def __add__(self, other: "StepFunction") -> "StepFunction":
        f, g = refine(self, other)
        return StepFunction(f.dim, tuple((b, a + c) for (b, a), (_, c) in zip(f.cells, g.cells)))

    def __neg__(self) -> "StepFunction":
        return scale(-1, self)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, StepFunction):
            return pointwise_mul(self, other)
        return scale(other, self)

    def __rmul__(self, other):
        return scale(other, self)

    def conjugate(self) -> "StepFunction":
        return conj(self)


def _check_dims(f, g) -> None:
    if f.dim != g.dim:
        raise DimensionMismatch(f"dimension mismatch: {f.dim} vs {g.dim}")


def _refine_1d(f: StepFunction, g: StepFunction):
    points = set()
    for box in f.boxes + g.boxes:
        points.add(box.lo[0])
        points.add(box.hi[0])
    points = sorted(points)

    def lookup(h: StepFunction):
        # value on each elementary interval, or None if uncovered
        cells = sorted(h.cells, key=lambda c: c[0].lo[0])
        out, k = [], 0
        for a, b in zip(points, points[1:]):
            while k < len(cells) and cells[k][0].hi[0] <= a:
                k += 1
            if k < len(cells) and cells[k][0].lo[0] <= a and b <= cells[k][0].hi[0]:
                out.append(cells[k][1])
            else:
                out.append(None)
        return out

    fv, gv = lookup(f), lookup(g)
    fc, gc = [], []
    for (a, b), x, y in zip(zip(points, points[1:]), fv, gv):
        if x is None and y is None:
            continue
        box = Box((a,), (b,))
        fc.append((box, ZERO if x is None else x))
        gc.append((box, ZERO if y is None else y))
    return StepFunction(1, tuple(fc)), StepFunction(1, tuple(gc))


def _refine_nd(f: StepFunction, g: StepFunction):
    fc, gc = [], []
    for bf, vf in f.cells:
        rest = [bf]
        for bg, vg in g.cells:
            inter = bf.intersect(bg)
            if inter is not None:
                fc.append((inter, vf))
                gc.append((inter, vg))
                rest = [piece for r in rest for piece in r.subtract(bg)]
        for r in rest:
            fc.append((r, vf))
            gc.append((r, ZERO))
    for bg, vg in g.cells:
        rest = [bg]
        for bf in f.boxes:
            rest = [piece for r in rest for piece in r.subtract(bf)]
        for r in rest:
            fc.append((r, ZERO))
            gc.append((r, vg))
    return StepFunction(f.dim, tuple(fc)), StepFunction(f.dim, tuple(gc))


def refine(f: StepFunction, g: StepFunction) -> tuple[StepFunction, StepFunction]:
    """Re-express ``f`` and ``g`` on one common box list covering both supports."""
    _check_dims(f, g)
    if f.boxes == g.boxes:
        return f, g
    if f.dim == 1:
        return _refine_1d(f, g)
    return _refine_nd(f, g)


def refine_all(fs: Sequence[StepFunction]) -> list[StepFunction]:
    """Common refinement of any number of step functions."""
    if not fs:
        return []
    for h in fs[1:]:
        _check_dims(fs[0], h)
    # a function carrying every box with value 1 collects the partition
    acc = StepFunction(fs[0].dim, tuple((b, 1) for b in fs[0].boxes))
    for h in fs[1:]:
        acc, _ = refine(acc, h)
    out = []
    for h in fs:
        _, hr = refine(acc, h)
        out.append(hr)
    return out


def pointwise_mul(f: StepFunction, g: StepFunction) -> StepFunction:
    f, g = refine(f, g)
    return StepFunction(f.dim, tuple((b, a * c) for (b, a), (_, c) in zip(f.cells, g.cells)))


def conj(f: StepFunction) -> StepFunction:
    return StepFunction(f.dim, tuple((b, v.conjugate()) for b, v in f.cells))


def scale(alpha, f: StepFunction) -> StepFunction:
    alpha = QComplex.coerce(alpha)
    return StepFunction(f.dim, tuple((b, alpha * v) for b, v in f.cells))


def l2_inner(f: StepFunction, g: StepFunction) -> QComplex:
    """Exact ``∫ conj(f) g``: conjugate-linear in ``f``, linear in ``g``."""
    f, g = refine(f, g)
    total = ZERO
    for (box, a), (_, b) in zip(f.cells, g.cells):
        if a and b:
            total = total + a.conjugate() * b * box.volume
    return total


def l1_norm_product(f: StepFunction, g: StepFunction) -> float:
    """``∫ |conj(f) g|`` (float; moduli of complex rationals are irrational)."""
    f, g = refine(f, g)
    return math.fsum(
        abs(a) * abs(b) * float(box.volume) for (box, a), (_, b) in zip(f.cells, g.cells)
    )


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Midpoint samples of a complex function on a uniform grid of ``[lo, hi)``.

    ``source``, when given, is the underlying callable; quadrature uses it to
    resample on finer grids. Without it the samples are read as a function
    constant on each grid cell.
    """

    lo: float
    hi: float
    values: np.ndarray
    supnorm_hint: float | None = None
    source: Callable | None = field(default=None, repr=False)
    dim: int = 1

    def __post_init__(self):
        if self.dim != 1:
            raise DimensionMismatch("sampled functions are one-dimensional")
        if not float(self.lo) < float(self.hi):
            raise ValueError(f"empty domain [{self.lo}, {self.hi})")
        values = np.array(self.values, dtype=np.complex128).reshape(-1)
        if values.size == 0:
            raise ValueError("sampled function needs at least one sample")
        if not np.all(np.isfinite(values)):
            raise ValueError("non-finite sample value")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if self.supnorm_hint is not None:
            hint = float(self.supnorm_hint)
            if hint < float(np.max(np.abs(values))):
                raise ValueError("supnorm_hint is smaller than the largest sample modulus")
            object.__setattr__(self, "supnorm_hint", hint)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def grid(self) -> int:
        return self.n

    @property
    def domain(self) -> Box:
        return Box.interval(self.lo, self.hi)

    @property
    def h(self) -> float:
        return (self.hi - self.lo) / self.n

    @staticmethod
    def midpoints_of(lo: float, hi: float, n: int) -> np.ndarray:
        return lo + (np.arange(n) + 0.5) * ((hi - lo) / n)

    def midpoints(self) -> np.ndarray:
        return self.midpoints_of(self.lo, self.hi, self.n)

    @classmethod
    def from_callable(cls, func: Callable, lo: float, hi: float, n: int,
                      supnorm_hint: float | None = None) -> "SampledFunction":
        t = cls.midpoints_of(float(lo), float(hi), n)
        return cls(lo, hi, np.asarray(func(t), dtype=np.complex128) * np.ones(n),
                   supnorm_hint=supnorm_hint, source=func)

    @classmethod
    def from_step(cls, f: StepFunction, lo: float, hi: float, n: int) -> "SampledFunction":
        """Midpoint samples of a 1-d step function."""
        if f.dim != 1:
            raise DimensionMismatch("only one-dimensional step functions can be sampled")
        return cls(lo, hi, sample_step(f, lo, hi, n))

    def resample(self, n: int) -> np.ndarray:
        """Values at the midpoints of an ``n``-cell grid of the same domain."""
        if n == self.n:
            return self.values
        if self.source is not None:
            t = self.midpoints_of(self.lo, self.hi, n)
            return np.asarray(self.source(t), dtype=np.complex128) * np.ones(n)
        if n % self.n:
            raise IncompatibleGrid(f"grid {n} is not a multiple of the sample grid {self.n}")
        return np.repeat(self.values, n // self.n)

    def to_json(self) -> dict:
        out = {
            "dim": 1,
            "lo": self.lo,
            "hi": self.hi,
            "n": self.n,
            "values": [[float(v.real), float(v.imag)] for v in self.values],
        }
        if self.supnorm_hint is not None:
            out["supnorm_hint"] = self.supnorm_hint
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SampledFunction":
        if int(data.get("dim", 1)) != 1:
            raise DimensionMismatch("sampled functions are one-dimensional")
        values = np.array([complex(re, im) for re, im in data["values"]], dtype=np.complex128)
        n = int(data["n"])
        if values.size != n:
            raise ValueError(f"values: expected {n} samples, got {values.size}")
        return cls(data["lo"], data["hi"], values, supnorm_hint=data.get("supnorm_hint"))


def sample_step(f: StepFunction, lo: float, hi: float, n: int) -> np.ndarray:
    """Evaluate a 1-d step function at the midpoints of an ``n``-cell grid."""
    return eval_step(f, SampledFunction.midpoints_of(float(lo), float(hi), n))


def eval_step(f: StepFunction, t) -> np.ndarray:
    """Vectorised evaluation of a 1-d step function at the points ``t``."""
    if f.dim != 1:
        raise DimensionMismatch("vectorised evaluation needs a one-dimensional step function")
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros(t.shape, dtype=np.complex128)
    if not f.cells:
        return out
    cells = sorted(f.cells, key=lambda c: c[0].lo[0])
    lows = np.array([float(b.lo[0]) for b, _ in cells])
    highs = np.array([float(b.hi[0]) for b, _ in cells])
    vals = np.array([complex(v) for _, v in cells], dtype=np.complex128)
    idx = np.searchsorted(lows, t, side="right") - 1
    ok = idx >= 0
    ok[ok] &= t[ok] < highs[idx[ok]]
    out[ok] = vals[idx[ok]]
    return out


def sup_norm(f) -> float:
    """Largest modulus: per cell for step functions, per sample (or hint) otherwise."""
    if isinstance(f, StepFunction):
        if not f.cells:
            return 0.0
        return math.sqrt(float(max(v.abs2() for v in f.values)))
    m = float(np.max(np.abs(f.values)))
    if f.supnorm_hint is not None:
        m = max(m, f.supnorm_hint)
    return m


def sup_norm_sq_exact(f: StepFunction) -> mpq:
    return max((v.abs2() for v in f.values), default=mpq(0))


def l2_norm(f) -> float:
    if isinstance(f, StepFunction):
        return math.sqrt(float(l2_inner(f, f).re))
    return math.sqrt(f.h * math.fsum(np.abs(f.values) ** 2))
