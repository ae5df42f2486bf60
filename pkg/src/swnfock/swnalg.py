"""Normal-ordering engine for the square-of-white-noise algebra on Fock space.

Vectors are finite sums of creator words ``B*_{h1} ... B*_{hk} Φ``. Creators
commute, so a word is a multiset of labels. Annihilators and number operators
are pushed to the right with the commutation rules

    [B_f, B*_g] = 2c<f, g> + 4 N_{conj(f) g}
    [N_f, B*_g] = 2 B*_{f g}

until they hit the vacuum, which both kill. ``f -> B*_f`` and ``f -> N_f`` are
linear, ``f -> B_f`` is antilinear; ``N_f* = N_{conj(f)}``.

Internally every label is a tuple of exact values on one common partition of
the labels involved, scaled so its first nonzero entry is 1 (the scale moves
into the coefficient). Words are sorted tuples of such labels, which makes
terms that agree up to creator order or label rescaling merge.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from gmpy2 import mpq

from . import _backend
from .errors import DimensionMismatch
from .numeric import (
    ONE,
    RATIONAL,
    ZERO,
    QComplex,
    resolve_mode,
    to_mode,
    to_mpq,
)
from .testfn import Box, StepFunction, refine, refine_all


class Kind(str, enum.Enum):
    CREATOR = "B*"
    ANNIHILATOR = "B"
    NUMBER = "N"


@dataclass(frozen=True)
class Generator:
    kind: Kind
    label: StepFunction

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))

    @classmethod
    def creator(cls, f: StepFunction) -> "Generator":
        return cls(Kind.CREATOR, f)

    @classmethod
    def annihilator(cls, f: StepFunction) -> "Generator":
        return cls(Kind.ANNIHILATOR, f)

    @classmethod
    def number(cls, f: StepFunction) -> "Generator":
        return cls(Kind.NUMBER, f)

    def to_json(self) -> dict:
        return {"op": self.kind.value, "f": self.label.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "Generator":
        return cls(Kind(data["op"]), StepFunction.from_json(data["f"]))


def word_from_json(data: Sequence[dict]) -> list[Generator]:
    """Parse ``[{"op": "B*", "f": ...}, ...]``; read left to right as a product."""
    return [Generator.from_json(item) for item in data]


def word_to_json(word: Sequence[Generator]) -> list[dict]:
    return [g.to_json() for g in word]


def adjoint(word: Sequence[Generator]) -> list[Generator]:
    """Reverse the word, swap B <-> B*, conjugate number-operator labels."""
    out = []
    for g in reversed(word):
        if g.kind is Kind.CREATOR:
            out.append(Generator(Kind.ANNIHILATOR, g.label))
        elif g.kind is Kind.ANNIHILATOR:
            out.append(Generator(Kind.CREATOR, g.label))
        else:
            out.append(Generator(Kind.NUMBER, g.label.conjugate()))
    return out


# label vectors ---------------------------------------------------------------

def _normalize(vec: tuple) -> tuple[tuple | None, QComplex]:
    """Split ``vec`` into (unit-leading label, scale); the zero label gives None."""
    for x in vec:
        if x:
            if x == ONE:
                return vec, ONE
            inv = ONE / x
            return tuple(y * inv for y in vec), x
    return None, ZERO


def _label_key(vec: tuple) -> tuple:
    return tuple((x.re, x.im) for x in vec)


def _word_key(labels: Iterable[tuple]) -> tuple:
    return tuple(sorted(labels, key=_label_key))


def _accumulate(out: dict, key: tuple, coef: QComplex) -> None:
    total = out.get(key, ZERO) + coef
    if total:
        out[key] = total
    else:
        out.pop(key, None)


class _Rules:
    """Rewriting rules on a fixed partition with cell volumes ``vols``."""

    def __init__(self, vols: Sequence[mpq], c):
        self.vols = tuple(vols)
        self.c = to_mpq(c)
        self._ann_cache: dict = {}

    def inner(self, f: tuple, h: tuple) -> QComplex:
        total = ZERO
        for a, b, v in zip(f, h, self.vols):
            if a and b:
                total = total + a.conjugate() * b * v
        return total

    def number_word(self, g: tuple, word: tuple) -> dict:
        out: dict = {}
        for j, h in enumerate(word):
            prod = tuple(x * y for x, y in zip(g, h))
            label, s = _normalize(prod)
            if label is None:
                continue
            _accumulate(out, _word_key(word[:j] + word[j + 1:] + (label,)), s * 2)
        return out

    def number(self, g: tuple, terms: dict) -> dict:
        out: dict = {}
        for word, coef in terms.items():
            for w, k in self.number_word(g, word).items():
                _accumulate(out, w, coef * k)
        return out

    def annihilate_word(self, f: tuple, word: tuple) -> dict:
        """``B_f`` applied to one creator word, by peeling off its first creator."""
        key = (f, word)
        hit = self._ann_cache.get(key)
        if hit is not None:
            return hit
        out: dict = {}
        if word:
            h1, rest = word[0], word[1:]
            # B*_{h1} (B_f W')
            for w, k in self.annihilate_word(f, rest).items():
                _accumulate(out, _word_key(w + (h1,)), k)
            # 2c <f, h1> W'
            ip = self.inner(f, h1) * (2 * self.c)
            if ip:
                _accumulate(out, rest, ip)
            # 4 N_{conj(f) h1} W'
            fh = tuple(a.conjugate() * b for a, b in zip(f, h1))
            if any(fh):
                for w, k in self.number_word(fh, rest).items():
                    _accumulate(out, w, k * 4)
        self._ann_cache[key] = out
        return out

    def annihilate(self, f: tuple, terms: dict) -> dict:
        out: dict = {}
        for word, coef in terms.items():
            for w, k in self.annihilate_word(f, word).items():
                _accumulate(out, w, coef * k)
        return out


@dataclass(frozen=True)
class NormalWord:
    """``coefficient * B*_{h1} ... B*_{hk} Φ``; no labels means a multiple of Φ."""

    labels: tuple
    coefficient: QComplex

    @property
    def is_vacuum(self) -> bool:
        return not self.labels


class CreatorVector:
    """Finite linear combination of creator words applied to the vacuum."""

    def __init__(self, basis: Sequence[Box] = (), terms: dict | None = None, dim: int | None = None):
        self.basis = tuple(basis)
        self.dim = dim if dim is not None else (self.basis[0].dim if self.basis else None)
        self.terms = dict(terms) if terms else {}

    @classmethod
    def vacuum(cls) -> "CreatorVector":
        return cls((), {(): ONE})

    @classmethod
    def zero(cls) -> "CreatorVector":
        return cls()

    @property
    def vacuum_coefficient(self) -> QComplex:
        return self.terms.get((), ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def words(self) -> list[NormalWord]:
        out = []
        for word, coef in self.terms.items():
            labels = tuple(
                StepFunction(self.dim, tuple((b, v) for b, v in zip(self.basis, vec) if v))
                for vec in word
            )
            out.append(NormalWord(labels, coef))
        return out

    def _volumes(self) -> tuple:
        return tuple(b.volume for b in self.basis)

    def _carrier(self, dim: int) -> StepFunction:
        # cell i of the basis carries the value i + 1
        return StepFunction(dim, tuple((b, i + 1) for i, b in enumerate(self.basis)))

    def _moved(self, new_basis: tuple, old_index: Sequence[int], dim: int) -> "CreatorVector":
        if new_basis == self.basis:
            return CreatorVector(self.basis, self.terms, dim)
        terms: dict = {}
        for word, coef in self.terms.items():
            scale = coef
            labels = []
            for vec in word:
                label, s = _normalize(tuple(vec[i] if i >= 0 else ZERO for i in old_index))
                labels.append(label)
                scale = scale * s
            _accumulate(terms, _word_key(labels), scale)
        return CreatorVector(new_basis, terms, dim)

    def rebase(self, fs: Sequence[StepFunction]) -> tuple["CreatorVector", list[tuple]]:
        """Move to a partition refining both the current basis and ``fs``.

        Returns the re-expressed vector and the label vectors of ``fs``.
        """
        fs = list(fs)
        dim = self.dim
        for f in fs:
            if dim is None:
                dim = f.dim
            elif f.dim != dim:
                raise DimensionMismatch(f"label of dimension {f.dim} applied to a dim={dim} vector")
        if dim is None:
            return self, []
        parts = refine_all([self._carrier(dim)] + fs)
        old_index = [int(v.re) - 1 for v in parts[0].values]
        moved = self._moved(parts[0].boxes, old_index, dim)
        return moved, [tuple(p.values) for p in parts[1:]]


    def __add__(self, other: "CreatorVector") -> "CreatorVector":
        a, b = _align(self, other)
        terms = dict(a.terms)
        for w, k in b.terms.items():
            _accumulate(terms, w, k)
        return CreatorVector(a.basis, terms, a.dim)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CreatorVector):
            return NotImplemented
        a, b = _align(self, other)
        return a.terms == b.terms

    __hash__ = None

    def scale(self, alpha) -> "CreatorVector":
        alpha = QComplex.coerce(alpha)
        if not alpha:
            return CreatorVector(self.basis, {}, self.dim)
        return CreatorVector(self.basis, {w: k * alpha for w, k in self.terms.items()}, self.dim)

    def __repr__(self):
        return f"CreatorVector({len(self.terms)} terms on {len(self.basis)} cells)"


def _align(a: CreatorVector, b: CreatorVector) -> tuple[CreatorVector, CreatorVector]:
    dim = a.dim or b.dim
    if dim is None:
        return a, b
    if a.dim is not None and b.dim is not None and a.dim != b.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {b.dim}")
    pa, pb = refine_all([a._carrier(dim), b._carrier(dim)])
    basis = pa.boxes
    return (a._moved(basis, [int(v.re) - 1 for v in pa.values], dim),
            b._moved(basis, [int(v.re) - 1 for v in pb.values], dim))


def apply_creator(f: StepFunction, v: CreatorVector) -> CreatorVector:
    v, (fv,) = v.rebase([f])
    label, s = _normalize(fv)
    if label is None:
        return CreatorVector(v.basis, {}, v.dim)
    terms: dict = {}
    for word, coef in v.terms.items():
        _accumulate(terms, _word_key(word + (label,)), coef * s)
    return CreatorVector(v.basis, terms, v.dim)


def apply_number(g: StepFunction, v: CreatorVector) -> CreatorVector:
    v, (gv,) = v.rebase([g])
    rules = _Rules(v._volumes(), 0)
    return CreatorVector(v.basis, rules.number(gv, v.terms), v.dim)


def apply_annihilator(f: StepFunction, v: CreatorVector, c) -> CreatorVector:
    v, (fv,) = v.rebase([f])
    rules = _Rules(v._volumes(), c)
    return CreatorVector(v.basis, rules.annihilate(fv, v.terms), v.dim)


def apply_word(word: Sequence[Generator], v: CreatorVector, c) -> CreatorVector:
    """Apply a product of generators, rightmost first."""
    if not word:
        return v
    v, vecs = v.rebase([g.label for g in word])
    rules = _Rules(v._volumes(), c)
    terms = v.terms
    for g, vec in zip(reversed(word), reversed(vecs)):
        if not terms:
            break
        if g.kind is Kind.CREATOR:
            label, s = _normalize(vec)
            if label is None:
                terms = {}
                continue
            new: dict = {}
            for w, k in terms.items():
                _accumulate(new, _word_key(w + (label,)), k * s)
            terms = new
        elif g.kind is Kind.NUMBER:
            terms = rules.number(vec, terms)
        else:
            terms = rules.annihilate(vec, terms)
    return CreatorVector(v.basis, terms, v.dim)


def vacuum_expectation(word: Sequence[Generator], c, mode: str | None = None):
    """``<Φ, word Φ>`` computed exactly by normal ordering."""
    mode = resolve_mode(mode)
    v = apply_word(list(word), CreatorVector.vacuum(), c)
    return to_mode(v.vacuum_coefficient, mode)


# creator powers ------------------------------------------------------------

def _cell_data(f: StepFunction, g: StepFunction):
    fr, gr = refine(f, g)
    return [
        (a.conjugate() * b, box.volume)
        for (box, a), (_, b) in zip(fr.cells, gr.cells)
        if a and b
    ]


def _series_exact(cells, c, M: int) -> list[QComplex]:
    """Normalised coefficients ``<B*_f^m Φ, B*_g^m Φ> / (m!)^2`` for m <= M.

    On one cell with weight ``w = conj(a) b`` and length ``t`` the single-mode
    norms obey ``r_n = n (2 c t + 4 (n - 1)) r_{n-1}``; distinct cells commute,
    so the multinomial expansion of ``B*_f^m`` turns the full coefficient list
    into a product (convolution) of per-cell series.
    """
    c = to_mpq(c)
    acc = [ONE] + [ZERO] * M
    for w, t in cells:
        a = 2 * c * t
        q = [ONE]
        for n in range(1, M + 1):
            q.append(q[-1] * w * ((a + 4 * (n - 1)) / n))
        for m in range(M, 0, -1):
            s = acc[m]
            for j in range(1, m + 1):
                if acc[m - j]:
                    s = s + acc[m - j] * q[j]
            acc[m] = s
    return acc


def creator_series(f: StepFunction, g: StepFunction, c, M: int, mode: str | None = None) -> list:
    """``[<B*_f^m Φ, B*_g^m Φ> / (m!)^2 for m in 0..M]`` via cell factorisation."""
    mode = resolve_mode(mode)
    if M < 0:
        raise ValueError("truncation order must be nonnegative")
    cells = _cell_data(f, g)
    if mode == RATIONAL:
        return _series_exact(cells, c, M)
    w = [complex(x) for x, _ in cells]
    t = [float(v) for _, v in cells]
    return [complex(x) for x in _backend.series_coeffs(w, t, float(c), M)]


def _brute_inner(f: StepFunction, m: int, g: StepFunction, n: int, c) -> QComplex:
    word = [Generator.annihilator(f)] * m + [Generator.creator(g)] * n
    return apply_word(word, CreatorVector.vacuum(), c).vacuum_coefficient


def inner_creator_powers(f: StepFunction, m: int, g: StepFunction, n: int, c,
                         factorize: bool = True, mode: str | None = None):
    """``<B*_f^m Φ, B*_g^n Φ>``.

    With ``factorize=False`` the value comes from literal normal ordering of
    ``B_f^m B*_g^n Φ``; otherwise from the per-cell factorisation (and the
    grading by total number, which makes m != n vanish).
    """
    mode = resolve_mode(mode)
    if m < 0 or n < 0:
        raise ValueError("powers must be nonnegative")
    if f.dim != g.dim:
        raise DimensionMismatch(f"dimension mismatch: {f.dim} vs {g.dim}")
    if not factorize:
        return to_mode(_brute_inner(f, m, g, n, c), mode)
    if m != n:
        return to_mode(ZERO, mode)
    coef = creator_series(f, g, c, m, mode=mode)[m]
    return coef * math.factorial(m) ** 2


def creator_power_norm(f: StepFunction, m: int, c, factorize: bool = True, mode: str | None = None):
    """``||B*_f^m Φ||^2``; an exact rational in rational mode, a float otherwise."""
    value = inner_creator_powers(f, m, f, m, c, factorize=factorize, mode=mode)
    if isinstance(value, QComplex):
        return value.re
    return value.real
