"""Exact GF(2) arithmetic on packed words.

A vector over ``q`` signal levels is stored as a Python int whose bit
``q - l`` holds level ``l``; level 1 is therefore the most significant bit
and the down-shift channel ``S^(q-n)`` is simply ``x >> (q - n)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import DimensionError, InvalidGainError, SizeGuardError

MAX_LEVELS = 64
MAX_ENUMERATED_LEVELS = 6


def _check_levels(q: int) -> None:
    if not 1 <= q <= MAX_LEVELS:
        raise DimensionError(f"level count must be in 1..{MAX_LEVELS}, got {q}")


def level_bit(q: int, level: int) -> int:
    """Word with only ``level`` set (1-indexed, level 1 = MSB)."""
    if not 1 <= level <= q:
        raise DimensionError(f"level {level} outside 1..{q}")
    return 1 << (q - level)


def levels_word(q: int, levels: Iterable[int]) -> int:
    word = 0
    for level in levels:
        word |= level_bit(q, level)
    return word


def word_levels(q: int, word: int) -> tuple[int, ...]:
    return tuple(level for level in range(1, q + 1) if word >> (q - level) & 1)


@dataclass(frozen=True)
class BitVector:
    q: int
    word: int = 0

    def __post_init__(self):
        _check_levels(self.q)
        if not 0 <= self.word < 1 << self.q:
            raise DimensionError(f"word {self.word:#x} does not fit in {self.q} levels")

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> BitVector:
        """Build from a level-1-first bit sequence, e.g. ``(1, 0)``."""
        word = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"bit values must be 0 or 1, got {b!r}")
            word = word << 1 | b
        return cls(len(bits), word)

    @classmethod
    def from_levels(cls, q: int, levels: Iterable[int]) -> BitVector:
        return cls(q, levels_word(q, levels))

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(self.word >> (self.q - l) & 1 for l in range(1, self.q + 1))

    def level(self, l: int) -> int:
        if not 1 <= l <= self.q:
            raise DimensionError(f"level {l} outside 1..{self.q}")
        return self.word >> (self.q - l) & 1

    def __xor__(self, other: BitVector) -> BitVector:
        if other.q != self.q:
            raise DimensionError(f"cannot add vectors of dimension {self.q} and {other.q}")
        return BitVector(self.q, self.word ^ other.word)

    def __str__(self):
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class BitMatrix:
    """Dense binary matrix; each row is a word with column 1 as its MSB."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0 or len(self.data) != self.rows:
            raise DimensionError("row data does not match the declared shape")
        limit = 1 << self.cols
        if any(not 0 <= r < limit for r in self.data):
            raise DimensionError("row word wider than the column count")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, q: int) -> BitMatrix:
        return cls(q, q, tuple(1 << (q - 1 - i) for i in range(q)))

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> BitMatrix:
        cols = len(entries[0]) if entries else 0
        data = []
        for row in entries:
            if len(row) != cols:
                raise DimensionError("ragged matrix rows")
            data.append(BitVector.from_bits(row).word if cols else 0)
        return cls(len(entries), cols, tuple(data))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[int]) -> BitMatrix:
        """Inverse of :meth:`columns`: each column is a ``rows``-level word."""
        cols = len(columns)
        data = [0] * rows
        for j, col in enumerate(columns):
            if not 0 <= col < 1 << rows:
                raise DimensionError(f"column {j + 1} wider than {rows} rows")
            for i in range(rows):
                if col >> (rows - 1 - i) & 1:
                    data[i] |= 1 << (cols - 1 - j)
        return cls(rows, cols, tuple(data))

    def entry(self, i: int, j: int) -> int:
        """1-indexed entry access."""
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise IndexError((i, j))
        return self.data[i - 1] >> (self.cols - j) & 1

    def columns(self) -> tuple[int, ...]:
        out = []
        for j in range(self.cols):
            col = 0
            for row in self.data:
                col = col << 1 | (row >> (self.cols - 1 - j) & 1)
            out.append(col)
        return tuple(out)

    def nonzero(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(1, self.rows + 1)
                for j in range(1, self.cols + 1) if self.entry(i, j)]

    def apply(self, word: int) -> int:
        """Multiply by a column vector given as a ``cols``-level word."""
        out = 0
        for row in self.data:
            out = out << 1 | ((row & word).bit_count() & 1)
        return out

    def matvec(self, x: BitVector) -> BitVector:
        if x.q != self.cols:
            raise DimensionError(f"matrix has {self.cols} columns, vector has {x.q} levels")
        return BitVector(self.rows, self.apply(x.word))

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if other.rows != self.cols:
            raise DimensionError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols = [self.apply(c) for c in other.columns()]
        return BitMatrix.from_columns(self.rows, cols)

    def rank(self) -> int:
        return gf2_rank(self)

    def __str__(self):
        return "\n".join(format(r, f"0{self.cols}b") if self.cols else "" for r in self.data)


def shift_matrix(q: int, n: int) -> BitMatrix:
    """The ``q x q`` channel matrix for gain ``n``.

    Input level ``t`` lands on output level ``q - n + t`` for ``t = 1..n``;
    the bottom ``q - n`` input levels fall below the noise floor.
    """
    if q < 1 or not 0 <= n <= q:
        raise InvalidGainError(f"gain {n} invalid for {q} levels")
    data = [0] * q
    for t in range(1, n + 1):
        data[q - n + t - 1] = 1 << (q - t)
    return BitMatrix(q, q, tuple(data))


def shift_word(q: int, n: int, word: int) -> int:
    """Fast path for ``shift_matrix(q, n).apply(word)``."""
    return word >> (q - n)


def gf2_rank(m: BitMatrix | Iterable[int]) -> int:
    rows = m.data if isinstance(m, BitMatrix) else m
    return len(reduce_basis(rows))


def reduce_basis(vectors: Iterable[int]) -> tuple[int, ...]:
    """Reduced row-echelon basis of the span, pivots descending."""
    pivots: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                break
            v ^= pivots[top]
    order = sorted(pivots, reverse=True)
    basis = [pivots[p] for p in order]
    # back-substitute so each pivot column is clear in every other row
    for i, p in enumerate(order):
        for k in range(len(basis)):
            if k != i and basis[k] >> p & 1:
                basis[k] ^= basis[i]
    return tuple(basis)


@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(2)^q held by its canonical reduced basis."""

    q: int
    basis: tuple[int, ...] = ()

    def __post_init__(self):
        _check_levels(self.q)
        if reduce_basis(self.basis) != self.basis:
            raise ValueError("basis is not in canonical reduced form; use Subspace.span")
        if any(v >> self.q for v in self.basis):
            raise DimensionError("basis vector wider than the ambient space")

    @classmethod
    def span(cls, q: int, vectors: Iterable[int]) -> Subspace:
        return cls(q, reduce_basis(vectors))

    @classmethod
    def full(cls, q: int) -> Subspace:
        return cls.span(q, (1 << i for i in range(q)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: int) -> bool:
        for b in self.basis:
            if v >> (b.bit_length() - 1) & 1:
                v ^= b
        return v == 0

    def members(self) -> Iterator[int]:
        for coeffs in itertools.product((0, 1), repeat=self.dim):
            v = 0
            for c, b in zip(coeffs, self.basis):
                if c:
                    v ^= b
            yield v

    def __add__(self, other: Subspace) -> Subspace:
        _same_ambient(self, other)
        return Subspace.span(self.q, self.basis + other.basis)

    def image(self, m: BitMatrix) -> Subspace:
        if m.cols != self.q:
            raise DimensionError(f"matrix expects {m.cols} levels, subspace has {self.q}")
        return Subspace.span(m.rows, (m.apply(v) for v in self.basis))

    def __str__(self):
        inner = ", ".join(format(v, f"0{self.q}b") for v in self.basis)
        return f"<{inner}>"


def _same_ambient(a: Subspace, b: Subspace) -> None:
    if a.q != b.q:
        raise DimensionError(f"ambient dimensions differ: {a.q} vs {b.q}")


def intersection_is_trivial(a: Subspace, b: Subspace) -> bool:
    _same_ambient(a, b)
    return gf2_rank(a.basis + b.basis) == a.dim + b.dim


@lru_cache(maxsize=None)
def _enumerate(q: int) -> tuple[Subspace, ...]:
    found = []
    positions = range(q - 1, -1, -1)
    for d in range(q + 1):
        for pivots in itertools.combinations(positions, d):
            pivot_set = set(pivots)
            free = [[b for b in range(p) if b not in pivot_set] for p in pivots]
            slots = [(r, b) for r, bits in enumerate(free) for b in bits]
            for fill in itertools.product((0, 1), repeat=len(slots)):
                rows = [1 << p for p in pivots]
                for (r, b), on in zip(slots, fill):
                    if on:
                        rows[r] |= 1 << b
                found.append(Subspace(q, tuple(rows)))
    found.sort(key=lambda s: (s.dim, s.basis))
    return tuple(found)


def enumerate_subspaces(q: int) -> list[Subspace]:
    """All subspaces of GF(2)^q, ordered by dimension then basis words."""
    if not 1 <= q <= MAX_ENUMERATED_LEVELS:
        raise SizeGuardError(
            f"subspace enumeration limited to 1 <= q <= {MAX_ENUMERATED_LEVELS}, got q={q}")
    return list(_enumerate(q))
