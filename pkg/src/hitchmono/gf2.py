"""Dense linear algebra over GF(2) with rows packed into Python ints.

Bit ``i`` of a packed integer is coordinate ``i``.  Matrices are stored
row-major and act on column vectors, so ``M @ v`` has bit ``i`` equal to the
parity of ``rows[i] & v``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence


def _check_bits(value: int, length: int) -> None:
    if value < 0 or value >> length:
        raise ValueError(f"value {value:#x} does not fit in {length} bits")


@dataclass(frozen=True)
class BitVec2:
    """Immutable vector over GF(2)."""

    length: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.length <= 0:
            raise ValueError("length must be positive")
        _check_bits(self.bits, self.length)

    @classmethod
    def zero(cls, length: int) -> BitVec2:
        return cls(length, 0)

    @classmethod
    def ones(cls, length: int) -> BitVec2:
        return cls(length, (1 << length) - 1)

    @classmethod
    def unit(cls, length: int, i: int) -> BitVec2:
        if not 0 <= i < length:
            raise IndexError(i)
        return cls(length, 1 << i)

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> BitVec2:
        bits = 0
        for i in support:
            if not 0 <= i < length:
                raise IndexError(i)
            bits ^= 1 << i
        return cls(length, bits)

    @classmethod
    def from_list(cls, coords: Sequence[int]) -> BitVec2:
        return cls(len(coords), sum(1 << i for i, c in enumerate(coords) if c & 1))

    @classmethod
    def from_str(cls, text: str) -> BitVec2:
        """Parse ``"1010"``; the leftmost character is coordinate 0."""
        return cls.from_list([int(c) for c in text])

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __len__(self) -> int:
        return self.length

    def __iter__(self):
        for i in range(self.length):
            yield (self.bits >> i) & 1

    def _same_length(self, other: BitVec2) -> None:
        if other.length != self.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")

    def __add__(self, other: BitVec2) -> BitVec2:
        self._same_length(other)
        return BitVec2(self.length, self.bits ^ other.bits)

    __xor__ = __add__
    __sub__ = __add__

    def dot(self, other: BitVec2) -> int:
        self._same_length(other)
        return (self.bits & other.bits).bit_count() & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> list[int]:
        return [i for i in range(self.length) if (self.bits >> i) & 1]

    def is_zero(self) -> bool:
        return self.bits == 0

    def to_list(self) -> list[int]:
        return list(self)

    def __str__(self) -> str:
        return "".join(str(b) for b in self)


@dataclass(frozen=True)
class BitMat2:
    """Immutable ``nrows x ncols`` matrix over GF(2); ``rows[i]`` is packed row ``i``."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.nrows <= 0 or self.ncols <= 0:
            raise ValueError("matrix dimensions must be positive")
        if len(self.rows) != self.nrows:
            raise ValueError("row count does not match nrows")
        for r in self.rows:
            _check_bits(r, self.ncols)

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> BitMat2:
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> BitMat2:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[BitVec2 | str | Sequence[int]]) -> BitMat2:
        vecs = [_as_vec(r) for r in rows]
        ncols = vecs[0].length
        if any(v.length != ncols for v in vecs):
            raise ValueError("ragged rows")
        return cls(len(vecs), ncols, tuple(v.bits for v in vecs))

    @classmethod
    def from_columns(cls, cols: Sequence[BitVec2]) -> BitMat2:
        return cls.from_rows(cols).transpose()

    @classmethod
    def random(cls, nrows: int, ncols: int, rng: random.Random) -> BitMat2:
        return cls(nrows, ncols, tuple(rng.getrandbits(ncols) for _ in range(nrows)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(ij)
        return (self.rows[i] >> j) & 1

    def row(self, i: int) -> BitVec2:
        return BitVec2(self.ncols, self.rows[i])

    def column(self, j: int) -> BitVec2:
        return BitVec2(self.nrows, sum(((r >> j) & 1) << i for i, r in enumerate(self.rows)))

    def columns(self) -> list[BitVec2]:
        t = self.transpose()
        return [t.row(j) for j in range(self.ncols)]

    def transpose(self) -> BitMat2:
        out = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                out[low.bit_length() - 1] |= 1 << i
                r ^= low
        return BitMat2(self.ncols, self.nrows, tuple(out))

    def apply(self, v: BitVec2 | int) -> BitVec2:
        """Return ``M v`` for a column vector ``v``."""
        bits = v if isinstance(v, int) else v.bits
        if not isinstance(v, int) and v.length != self.ncols:
            raise ValueError(f"vector length {v.length} != ncols {self.ncols}")
        out = 0
        for i, r in enumerate(self.rows):
            if (r & bits).bit_count() & 1:
                out |= 1 << i
        return BitVec2(self.nrows, out)

    def __matmul__(self, other: BitMat2 | BitVec2) -> BitMat2 | BitVec2:
        if isinstance(other, BitVec2):
            return self.apply(other)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        orows = other.rows
        out = []
        for r in self.rows:
            acc = 0
            while r:
                low = r & -r
                acc ^= orows[low.bit_length() - 1]
                r ^= low
            out.append(acc)
        return BitMat2(self.nrows, other.ncols, tuple(out))

    def __add__(self, other: BitMat2) -> BitMat2:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} + {other.shape}")
        return BitMat2(self.nrows, self.ncols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and all(r == 1 << i for i, r in enumerate(self.rows))

    def is_zero(self) -> bool:
        return not any(self.rows)

    def submatrix(self, row_range: range, col_range: range) -> BitMat2:
        c0, nc = col_range.start, len(col_range)
        mask = (1 << nc) - 1
        return BitMat2(len(row_range), nc, tuple((self.rows[i] >> c0) & mask for i in row_range))

    def to_strings(self) -> list[str]:
        return [str(self.row(i)) for i in range(self.nrows)]

    def __str__(self) -> str:
        return "\n".join(self.to_strings())


def _as_vec(r: BitVec2 | str | Sequence[int]) -> BitVec2:
    if isinstance(r, BitVec2):
        return r
    if isinstance(r, str):
        return BitVec2.from_str(r)
    return BitVec2.from_list(r)


# -- elimination ---------------------------------------------------------------


def echelon(rows: Iterable[int]) -> list[int]:
    """Reduced row echelon form of packed rows.

    Pivots are taken at the lowest set bit, scanning rows in input order, so
    the result is reproducible.  Returned rows are sorted by pivot column.
    """
    basis: dict[int, int] = {}
    for r in rows:
        for p, b in basis.items():
            if (r >> p) & 1:
                r ^= b
        if not r:
            continue
        p = (r & -r).bit_length() - 1
        for q in basis:
            if (basis[q] >> p) & 1:
                basis[q] ^= r
        basis[p] = r
    return [basis[p] for p in sorted(basis)]


def rank(m: BitMat2 | Sequence[int]) -> int:
    rows = m.rows if isinstance(m, BitMat2) else m
    return len(echelon(rows))


def kernel_basis(m: BitMat2) -> list[BitVec2]:
    """Basis of ``{v : M v = 0}`` with ``ncols - rank`` vectors."""
    red = echelon(m.rows)
    pivots = {(r & -r).bit_length() - 1: r for r in red}
    out = []
    for free in range(m.ncols):
        if free in pivots:
            continue
        v = 1 << free
        for p, r in pivots.items():
            if (r >> free) & 1:
                v |= 1 << p
        out.append(BitVec2(m.ncols, v))
    return out


class SpanTracker:
    """Incremental basis that records how each reduced vector was formed.

    Useful for greedy independent-subset selection and for solving
    ``target in span(generators)`` with explicit coefficients.
    """

    def __init__(self, length: int):
        self.length = length
        # pivot -> (reduced vector, combination of inserted generators)
        self._rows: dict[int, tuple[int, int]] = {}
        self.count = 0

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, v: int) -> tuple[int, int]:
        combo = 0
        for p, (r, c) in self._rows.items():
            if (v >> p) & 1:
                v ^= r
                combo ^= c
        return v, combo

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0

    def add(self, v: int) -> bool:
        """Insert generator; return ``True`` if it enlarged the span."""
        idx = self.count
        self.count += 1
        red, combo = self.reduce(v)
        if not red:
            return False
        p = (red & -red).bit_length() - 1
        self._rows[p] = (red, combo ^ (1 << idx))
        return True


def solve_in_span(target: BitVec2, generators: Sequence[BitVec2]) -> BitVec2 | None:
    """Coefficients ``c`` with ``sum c_i g_i == target``, or ``None``."""
    for g in generators:
        if g.length != target.length:
            raise ValueError(f"length mismatch: {g.length} vs {target.length}")
    if not generators:
        raise ValueError("need at least one generator")
    span = SpanTracker(target.length)
    for g in generators:
        span.add(g.bits)
    red, combo = span.reduce(target.bits)
    if red:
        return None
    return BitVec2(len(generators), combo)


def inverse(m: BitMat2) -> BitMat2:
    """Inverse of a square matrix; raises ``ValueError`` if singular."""
    n = m.nrows
    if m.ncols != n:
        raise ValueError("inverse needs a square matrix")
    # augment: low n bits = M row, high n bits = identity row
    work = [r | (1 << (n + i)) for i, r in enumerate(m.rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if (work[i] >> col) & 1), None)
        if piv is None:
            raise ValueError("matrix is singular")
        work[col], work[piv] = work[piv], work[col]
        pr = work[col]
        for i in range(n):
            if i != col and (work[i] >> col) & 1:
                work[i] ^= pr
    mask = (1 << n) - 1
    return BitMat2(n, n, tuple((r >> n) & mask for r in work))


def parity(x: int) -> int:
    return x.bit_count() & 1
