"""Dense linear algebra over GF(2) with rows packed into Python integers.

Bit ``j`` of a packed row is the entry in column ``j``. Every routine is a
pure function of its inputs; pivots are chosen as the first nonzero entry in
row-major order so results are reproducible bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


@dataclass(frozen=True)
class BitVector:
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("length must be nonnegative")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError(f"bits do not fit in length {self.length}")

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(length, 0)

    @classmethod
    def unit(cls, length: int, index: int) -> "BitVector":
        if not 0 <= index < length:
            raise IndexError(index)
        return cls(length, 1 << index)

    @classmethod
    def from_list(cls, values: Sequence[int]) -> "BitVector":
        bits = 0
        for i, v in enumerate(values):
            if v & 1:
                bits |= 1 << i
        return cls(len(values), bits)

    @classmethod
    def from_support(cls, length: int, indices: Iterable[int]) -> "BitVector":
        bits = 0
        for i in indices:
            if not 0 <= i < length:
                raise IndexError(i)
            bits ^= 1 << i
        return cls(length, bits)

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    def support(self) -> list[int]:
        return [i for i in range(self.length) if (self.bits >> i) & 1]

    def weight(self) -> int:
        return bin(self.bits).count("1")

    def is_zero(self) -> bool:
        return self.bits == 0

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __len__(self) -> int:
        return self.length

    def __add__(self, other: "BitVector") -> "BitVector":
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")
        return BitVector(self.length, self.bits ^ other.bits)

    __xor__ = __add__

    def dot(self, other: "BitVector") -> int:
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")
        return bin(self.bits & other.bits).count("1") & 1

    def __str__(self) -> str:
        return "".join(str(b) for b in self.to_list())


@dataclass(frozen=True)
class BitMatrix:
    rows: int
    cols: int
    data: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("shape must be nonnegative")
        if not self.data and self.rows:
            object.__setattr__(self, "data", (0,) * self.rows)
        if len(self.data) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.data)}")
        for r in self.data:
            if r < 0 or r >> self.cols:
                raise ValueError(f"row does not fit in {self.cols} columns")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_lists(cls, grid: Sequence[Sequence[int]], cols: Optional[int] = None) -> "BitMatrix":
        if cols is None:
            cols = len(grid[0]) if grid else 0
        data = []
        for row in grid:
            if len(row) != cols:
                raise ValueError("ragged grid")
            data.append(BitVector.from_list(row).bits)
        return cls(len(grid), cols, tuple(data))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[BitVector]) -> "BitMatrix":
        data = [0] * rows
        for j, col in enumerate(columns):
            if col.length != rows:
                raise ValueError("column length mismatch")
            for i in col.support():
                data[i] |= 1 << j
        return cls(rows, len(columns), tuple(data))

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.cols)] for r in self.data]

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.data[i])

    def column(self, j: int) -> BitVector:
        bits = 0
        for i, r in enumerate(self.data):
            if (r >> j) & 1:
                bits |= 1 << i
        return BitVector(self.rows, bits)

    def transpose(self) -> "BitMatrix":
        return BitMatrix(self.cols, self.rows, tuple(self.column(j).bits for j in range(self.cols)))

    def __matmul__(self, other):
        if isinstance(other, BitVector):
            if other.length != self.cols:
                raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.length}")
            bits = 0
            for i, r in enumerate(self.data):
                if bin(r & other.bits).count("1") & 1:
                    bits |= 1 << i
            return BitVector(self.rows, bits)
        if isinstance(other, BitMatrix):
            if other.rows != self.cols:
                raise ValueError(
                    f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
            out = []
            for r in self.data:
                acc = 0
                k = 0
                while r:
                    if r & 1:
                        acc ^= other.data[k]
                    r >>= 1
                    k += 1
                out.append(acc)
            return BitMatrix(self.rows, other.cols, tuple(out))
        return NotImplemented

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return BitMatrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.data, other.data)))

    def is_zero(self) -> bool:
        return not any(self.data)

    def delete_rows(self, indices: Iterable[int]) -> "BitMatrix":
        drop = set(indices)
        kept = tuple(r for i, r in enumerate(self.data) if i not in drop)
        return BitMatrix(len(kept), self.cols, kept)

    def __str__(self) -> str:
        return "\n".join("".join(str(b) for b in row) for row in self.to_lists())


def _lowbit_index(x: int) -> int:
    return (x & -x).bit_length() - 1


def row_reduce(rows: Sequence[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form of packed rows.

    Returns ``(reduced, pivots)`` where ``reduced[i]`` has its leading one
    in column ``pivots[i]`` and no other reduced row is nonzero there.
    Columns are scanned left to right; within a column the first remaining
    row holding a one becomes the pivot row.
    """
    work = list(rows)
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        bit = 1 << col
        pivot = None
        for i in range(top, len(work)):
            if work[i] & bit:
                pivot = i
                break
        if pivot is None:
            continue
        work[top], work[pivot] = work[pivot], work[top]
        for i in range(len(work)):
            if i != top and work[i] & bit:
                work[i] ^= work[top]
        pivots.append(col)
        top += 1
        if top == len(work):
            break
    return work[:top], pivots


def rank(m: BitMatrix) -> int:
    return len(row_reduce(m.data, m.cols)[1])


def kernel_basis(m: BitMatrix) -> list[BitVector]:
    """Basis of ``{v : m v = 0}``, one vector per free column."""
    reduced, pivots = row_reduce(m.data, m.cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        bits = 1 << free
        for r, p in zip(reduced, pivots):
            if (r >> free) & 1:
                bits |= 1 << p
        basis.append(BitVector(m.cols, bits))
    return basis


def image_basis(m: BitMatrix) -> list[BitVector]:
    """Reduced echelon basis of the column space of ``m``."""
    reduced, _ = row_reduce(m.transpose().data, m.rows)
    return [BitVector(m.rows, r) for r in reduced]


def solve(m: BitMatrix, b: BitVector) -> Optional[BitVector]:
    """One solution of ``m x = b`` (free variables zero), or ``None``."""
    if b.length != m.rows:
        raise ValueError(f"right-hand side has length {b.length}, matrix has {m.rows} rows")
    n = m.cols
    aug = [r | (((b.bits >> i) & 1) << n) for i, r in enumerate(m.data)]
    reduced, pivots = row_reduce(aug, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = 0
    for r, p in zip(reduced, pivots):
        if (r >> n) & 1:
            x |= 1 << p
    return BitVector(n, x)


class Echelon:
    """Incremental echelon basis used for span membership and reduction."""

    def __init__(self, length: int):
        self.length = length
        self._rows: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, bits: int) -> int:
        # rows are kept fully reduced, so one pass over the pivots suffices
        for pivot, row in self._rows.items():
            if (bits >> pivot) & 1:
                bits ^= row
        return bits

    def add(self, bits: int) -> bool:
        """Insert a vector; return False if it was already in the span."""
        red = self.reduce(bits)
        if not red:
            return False
        pivot = _lowbit_index(red)
        for key, row in list(self._rows.items()):
            if (row >> pivot) & 1:
                self._rows[key] = row ^ red
        self._rows[pivot] = red
        return True

    def contains(self, bits: int) -> bool:
        return self.reduce(bits) == 0

    def basis(self) -> list[int]:
        return [self._rows[k] for k in sorted(self._rows)]
