"""
Finite relations and Dep-morphisms.

Bit tables are tuples of row bitsets: bit j of bits[i] is set iff
(i, j) is in the relation.
"""
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

Bits = Tuple[int, ...]


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def members(mask: int) -> list[int]:
    """Indices of set bits in ascending order."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def image(bits: Bits, rows: int) -> int:
    """Union of the rows selected by the `rows` bitset."""
    out = 0
    for i in members(rows):
        out |= bits[i]
    return out


def compose(left: Bits, right: Bits) -> Bits:
    """Relational composition left ; right."""
    return tuple(image(right, row) for row in left)


def converse(bits: Bits, n_cols: int) -> Bits:
    out = [0] * n_cols
    for i, row in enumerate(bits):
        for j in members(row):
            out[j] |= 1 << i
    return tuple(out)


def default_labels(n: int) -> Tuple[str, ...]:
    return tuple(str(i) for i in range(n))


class Rel(BaseModel):
    """Relation between two labelled finite carriers."""
    rows: Tuple[str, ...] = Field(..., description="Labels of the source carrier")
    cols: Tuple[str, ...] = Field(..., description="Labels of the target carrier")
    bits: Bits = Field(..., description="Row bitsets")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_shape(self) -> "Rel":
        if len(set(self.rows)) != len(self.rows) or len(set(self.cols)) != len(self.cols):
            raise ValueError("carrier labels must be unique")
        if len(self.bits) != len(self.rows):
            raise ValueError(f"relation has {len(self.bits)} rows, expected {len(self.rows)}")
        limit = 1 << len(self.cols)
        if any(row < 0 or row >= limit for row in self.bits):
            raise ValueError("row bitset exceeds the column carrier")
        return self

    @classmethod
    def build(
        cls,
        bits: Sequence[int],
        n_cols: int,
        rows: Optional[Sequence[str]] = None,
        cols: Optional[Sequence[str]] = None,
    ) -> "Rel":
        return cls(
            rows=tuple(rows) if rows is not None else default_labels(len(bits)),
            cols=tuple(cols) if cols is not None else default_labels(n_cols),
            bits=tuple(bits),
        )

    @classmethod
    def from_pairs(cls, n_rows: int, n_cols: int, pairs: Iterable[Tuple[int, int]]) -> "Rel":
        bits = [0] * n_rows
        for i, j in pairs:
            bits[i] |= 1 << j
        return cls.build(bits, n_cols)

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[bool]]) -> "Rel":
        arr = np.asarray(matrix, dtype=bool)
        n_cols = arr.shape[1] if arr.ndim == 2 else 0
        return cls.build([mask_of(np.flatnonzero(row)) for row in arr], n_cols)

    @classmethod
    def identity(cls, n: int) -> "Rel":
        return cls.build([1 << i for i in range(n)], n)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.cols)

    @property
    def full_cols(self) -> int:
        return (1 << self.n_cols) - 1

    def has(self, i: int, j: int) -> bool:
        return bool(self.bits[i] >> j & 1)

    def pairs(self) -> list[Tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self.bits) for j in members(row)]

    def converse(self) -> "Rel":
        return Rel(rows=self.cols, cols=self.rows, bits=converse(self.bits, self.n_cols))

    def image(self, rows: int) -> int:
        return image(self.bits, rows)

    def matrix(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=bool)
        for i, j in self.pairs():
            out[i, j] = True
        out.setflags(write=False)
        return out

    def same_object(self, other: "Rel") -> bool:
        """Equality as Dep-objects: same shape and bits, labels ignored."""
        return self.n_cols == other.n_cols and self.bits == other.bits


class DepMorphism(BaseModel):
    """
    Relation P between src.rows and dst.cols, optionally with witnesses.

    lower is src.rows x dst.rows, upper is dst.cols x src.cols.
    """
    src: Rel
    dst: Rel
    bits: Bits
    lower: Optional[Bits] = None
    upper: Optional[Bits] = None

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_shape(self) -> "DepMorphism":
        if len(self.bits) != self.src.n_rows:
            raise ValueError("morphism rows must match the source rows")
        if any(row >> self.dst.n_cols for row in self.bits):
            raise ValueError("morphism columns exceed the target columns")
        if self.lower is not None and (
            len(self.lower) != self.src.n_rows or any(row >> self.dst.n_rows for row in self.lower)
        ):
            raise ValueError("lower witness has the wrong shape")
        if self.upper is not None and (
            len(self.upper) != self.dst.n_cols or any(row >> self.src.n_cols for row in self.upper)
        ):
            raise ValueError("upper witness has the wrong shape")
        return self

    def as_rel(self) -> Rel:
        return Rel(rows=self.src.rows, cols=self.dst.cols, bits=self.bits)
