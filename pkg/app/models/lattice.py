"""
Explicit finite lattices given by their order table, and join-morphisms.

The order is stored as row bitsets (bit j of leq[i] iff i <= j). Join
and meet tables are derived with numpy on first use and cached.
"""
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.relation import Bits, default_labels, mask_of


def _order_matrix(leq: Bits, n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=bool)
    for i, row in enumerate(leq):
        for j in range(n):
            out[i, j] = bool(row >> j & 1)
    return out


def _lub_table(order: np.ndarray) -> np.ndarray:
    """
    Least upper bounds of all pairs, -1 where none exists.

    The least element of a set of upper bounds is the one with the most
    elements above it.
    """
    n = order.shape[0]
    up_count = order.sum(axis=1)
    table = np.full((n, n), -1, dtype=np.int64)
    for x in range(n):
        bounds = order[x][None, :] & order  # row y: common upper bounds of x, y
        score = np.where(bounds, up_count[None, :], -1)
        best = score.argmax(axis=1)
        least = np.all(~bounds | order[best], axis=1) & bounds.any(axis=1)
        table[x] = np.where(least, best, -1)
    return table


class FinLattice(BaseModel):
    """Finite lattice given by its order table."""
    size: int = Field(..., ge=1)
    leq: Bits = Field(..., description="Order rows: bit j of leq[i] iff i <= j")
    labels: Tuple[str, ...] = ()

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_order(self) -> "FinLattice":
        n = self.size
        if len(self.leq) != n:
            raise ValueError(f"order table has {len(self.leq)} rows, expected {n}")
        if self.labels and len(self.labels) != n:
            raise ValueError("one label per element is required")
        order = self.order
        if not order.diagonal().all():
            raise ValueError("order is not reflexive")
        if (order & order.T & ~np.eye(n, dtype=bool)).any():
            raise ValueError("order is not antisymmetric")
        closure = (order.astype(np.int64) @ order.astype(np.int64)) > 0
        if (closure & ~order).any():
            raise ValueError("order is not transitive")
        if not order.all(axis=1).any():
            raise ValueError("order has no bottom element")
        if (self.join_table < 0).any():
            raise ValueError("some pair of elements has no join")
        return self

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[bool]], labels: Sequence[str] = ()) -> "FinLattice":
        arr = np.asarray(matrix, dtype=bool)
        return cls(
            size=arr.shape[0],
            leq=tuple(mask_of(np.flatnonzero(row)) for row in arr),
            labels=tuple(labels),
        )

    # Cached numpy tables live in __dict__, so equality is on the fields only.
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinLattice):
            return NotImplemented
        return (self.size, self.leq, self.labels) == (other.size, other.leq, other.labels)

    def __hash__(self) -> int:
        return hash((self.size, self.leq, self.labels))

    @cached_property
    def order(self) -> np.ndarray:
        out = _order_matrix(self.leq, self.size)
        out.setflags(write=False)
        return out

    @cached_property
    def join_table(self) -> np.ndarray:
        out = _lub_table(self.order)
        out.setflags(write=False)
        return out

    @cached_property
    def meet_table(self) -> np.ndarray:
        out = _lub_table(self.order.T)
        out.setflags(write=False)
        return out

    @cached_property
    def bottom(self) -> int:
        return int(np.flatnonzero(self.order.all(axis=1))[0])

    @cached_property
    def top(self) -> int:
        return int(np.flatnonzero(self.order.all(axis=0))[0])

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    def element_labels(self) -> Tuple[str, ...]:
        return self.labels if self.labels else default_labels(self.size)

    def le(self, x: int, y: int) -> bool:
        return bool(self.leq[x] >> y & 1)

    def join(self, x: int, y: int) -> int:
        return int(self.join_table[x, y])

    def meet(self, x: int, y: int) -> int:
        return int(self.meet_table[x, y])

    def join_all(self, xs: Sequence[int]) -> int:
        out = self.bottom
        for x in xs:
            out = self.join(out, x)
        return out

    def meet_all(self, xs: Sequence[int]) -> int:
        out = self.top
        for x in xs:
            out = self.meet(out, x)
        return out

    def dual(self) -> "FinLattice":
        return FinLattice.from_matrix(self.order.T, self.labels)


class JslMorphism(BaseModel):
    """Join-preserving map given by its value table."""
    dom: FinLattice
    cod: FinLattice
    map: Tuple[int, ...]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_map(self) -> "JslMorphism":
        if len(self.map) != self.dom.size:
            raise ValueError("one image per domain element is required")
        if any(v < 0 or v >= self.cod.size for v in self.map):
            raise ValueError("image out of range")
        if self.map[self.dom.bottom] != self.cod.bottom:
            raise ValueError("morphism does not preserve the bottom element")
        n = self.dom.size
        for x in range(n):
            for y in range(x + 1, n):
                if self.map[self.dom.join(x, y)] != self.cod.join(self.map[x], self.map[y]):
                    raise ValueError(f"morphism does not preserve the join of {x} and {y}")
        return self

    def __call__(self, x: int) -> int:
        return self.map[x]

    def le(self, other: "JslMorphism") -> bool:
        """Pointwise order."""
        return all(self.cod.le(a, b) for a, b in zip(self.map, other.map))


def lattice_from_sets(sets: Sequence[int], labels: Optional[Sequence[str]] = None) -> FinLattice:
    """Lattice of a union-closed family of bitsets ordered by inclusion."""
    rows = [mask_of(j for j, t in enumerate(sets) if s & ~t == 0) for s in sets]
    return FinLattice(size=len(sets), leq=tuple(rows), labels=tuple(labels or ()))
