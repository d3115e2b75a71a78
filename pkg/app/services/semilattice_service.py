"""
Service layer for finite join-semilattices and their morphisms.
"""
from itertools import permutations, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple
import logging

import numpy as np

from app.models.lattice import FinLattice, JslMorphism
from app.models.relation import mask_of

logger = logging.getLogger(__name__)


def _covers(order: np.ndarray) -> np.ndarray:
    """cover[x, y] iff x < y with nothing strictly between."""
    n = order.shape[0]
    strict = order & ~np.eye(n, dtype=bool)
    between = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
    return strict & ~between


class SemilatticeService:
    """
    Service for lattice structure, adjoints and morphism classes.
    """

    @staticmethod
    def two() -> FinLattice:
        """
        The two-element lattice.
        """
        return FinLattice(size=2, leq=(0b11, 0b10), labels=("0", "1"))

    @staticmethod
    def chain(n: int) -> FinLattice:
        return FinLattice(size=n, leq=tuple(((1 << n) - 1) & ~((1 << i) - 1) for i in range(n)))

    @staticmethod
    def irreducibles(s: FinLattice) -> Tuple[List[int], List[int]]:
        """
        Join-irreducibles (exactly one lower cover) and meet-irreducibles
        (exactly one upper cover), in ascending element order.
        """
        cover = _covers(s.order)
        below = cover.sum(axis=0)
        above = cover.sum(axis=1)
        joins = [int(x) for x in np.flatnonzero(below == 1)]
        meets = [int(x) for x in np.flatnonzero(above == 1)]
        return joins, meets

    @staticmethod
    def identity(s: FinLattice) -> JslMorphism:
        return JslMorphism(dom=s, cod=s, map=tuple(range(s.size)))

    @staticmethod
    def compose(f: JslMorphism, g: JslMorphism) -> JslMorphism:
        """
        g after f.
        """
        if f.cod != g.dom:
            raise ValueError("morphisms are not composable")
        return JslMorphism(dom=f.dom, cod=g.cod, map=tuple(g.map[v] for v in f.map))

    @staticmethod
    def adjoint(f: JslMorphism) -> JslMorphism:
        """
        The adjoint f_* : T^op -> S^op, t |-> join{s : f(s) <= t}.
        """
        s, t = f.dom, f.cod
        table = []
        for y in range(t.size):
            table.append(s.join_all([x for x in range(s.size) if t.le(f.map[x], y)]))
        return JslMorphism(dom=t.dual(), cod=s.dual(), map=tuple(table))

    @staticmethod
    def ostar(s0: int, t0: int, s: FinLattice, t: FinLattice) -> JslMorphism:
        """
        The morphism x |-> t0 if x is not below s0, else bottom.
        """
        table = tuple(t.bottom if s.le(x, s0) else t0 for x in range(s.size))
        return JslMorphism(dom=s, cod=t, map=table)

    @staticmethod
    def is_distributive(s: FinLattice) -> bool:
        """
        Whether x meet (y join z) = (x meet y) join (x meet z) for all triples.
        """
        join, meet = s.join_table, s.meet_table
        for x in range(s.size):
            lhs = meet[x][join]
            mx = meet[x]
            rhs = join[mx[:, None], mx[None, :]]
            if not np.array_equal(lhs, rhs):
                return False
        return True

    @staticmethod
    def nuclear_part(f: JslMorphism) -> Tuple[int, ...]:
        """
        Pointwise join of all m (/) j below f, m in M(dom), j in J(cod).
        """
        dom, cod = f.dom, f.cod
        _, meets = SemilatticeService.irreducibles(dom)
        joins, _ = SemilatticeService.irreducibles(cod)
        out = [cod.bottom] * dom.size
        for m in meets:
            outside = [x for x in range(dom.size) if not dom.le(x, m)]
            for j in joins:
                if all(cod.le(j, f.map[x]) for x in outside):
                    for x in outside:
                        out[x] = cod.join(out[x], j)
        return tuple(out)

    @staticmethod
    def is_nuclear_morphism(f: JslMorphism) -> bool:
        """
        Whether f is the join of the m (/) j morphisms it dominates.
        """
        return SemilatticeService.nuclear_part(f) == f.map

    @staticmethod
    def morphisms(s: FinLattice, t: FinLattice) -> Iterator[JslMorphism]:
        """
        All join-morphisms s -> t, by brute force over maps fixing bottom.
        """
        others = [x for x in range(s.size) if x != s.bottom]
        pairs = [(x, y) for x in range(s.size) for y in range(x + 1, s.size)]
        for values in product(range(t.size), repeat=len(others)):
            table = [t.bottom] * s.size
            for x, v in zip(others, values):
                table[x] = v
            if all(table[s.join(x, y)] == t.join(table[x], table[y]) for x, y in pairs):
                yield JslMorphism(dom=s, cod=t, map=tuple(table))

    @staticmethod
    def relabel(s: FinLattice, perm: Sequence[int]) -> FinLattice:
        """
        Copy of s where element i becomes perm[i].
        """
        n = s.size
        order = np.zeros((n, n), dtype=bool)
        for i in range(n):
            for j in range(n):
                order[perm[i], perm[j]] = s.order[i, j]
        return FinLattice.from_matrix(order)

    @staticmethod
    def find_isomorphism(s: FinLattice, t: FinLattice) -> Optional[Tuple[int, ...]]:
        """
        A bijection f with x <= y iff f(x) <= f(y), or None.
        """
        if s.size != t.size:
            return None
        a, b = s.order, t.order

        def signature(order: np.ndarray) -> List[Tuple[int, int]]:
            return list(zip(order.sum(axis=0).tolist(), order.sum(axis=1).tolist()))

        sa, sb = signature(a), signature(b)
        if sorted(sa) != sorted(sb):
            return None
        candidates = [[j for j in range(t.size) if sb[j] == sa[i]] for i in range(s.size)]
        n = s.size
        mapping: List[int] = [-1] * n
        used = [False] * n

        def extend(i: int) -> bool:
            if i == n:
                return True
            for j in candidates[i]:
                if used[j]:
                    continue
                if all(a[i, k] == b[j, mapping[k]] and a[k, i] == b[mapping[k], j] for k in range(i)):
                    mapping[i], used[j] = j, True
                    if extend(i + 1):
                        return True
                    used[j] = False
            return False

        return tuple(mapping) if extend(0) else None

    @staticmethod
    def is_isomorphic(s: FinLattice, t: FinLattice) -> bool:
        return SemilatticeService.find_isomorphism(s, t) is not None

    @staticmethod
    def enumerate_lattices(max_size: int) -> List[FinLattice]:
        """
        All lattices with at most max_size elements, one per isomorphism class.

        Posets with a bottom 0 and top n-1 are grown one middle element at a
        time, each new element choosing a down-closed set of the earlier ones
        as its strict down-set. Lattices are kept in canonical form.
        """
        found: List[FinLattice] = []
        if max_size >= 1:
            found.append(FinLattice(size=1, leq=(1,)))
        for n in range(2, max_size + 1):
            seen: Dict[Tuple[int, ...], FinLattice] = {}
            middle = n - 2
            for downs in _ideal_sequences(middle):
                order = np.zeros((n, n), dtype=bool)
                np.fill_diagonal(order, True)
                order[0, :] = True
                order[:, n - 1] = True
                for i, down in enumerate(downs, start=1):
                    for d in down:
                        order[d, i] = True
                key = _canonical_key(order)
                if key in seen:
                    continue
                try:
                    lattice = FinLattice.from_matrix(order)
                except ValueError:
                    continue
                seen[key] = lattice
            logger.debug(f"{len(seen)} lattices of size {n}")
            found.extend(seen[k] for k in sorted(seen))
        return found


def _ideal_sequences(middle: int) -> Iterator[List[Tuple[int, ...]]]:
    """
    For middle elements 1..middle, every choice of strict down-sets where
    each element's down-set is an order ideal of the elements before it.
    """
    def grow(i: int, downs: List[Tuple[int, ...]]) -> Iterator[List[Tuple[int, ...]]]:
        if i > middle:
            yield list(downs)
            return
        earlier = list(range(1, i))
        for bits in range(1 << len(earlier)):
            chosen = [e for k, e in enumerate(earlier) if bits >> k & 1]
            closed = all(d in chosen for c in chosen for d in downs[c - 1])
            if closed:
                downs.append(tuple(chosen))
                yield from grow(i + 1, downs)
                downs.pop()

    yield from grow(1, [])


def _canonical_key(order: np.ndarray) -> Tuple[int, ...]:
    """
    Smallest row encoding over all relabelings of the middle elements.
    """
    n = order.shape[0]
    best: Optional[Tuple[int, ...]] = None
    for perm in permutations(range(1, n - 1)):
        full = (0,) + perm + (n - 1,)
        inv = [0] * n
        for i, p in enumerate(full):
            inv[p] = i
        key = tuple(
            mask_of(inv[j] for j in range(n) if order[i, j])
            for i in sorted(range(n), key=lambda x: inv[x])
        )
        if best is None or key < best:
            best = key
    return best if best is not None else ()
