"""
Service layer for the category of dependency relations.

A Dep-morphism P : R -> S is a relation R.rows x S.cols that factors as
P_- ; S = P = R ; P_+ converse for its maximal witnesses P_- and P_+.
"""
from collections import deque
from typing import List, Optional, Sequence, Tuple
import logging

from app.core.errors import BudgetExceeded, InvalidMorphism, ObjectMismatch, ShapeMismatch
from app.models.lattice import FinLattice, JslMorphism, lattice_from_sets
from app.models.relation import (
    Bits, DepMorphism, Rel, compose, converse, image, members, popcount,
)
from app.services.semilattice_service import SemilatticeService

logger = logging.getLogger(__name__)


def set_label(mask: int, labels: Sequence[str]) -> str:
    return "{" + ",".join(labels[i] for i in members(mask)) + "}"


def canonical_sets(sets: Sequence[int]) -> List[int]:
    """Distinct bitsets sorted by size, then numerically."""
    return sorted(set(sets), key=lambda s: (popcount(s), s))


def union_closure(generators: Sequence[int], limit: Optional[int] = None) -> List[int]:
    """
    All unions of generators, the empty union included, in canonical order.
    """
    seen = {0}
    queue = deque([0])
    gens = sorted(set(generators))
    while queue:
        current = queue.popleft()
        for g in gens:
            nxt = current | g
            if nxt not in seen:
                seen.add(nxt)
                if limit is not None and len(seen) > limit:
                    raise BudgetExceeded(f"union closure exceeds {limit} elements", lower=len(seen))
                queue.append(nxt)
    return canonical_sets(seen)


def join_irreducible_sets(family: Sequence[int]) -> List[int]:
    """
    Members of a union-closed family that are not the union of the members strictly below them.
    """
    out = []
    for k in family:
        if k == 0:
            continue
        below = 0
        for other in family:
            if other != k and other & ~k == 0:
                below |= other
        if below != k:
            out.append(k)
    return canonical_sets(out)


class DepService:
    """
    Service for Dep-objects, Dep-morphisms and the Pirr/Open functors.
    """

    @staticmethod
    def maximal_witnesses(p: Bits, r: Rel, s: Rel) -> Tuple[Bits, Bits]:
        """
        lower(x, y) iff S[y] is contained in P[x];
        upper(y, x) iff R-converse[x] is contained in P-converse[y].
        """
        if len(p) != r.n_rows or any(row >> s.n_cols for row in p):
            raise ShapeMismatch(
                f"morphism must be {r.n_rows}x{s.n_cols}, got {len(p)} rows"
            )
        lower = tuple(
            sum(1 << y for y, srow in enumerate(s.bits) if srow & ~px == 0) for px in p
        )
        r_conv = converse(r.bits, r.n_cols)
        p_conv = converse(p, s.n_cols)
        upper = tuple(
            sum(1 << x for x, rcol in enumerate(r_conv) if rcol & ~py == 0) for py in p_conv
        )
        return lower, upper

    @staticmethod
    def is_dep_morphism(p: Bits, r: Rel, s: Rel) -> bool:
        """
        Whether P_- ; S = P = R ; P_+ converse.
        """
        lower, upper = DepService.maximal_witnesses(p, r, s)
        if compose(lower, s.bits) != tuple(p):
            return False
        return compose(r.bits, converse(upper, r.n_cols)) == tuple(p)

    @staticmethod
    def morphism(p: Sequence[int], r: Rel, s: Rel) -> DepMorphism:
        """
        Build a Dep-morphism with its maximal witnesses; raises InvalidMorphism if p does not factor.
        """
        bits = tuple(p)
        if not DepService.is_dep_morphism(bits, r, s):
            raise InvalidMorphism("relation does not factor through source and target")
        lower, upper = DepService.maximal_witnesses(bits, r, s)
        return DepMorphism(src=r, dst=s, bits=bits, lower=lower, upper=upper)

    @staticmethod
    def identity_morphism(r: Rel) -> DepMorphism:
        return DepService.morphism(r.bits, r, r)

    @staticmethod
    def dep_compose(p: DepMorphism, q: DepMorphism) -> DepMorphism:
        """
        P then Q, computed as P ; (Q_+) converse.
        """
        if not p.dst.same_object(q.src):
            raise ObjectMismatch("target of the first morphism is not the source of the second")
        _, q_upper = DepService.maximal_witnesses(q.bits, q.src, q.dst)
        bits = compose(p.bits, converse(q_upper, q.src.n_cols))
        lower, upper = DepService.maximal_witnesses(bits, p.src, q.dst)
        return DepMorphism(src=p.src, dst=q.dst, bits=bits, lower=lower, upper=upper)

    @staticmethod
    def composition_formulas(p: DepMorphism, q: DepMorphism) -> Tuple[Bits, ...]:
        """
        The five relational forms of P then Q, from P_- ; Q_- ; T to
        R ; P_+ converse ; Q_+ converse. All agree when p and q are valid.
        """
        if not p.dst.same_object(q.src):
            raise ObjectMismatch("target of the first morphism is not the source of the second")
        p_lower, p_upper = DepService.maximal_witnesses(p.bits, p.src, p.dst)
        q_lower, q_upper = DepService.maximal_witnesses(q.bits, q.src, q.dst)
        p_up = converse(p_upper, p.src.n_cols)
        q_up = converse(q_upper, q.src.n_cols)
        return (
            compose(compose(p_lower, q_lower), q.dst.bits),
            compose(p_lower, q.bits),
            compose(compose(p_lower, p.dst.bits), q_up),
            compose(p.bits, q_up),
            compose(compose(p.src.bits, p_up), q_up),
        )

    @staticmethod
    def open_sets(r: Rel) -> List[int]:
        """
        The distinct images R[X], canonically ordered.
        """
        return union_closure(r.bits)

    @staticmethod
    def open_of(r: Rel) -> FinLattice:
        """
        Lattice of open sets of r ordered by inclusion, labelled by column subsets.
        """
        sets = DepService.open_sets(r)
        return lattice_from_sets(sets, [set_label(o, r.cols) for o in sets])

    @staticmethod
    def open_morphism(p: DepMorphism) -> JslMorphism:
        """
        Open(P)(O) = P_+ converse [O].
        """
        if not DepService.is_dep_morphism(p.bits, p.src, p.dst):
            raise InvalidMorphism("not a Dep-morphism")
        _, upper = DepService.maximal_witnesses(p.bits, p.src, p.dst)
        upper_conv = converse(upper, p.src.n_cols)
        src_sets = DepService.open_sets(p.src)
        dst_sets = DepService.open_sets(p.dst)
        index = {o: i for i, o in enumerate(dst_sets)}
        table = []
        for o in src_sets:
            img = image(upper_conv, o)
            if img not in index:
                raise InvalidMorphism(f"image {img:b} is not open in the target")
            table.append(index[img])
        return JslMorphism(
            dom=DepService.open_of(p.src), cod=DepService.open_of(p.dst), map=tuple(table)
        )

    @staticmethod
    def pirr_of(s: FinLattice) -> Rel:
        """
        The relation "not below" restricted to J(S) x M(S).
        """
        joins, meets = SemilatticeService.irreducibles(s)
        return DepService.nleq_rel(s, joins, meets)

    @staticmethod
    def nleq_rel(s: FinLattice, joins: Sequence[int], meets: Sequence[int]) -> Rel:
        """
        The relation "not below" on joins x meets, labelled by element index.

        When joins contains J(S) and meets contains M(S), its open sets are
        those of pirr_of(s) extended by the extra columns: O |-> O restricted
        to M(S) is an isomorphism of the open-set lattices.
        """
        bits = tuple(
            sum(1 << k for k, m in enumerate(meets) if not s.le(j, m)) for j in joins
        )
        return Rel(rows=tuple(str(j) for j in joins), cols=tuple(str(m) for m in meets), bits=bits)

    @staticmethod
    def reduction_iso(r: Rel) -> DepMorphism:
        """
        The isomorphism r -> Pirr(Open(r)), x related to an irreducible open
        set Y iff r[x] is not contained in Y.
        """
        sets = DepService.open_sets(r)
        target = DepService.pirr_of(DepService.open_of(r))
        meets = [sets[int(label)] for label in target.cols]
        bits = tuple(sum(1 << k for k, y in enumerate(meets) if row & ~y) for row in r.bits)
        return DepService.morphism(bits, r, target)

    @staticmethod
    def pirr_morphism(f: JslMorphism) -> DepMorphism:
        """
        Pirr(f)(j, m) iff f(j) is not below m, with witnesses
        lower(j1, j2) iff j2 <= f(j1) and upper(m2, m1) iff f_*(m2) <= m1.
        """
        dom, cod = f.dom, f.cod
        j_dom, m_dom = SemilatticeService.irreducibles(dom)
        j_cod, m_cod = SemilatticeService.irreducibles(cod)
        adj = SemilatticeService.adjoint(f)
        bits = tuple(
            sum(1 << k for k, m in enumerate(m_cod) if not cod.le(f.map[j], m)) for j in j_dom
        )
        lower = tuple(
            sum(1 << k for k, j2 in enumerate(j_cod) if cod.le(j2, f.map[j1])) for j1 in j_dom
        )
        upper = tuple(
            sum(1 << k for k, m1 in enumerate(m_dom) if dom.le(adj.map[m2], m1)) for m2 in m_cod
        )
        return DepMorphism(
            src=DepService.pirr_of(dom), dst=DepService.pirr_of(cod),
            bits=bits, lower=lower, upper=upper,
        )

    @staticmethod
    def interior(r: Rel, y: int) -> int:
        """
        Largest open set contained in the column subset y.
        """
        out = 0
        for row in r.bits:
            if row & ~y == 0:
                out |= row
        return out

    @staticmethod
    def open_irreducibles(r: Rel) -> Tuple[List[int], List[int]]:
        """
        Join-irreducible open sets (rows that are no union of smaller rows)
        and meet-irreducible open sets Int(cols minus {y}) for the columns y
        whose converse row is join-irreducible in Open of the converse.
        """
        joins = join_irreducible_sets(canonical_sets(r.bits))
        conv = r.converse()
        conv_joins = set(join_irreducible_sets(canonical_sets(conv.bits)))
        full = r.full_cols
        meets = [
            DepService.interior(r, full & ~(1 << y))
            for y, col in enumerate(conv.bits)
            if col in conv_joins
        ]
        return joins, canonical_sets(meets)

    @staticmethod
    def is_dep_isomorphism(p: DepMorphism) -> bool:
        """
        A Dep-morphism is an isomorphism iff its Open image is bijective.
        """
        if not DepService.is_dep_morphism(p.bits, p.src, p.dst):
            return False
        f = DepService.open_morphism(p)
        return f.dom.size == f.cod.size and len(set(f.map)) == f.cod.size

    @staticmethod
    def relabel(r: Rel, row_perm: Sequence[int], col_perm: Sequence[int]) -> Tuple[Rel, DepMorphism]:
        """
        Permute rows and columns; returns the relabelled relation and the
        isomorphism r -> relabelled.
        """
        new_bits = [0] * r.n_rows
        new_rows = [""] * r.n_rows
        new_cols = [""] * r.n_cols
        for i, row in enumerate(r.bits):
            new_bits[row_perm[i]] = sum(1 << col_perm[j] for j in members(row))
            new_rows[row_perm[i]] = r.rows[i]
        for j, label in enumerate(r.cols):
            new_cols[col_perm[j]] = label
        target = Rel(rows=tuple(new_rows), cols=tuple(new_cols), bits=tuple(new_bits))
        iso_bits = tuple(sum(1 << col_perm[j] for j in members(row)) for row in r.bits)
        return target, DepService.morphism(iso_bits, r, target)

    @staticmethod
    def representation_rel(sets: Sequence[int], meet_generators: Sequence[int]) -> Rel:
        """
        Relation j not-contained-in m between join- and meet-generators of a
        union-closed family; its open-set lattice is isomorphic to the family.
        """
        bits = tuple(
            sum(1 << k for k, m in enumerate(meet_generators) if j & ~m) for j in sets
        )
        return Rel.build(bits, len(meet_generators))
