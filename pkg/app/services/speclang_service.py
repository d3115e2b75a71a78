"""
Service layer for special language classes: nuclear, lattice, unary,
group and bideterministic languages, and the lattice-language reduction.
"""
from collections import deque
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple
import logging

from app.core.config import settings
from app.core.errors import (
    CrossCheckFailed, EmptyIrreducibles, InputError, NotGroupLanguage, NotNuclear,
)
from app.models.automata import Alphabet, Dfa, Nfa
from app.models.certificate import ReductionInstance
from app.models.language import DerivativeSystem, MonoidRecognizer, Word
from app.models.lattice import FinLattice, lattice_from_sets
from app.models.relation import Rel, members
from app.services.automata_service import AutomataService
from app.services.biclique_service import BicliqueService
from app.services.dep_service import (
    DepService, canonical_sets, join_irreducible_sets, union_closure,
)
from app.services.langalg_service import LangalgService
from app.services.semilattice_service import SemilatticeService

logger = logging.getLogger(__name__)

Transform = Tuple[int, ...]


def _slash(s: FinLattice, x: int, y: int, domain: Sequence[int]) -> Transform:
    """The map z |-> bottom if z <= x else y, restricted to domain."""
    return tuple(s.bottom if s.le(z, x) else y for z in domain)


def _reachable_domain(s: FinLattice, joins: Sequence[int]) -> List[int]:
    return sorted({s.top, s.bottom, *joins})


def _monoid_representatives(m: MonoidRecognizer) -> List[Word]:
    """Shortest word evaluating to each element, by right multiplication from the identity."""
    reps: Dict[int, Word] = {0: ()}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for idx, sym in enumerate(m.alphabet.symbols):
            y = m.table[x][m.letters[idx]]
            if y not in reps:
                reps[y] = reps[x] + (sym,)
                queue.append(y)
    return [reps[x] for x in range(m.size)]


class SpeclangService:
    """
    Service for recognizing special language classes and building reductions.
    """

    @staticmethod
    def is_nuclear(ds: DerivativeSystem) -> bool:
        """
        Whether every D_{L,a} is the union of the rectangles
        (column q of D_L) x (row p of D_L) that it contains.
        """
        lp = LangalgService.lower_path(ds)
        dr = lp.dr
        cols = dr.converse().bits
        for sym, rel in lp.dr_a.items():
            union = [0] * dr.n_rows
            for row in dr.bits:
                if not row:
                    continue
                for col in cols:
                    if col and all(row & ~rel.bits[x] == 0 for x in members(col)):
                        for x in members(col):
                            union[x] |= row
            if tuple(union) != rel.bits:
                logger.debug(f"letter {sym} is not a union of derivative rectangles")
                return False
        return True

    @staticmethod
    def nuclear_nfa(ds: DerivativeSystem, kmax: Optional[int] = None) -> Optional[Nfa]:
        """
        An nfa with dim D_L states for a nuclear language.

        A minimum biclique cover of D_L gives the union-closed family S of
        its column sets, which contains every derivative. Transitions on
        J(S) are the joins of the m (/) j morphisms below each derivative
        map of SLD.
        """
        if not SpeclangService.is_nuclear(ds):
            raise NotNuclear("derivative maps are not nuclear")
        dr = LangalgService.lower_path(ds).dr
        dim, cover = BicliqueService.exact_dim(dr, kmax=kmax)
        if dim is None or cover is None:
            return None
        family = join_irreducible_sets(canonical_sets([cols for _, cols in cover.bicliques]))

        derivs = LangalgService.derivative_masks(ds)
        sld = union_closure(derivs, settings.LATTICE_BUDGET)
        lattice = lattice_from_sets(sld)
        joins_idx, meets_idx = SemilatticeService.irreducibles(lattice)
        sld_joins = [sld[i] for i in joins_idx]
        sld_meets = [sld[i] for i in meets_idx]

        n_symbols = len(ds.alphabet)
        dominated: List[List[Tuple[int, int]]] = []
        for idx in range(n_symbols):
            pairs = []
            for m in sld_meets:
                outside = [x for x in sld_joins if x & ~m]
                for j in sld_joins:
                    if all(j & ~LangalgService.quotient(ds, idx, x) == 0 for x in outside):
                        pairs.append((m, j))
            dominated.append(pairs)

        def gamma(idx: int, s: int) -> int:
            out = 0
            for m, j in dominated[idx]:
                if s & ~m:
                    out |= j
            return out

        eps = 1 << ds.epsilon_class
        without_eps = 0
        for k in sld:
            if not k & eps:
                without_eps |= k
        edges = []
        for i, g1 in enumerate(family):
            for idx, sym in enumerate(ds.alphabet.symbols):
                target = gamma(idx, g1)
                for k, g2 in enumerate(family):
                    if g2 & ~target == 0:
                        edges.append((i, sym, k))
        nfa = Nfa.from_edges(
            ds.alphabet,
            len(family),
            inits=[i for i, g in enumerate(family) if g & ~ds.language == 0],
            finals=[i for i, g in enumerate(family) if g & ~without_eps],
            edges=edges,
        )
        if not AutomataService.equivalent(ds.lang_dfa, nfa):
            raise CrossCheckFailed("nfa built from the biclique cover accepts another language")
        logger.info(f"nuclear nfa with {nfa.state_count} states (dim D_L = {dim})")
        return nfa

    @staticmethod
    def nuclear_ns(ds: DerivativeSystem, kmax: Optional[int] = None) -> Optional[int]:
        """
        ns(L) = dim D_L for nuclear L, confirmed by building the nfa.
        """
        nfa = SpeclangService.nuclear_nfa(ds, kmax)
        return None if nfa is None else nfa.state_count

    @staticmethod
    def sld_distributive(ds: DerivativeSystem) -> bool:
        """
        Whether SLD(L) is distributive, which characterizes languages with a biRFSA.
        """
        return SemilatticeService.is_distributive(LangalgService.sld_lattice(ds).lattice)

    @staticmethod
    def lattice_alphabet(s: FinLattice) -> Tuple[Alphabet, List[int], List[int]]:
        joins, meets = SemilatticeService.irreducibles(s)
        if not joins or not meets:
            raise EmptyIrreducibles("lattice has no join- or meet-irreducibles")
        symbols = tuple(f"J#{i}" for i in range(len(joins))) + tuple(f"M#{i}" for i in range(len(meets)))
        return Alphabet(symbols=symbols), joins, meets

    @staticmethod
    def lattice_dfas(s: FinLattice) -> Tuple[Dfa, Dfa]:
        """
        Dfas for L(S), the words with no factor <j| |m> where j <= m, and
        for its reverse.

        dfa_l has states L, one per join-irreducible, and the sink; when
        the top is join-irreducible its state duplicates L, so the dfa is
        not minimal in that case. dfa_rl is the dual construction on
        meet-irreducibles.
        """
        alphabet, joins, meets = SpeclangService.lattice_alphabet(s)
        nj, nm = len(joins), len(meets)

        sink = nj + 1
        rows = [tuple(1 + i for i in range(nj)) + (0,) * nm]
        for j in joins:
            rows.append(
                tuple(1 + i for i in range(nj))
                + tuple(sink if s.le(j, m) else 0 for m in meets)
            )
        rows.append((sink,) * (nj + nm))
        dfa_l = Dfa(
            alphabet=alphabet, state_count=nj + 2, init=0,
            finals=frozenset(range(nj + 1)), trans=tuple(rows),
        )

        sink = nm + 1
        rows = [(0,) * nj + tuple(1 + k for k in range(nm))]
        for m in meets:
            rows.append(
                tuple(sink if s.le(j, m) else 0 for j in joins)
                + tuple(1 + k for k in range(nm))
            )
        rows.append((sink,) * (nj + nm))
        dfa_rl = Dfa(
            alphabet=alphabet, state_count=nm + 2, init=0,
            finals=frozenset(range(nm + 1)), trans=tuple(rows),
        )
        return dfa_l, dfa_rl

    @staticmethod
    def lattice_monoid_maps(s: FinLattice) -> FrozenSet[Transform]:
        """
        The transition monoid of the lattice automaton, listed directly:
        id, m (/) top, bottom (/) j, m (/) j, and bottom (/) top or the
        constant bottom when some pair allows them. Maps are restricted to
        top, the join-irreducibles and bottom.
        """
        joins, meets = SemilatticeService.irreducibles(s)
        domain = _reachable_domain(s, joins)
        bot, top = s.bottom, s.top
        maps: Set[Transform] = {tuple(domain)}
        for m in meets:
            maps.add(_slash(s, m, top, domain))
            for j in joins:
                maps.add(_slash(s, m, j, domain))
        for j in joins:
            maps.add(_slash(s, bot, j, domain))
        if any(not s.le(j, m) for j in joins for m in meets):
            maps.add(_slash(s, bot, top, domain))
        if any(s.le(j, m) for j in joins for m in meets):
            maps.add(_slash(s, top, bot, domain))
        return frozenset(maps)

    @staticmethod
    def lattice_transition_maps(s: FinLattice) -> FrozenSet[Transform]:
        """
        The monoid generated by <j| = bottom (/) j and |m> = m (/) top on
        the same domain.
        """
        joins, meets = SemilatticeService.irreducibles(s)
        domain = _reachable_domain(s, joins)
        pos = {x: i for i, x in enumerate(domain)}
        letters = [_slash(s, s.bottom, j, domain) for j in joins]
        letters += [_slash(s, m, s.top, domain) for m in meets]
        identity = tuple(domain)
        seen = {identity}
        queue = deque([identity])
        while queue:
            f = queue.popleft()
            for g in letters:
                h = tuple(g[pos[v]] for v in f)
                if h not in seen:
                    seen.add(h)
                    queue.append(h)
        return frozenset(seen)

    @staticmethod
    def lattice_language_instance(r: Rel, k: int) -> ReductionInstance:
        """
        Reduce (r, k) to the lattice language of Open(r), given by its dfa,
        its reverse dfa and its syntactic monoid.
        """
        s = DepService.open_of(r)
        dfa_l, dfa_rl = SpeclangService.lattice_dfas(s)
        monoid = LangalgService.syntactic_monoid(dfa_l)
        listed = SpeclangService.lattice_monoid_maps(s)
        generated = SpeclangService.lattice_transition_maps(s)
        if listed != generated:
            raise CrossCheckFailed(
                f"listed transition maps ({len(listed)}) differ from generated ones ({len(generated)})"
            )
        if len(listed) != monoid.size:
            raise CrossCheckFailed(
                f"lattice automaton has {len(listed)} transition maps, syntactic monoid {monoid.size}"
            )
        logger.info(
            f"lattice language over {len(dfa_l.alphabet)} letters, "
            f"{s.size}-element lattice, {monoid.size}-element monoid"
        )
        return ReductionInstance(dfa_l=dfa_l, dfa_rl=dfa_rl, monoid=monoid, k=k, source_rel=r)

    @staticmethod
    def is_group_language(m: MonoidRecognizer) -> bool:
        """
        Whether every element has a two-sided inverse.
        """
        for x in range(m.size):
            if not any(m.table[x][y] == 0 and m.table[y][x] == 0 for y in range(m.size)):
                return False
        return True

    @staticmethod
    def group_cl_check(ds: DerivativeSystem) -> bool:
        """
        For a group language, check that the closure map from unions of
        syntactic classes onto unions of Nerode classes is surjective and
        commutes with the letter quotients. Both sides preserve unions, so
        singletons suffice.
        """
        m = LangalgService.syntactic_monoid(ds.lang_dfa)
        if not SpeclangService.is_group_language(m):
            raise NotGroupLanguage("syntactic monoid is not a group")
        b = AutomataService.over_dfa(m.alphabet, ds.rev_dfa)
        reps = _monoid_representatives(m)
        cls = [b.run(tuple(reversed(w))) for w in reps]
        if set(cls) != set(range(b.state_count)):
            logger.warning("closure map misses some Nerode class")
            return False
        for idx in range(len(m.alphabet)):
            h = m.letters[idx]
            for x in range(m.size):
                left = {c for c in range(b.state_count) if b.trans[c][idx] == cls[x]}
                right = {cls[y] for y in range(m.size) if m.table[h][y] == x}
                if left != right:
                    logger.warning(f"closure map does not commute with letter {m.alphabet.symbols[idx]}")
                    return False
        return True

    @staticmethod
    def is_unary(a: Dfa) -> bool:
        return len(a.alphabet) == 1

    @staticmethod
    def is_bideterministic(a: Dfa) -> bool:
        """
        The minimal dfa has at most one final state and injective letter maps.
        """
        d = AutomataService.minimize_dfa(a)
        if len(d.finals) > 1:
            return False
        for idx in range(len(d.alphabet)):
            targets = [d.trans[q][idx] for q in range(d.state_count)]
            if len(set(targets)) != len(targets):
                return False
        return True

    @staticmethod
    def ln_family(n: int) -> Dfa:
        """
        The n-state dfa over {pi, tau}: pi is the cycle i -> i+1 mod n, tau
        swaps 0 and 1. State 1 is initial and the only final state.
        """
        if n < 2:
            raise InputError(f"L_n needs n >= 2, got {n}")
        swap = {0: 1, 1: 0}
        return Dfa(
            alphabet=Alphabet(symbols=("pi", "tau")),
            state_count=n,
            init=1,
            finals=frozenset({1}),
            trans=tuple(((i + 1) % n, swap.get(i, i)) for i in range(n)),
        )

    @staticmethod
    def unary_cycle(n: int, finals: Sequence[int], tail: int = 0) -> Dfa:
        """
        Unary dfa with a tail of `tail` states leading into a cycle of n states.
        """
        if n < 1 or tail < 0:
            raise InputError("cycle length must be positive and tail non-negative")
        size = tail + n
        trans = tuple((q + 1,) if q + 1 < size else (tail,) for q in range(size))
        return Dfa(
            alphabet=Alphabet(symbols=("a",)),
            state_count=size,
            init=0,
            finals=frozenset(finals),
            trans=trans,
        )
