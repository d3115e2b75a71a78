"""
Service layer bridging a regular language to its algebraic presentations.

Given minimal dfas A of L and B of r(L), the Nerode class of a word w is
the B-state reached on r(w). Every left derivative and every union of
them is a union of Nerode classes, so it is stored as a bitset over the
states of B.
"""
from collections import deque
from typing import Dict, List, Optional, Tuple
import logging

from app.core.config import settings
from app.core.errors import BudgetExceeded, NotReversePair
from app.models.automata import Alphabet, Dfa, Nfa
from app.models.lattice import lattice_from_sets
from app.models.language import (
    DerivativeSystem, JslDfa, LowerPath, MonoidRecognizer, UpperPath, Word,
)
from app.models.relation import DepMorphism, Rel, members
from app.services.automata_service import AutomataService
from app.services.dep_service import DepService, canonical_sets, set_label, union_closure
from app.services.semilattice_service import SemilatticeService

logger = logging.getLogger(__name__)


def word_label(word: Word) -> str:
    return ".".join(word) if word else "eps"


def bfs_representatives(d: Dfa) -> Tuple[Word, ...]:
    """
    Shortest, then lexicographically least, word reaching each state.
    """
    reps: Dict[int, Word] = {d.init: ()}
    queue = deque([d.init])
    while queue:
        state = queue.popleft()
        for idx, nxt in enumerate(d.trans[state]):
            if nxt not in reps:
                reps[nxt] = reps[state] + (d.alphabet.symbols[idx],)
                queue.append(nxt)
    return tuple(reps[q] for q in range(d.state_count))


class LangalgService:
    """
    Service for derivatives, dependency relations and canonical acceptors.
    """

    @staticmethod
    def derivative_system(a: Dfa, b: Dfa) -> DerivativeSystem:
        """
        Minimize a and b, check that they form a reverse pair and choose
        BFS-least representatives for every state.
        """
        b = AutomataService.over_dfa(a.alphabet, b)
        if not AutomataService.check_reverse_pair(a, b):
            raise NotReversePair("second dfa does not accept the reverse language of the first")
        lang = AutomataService.minimize_dfa(a)
        rev = AutomataService.minimize_dfa(b)
        ds = DerivativeSystem(
            lang_dfa=lang,
            rev_dfa=rev,
            reps_left=bfs_representatives(lang),
            reps_right=bfs_representatives(rev),
        )
        logger.info(f"derivative system with {lang.state_count} left and {rev.state_count} right derivatives")
        return ds

    @staticmethod
    def from_dfa(a: Dfa) -> DerivativeSystem:
        """
        Derivative system of L(a), computing the reverse dfa by subset construction.
        """
        rev = AutomataService.minimize_dfa(
            AutomataService.determinize_reachable(AutomataService.reverse(a))
        )
        return LangalgService.derivative_system(a, rev)

    @staticmethod
    def derivative_masks(ds: DerivativeSystem) -> List[int]:
        """
        Left derivative of each state of lang_dfa as a class bitset.
        """
        a, b = ds.lang_dfa, ds.rev_dfa
        rev_words = [tuple(reversed(w)) for w in ds.reps_right]
        return [
            sum(1 << q for q, v in enumerate(rev_words) if a.run(v, start=p) in a.finals)
            for p in range(a.state_count)
        ]

    @staticmethod
    def quotient(ds: DerivativeSystem, symbol: int, k: int) -> int:
        """
        a^-1 K = classes c whose a-successor in the reverse dfa lies in K.
        """
        b = ds.rev_dfa
        return sum(1 << c for c in range(b.state_count) if k >> b.trans[c][symbol] & 1)

    @staticmethod
    def lower_path(ds: DerivativeSystem) -> LowerPath:
        """
        D_L(p, q) iff A accepts w_A(p) r(w_B(q)); the letter relations insert
        the letter after w_A(p).
        """
        a, b = ds.lang_dfa, ds.rev_dfa
        rows = tuple(word_label(w) for w in ds.reps_left)
        cols = tuple(word_label(w) for w in ds.reps_right)
        masks = LangalgService.derivative_masks(ds)
        dr = Rel(rows=rows, cols=cols, bits=tuple(masks))
        dr_a = {
            sym: Rel(rows=rows, cols=cols, bits=tuple(masks[a.trans[p][idx]] for p in range(a.state_count)))
            for idx, sym in enumerate(a.alphabet.symbols)
        }
        i_rel = Rel(rows=("*",), cols=cols, bits=(sum(1 << q for q in b.finals),))
        f_rel = Rel(rows=rows, cols=("*",), bits=tuple(int(p in a.finals) for p in range(a.state_count)))
        return LowerPath(dr=dr, dr_a=dr_a, i_rel=i_rel, f_rel=f_rel)

    @staticmethod
    def lower_path_morphisms(lp: LowerPath) -> Tuple[DepMorphism, Dict[str, DepMorphism], DepMorphism]:
        """
        I : id_1 -> D_L, D_{L,a} : D_L -> D_L and F : D_L -> id_1 as Dep-morphisms.
        """
        one = Rel(rows=("*",), cols=("*",), bits=(1,))
        i_mor = DepService.morphism(lp.i_rel.bits, one, lp.dr)
        d_mor = {sym: DepService.morphism(rel.bits, lp.dr, lp.dr) for sym, rel in lp.dr_a.items()}
        f_mor = DepService.morphism(lp.f_rel.bits, lp.dr, one)
        return i_mor, d_mor, f_mor

    @staticmethod
    def drl_iso(ds: DerivativeSystem) -> List[int]:
        """
        dr_L of each right derivative: the union of the left derivatives
        that do not contain its class. Returned as class bitsets.
        """
        masks = LangalgService.derivative_masks(ds)
        out = []
        for q in range(ds.class_count):
            union = 0
            for row in masks:
                if not row >> q & 1:
                    union |= row
            out.append(union)
        return out

    @staticmethod
    def drl_consistent(ds: DerivativeSystem) -> bool:
        """
        D_L(p, q) iff the left derivative p is not contained in dr_L(q).
        """
        masks = LangalgService.derivative_masks(ds)
        dr = LangalgService.drl_iso(ds)
        sld = set(union_closure(masks))
        if not all(d in sld for d in dr):
            return False
        return all(
            bool(row >> q & 1) == bool(row & ~dr[q])
            for row in masks
            for q in range(ds.class_count)
        )

    @staticmethod
    def nerode_upper_path(ds: DerivativeSystem) -> UpperPath:
        """
        I'(*, c) iff c is in L; D'_a(x, y) iff the a-successor of y is x;
        F'(c, *) iff c is the class of the empty word.
        """
        b = ds.rev_dfa
        n = b.state_count
        labels = tuple(word_label(w) for w in ds.reps_right)
        i2 = Rel(rows=("*",), cols=labels, bits=(sum(1 << c for c in b.finals),))
        d2_a = {}
        for idx, sym in enumerate(b.alphabet.symbols):
            bits = [0] * n
            for y in range(n):
                bits[b.trans[y][idx]] |= 1 << y
            d2_a[sym] = Rel(rows=labels, cols=labels, bits=tuple(bits))
        f2 = Rel(rows=labels, cols=("*",), bits=tuple(int(c == b.init) for c in range(n)))
        return UpperPath(classes=n, i2=i2, d2_a=d2_a, f2=f2)

    @staticmethod
    def monoid_upper_path(m: MonoidRecognizer) -> UpperPath:
        """
        I''(*, x) iff x is accepting; D''_a(x, y) iff h(a) y = x; F''(x, *) iff x is the identity.
        """
        n = m.size
        labels = tuple(str(x) for x in range(n))
        i2 = Rel(rows=("*",), cols=labels, bits=(sum(1 << x for x in m.finals),))
        d2_a = {}
        for idx, sym in enumerate(m.alphabet.symbols):
            h = m.letters[idx]
            bits = [0] * n
            for y in range(n):
                bits[m.table[h][y]] |= 1 << y
            d2_a[sym] = Rel(rows=labels, cols=labels, bits=tuple(bits))
        f2 = Rel(rows=labels, cols=("*",), bits=tuple(int(x == 0) for x in range(n)))
        return UpperPath(classes=n, i2=i2, d2_a=d2_a, f2=f2)

    @staticmethod
    def syntactic_monoid(a: Dfa) -> MonoidRecognizer:
        """
        Transition monoid of the minimal dfa: maps delta_w in BFS order over
        words with alphabet tie-break, the identity first.
        """
        d = AutomataService.minimize_dfa(a)
        n = d.state_count
        letters = [tuple(d.trans[q][idx] for q in range(n)) for idx in range(len(d.alphabet))]
        identity = tuple(range(n))
        index: Dict[Tuple[int, ...], int] = {identity: 0}
        maps = [identity]
        queue = deque([identity])
        while queue:
            f = queue.popleft()
            for g in letters:
                h = tuple(g[f[q]] for q in range(n))
                if h not in index:
                    index[h] = len(maps)
                    maps.append(h)
                    queue.append(h)
        table = tuple(
            tuple(index[tuple(g[f[q]] for q in range(n))] for g in maps) for f in maps
        )
        finals = frozenset(i for i, f in enumerate(maps) if f[d.init] in d.finals)
        monoid = MonoidRecognizer(
            alphabet=d.alphabet,
            table=table,
            letters=tuple(index[g] for g in letters),
            finals=finals,
        )
        logger.info(f"syntactic monoid with {len(maps)} elements")
        return monoid

    @staticmethod
    def monoid_dfa(m: MonoidRecognizer) -> Dfa:
        """
        The monoid acting on itself from the right; accepts L.
        """
        return Dfa(
            alphabet=m.alphabet,
            state_count=m.size,
            init=0,
            finals=m.finals,
            trans=tuple(tuple(m.table[x][h] for h in m.letters) for x in range(m.size)),
        )

    @staticmethod
    def opposite_dfa(m: MonoidRecognizer) -> Dfa:
        """
        The opposite monoid acting from the right; accepts r(L).
        """
        return Dfa(
            alphabet=m.alphabet,
            state_count=m.size,
            init=0,
            finals=m.finals,
            trans=tuple(tuple(m.table[h][x] for h in m.letters) for x in range(m.size)),
        )

    @staticmethod
    def monoid_system(m: MonoidRecognizer) -> DerivativeSystem:
        return LangalgService.derivative_system(
            LangalgService.monoid_dfa(m), LangalgService.opposite_dfa(m)
        )

    @staticmethod
    def monoid_derivative(m: MonoidRecognizer, word: Word) -> int:
        """
        w^-1 L as a bitset of monoid elements: {x : h(w) x accepting}.
        """
        e = m.evaluate(word)
        return sum(1 << x for x in range(m.size) if m.table[e][x] in m.finals)

    @staticmethod
    def monoid_quotient(m: MonoidRecognizer, symbol: int, k: int) -> int:
        h = m.letters[symbol]
        return sum(1 << x for x in range(m.size) if k >> m.table[h][x] & 1)

    @staticmethod
    def sld_lattice(ds: DerivativeSystem, limit: Optional[int] = None) -> JslDfa:
        """
        Minimal JSL-dfa: all unions of left derivatives, K -> a^-1 K, initial
        element L, final elements those containing the empty word.
        """
        limit = settings.LATTICE_BUDGET if limit is None else limit
        masks = LangalgService.derivative_masks(ds)
        return LangalgService._closure_jsl(ds, union_closure(masks, limit))

    @staticmethod
    def bld_lattice(ds: DerivativeSystem, limit: Optional[int] = None) -> JslDfa:
        """
        Boolean closure of the left derivatives: every union of Nerode classes.
        """
        limit = settings.LATTICE_BUDGET if limit is None else limit
        n = ds.class_count
        if 1 << n > limit:
            raise BudgetExceeded(f"BLD has 2^{n} elements, above {limit}", lower=1 << n)
        return LangalgService._closure_jsl(ds, canonical_sets(range(1 << n)))

    @staticmethod
    def blrd_lattice(m: MonoidRecognizer, limit: Optional[int] = None) -> JslDfa:
        """
        Boolean closure of the two-sided derivatives: every union of syntactic classes.
        """
        limit = settings.LATTICE_BUDGET if limit is None else limit
        n = m.size
        if 1 << n > limit:
            raise BudgetExceeded(f"BLRD has 2^{n} elements, above {limit}", lower=1 << n)
        sets = canonical_sets(range(1 << n))
        index = {s: i for i, s in enumerate(sets)}
        lattice = lattice_from_sets(sets, [set_label(s, [str(x) for x in range(n)]) for s in sets])
        trans = tuple(
            tuple(index[LangalgService.monoid_quotient(m, idx, s)] for s in sets)
            for idx in range(len(m.alphabet))
        )
        lang = sum(1 << x for x in m.finals)
        without_eps = max((s for s in sets if not s & 1), key=lambda s: (bin(s).count("1"), s))
        return JslDfa(
            lattice=lattice, alphabet=m.alphabet, trans=trans,
            init=index[lang], final_bound=index[without_eps], elements=tuple(sets),
        )

    @staticmethod
    def _closure_jsl(ds: DerivativeSystem, sets: List[int]) -> JslDfa:
        index = {s: i for i, s in enumerate(sets)}
        labels = [word_label(w) for w in ds.reps_right]
        lattice = lattice_from_sets(sets, [set_label(s, labels) for s in sets])
        trans = tuple(
            tuple(index[LangalgService.quotient(ds, idx, s)] for s in sets)
            for idx in range(len(ds.alphabet))
        )
        eps = 1 << ds.epsilon_class
        bound = 0
        for s in sets:
            if not s & eps:
                bound |= s
        return JslDfa(
            lattice=lattice, alphabet=ds.alphabet, trans=trans,
            init=index[ds.language], final_bound=index[bound], elements=tuple(sets),
        )

    @staticmethod
    def atomaton(ds: DerivativeSystem) -> Nfa:
        """
        Nfa on the Nerode classes: x -a-> y iff the a-successor of y is x,
        initial classes those inside L, final the class of the empty word.
        """
        b = ds.rev_dfa
        edges = [
            (b.trans[y][idx], sym, y)
            for y in range(b.state_count)
            for idx, sym in enumerate(b.alphabet.symbols)
        ]
        return Nfa.from_edges(b.alphabet, b.state_count, b.finals, {b.init}, edges)

    @staticmethod
    def nfa_of_join_irreducibles(m: JslDfa) -> Nfa:
        """
        States J(Q); j1 -a-> j2 iff j2 <= delta_a(j1); initial iff j <= init;
        final iff j is a final state.
        """
        lattice = m.lattice
        joins, _ = SemilatticeService.irreducibles(lattice)
        pos = {j: i for i, j in enumerate(joins)}
        edges = []
        for j1 in joins:
            for idx, sym in enumerate(m.alphabet.symbols):
                target = m.trans[idx][j1]
                for j2 in joins:
                    if lattice.le(j2, target):
                        edges.append((pos[j1], sym, pos[j2]))
        return Nfa.from_edges(
            m.alphabet,
            len(joins),
            inits=[pos[j] for j in joins if lattice.le(j, m.init)],
            finals=[pos[j] for j in joins if m.is_final(j)],
            edges=edges,
        )

    @staticmethod
    def canonical_rfsa(ds: DerivativeSystem) -> Nfa:
        return LangalgService.nfa_of_join_irreducibles(LangalgService.sld_lattice(ds))

    @staticmethod
    def generator_nfa(
        alphabet: Alphabet,
        generators: List[int],
        quotient,
        language: int,
        epsilon: int,
    ) -> Nfa:
        """
        Nfa on a family of generators: g1 -a-> g2 iff g2 is contained in
        a^-1 g1, initial iff g is contained in L, final iff g contains the
        empty-word class.
        """
        edges = []
        for i, g1 in enumerate(generators):
            for idx, sym in enumerate(alphabet.symbols):
                target = quotient(idx, g1)
                for k, g2 in enumerate(generators):
                    if g2 & ~target == 0:
                        edges.append((i, sym, k))
        return Nfa.from_edges(
            alphabet,
            len(generators),
            inits=[i for i, g in enumerate(generators) if g & ~language == 0],
            finals=[i for i, g in enumerate(generators) if g >> epsilon & 1],
            edges=edges,
        )

    @staticmethod
    def class_members(mask: int) -> List[int]:
        return members(mask)
