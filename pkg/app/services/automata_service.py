"""
Service layer for finite automata.
"""
from collections import deque
from typing import Dict, Iterator, List, Optional, Tuple, Union
import logging

from app.core.config import settings
from app.core.errors import AlphabetMismatch, BudgetExceeded, LanguageMismatch
from app.models.automata import Alphabet, Dfa, Nfa
from app.models.language import MonoidRecognizer

logger = logging.getLogger(__name__)

Automaton = Union[Dfa, Nfa]


def _as_nfa(x: Automaton) -> Nfa:
    return x.as_nfa() if isinstance(x, Dfa) else x


def _step(succ: Tuple[Tuple[int, ...], ...], current: int, symbol: int) -> int:
    out = 0
    q = 0
    while current:
        if current & 1:
            out |= succ[q][symbol]
        current >>= 1
        q += 1
    return out


def _predecessor_masks(n: Nfa) -> List[List[int]]:
    pred = [[0] * len(n.alphabet) for _ in range(n.state_count)]
    for src, row in enumerate(n.trans):
        for idx, targets in enumerate(row):
            for dst in targets:
                pred[dst][idx] |= 1 << src
    return pred


class AutomataService:
    """
    Service for automata constructions and decision procedures.
    """

    @staticmethod
    def canonical_dfa(d: Dfa) -> Dfa:
        """
        Restrict to reachable states and renumber them in BFS order.
        """
        names: Dict[int, int] = {d.init: 0}
        order = [d.init]
        queue = deque([d.init])
        while queue:
            state = queue.popleft()
            for nxt in d.trans[state]:
                if nxt not in names:
                    names[nxt] = len(order)
                    order.append(nxt)
                    queue.append(nxt)
        return Dfa(
            alphabet=d.alphabet,
            state_count=len(order),
            init=0,
            finals=frozenset(names[q] for q in d.finals if q in names),
            trans=tuple(tuple(names[t] for t in d.trans[q]) for q in order),
        )

    @staticmethod
    def reverse(n: Automaton) -> Nfa:
        """
        Reverse every edge and swap initial and final states.
        """
        n = _as_nfa(n)
        return Nfa.from_edges(
            n.alphabet,
            n.state_count,
            inits=n.finals,
            finals=n.inits,
            edges=((dst, sym, src) for src, sym, dst in n.edges()),
        )

    @staticmethod
    def determinize_reachable(n: Automaton) -> Dfa:
        """
        Subset construction restricted to reachable subsets, in BFS discovery order.
        """
        n = _as_nfa(n)
        succ = n.successor_masks()
        final_mask = n.final_mask
        start = n.init_mask
        index: Dict[int, int] = {start: 0}
        subsets = [start]
        rows: List[Tuple[int, ...]] = []
        queue = deque([start])
        while queue:
            current = queue.popleft()
            row = []
            for idx in range(len(n.alphabet)):
                nxt = _step(succ, current, idx)
                if nxt not in index:
                    index[nxt] = len(subsets)
                    subsets.append(nxt)
                    queue.append(nxt)
                row.append(index[nxt])
            rows.append(tuple(row))
        return Dfa(
            alphabet=n.alphabet,
            state_count=len(subsets),
            init=0,
            finals=frozenset(i for i, s in enumerate(subsets) if s & final_mask),
            trans=tuple(rows),
        )

    @staticmethod
    def minimize_dfa(d: Dfa) -> Dfa:
        """
        Minimal complete dfa by double reversal, in canonical BFS order.
        """
        once = AutomataService.determinize_reachable(AutomataService.reverse(d))
        twice = AutomataService.determinize_reachable(AutomataService.reverse(once))
        return AutomataService.canonical_dfa(twice)

    @staticmethod
    def over(alphabet: Alphabet, y: Automaton) -> Nfa:
        """
        Re-index y over the given symbol order.
        """
        if set(alphabet.symbols) != set(y.alphabet.symbols):
            raise AlphabetMismatch(
                f"alphabets differ: {alphabet.symbols} vs {y.alphabet.symbols}"
            )
        y = _as_nfa(y)
        if alphabet.symbols == y.alphabet.symbols:
            return y
        return Nfa.from_edges(alphabet, y.state_count, y.inits, y.finals, y.edges())

    @staticmethod
    def over_dfa(alphabet: Alphabet, d: Dfa) -> Dfa:
        if set(alphabet.symbols) != set(d.alphabet.symbols):
            raise AlphabetMismatch(
                f"alphabets differ: {alphabet.symbols} vs {d.alphabet.symbols}"
            )
        if alphabet.symbols == d.alphabet.symbols:
            return d
        cols = [d.alphabet.index(sym) for sym in alphabet.symbols]
        return Dfa(
            alphabet=alphabet,
            state_count=d.state_count,
            init=d.init,
            finals=d.finals,
            trans=tuple(tuple(row[c] for c in cols) for row in d.trans),
        )

    @staticmethod
    def equivalent(x: Automaton, y: Automaton) -> bool:
        """
        Decide L(x) = L(y) by searching the product of both subset automata
        for a pair that disagrees on acceptance.
        """
        ny = AutomataService.over(x.alphabet, y)
        nx = _as_nfa(x)
        sx, sy = nx.successor_masks(), ny.successor_masks()
        fx, fy = nx.final_mask, ny.final_mask
        start = (nx.init_mask, ny.init_mask)
        seen = {start}
        queue = deque([start])
        while queue:
            a, b = queue.popleft()
            if bool(a & fx) != bool(b & fy):
                return False
            for idx in range(len(nx.alphabet)):
                pair = (_step(sx, a, idx), _step(sy, b, idx))
                if pair not in seen:
                    seen.add(pair)
                    queue.append(pair)
        return True

    @staticmethod
    def _complement_meets(a: Dfa, n: Nfa) -> bool:
        """
        Whether the complement of L(a) intersects L(n).
        """
        succ = n.successor_masks()
        final_mask = n.final_mask
        start = (a.init, n.init_mask)
        seen = {start}
        queue = deque([start])
        while queue:
            q, s = queue.popleft()
            if q not in a.finals and s & final_mask:
                return True
            for idx in range(len(a.alphabet)):
                pair = (a.trans[q][idx], _step(succ, s, idx))
                if pair not in seen:
                    seen.add(pair)
                    queue.append(pair)
        return False

    @staticmethod
    def check_reverse_pair(a: Dfa, b: Dfa) -> bool:
        """
        Whether L(b) = r(L(a)), via the two emptiness tests
        complement(L(a)) & r(L(b)) = {} and complement(L(b)) & r(L(a)) = {}.
        """
        b = AutomataService.over_dfa(a.alphabet, b)
        if AutomataService._complement_meets(a, AutomataService.reverse(b)):
            return False
        return not AutomataService._complement_meets(b, AutomataService.reverse(a))

    @staticmethod
    def is_atomic(n: Nfa) -> bool:
        """
        An nfa is atomic iff the reachable subset automaton of its reverse is minimal.
        """
        rsc = AutomataService.determinize_reachable(AutomataService.reverse(n))
        return AutomataService.minimize_dfa(rsc).state_count == rsc.state_count

    @staticmethod
    def _reverse_profile(n: Nfa, steps: Tuple[Tuple[int, ...], ...], start: int) -> Optional[Dict[int, int]]:
        """
        Walk r(n) from its initial states together with a deterministic
        action `steps[state][symbol]` started at `start`. Returns the map
        from action state to the set of n-states whose language contains
        the word read so far (reversed), or None if that set is not a
        function of the action state.
        """
        pred = _predecessor_masks(n)
        pred_t = tuple(tuple(row) for row in pred)
        first = (n.final_mask, start)
        profile: Dict[int, int] = {}
        seen = {first}
        queue = deque([first])
        while queue:
            x, c = queue.popleft()
            if profile.setdefault(c, x) != x:
                return None
            for idx in range(len(n.alphabet)):
                pair = (_step(pred_t, x, idx), steps[c][idx])
                if pair not in seen:
                    seen.add(pair)
                    queue.append(pair)
        return profile

    @staticmethod
    def nerode_saturated(n: Nfa) -> bool:
        """
        Direct atomicity check: every state language is a union of Nerode classes.
        """
        rev = AutomataService.minimize_dfa(
            AutomataService.determinize_reachable(AutomataService.reverse(n))
        )
        return AutomataService._reverse_profile(n, rev.trans, rev.init) is not None

    @staticmethod
    def state_class_masks(n: Nfa, rev: Dfa) -> Optional[List[int]]:
        """
        Language of each state of an atomic n as a bitset of Nerode classes,
        the classes being the states of the minimal dfa `rev` of r(L(n)).
        """
        aligned = AutomataService.over(rev.alphabet, n)
        profile = AutomataService._reverse_profile(aligned, rev.trans, rev.init)
        if profile is None:
            return None
        return [
            sum(1 << c for c, x in profile.items() if x >> q & 1)
            for q in range(n.state_count)
        ]

    @staticmethod
    def state_monoid_masks(n: Nfa, m: MonoidRecognizer) -> Optional[List[int]]:
        """
        Language of each state of a subatomic n as a bitset of monoid elements.
        """
        aligned = AutomataService.over(m.alphabet, n)
        left = tuple(
            tuple(m.table[m.letters[idx]][x] for idx in range(len(m.alphabet)))
            for x in range(m.size)
        )
        profile = AutomataService._reverse_profile(aligned, left, 0)
        if profile is None:
            return None
        return [
            sum(1 << c for c, x in profile.items() if x >> q & 1)
            for q in range(n.state_count)
        ]

    @staticmethod
    def is_subatomic(n: Nfa, min_dfa: Dfa) -> bool:
        """
        Whether every state language of n is a union of syntactic classes.
        """
        from app.services.langalg_service import LangalgService

        if not AutomataService.equivalent(min_dfa, n):
            raise LanguageMismatch("nfa and dfa accept different languages")
        monoid = LangalgService.syntactic_monoid(min_dfa)
        return AutomataService.state_monoid_masks(n, monoid) is not None

    @staticmethod
    def ns_bruteforce(
        a: Dfa,
        kmax: Optional[int] = None,
        budget: Optional[int] = None,
        lower: int = 1,
    ) -> Optional[int]:
        """
        Least k <= kmax such that some k-state nfa accepts L(a).

        Only sizes below the trimmed minimal dfas of L and r(L) are searched;
        either of those is itself an nfa for L. Candidates are transition
        tables with the initial states first and every other state numbered
        in BFS discovery order, so each reachable nfa is met once per
        ordering of its initial states. Final sets are solved per table.
        Raises BudgetExceeded with the smallest k not yet ruled out when
        more than `budget` tables have been tried.
        """
        kmax = settings.NS_KMAX if kmax is None else kmax
        budget = settings.DEFAULT_BUDGET if budget is None else budget
        target = AutomataService.minimize_dfa(a)
        rev = AutomataService.minimize_dfa(
            AutomataService.determinize_reachable(AutomataService.reverse(target))
        )
        upper = max(1, min(_useful_states(target), _useful_states(rev)))
        sigma = len(target.alphabet)
        checked = 0
        for k in range(max(1, lower), min(kmax, upper - 1) + 1):
            for n_init in range(1, k + 1):
                inits = (1 << n_init) - 1
                for succ in _canonical_tables(k, sigma, n_init):
                    checked += 1
                    if checked > budget:
                        logger.warning(f"ns search stopped after {budget} candidates at k={k}")
                        raise BudgetExceeded("ns_bruteforce budget exhausted", lower=k, upper=upper)
                    if _has_final_set(succ, inits, k, target):
                        logger.info(f"ns = {k} after {checked} candidates")
                        return k
        if upper <= kmax:
            logger.info(f"ns = {upper}, the trimmed dfa bound, after {checked} candidates")
            return upper
        return None


def _useful_states(d: Dfa) -> int:
    """Number of states of d from which a final state is reachable."""
    pred: List[List[int]] = [[] for _ in range(d.state_count)]
    for src, row in enumerate(d.trans):
        for dst in row:
            pred[dst].append(src)
    seen = set(d.finals)
    queue = deque(d.finals)
    while queue:
        for src in pred[queue.popleft()]:
            if src not in seen:
                seen.add(src)
                queue.append(src)
    return len(seen)


def _canonical_tables(k: int, sigma: int, n_init: int) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    """
    Successor tables on k states, states 0..n_init-1 initial, in which
    every state is reachable and states are numbered by first discovery.
    """
    cells = [0] * (k * sigma)

    def fill(c: int, seen: int) -> Iterator[Tuple[Tuple[int, ...], ...]]:
        if c == k * sigma:
            if seen == k:
                yield tuple(tuple(cells[q * sigma:(q + 1) * sigma]) for q in range(k))
            return
        if c // sigma >= seen:
            return
        for fresh in range(k - seen + 1):
            new = ((1 << fresh) - 1) << seen
            for old in range(1 << seen):
                cells[c] = old | new
                yield from fill(c + 1, seen + fresh)

    return fill(0, n_init)


def _has_final_set(succ: Tuple[Tuple[int, ...], ...], inits: int, k: int, target: Dfa) -> bool:
    """Whether some choice of final states makes (succ, inits) accept L(target)."""
    start = (inits, target.init)
    seen = {start}
    queue = deque([start])
    while queue:
        s, q = queue.popleft()
        for idx, nxt in enumerate(target.trans[q]):
            pair = (_step(succ, s, idx), nxt)
            if pair not in seen:
                seen.add(pair)
                queue.append(pair)
    return any(
        all(bool(s & finals) == (q in target.finals) for s, q in seen)
        for finals in range(1 << k)
    )
