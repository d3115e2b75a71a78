"""
Algebraic presentations of a regular language.

Languages that are unions of Nerode classes are represented as bitsets
over the states of the minimal dfa of the reverse language (one bit per
class). Languages that are unions of syntactic classes are bitsets over
monoid elements.
"""
from typing import Dict, FrozenSet, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.automata import Alphabet, Dfa
from app.models.lattice import FinLattice, JslMorphism
from app.models.relation import Rel

Word = Tuple[str, ...]


class DerivativeSystem(BaseModel):
    """Minimal dfas of L and r(L) with a representative word per state."""
    lang_dfa: Dfa
    rev_dfa: Dfa
    reps_left: Tuple[Word, ...] = Field(..., description="w_A(p) for each state p of lang_dfa")
    reps_right: Tuple[Word, ...] = Field(..., description="w_B(q) for each state q of rev_dfa")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_reps(self) -> "DerivativeSystem":
        if len(self.reps_left) != self.lang_dfa.state_count:
            raise ValueError("one left representative per state is required")
        if len(self.reps_right) != self.rev_dfa.state_count:
            raise ValueError("one right representative per state is required")
        return self

    @property
    def alphabet(self) -> Alphabet:
        return self.lang_dfa.alphabet

    @property
    def class_count(self) -> int:
        return self.rev_dfa.state_count

    @property
    def language(self) -> int:
        """L itself as a class bitset."""
        return sum(1 << q for q in self.rev_dfa.finals)

    @property
    def epsilon_class(self) -> int:
        return self.rev_dfa.init


class LowerPath(BaseModel):
    """Dependency relation D_L with its letter relations and the I/F ends."""
    dr: Rel
    dr_a: Dict[str, Rel]
    i_rel: Rel
    f_rel: Rel

    model_config = ConfigDict(frozen=True)


class UpperPath(BaseModel):
    """
    The identity-object path I', D'_a, F' over a discrete carrier.

    For the atomic problem the carrier is the Nerode classes, for the
    subatomic one the syntactic monoid.
    """
    classes: int = Field(..., ge=1)
    i2: Rel
    d2_a: Dict[str, Rel]
    f2: Rel

    model_config = ConfigDict(frozen=True)


class MonoidRecognizer(BaseModel):
    """Finite monoid with a letter map and an accepting subset; element 0 is the identity."""
    alphabet: Alphabet
    table: Tuple[Tuple[int, ...], ...]
    letters: Tuple[int, ...] = Field(..., description="Image of each symbol, in alphabet order")
    finals: FrozenSet[int] = Field(default_factory=frozenset)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_monoid(self) -> "MonoidRecognizer":
        n = len(self.table)
        if n == 0:
            raise ValueError("monoid must have at least the identity")
        if any(len(row) != n for row in self.table):
            raise ValueError("multiplication table must be square")
        if any(v < 0 or v >= n for row in self.table for v in row):
            raise ValueError("product out of range")
        if len(self.letters) != len(self.alphabet):
            raise ValueError("one letter image per symbol is required")
        if any(v < 0 or v >= n for v in self.letters) or any(f < 0 or f >= n for f in self.finals):
            raise ValueError("letter image or final element out of range")
        t = self.table
        for x in range(n):
            if t[0][x] != x or t[x][0] != x:
                raise ValueError("element 0 is not an identity")
        for x in range(n):
            for y in range(n):
                xy = t[x][y]
                for z in range(n):
                    if t[xy][z] != t[x][t[y][z]]:
                        raise ValueError(f"multiplication is not associative at ({x}, {y}, {z})")
        return self

    @property
    def size(self) -> int:
        return len(self.table)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def letter(self, symbol: str) -> int:
        return self.letters[self.alphabet.index(symbol)]

    def evaluate(self, word: Word) -> int:
        out = 0
        for symbol in word:
            out = self.table[out][self.letter(symbol)]
        return out

    def accepts(self, word: Word) -> bool:
        return self.evaluate(word) in self.finals


class JslDfa(BaseModel):
    """
    Dfa whose states form a lattice with join-preserving transitions.

    The final states are the prime filter of elements not below `final_bound`.
    `elements` optionally carries the language (class bitset) of each state.
    """
    lattice: FinLattice
    alphabet: Alphabet
    trans: Tuple[Tuple[int, ...], ...] = Field(..., description="trans[symbol index][element]")
    init: int
    final_bound: int
    elements: Tuple[int, ...] = ()

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check(self) -> "JslDfa":
        if len(self.trans) != len(self.alphabet):
            raise ValueError("one transition map per symbol is required")
        for table in self.trans:
            JslMorphism(dom=self.lattice, cod=self.lattice, map=table)
        return self

    def morphism(self, symbol: str) -> JslMorphism:
        table = self.trans[self.alphabet.index(symbol)]
        return JslMorphism(dom=self.lattice, cod=self.lattice, map=table)

    def is_final(self, x: int) -> bool:
        return not self.lattice.le(x, self.final_bound)

    def as_dfa(self) -> Dfa:
        return Dfa(
            alphabet=self.alphabet,
            state_count=self.lattice.size,
            init=self.init,
            finals=frozenset(x for x in range(self.lattice.size) if self.is_final(x)),
            trans=tuple(
                tuple(table[x] for table in self.trans) for x in range(self.lattice.size)
            ),
        )
