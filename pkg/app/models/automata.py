"""
Finite automata over an explicit alphabet.

Words are sequences of symbol names. Symbol order in the alphabet fixes
every iteration order downstream.
"""
from typing import FrozenSet, Iterable, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Alphabet(BaseModel):
    """Ordered list of distinct symbol names."""
    symbols: Tuple[str, ...] = Field(..., description="Symbol names in canonical order")

    model_config = ConfigDict(frozen=True)

    @field_validator("symbols")
    @classmethod
    def _distinct(cls, value: Tuple[str, ...]) -> Tuple[str, ...]:
        if len(set(value)) != len(value):
            raise ValueError(f"duplicate symbols in alphabet {value}")
        for sym in value:
            if not sym or any(ch.isspace() for ch in sym):
                raise ValueError(f"invalid symbol name {sym!r}")
        return value

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise ValueError(f"symbol {symbol!r} not in alphabet {self.symbols}") from None


class Dfa(BaseModel):
    """Complete deterministic automaton; trans[state][symbol index] is the successor."""
    alphabet: Alphabet
    state_count: int = Field(..., ge=1)
    init: int = Field(..., ge=0)
    finals: FrozenSet[int] = Field(default_factory=frozenset)
    trans: Tuple[Tuple[int, ...], ...]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_tables(self) -> "Dfa":
        n, k = self.state_count, len(self.alphabet)
        if self.init >= n:
            raise ValueError(f"initial state {self.init} out of range for {n} states")
        if any(f < 0 or f >= n for f in self.finals):
            raise ValueError("final state out of range")
        if len(self.trans) != n:
            raise ValueError(f"transition table has {len(self.trans)} rows, expected {n}")
        for row in self.trans:
            if len(row) != k:
                raise ValueError("transition table is not total")
            if any(t < 0 or t >= n for t in row):
                raise ValueError("transition target out of range")
        return self

    def step(self, state: int, symbol: str) -> int:
        return self.trans[state][self.alphabet.index(symbol)]

    def run(self, word: Sequence[str], start: Optional[int] = None) -> int:
        state = self.init if start is None else start
        for symbol in word:
            state = self.trans[state][self.alphabet.index(symbol)]
        return state

    def accepts(self, word: Sequence[str]) -> bool:
        return self.run(word) in self.finals

    def as_nfa(self) -> "Nfa":
        return Nfa(
            alphabet=self.alphabet,
            state_count=self.state_count,
            inits=frozenset({self.init}),
            finals=self.finals,
            trans=tuple(tuple(frozenset({t}) for t in row) for row in self.trans),
        )


class Nfa(BaseModel):
    """Nondeterministic automaton; trans[state][symbol index] is a successor set."""
    alphabet: Alphabet
    state_count: int = Field(..., ge=0)
    inits: FrozenSet[int] = Field(default_factory=frozenset)
    finals: FrozenSet[int] = Field(default_factory=frozenset)
    trans: Tuple[Tuple[FrozenSet[int], ...], ...]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_tables(self) -> "Nfa":
        n, k = self.state_count, len(self.alphabet)
        if any(q < 0 or q >= n for q in self.inits | self.finals):
            raise ValueError("initial or final state out of range")
        if len(self.trans) != n:
            raise ValueError(f"transition table has {len(self.trans)} rows, expected {n}")
        for row in self.trans:
            if len(row) != k:
                raise ValueError("transition row length differs from alphabet size")
            for targets in row:
                if any(t < 0 or t >= n for t in targets):
                    raise ValueError("transition target out of range")
        return self

    @classmethod
    def from_edges(
        cls,
        alphabet: Alphabet,
        state_count: int,
        inits: Iterable[int],
        finals: Iterable[int],
        edges: Iterable[Tuple[int, str, int]],
    ) -> "Nfa":
        table = [[set() for _ in alphabet.symbols] for _ in range(state_count)]
        for src, symbol, dst in edges:
            table[src][alphabet.index(symbol)].add(dst)
        return cls(
            alphabet=alphabet,
            state_count=state_count,
            inits=frozenset(inits),
            finals=frozenset(finals),
            trans=tuple(tuple(frozenset(cell) for cell in row) for row in table),
        )

    def edges(self) -> Iterable[Tuple[int, str, int]]:
        for src, row in enumerate(self.trans):
            for idx, targets in enumerate(row):
                for dst in sorted(targets):
                    yield src, self.alphabet.symbols[idx], dst

    def successor_masks(self) -> Tuple[Tuple[int, ...], ...]:
        """Successor sets as bitmasks, [state][symbol index]."""
        return tuple(
            tuple(sum(1 << t for t in targets) for targets in row) for row in self.trans
        )

    @property
    def init_mask(self) -> int:
        return sum(1 << q for q in self.inits)

    @property
    def final_mask(self) -> int:
        return sum(1 << q for q in self.finals)

    def accepts(self, word: Sequence[str], start: Optional[FrozenSet[int]] = None) -> bool:
        current = set(self.inits if start is None else start)
        for symbol in word:
            idx = self.alphabet.index(symbol)
            current = {t for q in current for t in self.trans[q][idx]}
            if not current:
                return False
        return bool(current & self.finals)


def words_up_to(alphabet: Alphabet, length: int) -> Iterable[Tuple[str, ...]]:
    """All words of length <= `length`, shortest first, lexicographic within a length."""
    layer: list[Tuple[str, ...]] = [()]
    yield ()
    for _ in range(length):
        layer = [w + (a,) for w in layer for a in alphabet.symbols]
        yield from layer
