"""
Pytest configuration and fixtures.
"""
from pathlib import Path
from typing import Callable, Tuple

import numpy as np
import pytest

from app.core.config import settings
from app.models.automata import Alphabet, Dfa, Nfa
from app.models.language import DerivativeSystem
from app.models.lattice import FinLattice
from app.models.relation import Rel
from app.services.langalg_service import LangalgService
from app.services.semilattice_service import SemilatticeService
from app.services.speclang_service import SpeclangService

FIXTURES = Path(__file__).parent.parent / "fixtures"

AB = Alphabet(symbols=("a", "b"))


def in_a_star_b(word: Tuple[str, ...]) -> bool:
    return len(word) > 0 and word[-1] == "b" and all(s == "a" for s in word[:-1])


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def ab_dfa() -> Dfa:
    """
    Minimal dfa of a*b: L, {eps} and the sink.
    """
    return Dfa(
        alphabet=AB, state_count=3, init=0, finals=frozenset({1}),
        trans=((0, 1), (2, 2), (2, 2)),
    )


@pytest.fixture
def ba_dfa() -> Dfa:
    """
    Minimal dfa of b a*.
    """
    return Dfa(
        alphabet=AB, state_count=3, init=0, finals=frozenset({2}),
        trans=((1, 2), (1, 1), (2, 1)),
    )


@pytest.fixture
def ab_system(ab_dfa: Dfa, ba_dfa: Dfa) -> DerivativeSystem:
    return LangalgService.derivative_system(ab_dfa, ba_dfa)


@pytest.fixture
def non_atomic_ab() -> Nfa:
    """
    Nfa for a*b with a state accepting only b.
    """
    return Nfa.from_edges(
        AB, 3, inits=[0], finals=[1],
        edges=[(0, "a", 0), (0, "b", 1), (0, "a", 2), (2, "b", 1)],
    )


@pytest.fixture
def sigma_star() -> Dfa:
    return Dfa(alphabet=AB, state_count=1, init=0, finals=frozenset({0}), trans=((0, 0),))


@pytest.fixture
def empty_language() -> Dfa:
    return Dfa(alphabet=AB, state_count=1, init=0, finals=frozenset(), trans=((0, 0),))


@pytest.fixture
def l3_dfa() -> Dfa:
    return SpeclangService.ln_family(3)


@pytest.fixture
def l3_system(l3_dfa: Dfa) -> DerivativeSystem:
    return LangalgService.from_dfa(l3_dfa)


@pytest.fixture
def even_a() -> Dfa:
    """
    (aa)*
    """
    return SpeclangService.unary_cycle(2, [0])


@pytest.fixture
def c3() -> FinLattice:
    """
    Chain bottom < x < top.
    """
    return SemilatticeService.chain(3)


@pytest.fixture
def m2() -> FinLattice:
    """
    Diamond: bottom, a, b, top with a and b incomparable.
    """
    return FinLattice(size=4, leq=(0b1111, 0b1010, 0b1100, 0b1000), labels=("0", "a", "b", "1"))


@pytest.fixture
def m3() -> FinLattice:
    """
    Bottom, three atoms, top.
    """
    return FinLattice(size=5, leq=(0b11111, 0b10010, 0b10100, 0b11000, 0b10000))


@pytest.fixture
def n5() -> FinLattice:
    """
    Pentagon: 0 < a < c < 1 and 0 < b < 1.
    """
    return FinLattice(size=5, leq=(0b11111, 0b10110, 0b10100, 0b11000, 0b10000))


@pytest.fixture
def r0() -> Rel:
    """
    {(0,0), (0,1), (1,1)}
    """
    return Rel.from_pairs(2, 2, [(0, 0), (0, 1), (1, 1)])


@pytest.fixture
def crown4() -> Rel:
    """
    Complement of the 4x4 identity.
    """
    return Rel.build([0b1111 & ~(1 << i) for i in range(4)], 4)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(settings.SEED)


@pytest.fixture
def random_dfa(rng: np.random.Generator) -> Callable[[int], Dfa]:
    """
    Factory for random complete dfas over {a, b}.
    """
    def make(n: int) -> Dfa:
        trans = tuple(tuple(int(t) for t in rng.integers(0, n, size=2)) for _ in range(n))
        finals = frozenset(int(q) for q in np.flatnonzero(rng.integers(0, 2, size=n)))
        return Dfa(alphabet=AB, state_count=n, init=0, finals=finals, trans=trans)

    return make
