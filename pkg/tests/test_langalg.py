"""
Tests for the language-algebra service.
"""
import pytest

from app.core.errors import NotReversePair
from app.models.automata import words_up_to
from app.services.automata_service import AutomataService
from app.services.dep_service import DepService
from app.services.langalg_service import LangalgService
from app.services.semilattice_service import SemilatticeService
from app.services.speclang_service import SpeclangService
from tests.conftest import in_a_star_b


def test_derivative_system_representatives(ab_system):
    """Test BFS-least representatives of both minimal dfas."""
    assert ab_system.reps_left == ((), ("b",), ("b", "a"))
    assert ab_system.reps_right == ((), ("a",), ("b",))
    assert ab_system.class_count == 3
    assert ab_system.language == 0b100
    assert ab_system.epsilon_class == 0


def test_derivative_system_rejects_non_reverse(ab_dfa):
    """Test a dfa paired with itself is not a reverse pair."""
    with pytest.raises(NotReversePair):
        LangalgService.derivative_system(ab_dfa, ab_dfa)


def test_from_dfa_matches_pair(ab_dfa, ab_system):
    """Test the reverse computed by subset construction."""
    ds = LangalgService.from_dfa(ab_dfa)
    assert ds.rev_dfa == ab_system.rev_dfa


def test_derivative_masks(ab_system):
    """Test left derivatives of a*b as class bitsets."""
    assert LangalgService.derivative_masks(ab_system) == [4, 1, 0]


def test_quotient(ab_system):
    """Test letter quotients on class bitsets."""
    assert LangalgService.quotient(ab_system, 0, 4) == 4
    assert LangalgService.quotient(ab_system, 1, 4) == 1
    assert LangalgService.quotient(ab_system, 0, 1) == 0


def test_lower_path(ab_system):
    """Test the dependency relation with its ends."""
    lp = LangalgService.lower_path(ab_system)
    assert lp.dr.pairs() == [(0, 2), (1, 0)]
    assert lp.dr.rows == ("eps", "b", "b.a")
    assert lp.dr.cols == ("eps", "a", "b")
    assert lp.dr_a["a"].bits == (4, 0, 0)
    assert lp.dr_a["b"].bits == (1, 0, 0)
    assert lp.i_rel.bits == (4,)
    assert lp.f_rel.bits == (0, 1, 0)


def test_lower_path_morphisms(ab_system):
    """Test the lower path consists of Dep-morphisms."""
    i_mor, d_mor, f_mor = LangalgService.lower_path_morphisms(LangalgService.lower_path(ab_system))
    assert i_mor.bits == (4,)
    assert set(d_mor) == {"a", "b"}
    assert f_mor.bits == (0, 1, 0)


def test_dependency_relation_dimension(ab_system):
    """Test the open sets of D_L are the unions of derivatives."""
    dr = LangalgService.lower_path(ab_system).dr
    assert DepService.open_sets(dr) == [0, 1, 4, 5]


def test_drl_consistent(ab_system, l3_system):
    """Test the derivative isomorphism on the fixtures."""
    assert LangalgService.drl_consistent(ab_system)
    assert LangalgService.drl_consistent(l3_system)


def test_nerode_upper_path(ab_system):
    """Test the upper path over the classes."""
    up = LangalgService.nerode_upper_path(ab_system)
    assert up.classes == 3
    assert up.i2.bits == (4,)
    assert up.f2.bits == (1, 0, 0)
    # a maps class 2 to 2 and classes 0, 1 to 1
    assert up.d2_a["a"].bits == (0, 3, 4)


def test_sld_lattice(ab_system):
    """Test SLD of a*b."""
    sld = LangalgService.sld_lattice(ab_system)
    assert sld.elements == (0, 1, 4, 5)
    assert sld.elements[sld.init] == 4
    assert sld.elements[sld.final_bound] == 4
    assert SemilatticeService.is_distributive(sld.lattice)


def test_sld_accepts_language(ab_system):
    """Test the JSL-dfa accepts L."""
    sld = LangalgService.sld_lattice(ab_system)
    assert AutomataService.equivalent(sld.as_dfa(), ab_system.lang_dfa)


def test_bld_lattice(ab_system):
    """Test BLD contains every union of classes."""
    bld = LangalgService.bld_lattice(ab_system)
    assert bld.lattice.size == 8
    assert AutomataService.equivalent(bld.as_dfa(), ab_system.lang_dfa)


def test_atomaton(ab_system):
    """Test the atomaton accepts L and is atomic."""
    atomaton = LangalgService.atomaton(ab_system)
    assert atomaton.state_count == 3
    assert AutomataService.equivalent(atomaton, ab_system.lang_dfa)
    assert AutomataService.is_atomic(atomaton)


def test_canonical_rfsa(ab_system):
    """Test the canonical RFSA of a*b has two states."""
    rfsa = LangalgService.canonical_rfsa(ab_system)
    assert rfsa.state_count == 2
    assert AutomataService.equivalent(rfsa, ab_system.lang_dfa)
    assert AutomataService.is_atomic(rfsa)
    for word in words_up_to(ab_system.alphabet, 4):
        assert rfsa.accepts(word) == in_a_star_b(word)


def test_canonical_rfsa_of_group_language(l3_system):
    """Test the canonical RFSA of A_3."""
    rfsa = LangalgService.canonical_rfsa(l3_system)
    assert rfsa.state_count == 3
    assert AutomataService.equivalent(rfsa, l3_system.lang_dfa)


def test_generator_nfa(ab_system):
    """Test the nfa on the join-irreducible derivatives."""
    n = LangalgService.generator_nfa(
        ab_system.alphabet, [1, 4],
        lambda idx, k: LangalgService.quotient(ab_system, idx, k),
        ab_system.language, ab_system.epsilon_class,
    )
    assert n.inits == frozenset({1})
    assert n.finals == frozenset({0})
    assert AutomataService.equivalent(n, ab_system.lang_dfa)


def test_syntactic_monoid(ab_dfa):
    """Test the syntactic monoid of a*b."""
    m = LangalgService.syntactic_monoid(ab_dfa)
    assert m.size == 4
    assert m.letters == (1, 2)
    assert m.finals == frozenset({2})
    for word in words_up_to(ab_dfa.alphabet, 4):
        assert m.accepts(word) == in_a_star_b(word)


def test_syntactic_monoid_sizes(sigma_star, l3_dfa):
    """Test monoid sizes of the fixtures."""
    assert LangalgService.syntactic_monoid(sigma_star).size == 1
    assert LangalgService.syntactic_monoid(l3_dfa).size == 6
    assert LangalgService.syntactic_monoid(SpeclangService.ln_family(4)).size == 24


def test_monoid_dfas(ab_dfa, ba_dfa):
    """Test the monoid acting on each side accepts L and r(L)."""
    m = LangalgService.syntactic_monoid(ab_dfa)
    assert AutomataService.equivalent(LangalgService.monoid_dfa(m), ab_dfa)
    assert AutomataService.equivalent(LangalgService.opposite_dfa(m), ba_dfa)


def test_monoid_system(ab_dfa):
    """Test the monoid system has the minimal dfas of L."""
    ds = LangalgService.monoid_system(LangalgService.syntactic_monoid(ab_dfa))
    assert ds.lang_dfa == ab_dfa


def test_monoid_derivative(ab_dfa):
    """Test derivatives as monoid-element bitsets."""
    m = LangalgService.syntactic_monoid(ab_dfa)
    assert LangalgService.monoid_derivative(m, ()) == 1 << 2
    assert LangalgService.monoid_derivative(m, ("b",)) == 1 << 0
    assert LangalgService.monoid_derivative(m, ("b", "b")) == 0


def test_monoid_upper_path(ab_dfa):
    """Test the upper path over the monoid."""
    up = LangalgService.monoid_upper_path(LangalgService.syntactic_monoid(ab_dfa))
    assert up.classes == 4
    assert up.i2.bits == (4,)
    assert up.f2.bits == (1, 0, 0, 0)


def test_blrd_lattice(ab_dfa):
    """Test BLRD accepts L."""
    blrd = LangalgService.blrd_lattice(LangalgService.syntactic_monoid(ab_dfa))
    assert blrd.lattice.size == 16
    assert AutomataService.equivalent(blrd.as_dfa(), ab_dfa)
