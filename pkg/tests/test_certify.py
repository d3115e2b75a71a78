"""
Tests for certificates and the generator-family oracles.
"""
import pytest

from app.core.errors import (
    InvalidCertificate, LanguageMismatch, NotAtomic, NotSyntactic, ShapeMismatch,
)
from app.models.relation import Rel, members
from app.schemas.formats import parse_monoid
from app.services.automata_service import AutomataService
from app.services.certify_service import CertifyService, _least_generators
from app.services.langalg_service import LangalgService
from app.services.speclang_service import SpeclangService


def rfsa_certificate(ds):
    rfsa = LangalgService.canonical_rfsa(ds)
    return CertifyService.extract_certificate(rfsa, ds.lang_dfa, ds.rev_dfa)


def flip(rel: Rel, i: int, j: int) -> Rel:
    bits = list(rel.bits)
    bits[i] ^= 1 << j
    return Rel(rows=rel.rows, cols=rel.cols, bits=tuple(bits))


def permute(rel: Rel, row_perm, col_perm) -> Rel:
    bits = [0] * rel.n_rows
    for i, row in enumerate(rel.bits):
        bits[row_perm[i]] = sum(1 << col_perm[j] for j in members(row))
    return Rel.build(bits, rel.n_cols)


def test_rfsa_certificate_shape(ab_system):
    """Test the certificate extracted from the canonical RFSA of a*b."""
    c = rfsa_certificate(ab_system)
    assert c.kind == "atomic"
    assert c.s.bits == (2, 1)
    assert c.q.bits == (1, 4)
    assert len(c.t) == 2


def test_verify_rfsa_certificate(ab_system):
    """Test a certificate from an atomic nfa verifies at its size."""
    c = rfsa_certificate(ab_system)
    inst = CertifyService.instance_of(ab_system)
    assert CertifyService.verify(c, inst, 2)
    assert CertifyService.verify(c, inst, 3)
    assert not CertifyService.verify(c, inst, 1)


def test_verify_atomic_certificate(ab_dfa, ba_dfa, ab_system):
    """Test verification from the dfa pair."""
    c = rfsa_certificate(ab_system)
    assert CertifyService.verify_atomic_certificate(ab_dfa, ba_dfa, c, 2)


def test_atomaton_certificate(ab_system):
    """Test the atomaton gives a certificate with one row per class."""
    atomaton = LangalgService.atomaton(ab_system)
    c = CertifyService.extract_certificate(atomaton, ab_system.lang_dfa, ab_system.rev_dfa)
    inst = CertifyService.instance_of(ab_system)
    assert c.s.n_rows == 3
    assert CertifyService.verify(c, inst, 3)
    assert not CertifyService.verify(c, inst, 2)


def test_dfa_certificate(ab_dfa, ab_system):
    """Test the minimal dfa itself is certified."""
    c = CertifyService.extract_certificate(ab_dfa.as_nfa(), ab_system.lang_dfa, ab_system.rev_dfa)
    assert CertifyService.verify(c, CertifyService.instance_of(ab_system), 3)


def test_certificate_to_nfa(ab_system):
    """Test decoding a certificate gives an equivalent atomic nfa."""
    c = rfsa_certificate(ab_system)
    nfa = CertifyService.certificate_to_nfa(c, CertifyService.instance_of(ab_system))
    assert nfa.state_count == 2
    assert AutomataService.equivalent(nfa, ab_system.lang_dfa)
    assert AutomataService.is_atomic(nfa)


def test_certificate_to_nfa_group_language(l3_system):
    """Test the round trip on A_3."""
    c = rfsa_certificate(l3_system)
    nfa = CertifyService.certificate_to_nfa(c, CertifyService.instance_of(l3_system))
    assert nfa.state_count == 3
    assert AutomataService.equivalent(nfa, l3_system.lang_dfa)


def test_sigma_star_certificate(sigma_star):
    """Test the one-generator certificate of all words."""
    ds = LangalgService.from_dfa(sigma_star)
    c = rfsa_certificate(ds)
    assert c.s.bits == (1,)
    assert CertifyService.verify(c, CertifyService.instance_of(ds), 1)


def test_zeroed_q_is_rejected(ab_system):
    """Test a certificate with an empty Q fails."""
    c = rfsa_certificate(ab_system)
    broken = c.model_copy(update={"q": Rel(rows=c.q.rows, cols=c.q.cols, bits=(0, 0))})
    inst = CertifyService.instance_of(ab_system)
    assert not CertifyService.verify(broken, inst, 2)
    with pytest.raises(InvalidCertificate):
        CertifyService.certificate_to_nfa(broken, inst)


def test_flipped_bits_never_verify_wrongly(ab_system):
    """Test every single-bit change is rejected or still decodes to L."""
    c = rfsa_certificate(ab_system)
    inst = CertifyService.instance_of(ab_system)
    variants = []
    for idx, t in enumerate(c.t):
        for i in range(t.n_rows):
            for j in range(t.n_cols):
                ts = list(c.t)
                ts[idx] = flip(t, i, j)
                variants.append(c.model_copy(update={"t": tuple(ts)}))
    for i in range(c.p.n_rows):
        for j in range(c.p.n_cols):
            variants.append(c.model_copy(update={"p": flip(c.p, i, j)}))
    for i in range(c.q.n_rows):
        for j in range(c.q.n_cols):
            variants.append(c.model_copy(update={"q": flip(c.q, i, j)}))
    accepted = 0
    for v in variants:
        if CertifyService.verify(v, inst, 2):
            accepted += 1
            nfa = CertifyService.certificate_to_nfa(v, inst)
            assert AutomataService.equivalent(nfa, ab_system.lang_dfa)
    assert accepted < len(variants)


def test_permuted_certificate_verifies(ab_system):
    """Test relabelling the rows and columns of S keeps a certificate valid."""
    c = rfsa_certificate(ab_system)
    rows, cols = [1, 0], [1, 0]
    ident_rows = list(range(c.p.n_rows))
    ident_cols = list(range(c.q.n_cols))
    moved = c.model_copy(update={
        "s": permute(c.s, rows, cols),
        "p": permute(c.p, ident_rows, cols),
        "q": permute(c.q, rows, ident_cols),
        "t": tuple(permute(t, rows, cols) for t in c.t),
    })
    assert CertifyService.verify(moved, CertifyService.instance_of(ab_system), 2)


def test_shape_mismatch(ab_system):
    """Test a P with the wrong number of rows is a shape error."""
    c = rfsa_certificate(ab_system)
    broken = c.model_copy(update={"p": Rel.build([0], c.s.n_cols)})
    with pytest.raises(ShapeMismatch):
        CertifyService.verify(broken, CertifyService.instance_of(ab_system), 2)


def test_kind_mismatch(ab_dfa, ab_system):
    """Test an atomic certificate is refused for a subatomic instance."""
    c = rfsa_certificate(ab_system)
    m = LangalgService.syntactic_monoid(ab_dfa)
    with pytest.raises(ShapeMismatch):
        CertifyService.verify(c, CertifyService.subatomic_instance(m), 2)


def test_extract_rejects_non_atomic(non_atomic_ab, ab_dfa, ba_dfa):
    """Test extraction needs an atomic nfa."""
    with pytest.raises(NotAtomic):
        CertifyService.extract_certificate(non_atomic_ab, ab_dfa, ba_dfa)


def test_extract_rejects_other_language(ab_dfa, ba_dfa):
    """Test extraction needs an nfa for the same language."""
    other = LangalgService.canonical_rfsa(LangalgService.from_dfa(ba_dfa))
    with pytest.raises(LanguageMismatch):
        CertifyService.extract_certificate(
            AutomataService.over(ab_dfa.alphabet, other), ab_dfa, ba_dfa
        )


def test_subatomic_certificate(ab_dfa, ab_system):
    """Test the subatomic certificate of the canonical RFSA."""
    m = LangalgService.syntactic_monoid(ab_dfa)
    rfsa = LangalgService.canonical_rfsa(ab_system)
    c = CertifyService.extract_subatomic_certificate(rfsa, m)
    assert c.kind == "subatomic"
    assert CertifyService.verify_subatomic_certificate(m, c, 2)
    nfa = CertifyService.certificate_to_nfa(c, CertifyService.subatomic_instance(m))
    assert AutomataService.equivalent(nfa, ab_dfa)


def test_subatomic_certificate_even_length(even_a):
    """Test the subatomic certificate of (aa)*."""
    ds = LangalgService.from_dfa(even_a)
    m = LangalgService.syntactic_monoid(even_a)
    c = CertifyService.extract_subatomic_certificate(LangalgService.canonical_rfsa(ds), m)
    assert CertifyService.verify_subatomic_certificate(m, c, 2)


def test_subatomic_trivial_monoid(sigma_star):
    """Test the one-element monoid."""
    m = LangalgService.syntactic_monoid(sigma_star)
    c = CertifyService.extract_subatomic_certificate(sigma_star.as_nfa(), m)
    assert CertifyService.verify_subatomic_certificate(m, c, 1)


def test_subatomic_shape_mismatch(l3_dfa):
    """Test a certificate wider than the monoid is rejected."""
    l3 = LangalgService.from_dfa(l3_dfa)
    c = CertifyService.extract_certificate(LangalgService.atomaton(l3), l3.lang_dfa, l3.rev_dfa)
    trivial = LangalgService.syntactic_monoid(SpeclangService.unary_cycle(1, [0]))
    assert c.s.n_cols == 3
    with pytest.raises(ShapeMismatch):
        CertifyService.verify_subatomic_certificate(trivial, c, 3)


def test_least_generators_prefers_atoms():
    """Test four atoms beat the six pairs they generate."""
    pairs = [3, 5, 6, 9, 10, 12]
    result = _least_generators(
        pairs, lambda idx, k: 0, 1, lower=1, upper=6, fallback=pairs, kmax=6, budget=100_000,
    )
    assert result.value == 4
    assert result.generators == (1, 2, 4, 8)


def test_least_generators_kmax():
    """Test the search stops at kmax."""
    pairs = [3, 5, 6, 9, 10, 12]
    result = _least_generators(
        pairs, lambda idx, k: 0, 1, lower=1, upper=6, fallback=pairs, kmax=3, budget=100_000,
    )
    assert result.value is None
    assert result.lower == 4


def test_na_oracle(ab_dfa, ba_dfa):
    """Test n-alpha of a*b."""
    assert CertifyService.na_oracle(ab_dfa, ba_dfa) == 2


def test_na_search_edge_languages(sigma_star, empty_language, l3_system):
    """Test n-alpha of the trivial languages and A_3."""
    assert CertifyService.na_search(LangalgService.from_dfa(sigma_star)).value == 1
    assert CertifyService.na_search(LangalgService.from_dfa(empty_language)).value == 0
    assert CertifyService.na_search(l3_system).value == 3


def test_na_search_kmax(ab_system):
    """Test a bound below n-alpha gives no value."""
    assert CertifyService.na_search(ab_system, kmax=1).value is None


def test_nmu_oracle(ab_dfa, l3_dfa):
    """Test n-mu never exceeds n-alpha."""
    assert CertifyService.nmu_oracle(LangalgService.syntactic_monoid(ab_dfa)) == 2
    assert CertifyService.nmu_oracle(LangalgService.syntactic_monoid(l3_dfa)) == 3


def test_nmu_search_needs_syntactic_monoid():
    """Test a recognizer larger than the syntactic monoid is rejected."""
    # all words over {a}, recognized by a two-element monoid
    m = parse_monoid("monoid 2\n0 1\n1 1\nh a 1\nfinal 0 1\n")
    with pytest.raises(NotSyntactic):
        CertifyService.nmu_search(m)


def test_na_witness_is_certified(ab_system, l3_system, even_a):
    """Test the witness nfa of the search yields a certificate of that size."""
    for ds in (ab_system, l3_system, LangalgService.from_dfa(even_a)):
        result = CertifyService.na_search(ds)
        witness = CertifyService.na_witness(ds, result)
        assert witness.state_count == result.value
        assert AutomataService.equivalent(witness, ds.lang_dfa)
        c = CertifyService.extract_certificate(witness, ds.lang_dfa, ds.rev_dfa)
        assert CertifyService.verify(c, CertifyService.instance_of(ds), result.value)


def test_nmu_witness_is_certified(ab_dfa):
    """Test the subatomic witness verifies."""
    m = LangalgService.syntactic_monoid(ab_dfa)
    result = CertifyService.nmu_search(m)
    witness = CertifyService.nmu_witness(m, result)
    assert AutomataService.equivalent(witness, ab_dfa)
    c = CertifyService.extract_subatomic_certificate(witness, m)
    assert CertifyService.verify_subatomic_certificate(m, c, result.value)
