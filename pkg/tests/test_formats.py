"""
Tests for the text formats.
"""
import pytest

from app.core.errors import ParseError
from app.models.certificate import BicliqueCover
from app.models.relation import Rel
from app.schemas.formats import (
    emit_automaton, emit_certificate, emit_cover, emit_lattice, emit_monoid,
    emit_morphism, emit_rel, file_digest, first_keyword, parse_automaton,
    parse_certificate, parse_cover, parse_dfa, parse_lattice, parse_monoid,
    parse_morphism, parse_rel, read_text,
)
from app.services.certify_service import CertifyService
from app.services.langalg_service import LangalgService
from app.services.semilattice_service import SemilatticeService

DFA_HEAD = "type dfa\nalphabet a b\nstates 2\ninit 0\nfinal 1\n"


def test_parse_fixture_dfa(fixtures_dir, ab_dfa):
    """Test the a*b fixture parses to the minimal dfa."""
    path = fixtures_dir / "ab.dfa"
    assert parse_dfa(read_text(path), str(path)) == ab_dfa


def test_automaton_emit_parse(ab_dfa, non_atomic_ab):
    """Test emitted automata parse back."""
    assert parse_automaton(emit_automaton(ab_dfa)) == ab_dfa
    assert parse_automaton(emit_automaton(non_atomic_ab)) == non_atomic_ab


def test_comments_and_hash_symbols():
    """Test comments are dropped while J#0 stays a symbol."""
    text = (
        "# lattice letters\n"
        "type dfa\n"
        "alphabet J#0 M#0   # two letters\n"
        "states 1\n"
        "\n"
        "init 0\n"
        "final 0\n"
        "trans 0 J#0 0\n"
        "trans 0 M#0 0 # loop\n"
    )
    d = parse_dfa(text)
    assert d.alphabet.symbols == ("J#0", "M#0")
    assert d.finals == frozenset({0})


def test_incomplete_dfa():
    """Test a missing transition is reported."""
    text = DFA_HEAD + "trans 0 a 0\ntrans 0 b 1\ntrans 1 a 1\n"
    with pytest.raises(ParseError) as exc:
        parse_dfa(text, "x.dfa")
    assert exc.value.path == "x.dfa"
    assert "not complete" in str(exc.value)


def test_duplicate_dfa_transition():
    """Test a second transition on the same symbol carries its line."""
    text = DFA_HEAD + "trans 0 a 0\ntrans 0 a 1\n"
    with pytest.raises(ParseError) as exc:
        parse_dfa(text)
    assert exc.value.line == 7


def test_unknown_symbol():
    """Test transitions on symbols outside the alphabet."""
    with pytest.raises(ParseError):
        parse_automaton(DFA_HEAD + "trans 0 c 0\n")


def test_parse_dfa_rejects_nfa(non_atomic_ab):
    """Test a dfa is required where one is expected."""
    with pytest.raises(ParseError):
        parse_dfa(emit_automaton(non_atomic_ab))


def test_parse_lattice_fixture(fixtures_dir, m2):
    """Test the diamond fixture."""
    s = parse_lattice(read_text(fixtures_dir / "m2.lattice"))
    assert s.leq == m2.leq
    assert parse_lattice(emit_lattice(s)).leq == s.leq


def test_parse_lattice_rejects_non_order():
    """Test a non-antisymmetric table is a parse error."""
    with pytest.raises(ParseError):
        parse_lattice("lattice 2\n11\n11\n")


def test_morphism_emit_parse(m2):
    """Test morphisms resolve their lattice files."""
    f = SemilatticeService.identity(m2)
    text = emit_morphism(f, "m2.lattice", "m2.lattice")
    back = parse_morphism(text, lambda name: m2)
    assert back.map == (0, 1, 2, 3)


def test_parse_rel_fixture(fixtures_dir, r0):
    """Test the fixed relation file."""
    assert parse_rel(read_text(fixtures_dir / "r0.rel")).bits == r0.bits


def test_rel_labels_and_zero_width():
    """Test label lines and zero-width rows."""
    r = Rel.build([0, 0], 0, rows=["x", "y"])
    text = emit_rel(r)
    assert "-" in text.splitlines()
    assert parse_rel(text) == r
    labelled = Rel.build([1, 2], 2, rows=["eps", "b.a"], cols=["p", "q"])
    assert parse_rel(emit_rel(labelled)) == labelled


def test_parse_rel_bad_row():
    """Test a row of the wrong width."""
    with pytest.raises(ParseError):
        parse_rel("rel 1 2\n101\n")


def test_monoid_emit_parse(ab_dfa):
    """Test monoid files."""
    m = LangalgService.syntactic_monoid(ab_dfa)
    assert parse_monoid(emit_monoid(m)) == m


def test_parse_monoid_rejects_non_associative():
    """Test the monoid axioms are checked on load."""
    with pytest.raises(ParseError):
        # (1*2)*1 = 2 but 1*(2*1) = 1
        parse_monoid("monoid 3\n0 1 2\n1 2 1\n2 2 2\nh a 1\nfinal 1\n")


def test_cover_emit_parse():
    """Test biclique cover files."""
    cover = BicliqueCover(bicliques=((0b01, 0b11), (0b10, 0b10)))
    text = emit_cover(cover)
    assert text.splitlines()[0] == "rows: 0 | cols: 0 1"
    assert parse_cover(text) == cover


def test_certificate_emit_parse(ab_system):
    """Test certificate files keep k and the instance digest."""
    rfsa = LangalgService.canonical_rfsa(ab_system)
    c = CertifyService.extract_certificate(rfsa, ab_system.lang_dfa, ab_system.rev_dfa)
    digest = file_digest("a", "b")
    cert, k, recorded = parse_certificate(emit_certificate(c, 2, digest))
    assert cert == c
    assert k == 2
    assert recorded == digest


def test_certificate_missing_letter(ab_system):
    """Test every letter needs a T section."""
    rfsa = LangalgService.canonical_rfsa(ab_system)
    c = CertifyService.extract_certificate(rfsa, ab_system.lang_dfa, ab_system.rev_dfa)
    text = emit_certificate(c, 2, "")
    cut = text[: text.index("T b")]
    with pytest.raises(ParseError):
        parse_certificate(cut)


def test_file_digest_is_order_sensitive():
    """Test the digest depends on file order."""
    assert file_digest("a", "b") != file_digest("b", "a")


def test_first_keyword(fixtures_dir):
    """Test file kinds are told apart by the first keyword."""
    assert first_keyword(read_text(fixtures_dir / "ab.dfa")) == "type"
    assert first_keyword(read_text(fixtures_dir / "r0.rel")) == "rel"
    assert first_keyword("") == ""


def test_read_missing_file(tmp_path):
    """Test unreadable files are parse errors."""
    with pytest.raises(ParseError):
        read_text(tmp_path / "missing.dfa")


def test_parse_fixture_group_language(fixtures_dir, l3_dfa, c3):
    """Test the A_3 and chain fixtures."""
    assert parse_dfa(read_text(fixtures_dir / "l3.dfa")) == l3_dfa
    assert parse_lattice(read_text(fixtures_dir / "c3.lattice")).leq == c3.leq
