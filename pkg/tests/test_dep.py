"""
Tests for the Dep service.
"""
from itertools import product

import pytest

from app.core.errors import InvalidMorphism, ObjectMismatch, ShapeMismatch
from app.models.relation import Rel, compose, converse, members
from app.services.dep_service import DepService, union_closure
from app.services.semilattice_service import SemilatticeService


def test_maximal_witnesses_over_identities(r0):
    """Test witnesses of a morphism between identity objects."""
    ident = Rel.identity(2)
    lower, upper = DepService.maximal_witnesses(r0.bits, ident, ident)
    assert lower == (3, 2)
    assert upper == (1, 3)


def test_maximal_witnesses_shape(r0):
    """Test a wrongly shaped relation is rejected."""
    with pytest.raises(ShapeMismatch):
        DepService.maximal_witnesses((1,), r0, r0)


def test_identity_morphism(r0):
    """Test the identity morphism is the relation itself."""
    ident = DepService.identity_morphism(r0)
    assert ident.bits == r0.bits
    assert ident.lower == (3, 2)
    assert ident.upper == (1, 3)


def test_invalid_morphism(r0):
    """Test a relation not factoring through the target is rejected."""
    assert not DepService.is_dep_morphism((1, 0), r0, r0)
    with pytest.raises(InvalidMorphism):
        DepService.morphism((1, 0), r0, r0)


def test_compose_with_identity(r0):
    """Test identities are neutral for composition."""
    ident = DepService.identity_morphism(r0)
    assert DepService.dep_compose(ident, ident).bits == r0.bits


def test_compose_object_mismatch(r0):
    """Test composition checks the shared object."""
    with pytest.raises(ObjectMismatch):
        DepService.dep_compose(
            DepService.identity_morphism(r0), DepService.identity_morphism(Rel.identity(2))
        )


def test_union_closure():
    """Test unions of generators in canonical order."""
    assert union_closure([1, 2]) == [0, 1, 2, 3]
    assert union_closure([]) == [0]


def test_open_sets(r0):
    """Test open sets of the fixed relation."""
    assert DepService.open_sets(r0) == [0, 2, 3]


def test_open_of_is_chain(r0):
    """Test the open sets of the fixed relation form a 3-chain."""
    assert SemilatticeService.is_isomorphic(DepService.open_of(r0), SemilatticeService.chain(3))


def test_interior(r0):
    """Test the largest open set inside a column subset."""
    assert DepService.interior(r0, 0b01) == 0
    assert DepService.interior(r0, 0b10) == 0b10
    assert DepService.interior(r0, 0b11) == 0b11


def test_open_irreducibles(r0):
    """Test irreducible open sets of the fixed relation."""
    assert DepService.open_irreducibles(r0) == ([2, 3], [0, 2])


def test_pirr_of_chain(c3):
    """Test Pirr of a chain."""
    pirr = DepService.pirr_of(c3)
    assert pirr.rows == ("1", "2")
    assert pirr.cols == ("0", "1")
    assert pirr.bits == (1, 3)


def test_pirr_of_diamond(m2):
    """Test Pirr of the diamond is the anti-identity."""
    assert DepService.pirr_of(m2).bits == (2, 1)


@pytest.mark.slow
def test_open_of_pirr_recovers_lattice():
    """Test Open(Pirr(S)) is isomorphic to S."""
    for s in SemilatticeService.enumerate_lattices(5):
        assert SemilatticeService.is_isomorphic(DepService.open_of(DepService.pirr_of(s)), s)


def test_open_morphism_of_identity(r0):
    """Test Open sends identities to identities."""
    f = DepService.open_morphism(DepService.identity_morphism(r0))
    assert f.map == (0, 1, 2)


def test_pirr_morphism_of_identity(m2):
    """Test Pirr of an identity is the Pirr relation itself."""
    p = DepService.pirr_morphism(SemilatticeService.identity(m2))
    assert p.bits == DepService.pirr_of(m2).bits
    assert DepService.is_dep_morphism(p.bits, p.src, p.dst)


def test_pirr_morphisms_are_dep_morphisms(c3, m2):
    """Test every lattice morphism maps to a Dep-morphism."""
    for f in SemilatticeService.morphisms(c3, m2):
        p = DepService.pirr_morphism(f)
        assert DepService.is_dep_morphism(p.bits, p.src, p.dst)
        assert DepService.maximal_witnesses(p.bits, p.src, p.dst) == (p.lower, p.upper)


def test_relabel_is_isomorphism(r0):
    """Test permuting rows and columns gives an isomorphic object."""
    target, iso = DepService.relabel(r0, [1, 0], [1, 0])
    assert target.bits == (1, 3)
    assert target.rows == ("1", "0")
    assert DepService.is_dep_isomorphism(iso)


def test_representation_rel(r0):
    """Test the representation relation recovers the family."""
    joins, meets = DepService.open_irreducibles(r0)
    rep = DepService.representation_rel(joins, meets)
    assert rep.bits == (1, 3)
    assert SemilatticeService.is_isomorphic(DepService.open_of(rep), DepService.open_of(r0))


def random_pirr_morphisms(rng, lattices, count):
    """Random composable Pirr images f: a -> b, g: b -> c, h: c -> d."""
    homs = {}
    for _ in range(count):
        picks = [lattices[int(i)] for i in rng.integers(len(lattices), size=4)]
        chain = []
        for src, dst in zip(picks, picks[1:]):
            key = (id(src), id(dst))
            if key not in homs:
                homs[key] = list(SemilatticeService.morphisms(src, dst))
            options = homs[key]
            chain.append(DepService.pirr_morphism(options[int(rng.integers(len(options)))]))
        yield tuple(chain)


def test_composition_formulas_agree(rng, c3, m2, n5):
    """Test the five relational forms of a composite coincide."""
    for p, q, _ in random_pirr_morphisms(rng, [c3, m2, n5], 20):
        forms = DepService.composition_formulas(p, q)
        assert len(set(forms)) == 1
        assert forms[0] == DepService.dep_compose(p, q).bits


def test_dep_compose_identities_and_associativity(rng, c3, m2, n5):
    """Test identities are neutral on both sides and composition is associative."""
    for p, q, t in random_pirr_morphisms(rng, [c3, m2, n5], 20):
        assert DepService.dep_compose(DepService.identity_morphism(p.src), p).bits == p.bits
        assert DepService.dep_compose(p, DepService.identity_morphism(p.dst)).bits == p.bits
        left = DepService.dep_compose(DepService.dep_compose(p, q), t)
        right = DepService.dep_compose(p, DepService.dep_compose(q, t))
        assert left.bits == right.bits


def test_open_preserves_composition(rng, c3, m2, n5):
    """Test Open sends P then Q to Open(Q) after Open(P)."""
    for p, q, _ in random_pirr_morphisms(rng, [c3, m2, n5], 20):
        composite = DepService.open_morphism(DepService.dep_compose(p, q))
        chained = SemilatticeService.compose(DepService.open_morphism(p), DepService.open_morphism(q))
        assert composite.map == chained.map


def test_is_dep_morphism_matches_witness_search(rng):
    """Test validity against an exhaustive search for lower and upper witnesses."""
    for _ in range(15):
        r = Rel.from_matrix(rng.integers(0, 2, size=(3, 3)).astype(bool))
        s = Rel.from_matrix(rng.integers(0, 2, size=(3, 3)).astype(bool))
        if rng.random() < 0.5:
            p = tuple(int(v) for v in rng.integers(0, 8, size=3))
        else:
            p = compose(tuple(int(v) for v in rng.integers(0, 8, size=3)), s.bits)
        has_lower = any(
            compose(lower, s.bits) == p for lower in product(range(8), repeat=3)
        )
        has_upper = any(
            compose(r.bits, converse(upper, r.n_cols)) == p for upper in product(range(8), repeat=3)
        )
        assert DepService.is_dep_morphism(p, r, s) == (has_lower and has_upper)


def test_reduction_iso_of_fixed_relation(r0):
    """Test the isomorphism from a relation to Pirr of its open sets."""
    iso = DepService.reduction_iso(r0)
    assert iso.dst.bits == DepService.pirr_of(DepService.open_of(r0)).bits
    assert iso.bits == (3, 1)
    assert DepService.is_dep_isomorphism(iso)


def test_reduction_iso_on_random_relations(rng):
    """Test r is isomorphic to Pirr(Open(r)) on random 4x4 relations."""
    for _ in range(40):
        r = Rel.from_matrix(rng.integers(0, 2, size=(4, 4)).astype(bool))
        assert DepService.is_dep_isomorphism(DepService.reduction_iso(r))


@pytest.mark.slow
def test_reduction_iso_on_all_3x3_relations():
    """Test the reduction isomorphism on every 3x3 relation."""
    for bits in product(range(8), repeat=3):
        r = Rel.build(list(bits), 3)
        assert DepService.is_dep_isomorphism(DepService.reduction_iso(r))


def test_generator_replacement(m2, n5, c3):
    """Test padding J(S) and M(S) with every element keeps the open sets up to restriction."""
    for s in (c3, m2, n5):
        _, meets = SemilatticeService.irreducibles(s)
        everything = list(range(s.size))
        wide = DepService.nleq_rel(s, everything, everything)
        assert SemilatticeService.is_isomorphic(DepService.open_of(wide), s)
        restricted = [
            sum(1 << meets.index(m) for m in members(o) if m in meets)
            for o in DepService.open_sets(wide)
        ]
        assert sorted(restricted) == sorted(DepService.open_sets(DepService.pirr_of(s)))
        assert len(set(restricted)) == len(restricted)
