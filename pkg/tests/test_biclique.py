"""
Tests for the biclique service.
"""
import numpy as np
import pytest

from app.core.errors import BudgetExceeded
from app.models.certificate import BicliqueCover
from app.models.relation import Rel
from app.services.biclique_service import BicliqueService


def test_verify_cover(r0):
    """Test a valid cover of the fixed relation."""
    cover = BicliqueCover(bicliques=((0b01, 0b11), (0b10, 0b10)))
    assert BicliqueService.verify_cover(r0, cover)


def test_verify_cover_missing_edge(r0):
    """Test a cover that misses an edge."""
    cover = BicliqueCover(bicliques=((0b01, 0b11),))
    assert not BicliqueService.verify_cover(r0, cover)


def test_verify_cover_outside_relation(r0):
    """Test a biclique leaving the relation."""
    cover = BicliqueCover(bicliques=((0b11, 0b11),))
    assert not BicliqueService.verify_cover(r0, cover)


def test_maximal_bicliques(r0):
    """Test maximal bicliques in canonical order."""
    assert BicliqueService.maximal_bicliques(r0) == [(0b01, 0b11), (0b11, 0b10)]


def test_fooling_bound(r0):
    """Test the greedy fooling set."""
    assert BicliqueService.fooling_bound(r0) == 2


def test_exact_dim(r0):
    """Test the dimension of the fixed relation."""
    dim, cover = BicliqueService.exact_dim(r0)
    assert dim == 2
    assert len(cover) == 2
    assert BicliqueService.verify_cover(r0, cover)


def test_exact_dim_empty_relation():
    """Test the empty relation needs no bicliques."""
    dim, cover = BicliqueService.exact_dim(Rel.build([0, 0], 3))
    assert dim == 0
    assert len(cover) == 0


def test_exact_dim_identity():
    """Test the identity needs one biclique per edge."""
    dim, cover = BicliqueService.exact_dim(Rel.identity(4))
    assert dim == 4
    assert BicliqueService.verify_cover(Rel.identity(4), cover)


def test_exact_dim_crown(crown4):
    """Test the crown needs four bicliques."""
    dim, cover = BicliqueService.exact_dim(crown4)
    assert dim == 4
    assert BicliqueService.verify_cover(crown4, cover)


def test_exact_dim_kmax(crown4):
    """Test a bound below the dimension gives no cover."""
    assert BicliqueService.exact_dim(crown4, kmax=3) == (None, None)


def test_exact_dim_budget(crown4):
    """Test the budget error reports the bounds."""
    with pytest.raises(BudgetExceeded) as exc:
        BicliqueService.exact_dim(crown4, budget=1)
    assert exc.value.lower == 2
    assert exc.value.upper >= 4


def test_greedy_cover(crown4):
    """Test the greedy cover is valid."""
    assert BicliqueService.verify_cover(crown4, BicliqueService.greedy_cover(crown4))


def test_random_relations_between_bounds(rng):
    """Test the dimension lies between the fooling bound and the greedy cover."""
    for _ in range(25):
        matrix = rng.integers(0, 2, size=(4, 4)).astype(bool)
        r = Rel.from_matrix(matrix)
        dim, cover = BicliqueService.exact_dim(r, kmax=4)
        assert BicliqueService.verify_cover(r, cover)
        assert BicliqueService.fooling_bound(r) <= dim <= len(BicliqueService.greedy_cover(r))
        assert dim <= int(np.count_nonzero(matrix.any(axis=1)))


def test_randomized_greedy_cover(crown4, rng):
    """Test randomized tie-breaking still yields a valid cover."""
    for _ in range(5):
        assert BicliqueService.verify_cover(crown4, BicliqueService.greedy_cover(crown4, rng))


def test_seed_does_not_change_dimension(rng):
    """Test the seeded restarts only move the witness, never the dimension."""
    for _ in range(10):
        r = Rel.from_matrix(rng.integers(0, 2, size=(4, 4)).astype(bool))
        plain, _ = BicliqueService.exact_dim(r, kmax=4)
        for seed in (0, 1, 2):
            dim, cover = BicliqueService.exact_dim(r, kmax=4, seed=seed)
            assert dim == plain
            assert BicliqueService.verify_cover(r, cover)
    assert BicliqueService.exact_dim(Rel.build([0, 0], 2), seed=3) == (0, BicliqueCover())
