"""
Tests for the acceptance sweeps.
"""
import pytest

from app.core.config import Settings, settings
from app.schemas.reports import SweepReport
from scripts.sweep import (
    generators_replaceable, sweep_functor_laws, sweep_reduction, sweep_relations,
)


def test_sweep_sizes():
    """Test the default sample counts of each sweep."""
    defaults = Settings()
    assert defaults.SWEEP_RELATIONS == 500
    assert defaults.SWEEP_FUNCTOR_PAIRS == 1000
    assert defaults.SWEEP_ATOMICITY == 1000
    assert defaults.SWEEP_MUTATIONS == 100


def test_relation_sweep(rng, monkeypatch):
    """Test the reduction isomorphism sweep on a few relations."""
    monkeypatch.setattr(settings, "SWEEP_RELATIONS", 20)
    report = SweepReport(seed=0)
    sweep_relations(rng, report)
    assert report.relations == 20
    assert report.relation_violations == 0


def test_functor_sweep(rng, monkeypatch):
    """Test the functor and composition laws on a few triples."""
    monkeypatch.setattr(settings, "SWEEP_FUNCTOR_PAIRS", 25)
    report = SweepReport(seed=0)
    sweep_functor_laws(4, rng, report)
    assert report.functor_pairs == 25
    assert report.functor_violations == 0


def test_generators_replaceable(c3, m2, n5):
    """Test generator replacement on the fixed lattices."""
    assert all(generators_replaceable(s) for s in (c3, m2, n5))


@pytest.mark.slow
def test_reduction_sweep():
    """Test the reduction sweep visits every nonzero 3x3 relation."""
    report = SweepReport(seed=0)
    sweep_reduction(report)
    assert report.reductions == 511
    assert report.reduction_violations == 0
