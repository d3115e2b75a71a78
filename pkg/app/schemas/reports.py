"""
Pydantic report models printed by the command line as `key: value` lines.
"""
from typing import List, Optional

from pydantic import BaseModel, Field


def _render_value(value: object) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


class Report(BaseModel):
    """Base report; fields render in declaration order."""

    def render(self) -> str:
        lines = [f"{key}: {_render_value(value)}" for key, value in self.model_dump().items()]
        return "\n".join(lines) + "\n"


class AnalyzeReport(Report):
    """Summary of a language given by a reverse pair of dfas."""
    dfa_states: int = Field(..., description="States of the minimal dfa of L")
    reverse_states: int = Field(..., description="States of the minimal dfa of r(L)")
    syn_size: int
    dim: Optional[int] = Field(None, description="Bipartite dimension of D_L")
    nuclear: bool
    group: bool
    unary: bool
    bideterministic: bool
    sld_size: Optional[int] = None
    sld_distributive: Optional[bool] = None
    na: Optional[int] = None
    nmu: Optional[int] = None


class DimReport(Report):
    """Bipartite dimension of a relation."""
    rows: int
    cols: int
    dim: Optional[int]
    fooling_bound: int


class OracleReport(Report):
    """Value of a state-complexity oracle."""
    kind: str
    value: Optional[int]
    lower: int = 0
    upper: Optional[int] = None


class VerifyReport(Report):
    """Outcome of a certificate check."""
    kind: str
    k: int
    valid: bool


class ReduceReport(Report):
    """Files written by a reduction."""
    k: int
    lattice_size: int
    alphabet_size: int
    dfa_states: int
    reverse_states: int
    syn_size: int
    files: List[str] = Field(default_factory=list)

    def render(self) -> str:
        head = self.model_dump(exclude={"files"})
        lines = [f"{key}: {_render_value(value)}" for key, value in head.items()]
        lines.extend(f"file: {name}" for name in self.files)
        return "\n".join(lines) + "\n"


class SweepReport(Report):
    """Counts from the seeded property sweeps; every *_violations field must be zero."""
    seed: int
    lattices: int = 0
    lattice_violations: int = 0
    relations: int = 0
    relation_violations: int = 0
    functor_pairs: int = 0
    functor_violations: int = 0
    reductions: int = 0
    reduction_violations: int = 0
    languages: int = 0
    chain_violations: int = 0
    ns_undecided: int = 0
    certificates: int = 0
    certificate_violations: int = 0
    mutations: int = 0
    mutations_verified: int = 0
    mutation_violations: int = 0
    nuclear: int = 0
    nuclear_violations: int = 0
    unary: int = 0
    unary_violations: int = 0
    group: int = 0
    group_violations: int = 0
    atomicity_samples: int = 0
    atomicity_violations: int = 0

    @property
    def violations(self) -> int:
        return sum(v for k, v in self.model_dump().items() if k.endswith("_violations"))
