"""
Certificates, biclique covers and reduction bundles.
"""
from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.automata import Alphabet, Dfa
from app.models.language import LowerPath, MonoidRecognizer, UpperPath
from app.models.relation import Rel


class BicliqueCover(BaseModel):
    """List of (row bitset, column bitset) pairs."""
    bicliques: Tuple[Tuple[int, int], ...] = ()

    model_config = ConfigDict(frozen=True)

    def __len__(self) -> int:
        return len(self.bicliques)


class Certificate(BaseModel):
    """
    Relations S, P, Q and one T per letter.

    P is LD(L) x S.cols, Q is S.rows x (upper carrier), each T is S.rows x S.cols.
    """
    kind: Literal["atomic", "subatomic"]
    alphabet: Alphabet
    s: Rel
    p: Rel
    q: Rel
    t: Tuple[Rel, ...]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_letters(self) -> "Certificate":
        if len(self.t) != len(self.alphabet):
            raise ValueError("one T relation per letter is required")
        return self

    def t_for(self, symbol: str) -> Rel:
        return self.t[self.alphabet.index(symbol)]


class AtomicCertificate(Certificate):
    """Certificate over the Nerode classes."""
    kind: Literal["atomic"] = "atomic"


class SubatomicCertificate(Certificate):
    """Certificate over the syntactic monoid."""
    kind: Literal["subatomic"] = "subatomic"


class CertificateInstance(BaseModel):
    """The lower and upper paths a certificate has to connect."""
    kind: Literal["atomic", "subatomic"]
    lang_dfa: Dfa = Field(..., description="Minimal dfa of L, for the final equivalence check")
    lower: LowerPath
    upper: UpperPath
    accepts_empty_word: bool
    nonempty: bool

    model_config = ConfigDict(frozen=True)


class OracleResult(BaseModel):
    """Least generator count found by a search, with the witnessing generators."""
    value: Optional[int] = None
    generators: Tuple[int, ...] = Field(default=(), description="J(S) as bitsets")
    lower: int = 0
    upper: Optional[int] = None

    model_config = ConfigDict(frozen=True)


class ReductionInstance(BaseModel):
    """Automata and monoid produced from a biclique-cover instance."""
    dfa_l: Dfa
    dfa_rl: Dfa
    monoid: MonoidRecognizer
    k: int
    source_rel: Rel

    model_config = ConfigDict(frozen=True)
