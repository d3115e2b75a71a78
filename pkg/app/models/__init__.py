"""
Domain models.
"""
from app.models.automata import Alphabet, Dfa, Nfa
from app.models.relation import Rel, DepMorphism
from app.models.lattice import FinLattice, JslMorphism
from app.models.language import (
    DerivativeSystem, LowerPath, UpperPath, MonoidRecognizer, JslDfa
)
from app.models.certificate import (
    BicliqueCover, Certificate, AtomicCertificate, SubatomicCertificate,
    CertificateInstance, OracleResult, ReductionInstance
)

__all__ = [
    "Alphabet", "Dfa", "Nfa", "Rel", "DepMorphism", "FinLattice", "JslMorphism",
    "DerivativeSystem", "LowerPath", "UpperPath", "MonoidRecognizer", "JslDfa",
    "BicliqueCover", "Certificate", "AtomicCertificate", "SubatomicCertificate",
    "CertificateInstance", "OracleResult", "ReductionInstance"
]
