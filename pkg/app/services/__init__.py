"""
Service layer.
"""
from app.services.automata_service import AutomataService
from app.services.semilattice_service import SemilatticeService
from app.services.dep_service import DepService
from app.services.langalg_service import LangalgService
from app.services.biclique_service import BicliqueService
from app.services.certify_service import CertifyService
from app.services.speclang_service import SpeclangService

__all__ = [
    "AutomataService", "SemilatticeService", "DepService", "LangalgService",
    "BicliqueService", "CertifyService", "SpeclangService",
]
