"""
`analyze A B`: sizes, dimension, class flags and oracle values of a language.
"""
import argparse
import logging

from app.cli.common import add_search_flags, add_seed_flag, load_dfa
from app.core.errors import BudgetExceeded
from app.schemas.reports import AnalyzeReport
from app.services.biclique_service import BicliqueService
from app.services.certify_service import CertifyService
from app.services.langalg_service import LangalgService
from app.services.semilattice_service import SemilatticeService
from app.services.speclang_service import SpeclangService

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("analyze", help="Report the algebraic invariants of a language")
    parser.add_argument("dfa", help="Dfa of L")
    parser.add_argument("reverse", help="Dfa of the reverse of L")
    add_search_flags(parser)
    add_seed_flag(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    ds = LangalgService.derivative_system(load_dfa(args.dfa), load_dfa(args.reverse))
    monoid = LangalgService.syntactic_monoid(ds.lang_dfa)
    dr = LangalgService.lower_path(ds).dr

    try:
        dim, _ = BicliqueService.exact_dim(dr, kmax=args.kmax, budget=args.budget, seed=args.seed)
    except BudgetExceeded as e:
        logger.warning(f"dim not decided: {e}")
        dim = None

    try:
        sld = LangalgService.sld_lattice(ds)
        sld_size, distributive = sld.lattice.size, SemilatticeService.is_distributive(sld.lattice)
    except BudgetExceeded as e:
        logger.warning(f"SLD not materialized: {e}")
        sld_size, distributive = None, None

    try:
        na = CertifyService.na_search(ds, kmax=args.kmax, budget=args.budget).value
    except BudgetExceeded as e:
        logger.warning(f"n_alpha not decided: {e}")
        na = None

    try:
        nmu = CertifyService.nmu_search(monoid, kmax=args.kmax, budget=args.budget).value
    except BudgetExceeded as e:
        logger.warning(f"n_mu not decided: {e}")
        nmu = None

    report = AnalyzeReport(
        dfa_states=ds.lang_dfa.state_count,
        reverse_states=ds.rev_dfa.state_count,
        syn_size=monoid.size,
        dim=dim,
        nuclear=SpeclangService.is_nuclear(ds),
        group=SpeclangService.is_group_language(monoid),
        unary=SpeclangService.is_unary(ds.lang_dfa),
        bideterministic=SpeclangService.is_bideterministic(ds.lang_dfa),
        sld_size=sld_size,
        sld_distributive=distributive,
        na=na,
        nmu=nmu,
    )
    print(report.render(), end="")
    return 0
