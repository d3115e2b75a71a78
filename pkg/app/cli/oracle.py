"""
`oracle <A> [B] --kind ns|na|nmu`: state-complexity oracles.
"""
import argparse

from app.cli.common import add_search_flags, load_dfa, load_monoid
from app.core.errors import InputError
from app.schemas.formats import first_keyword, read_text
from app.schemas.reports import OracleReport
from app.services.automata_service import AutomataService
from app.services.certify_service import CertifyService
from app.services.langalg_service import LangalgService


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("oracle", help="Compute ns, n-alpha or n-mu by exhaustive search")
    parser.add_argument("inputs", nargs="+", help="A [B] dfa files, or a monoid file for nmu")
    parser.add_argument("--kind", choices=["ns", "na", "nmu"], required=True)
    add_search_flags(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    if len(args.inputs) > 2:
        raise InputError("oracle takes at most two input files")
    first = args.inputs[0]
    if args.kind == "nmu" and first_keyword(read_text(first)) == "monoid":
        result = CertifyService.nmu_search(load_monoid(first), kmax=args.kmax, budget=args.budget)
        report = OracleReport(kind="nmu", value=result.value, lower=result.lower, upper=result.upper)
    else:
        a = load_dfa(first)
        if len(args.inputs) == 2:
            ds = LangalgService.derivative_system(a, load_dfa(args.inputs[1]))
        else:
            ds = LangalgService.from_dfa(a)
        if args.kind == "ns":
            value = AutomataService.ns_bruteforce(ds.lang_dfa, kmax=args.kmax, budget=args.budget)
            report = OracleReport(kind="ns", value=value)
        elif args.kind == "na":
            result = CertifyService.na_search(ds, kmax=args.kmax, budget=args.budget)
            report = OracleReport(kind="na", value=result.value, lower=result.lower, upper=result.upper)
        else:
            monoid = LangalgService.syntactic_monoid(ds.lang_dfa)
            result = CertifyService.nmu_search(monoid, kmax=args.kmax, budget=args.budget)
            report = OracleReport(kind="nmu", value=result.value, lower=result.lower, upper=result.upper)
    print(report.render(), end="")
    return 0 if report.value is not None else 1
