"""
`dim <rel> [kmax]`: bipartite dimension of a relation with a witness cover.
"""
import argparse

from app.cli.common import add_seed_flag, load_rel
from app.schemas.formats import emit_cover
from app.schemas.reports import DimReport
from app.services.biclique_service import BicliqueService


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("dim", help="Least number of bicliques covering a relation")
    parser.add_argument("rel", help="Relation file")
    parser.add_argument("kmax", type=int, nargs="?", default=None, help="Largest dimension to search for")
    parser.add_argument("--budget", type=int, default=None, help="Search-node budget")
    add_seed_flag(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    r = load_rel(args.rel)
    dim, cover = BicliqueService.exact_dim(r, kmax=args.kmax, budget=args.budget, seed=args.seed)
    report = DimReport(
        rows=r.n_rows, cols=r.n_cols, dim=dim, fooling_bound=BicliqueService.fooling_bound(r)
    )
    print(report.render(), end="")
    if cover is None:
        return 1
    print(emit_cover(cover), end="")
    return 0
