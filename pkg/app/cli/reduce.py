"""
`reduce <rel> <k>`: write the lattice-language instances for (rel, k).
"""
import argparse
from pathlib import Path

from app.cli.common import load_rel
from app.schemas.formats import emit_automaton, emit_monoid, file_digest, read_text
from app.schemas.reports import ReduceReport
from app.services.dep_service import DepService
from app.services.speclang_service import SpeclangService


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("reduce", help="Reduce a relation to a lattice language")
    parser.add_argument("rel", help="Relation file")
    parser.add_argument("k", type=int, help="Dimension bound carried into the instance")
    parser.add_argument("--out", default=".", help="Directory for the generated files")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    r = load_rel(args.rel)
    inst = SpeclangService.lattice_language_instance(r, args.k)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    texts = {
        "l.dfa": emit_automaton(inst.dfa_l),
        "rl.dfa": emit_automaton(inst.dfa_rl),
        "syn.monoid": emit_monoid(inst.monoid),
    }
    for name, text in texts.items():
        (out / name).write_text(text, encoding="utf-8")
    manifest = "\n".join([
        f"k {args.k}",
        f"source {args.rel} {file_digest(read_text(args.rel))}",
        f"atomic l.dfa rl.dfa {file_digest(texts['l.dfa'], texts['rl.dfa'])}",
        f"subatomic syn.monoid {file_digest(texts['syn.monoid'])}",
    ]) + "\n"
    (out / "manifest").write_text(manifest, encoding="utf-8")

    report = ReduceReport(
        k=args.k,
        lattice_size=DepService.open_of(r).size,
        alphabet_size=len(inst.dfa_l.alphabet),
        dfa_states=inst.dfa_l.state_count,
        reverse_states=inst.dfa_rl.state_count,
        syn_size=inst.monoid.size,
        files=[str(out / name) for name in [*texts, "manifest"]],
    )
    print(report.render(), end="")
    return 0
