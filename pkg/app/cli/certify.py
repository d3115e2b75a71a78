"""
`certify verify|build|to-nfa`: certificate checking, extraction and decoding.
"""
import argparse
import logging
from typing import List, Tuple

from app.cli.common import load_automaton, load_instance, write_output
from app.core.errors import InputError, ShapeMismatch
from app.models.automata import Dfa
from app.models.certificate import CertificateInstance
from app.schemas.formats import (
    emit_automaton, emit_certificate, file_digest, parse_certificate, read_text,
)
from app.schemas.reports import VerifyReport
from app.services.certify_service import CertifyService

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("certify", help="Verify, build or decode certificates")
    verbs = parser.add_subparsers(dest="certify_verb", required=True)

    verify = verbs.add_parser("verify", help="Check a certificate against an instance")
    verify.add_argument("files", nargs="+", help="Instance files (A B, or a monoid) followed by the certificate")
    verify.add_argument("--k", type=int, default=None, help="Bound to check against (default: the file's k)")
    verify.set_defaults(handler=run_verify)

    build = verbs.add_parser("build", help="Extract a certificate from an nfa")
    build.add_argument("nfa", help="Atomic or subatomic nfa")
    build.add_argument("instance", nargs="+", help="A B, or a monoid file")
    build.add_argument("--out", default=None, help="Write the certificate here instead of stdout")
    build.set_defaults(handler=run_build)

    to_nfa = verbs.add_parser("to-nfa", help="Decode a verifying certificate into an nfa")
    to_nfa.add_argument("cert", help="Certificate file")
    to_nfa.add_argument("instance", nargs="+", help="A B, or a monoid file")
    to_nfa.add_argument("--out", default=None, help="Write the nfa here instead of stdout")
    to_nfa.set_defaults(handler=run_to_nfa)


def _instance(paths: List[str]) -> Tuple[CertificateInstance, object, str]:
    kind, value, texts = load_instance(paths)
    if kind == "atomic":
        a, b = value
        inst = CertifyService.atomic_instance(a, b)
    else:
        inst = CertifyService.subatomic_instance(value)
    return inst, value, file_digest(*texts)


def _load_certificate(path: str, digest: str):
    cert, k, recorded = parse_certificate(read_text(path), path)
    if recorded and recorded != digest:
        raise ShapeMismatch("certificate was written for other instance files")
    return cert, k


def run_verify(args: argparse.Namespace) -> int:
    if len(args.files) < 2:
        raise InputError("verify needs instance files and a certificate")
    inst, _, digest = _instance(args.files[:-1])
    cert, k = _load_certificate(args.files[-1], digest)
    k = k if args.k is None else args.k
    valid = CertifyService.verify(cert, inst, k)
    print(VerifyReport(kind=cert.kind, k=k, valid=valid).render(), end="")
    return 0 if valid else 1


def run_build(args: argparse.Namespace) -> int:
    inst, value, digest = _instance(args.instance)
    n = load_automaton(args.nfa)
    n = n.as_nfa() if isinstance(n, Dfa) else n
    if inst.kind == "atomic":
        a, b = value
        cert = CertifyService.extract_certificate(n, a, b)
    else:
        cert = CertifyService.extract_subatomic_certificate(n, value)
    write_output(emit_certificate(cert, n.state_count, digest), args.out)
    return 0


def run_to_nfa(args: argparse.Namespace) -> int:
    inst, _, digest = _instance(args.instance)
    cert, _ = _load_certificate(args.cert, digest)
    nfa = CertifyService.certificate_to_nfa(cert, inst)
    write_output(emit_automaton(nfa), args.out)
    return 0
