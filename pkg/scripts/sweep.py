"""
Seeded property sweeps over small lattices, relations and languages.

Checks the lattice/relation equivalence and the functor laws, the
lattice-language reduction on every 3x3 relation, the complexity chain
dim <= ns <= n_mu <= n_alpha on every minimal dfa over {a, b} with few
states, certificate extraction and mutation, the nuclear construction,
the unary and group collapses and the two atomicity tests. Prints a
`key: value` summary and exits 1 if anything was violated.
"""
import argparse
import logging
import sys
from itertools import product
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Tuple

import numpy as np

# Add parent directory to path
sys.path.append(str(Path(__file__).parent.parent))

from app.core.config import settings
from app.core.errors import BudgetExceeded, InvalidMorphism
from app.models.automata import Alphabet, Dfa, Nfa
from app.models.certificate import Certificate, CertificateInstance
from app.models.lattice import FinLattice, JslMorphism
from app.models.language import DerivativeSystem, MonoidRecognizer
from app.models.relation import Rel, members
from app.schemas.reports import SweepReport
from app.services.automata_service import AutomataService
from app.services.biclique_service import BicliqueService
from app.services.certify_service import CertifyService
from app.services.dep_service import DepService
from app.services.langalg_service import LangalgService
from app.services.semilattice_service import SemilatticeService
from app.services.speclang_service import SpeclangService

logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL.upper()),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger("sweep")

AB = Alphabet(symbols=("a", "b"))


def small_minimal_dfas(max_states: int) -> Iterator[Dfa]:
    """Every minimal dfa over {a, b} with at most max_states states, once each."""
    seen = set()
    for n in range(1, max_states + 1):
        for targets in product(range(n), repeat=2 * n):
            trans = tuple((targets[2 * q], targets[2 * q + 1]) for q in range(n))
            for finals in range(1 << n):
                d = Dfa(
                    alphabet=AB, state_count=n, init=0,
                    finals=frozenset(q for q in range(n) if finals >> q & 1), trans=trans,
                )
                m = AutomataService.minimize_dfa(d)
                key = (m.trans, m.finals)
                if key not in seen:
                    seen.add(key)
                    yield m


def mutate(c: Certificate, rng: np.random.Generator) -> Certificate:
    """Flip one random bit of S, P, Q or some T_a."""
    sections: List[Tuple[str, int, Rel]] = [("s", -1, c.s), ("p", -1, c.p), ("q", -1, c.q)]
    sections.extend(("t", idx, t) for idx, t in enumerate(c.t))
    sections = [sec for sec in sections if sec[2].n_rows and sec[2].n_cols]
    name, idx, rel = sections[int(rng.integers(len(sections)))]
    i, j = int(rng.integers(rel.n_rows)), int(rng.integers(rel.n_cols))
    bits = list(rel.bits)
    bits[i] ^= 1 << j
    flipped = Rel(rows=rel.rows, cols=rel.cols, bits=tuple(bits))
    if name == "t":
        ts = list(c.t)
        ts[idx] = flipped
        return c.model_copy(update={"t": tuple(ts)})
    return c.model_copy(update={name: flipped})


def check_certificate(
    c: Certificate,
    inst: CertificateInstance,
    k: int,
    target: Dfa,
    is_valid_nfa: Callable[[Nfa], bool],
    rng: np.random.Generator,
    report: SweepReport,
) -> None:
    report.certificates += 1
    if not CertifyService.verify(c, inst, k):
        logger.error(f"certificate of size {k} does not verify")
        report.certificate_violations += 1
        return
    decoded = CertifyService.certificate_to_nfa(c, inst)
    if not (AutomataService.equivalent(decoded, target) and is_valid_nfa(decoded)):
        report.certificate_violations += 1
    for _ in range(settings.SWEEP_MUTATIONS):
        bad = mutate(c, rng)
        report.mutations += 1
        if not CertifyService.verify(bad, inst, k):
            continue
        report.mutations_verified += 1
        nfa = CertifyService.certificate_to_nfa(bad, inst)
        if nfa.state_count > k or not AutomataService.equivalent(nfa, target) or not is_valid_nfa(nfa):
            logger.error("a mutated certificate verified but decodes to a wrong nfa")
            report.mutation_violations += 1


def sweep_lattices(max_size: int, report: SweepReport) -> None:
    """Open(Pirr(S)) is S again, also when J(S) and M(S) are padded with other elements."""
    for s in SemilatticeService.enumerate_lattices(max_size):
        report.lattices += 1
        if not SemilatticeService.is_isomorphic(DepService.open_of(DepService.pirr_of(s)), s):
            report.lattice_violations += 1
        if not generators_replaceable(s):
            report.lattice_violations += 1


def generators_replaceable(s: FinLattice) -> bool:
    """Cutting the open sets of "not below" on all elements down to M(S) gives those of Pirr(S), bijectively."""
    joins, meets = SemilatticeService.irreducibles(s)
    everything = list(range(s.size))
    wide = DepService.nleq_rel(s, everything, everything)
    narrow = set(DepService.open_sets(DepService.pirr_of(s)))
    restricted = {
        sum(1 << meets.index(m) for m in members(o) if m in meets)
        for o in DepService.open_sets(wide)
    }
    return restricted == narrow and len(DepService.open_sets(wide)) == len(narrow)


def sweep_relations(rng: np.random.Generator, report: SweepReport) -> None:
    """r is Dep-isomorphic to Pirr(Open(r)) through x ~ Y iff r[x] is not inside Y."""
    for _ in range(settings.SWEEP_RELATIONS):
        r = Rel.from_matrix(rng.integers(0, 2, size=(4, 4)).astype(bool))
        report.relations += 1
        try:
            iso = DepService.reduction_iso(r)
        except InvalidMorphism:
            logger.error(f"reduction of {r.bits} is not a Dep-morphism")
            report.relation_violations += 1
            continue
        same_dim = BicliqueService.exact_dim(iso.dst)[0] == BicliqueService.exact_dim(r)[0]
        if not (DepService.is_dep_isomorphism(iso) and same_dim):
            report.relation_violations += 1


def sweep_functor_laws(max_size: int, rng: np.random.Generator, report: SweepReport) -> None:
    """
    Pirr and Open preserve identities and composition, and Dep composition
    is associative, unital and agrees with all of its relational forms.
    """
    lattices = [s for s in SemilatticeService.enumerate_lattices(max_size) if s.size > 1]
    homs: Dict[Tuple[int, int], list] = {}

    def between(x: int, y: int) -> JslMorphism:
        if (x, y) not in homs:
            homs[(x, y)] = list(SemilatticeService.morphisms(lattices[x], lattices[y]))
        return homs[(x, y)][int(rng.integers(len(homs[(x, y)])))]

    for _ in range(settings.SWEEP_FUNCTOR_PAIRS):
        x, y, z, w = (int(v) for v in rng.integers(len(lattices), size=4))
        f, g, h = between(x, y), between(y, z), between(z, w)
        report.functor_pairs += 1
        p, q, t = (DepService.pirr_morphism(e) for e in (f, g, h))
        pq = DepService.dep_compose(p, q)
        checks = [
            DepService.pirr_morphism(SemilatticeService.compose(f, g)).bits == pq.bits,
            DepService.pirr_morphism(SemilatticeService.identity(lattices[x])).bits == p.src.bits,
            DepService.open_morphism(DepService.identity_morphism(p.src)).map
            == tuple(range(DepService.open_of(p.src).size)),
            DepService.open_morphism(pq).map
            == SemilatticeService.compose(DepService.open_morphism(p), DepService.open_morphism(q)).map,
            len(set(DepService.composition_formulas(p, q))) == 1,
            DepService.dep_compose(DepService.identity_morphism(p.src), p).bits == p.bits,
            DepService.dep_compose(p, DepService.identity_morphism(p.dst)).bits == p.bits,
            DepService.dep_compose(pq, t).bits == DepService.dep_compose(p, DepService.dep_compose(q, t)).bits,
        ]
        if not all(checks):
            logger.error(f"functor law broken on lattices {x}, {y}, {z}, {w}: {checks}")
            report.functor_violations += 1


def sweep_reduction(report: SweepReport) -> None:
    """On every nonzero 3x3 relation, n_alpha = n_mu = dim for its lattice language, and SLD gives back Open(r)."""
    for bits in product(range(8), repeat=3):
        if not any(bits):
            continue
        r = Rel.build(list(bits), 3)
        report.reductions += 1
        dim, _ = BicliqueService.exact_dim(r)
        inst = SpeclangService.lattice_language_instance(r, dim)
        na = CertifyService.na_oracle(inst.dfa_l, inst.dfa_rl)
        nmu = CertifyService.nmu_oracle(inst.monoid)
        sld = LangalgService.sld_lattice(LangalgService.derivative_system(inst.dfa_l, inst.dfa_rl))
        if not (na == nmu == dim and SemilatticeService.is_isomorphic(sld.lattice, DepService.open_of(r))):
            logger.error(f"reduction of {bits}: dim {dim}, n_alpha {na}, n_mu {nmu}")
            report.reduction_violations += 1


def sweep_languages(max_states: int, rng: np.random.Generator, report: SweepReport) -> None:
    for d in small_minimal_dfas(max_states):
        ds = LangalgService.from_dfa(d)
        m = LangalgService.syntactic_monoid(d)
        report.languages += 1
        check_language(ds, m, rng, report)


def check_language(ds: DerivativeSystem, m: MonoidRecognizer, rng: np.random.Generator, report: SweepReport) -> None:
    dim, _ = BicliqueService.exact_dim(LangalgService.lower_path(ds).dr)
    na = CertifyService.na_search(ds)
    nmu = CertifyService.nmu_search(m)
    if not (dim <= nmu.value <= na.value):
        logger.error(f"chain broken: dim {dim}, n_mu {nmu.value}, n_alpha {na.value}")
        report.chain_violations += 1
    if ds.language:
        try:
            ns = AutomataService.ns_bruteforce(ds.lang_dfa, lower=max(dim, 1))
        except BudgetExceeded as e:
            logger.info(f"ns undecided, lower bound {e.lower}")
            ns = None
        if ns is None:
            report.ns_undecided += 1
        elif not dim <= ns <= nmu.value:
            report.chain_violations += 1

        witness = CertifyService.na_witness(ds, na)
        c = CertifyService.extract_certificate(witness, ds.lang_dfa, ds.rev_dfa)
        check_certificate(
            c, CertifyService.instance_of(ds), na.value, ds.lang_dfa, AutomataService.is_atomic, rng, report
        )
        sub_witness = CertifyService.nmu_witness(m, nmu)
        sc = CertifyService.extract_subatomic_certificate(sub_witness, m)
        check_certificate(
            sc, CertifyService.subatomic_instance(m), nmu.value, ds.lang_dfa,
            lambda n: AutomataService.is_subatomic(n, ds.lang_dfa), rng, report,
        )

        if SpeclangService.is_nuclear(ds):
            report.nuclear += 1
            nfa = SpeclangService.nuclear_nfa(ds)
            if nfa is None or nfa.state_count != dim or not AutomataService.equivalent(nfa, ds.lang_dfa):
                report.nuclear_violations += 1

    if SpeclangService.is_group_language(m):
        report.group += 1
        if not SpeclangService.group_cl_check(ds):
            report.group_violations += 1


def sweep_unary(max_states: int, report: SweepReport) -> None:
    """n_mu = n_alpha for unary languages and for the A_n family."""
    seen = set()
    dfas = [SpeclangService.ln_family(2), SpeclangService.ln_family(3)]
    for size in range(1, max_states + 1):
        for tail in range(size):
            for finals in range(1 << size):
                d = SpeclangService.unary_cycle(
                    size - tail, [q for q in range(size) if finals >> q & 1], tail=tail
                )
                dfas.append(d)
    for d in dfas:
        d = AutomataService.minimize_dfa(d)
        key = (d.alphabet.symbols, d.trans, d.finals)
        if key in seen:
            continue
        seen.add(key)
        report.unary += 1
        na = CertifyService.na_search(LangalgService.from_dfa(d)).value
        nmu = CertifyService.nmu_oracle(LangalgService.syntactic_monoid(d))
        if na != nmu:
            logger.error(f"n_alpha {na} != n_mu {nmu} on a unary or group language")
            report.unary_violations += 1


def sweep_atomicity(max_states: int, rng: np.random.Generator, report: SweepReport) -> None:
    """is_atomic agrees with the definition on random small nfas."""
    for _ in range(settings.SWEEP_ATOMICITY):
        n = int(rng.integers(1, max_states + 1))
        edges = [
            (src, sym, dst)
            for src in range(n) for sym in AB.symbols for dst in range(n)
            if rng.random() < 0.4
        ]
        inits = [0] + [q for q in range(1, n) if rng.random() < 0.3]
        finals = [q for q in range(n) if rng.random() < 0.5]
        nfa = Nfa.from_edges(AB, n, inits, finals, edges)
        report.atomicity_samples += 1
        if AutomataService.is_atomic(nfa) != AutomataService.nerode_saturated(nfa):
            report.atomicity_violations += 1


def main() -> int:
    parser = argparse.ArgumentParser(description="Seeded property sweeps")
    parser.add_argument("--seed", type=int, default=settings.SEED)
    parser.add_argument("--max-states", type=int, default=3, help="Largest dfa in the language sweep")
    parser.add_argument("--max-lattice", type=int, default=5, help="Largest lattice in the lattice sweeps")
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    report = SweepReport(seed=args.seed)
    logger.info(f"starting sweeps with seed {args.seed}")
    sweep_lattices(args.max_lattice + 1, report)
    sweep_relations(rng, report)
    sweep_functor_laws(args.max_lattice, rng, report)
    sweep_reduction(report)
    sweep_languages(args.max_states, rng, report)
    sweep_unary(5, report)
    sweep_atomicity(args.max_states, rng, report)
    print(report.render(), end="")
    return 0 if report.violations == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
