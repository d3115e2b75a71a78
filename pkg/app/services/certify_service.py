"""
Service layer for small-nfa certificates and the generator-family oracles.

A certificate is a Dep-object S with morphisms P : D_L -> S,
Q : S -> id_C and T_a : S -> S making the lower path of L and the upper
path over the carrier C commute. C is the set of Nerode classes for
atomic nfas and the syntactic monoid for subatomic ones.
"""
from typing import Callable, Dict, List, Optional, Sequence, Tuple
import logging

from app.core.config import settings
from app.core.errors import (
    BudgetExceeded, InvalidCertificate, InvalidMorphism, LanguageMismatch,
    NotAtomic, NotSubatomic, NotSyntactic, ShapeMismatch,
)
from app.models.automata import Alphabet, Dfa, Nfa
from app.models.certificate import (
    AtomicCertificate, Certificate, CertificateInstance, OracleResult, SubatomicCertificate,
)
from app.models.language import DerivativeSystem, LowerPath, MonoidRecognizer, UpperPath
from app.models.relation import DepMorphism, Rel, members, popcount
from app.services.automata_service import AutomataService
from app.services.biclique_service import BicliqueService
from app.services.dep_service import DepService, canonical_sets, join_irreducible_sets
from app.services.langalg_service import LangalgService

logger = logging.getLogger(__name__)

Quotient = Callable[[int, int], int]

ONE = Rel(rows=("*",), cols=("*",), bits=(1,))


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _covered(x: int, gens: Sequence[int]) -> int:
    out = 0
    for g in gens:
        if g & ~x == 0:
            out |= g
    return out


def _least_generators(
    targets: List[int],
    quotient: Quotient,
    n_symbols: int,
    lower: int,
    upper: int,
    fallback: List[int],
    kmax: int,
    budget: int,
) -> OracleResult:
    """
    Least family G of sets such that every target and every a^-1 g (g in G)
    is the union of the members of G it contains.

    Iterative deepening on |G|. Each node takes the first target X that G
    does not yet cover and the least uncovered element x of X, and branches
    on the sets h with x in h contained in X. Every optimal family has such
    an h among its join-irreducibles, so the search is complete.
    """
    nodes = 0

    def unsatisfied(gens: Tuple[int, ...]) -> Optional[int]:
        for x in targets:
            if _covered(x, gens) != x:
                return x
        for g in gens:
            for idx in range(n_symbols):
                x = quotient(idx, g)
                if _covered(x, gens) != x:
                    return x
        return None

    def search(gens: Tuple[int, ...], k: int, seen: set) -> Optional[Tuple[int, ...]]:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("generator search budget exhausted", lower=k, upper=upper)
        x = unsatisfied(gens)
        if x is None:
            return gens
        if len(gens) == k:
            return None
        key = frozenset(gens)
        if key in seen:
            return None
        seen.add(key)
        missing = x & ~_covered(x, gens)
        low = missing & -missing
        candidates = sorted(
            (sub | low for sub in _submasks(x & ~low)),
            key=lambda h: (-popcount(h), h),
        )
        for h in candidates:
            if h in gens:
                continue
            found = search(gens + (h,), k, seen)
            if found is not None:
                return found
        return None

    for k in range(max(lower, 0), min(kmax, upper - 1) + 1):
        found = search((), k, set())
        if found is not None:
            gens = canonical_sets(found)
            logger.info(f"least generator family has {k} members ({nodes} search nodes)")
            return OracleResult(value=k, generators=tuple(gens), lower=k, upper=k)
    if upper <= kmax:
        logger.info(f"join-irreducibles of the minimal family are optimal: {upper} ({nodes} search nodes)")
        return OracleResult(value=upper, generators=tuple(fallback), lower=upper, upper=upper)
    return OracleResult(value=None, lower=kmax + 1, upper=upper)


def _family_certificate(
    kind: str,
    alphabet: Alphabet,
    family: Sequence[int],
    derivatives: Sequence[int],
    quotient: Quotient,
    carrier: int,
    lower: LowerPath,
    upper: UpperPath,
) -> Certificate:
    """
    Certificate from a family of state languages: S relates the join-irreducible
    members j to the meet generators m_c = union of members missing c, by j not
    contained in m. P, Q and T_a follow from derivatives, membership and quotients.
    """
    joins = join_irreducible_sets(canonical_sets(family))
    top = 0
    for j in joins:
        top |= j
    meets = []
    for c in range(carrier):
        m = 0
        for j in joins:
            if not j >> c & 1:
                m |= j
        if m != top:
            meets.append(m)
    meets = canonical_sets(meets)
    s = DepService.representation_rel(joins, meets)

    def against_meets(x: int) -> int:
        return sum(1 << k for k, m in enumerate(meets) if x & ~m)

    p = Rel(rows=lower.dr.rows, cols=s.cols, bits=tuple(against_meets(d) for d in derivatives))
    q = Rel(rows=s.rows, cols=upper.i2.cols, bits=tuple(joins))
    t = tuple(
        Rel(rows=s.rows, cols=s.cols, bits=tuple(against_meets(quotient(idx, j)) for j in joins))
        for idx in range(len(alphabet))
    )
    cls = AtomicCertificate if kind == "atomic" else SubatomicCertificate
    logger.info(f"{kind} certificate with {len(joins)} join and {len(meets)} meet generators")
    return cls(alphabet=alphabet, s=s, p=p, q=q, t=t)


class CertifyService:
    """
    Service for certificate instances, verification, extraction and the
    n-alpha / n-mu oracles.
    """

    @staticmethod
    def instance_of(ds: DerivativeSystem) -> CertificateInstance:
        """
        Atomic instance: lower path of L over the Nerode classes.
        """
        return CertificateInstance(
            kind="atomic",
            lang_dfa=ds.lang_dfa,
            lower=LangalgService.lower_path(ds),
            upper=LangalgService.nerode_upper_path(ds),
            accepts_empty_word=ds.lang_dfa.init in ds.lang_dfa.finals,
            nonempty=bool(ds.language),
        )

    @staticmethod
    def atomic_instance(a: Dfa, b: Dfa) -> CertificateInstance:
        return CertifyService.instance_of(LangalgService.derivative_system(a, b))

    @staticmethod
    def subatomic_instance(m: MonoidRecognizer) -> CertificateInstance:
        """
        Subatomic instance: the lower path comes from m read as a dfa, with
        the opposite monoid as dfa of the reverse language.
        """
        ds = LangalgService.monoid_system(m)
        return CertificateInstance(
            kind="subatomic",
            lang_dfa=ds.lang_dfa,
            lower=LangalgService.lower_path(ds),
            upper=LangalgService.monoid_upper_path(m),
            accepts_empty_word=0 in m.finals,
            nonempty=bool(m.finals),
        )

    @staticmethod
    def _check_shapes(c: Certificate, inst: CertificateInstance) -> None:
        lp, up = inst.lower, inst.upper
        if c.kind != inst.kind:
            raise ShapeMismatch(f"{c.kind} certificate given for a {inst.kind} instance")
        if set(c.alphabet.symbols) != set(lp.dr_a):
            raise ShapeMismatch("certificate alphabet differs from the instance alphabet")
        if c.p.n_rows != lp.dr.n_rows or c.p.n_cols != c.s.n_cols:
            raise ShapeMismatch(f"P must be {lp.dr.n_rows}x{c.s.n_cols}")
        if c.q.n_rows != c.s.n_rows or c.q.n_cols != up.classes:
            raise ShapeMismatch(f"Q must be {c.s.n_rows}x{up.classes}")
        for sym, rel in zip(c.alphabet.symbols, c.t):
            if rel.n_rows != c.s.n_rows or rel.n_cols != c.s.n_cols:
                raise ShapeMismatch(f"T {sym} must be {c.s.n_rows}x{c.s.n_cols}")

    @staticmethod
    def _morphisms(
        c: Certificate, inst: CertificateInstance
    ) -> Tuple[DepMorphism, DepMorphism, Dict[str, DepMorphism]]:
        labels = inst.upper.i2.cols
        ident = Rel(rows=labels, cols=labels, bits=tuple(1 << x for x in range(inst.upper.classes)))
        p = DepService.morphism(c.p.bits, inst.lower.dr, c.s)
        q = DepService.morphism(c.q.bits, c.s, ident)
        t = {sym: DepService.morphism(c.t_for(sym).bits, c.s, c.s) for sym in c.alphabet.symbols}
        return p, q, t

    @staticmethod
    def verify(c: Certificate, inst: CertificateInstance, k: int) -> bool:
        """
        Whether P, Q and T_a are Dep-morphisms with
        I;P;Q = I', D_a;P = P;T_a, T_a;Q = Q;D'_a and P;Q;F' = F.
        """
        CertifyService._check_shapes(c, inst)
        if c.s.n_rows > k:
            logger.warning(f"certificate has {c.s.n_rows} join generators, more than k={k}")
            return False
        if k == 0 and inst.nonempty:
            return False
        try:
            p, q, t = CertifyService._morphisms(c, inst)
        except InvalidMorphism as e:
            logger.warning(f"certificate rejected: {e}")
            return False
        up = inst.upper
        ident = q.dst
        i_mor, d_mor, f_mor = LangalgService.lower_path_morphisms(inst.lower)
        i2 = DepService.morphism(up.i2.bits, ONE, ident)
        f2 = DepService.morphism(up.f2.bits, ident, ONE)
        compose = DepService.dep_compose

        if compose(compose(i_mor, p), q).bits != i2.bits:
            logger.warning("certificate rejected: initial square fails")
            return False
        for sym in c.alphabet.symbols:
            d2 = DepService.morphism(up.d2_a[sym].bits, ident, ident)
            if compose(d_mor[sym], p).bits != compose(p, t[sym]).bits:
                logger.warning(f"certificate rejected: lower square for {sym} fails")
                return False
            if compose(t[sym], q).bits != compose(q, d2).bits:
                logger.warning(f"certificate rejected: upper square for {sym} fails")
                return False
        if compose(compose(p, q), f2).bits != f_mor.bits:
            logger.warning("certificate rejected: final square fails")
            return False
        return True

    @staticmethod
    def verify_atomic_certificate(a: Dfa, b: Dfa, c: Certificate, k: int) -> bool:
        return CertifyService.verify(c, CertifyService.atomic_instance(a, b), k)

    @staticmethod
    def verify_subatomic_certificate(m: MonoidRecognizer, c: Certificate, k: int) -> bool:
        if c.s.n_cols > m.size:
            raise ShapeMismatch(f"S has {c.s.n_cols} meet generators, the monoid only {m.size} elements")
        return CertifyService.verify(c, CertifyService.subatomic_instance(m), k)

    @staticmethod
    def certificate_to_nfa(c: Certificate, inst: CertificateInstance) -> Nfa:
        """
        Nfa on the rows of S: x -a-> y iff S[y] is contained in T_a[x];
        initial y iff S[y] is contained in (I;P)[*]; final x iff (Q;F')(x, *).
        """
        if not CertifyService.verify(c, inst, c.s.n_rows):
            raise InvalidCertificate("certificate does not verify")
        p, q, t = CertifyService._morphisms(c, inst)
        i_mor, _, _ = LangalgService.lower_path_morphisms(inst.lower)
        f2 = DepService.morphism(inst.upper.f2.bits, q.dst, ONE)
        ip = DepService.dep_compose(i_mor, p)
        qf = DepService.dep_compose(q, f2)
        edges = [
            (x, sym, y)
            for sym, mor in t.items()
            for x, row in enumerate(mor.lower or ())
            for y in members(row)
        ]
        nfa = Nfa.from_edges(
            c.alphabet,
            c.s.n_rows,
            inits=members(ip.lower[0]) if ip.lower else [],
            finals=[x for x, row in enumerate(qf.bits) if row & 1],
            edges=edges,
        )
        if not AutomataService.equivalent(inst.lang_dfa, nfa):
            raise InvalidCertificate("nfa built from the certificate accepts another language")
        logger.info(f"certificate yields a {nfa.state_count}-state nfa")
        return nfa

    @staticmethod
    def extract_certificate(n: Nfa, a: Dfa, b: Dfa) -> Certificate:
        """
        Certificate from an atomic nfa, built on the family of its state languages.
        """
        ds = LangalgService.derivative_system(a, b)
        if not AutomataService.equivalent(ds.lang_dfa, n):
            raise LanguageMismatch("nfa does not accept the language of the dfa pair")
        masks = AutomataService.state_class_masks(n, ds.rev_dfa)
        if masks is None:
            raise NotAtomic("some state language is not a union of Nerode classes")
        inst = CertifyService.instance_of(ds)
        return _family_certificate(
            "atomic", ds.alphabet, masks,
            LangalgService.derivative_masks(ds),
            lambda idx, k: LangalgService.quotient(ds, idx, k),
            ds.class_count, inst.lower, inst.upper,
        )

    @staticmethod
    def extract_subatomic_certificate(n: Nfa, m: MonoidRecognizer) -> Certificate:
        """
        Certificate from a subatomic nfa, with state languages over the monoid.
        """
        if not AutomataService.equivalent(LangalgService.monoid_dfa(m), n):
            raise LanguageMismatch("nfa does not accept the language of the monoid")
        masks = AutomataService.state_monoid_masks(n, m)
        if masks is None:
            raise NotSubatomic("some state language is not a union of syntactic classes")
        inst = CertifyService.subatomic_instance(m)
        ds = LangalgService.monoid_system(m)
        derivatives = [LangalgService.monoid_derivative(m, w) for w in ds.reps_left]
        return _family_certificate(
            "subatomic", m.alphabet, masks, derivatives,
            lambda idx, k: LangalgService.monoid_quotient(m, idx, k),
            m.size, inst.lower, inst.upper,
        )

    @staticmethod
    def _search(
        derivatives: List[int],
        dr: Rel,
        quotient: Quotient,
        n_symbols: int,
        carrier: int,
        kmax: Optional[int],
        budget: Optional[int],
    ) -> OracleResult:
        budget = settings.DEFAULT_BUDGET if budget is None else budget
        targets = [d for d in canonical_sets(derivatives) if d]
        fallback = join_irreducible_sets(canonical_sets(targets))
        upper = len(fallback)
        kmax = upper if kmax is None else kmax
        try:
            dim, _ = BicliqueService.exact_dim(dr, kmax=upper, budget=budget)
            lower = dim if dim is not None else 0
        except BudgetExceeded as e:
            lower = e.lower
        logger.debug(f"generator search bounds [{lower}, {upper}]")
        if lower >= upper:
            if upper > kmax:
                return OracleResult(value=None, lower=upper, upper=upper)
            return OracleResult(value=upper, generators=tuple(fallback), lower=upper, upper=upper)
        if 1 << carrier > settings.LATTICE_BUDGET:
            raise BudgetExceeded(
                f"boolean closure has 2^{carrier} elements, above {settings.LATTICE_BUDGET}",
                lower=lower, upper=upper,
            )
        return _least_generators(targets, quotient, n_symbols, lower, upper, fallback, kmax, budget)

    @staticmethod
    def na_search(
        ds: DerivativeSystem, kmax: Optional[int] = None, budget: Optional[int] = None
    ) -> OracleResult:
        """
        Least |J(S)| over union-closed, derivative-closed families between SLD and BLD.
        """
        return CertifyService._search(
            LangalgService.derivative_masks(ds),
            LangalgService.lower_path(ds).dr,
            lambda idx, k: LangalgService.quotient(ds, idx, k),
            len(ds.alphabet), ds.class_count, kmax, budget,
        )

    @staticmethod
    def nmu_search(
        m: MonoidRecognizer, kmax: Optional[int] = None, budget: Optional[int] = None
    ) -> OracleResult:
        """
        Least |J(S)| over union-closed, derivative-closed families between SLD and BLRD.

        m must be the syntactic monoid of its language; raises NotSyntactic otherwise.
        """
        syn = LangalgService.syntactic_monoid(LangalgService.monoid_dfa(m))
        if syn.size != m.size:
            raise NotSyntactic(
                f"monoid has {m.size} elements, the syntactic monoid of its language {syn.size}"
            )
        ds = LangalgService.monoid_system(m)
        return CertifyService._search(
            [LangalgService.monoid_derivative(m, w) for w in ds.reps_left],
            LangalgService.lower_path(ds).dr,
            lambda idx, k: LangalgService.monoid_quotient(m, idx, k),
            len(m.alphabet), m.size, kmax, budget,
        )

    @staticmethod
    def na_oracle(a: Dfa, b: Dfa, kmax: Optional[int] = None, budget: Optional[int] = None) -> Optional[int]:
        result = CertifyService.na_search(LangalgService.derivative_system(a, b), kmax, budget)
        logger.info(f"n_alpha = {result.value}")
        return result.value

    @staticmethod
    def nmu_oracle(m: MonoidRecognizer, kmax: Optional[int] = None, budget: Optional[int] = None) -> Optional[int]:
        result = CertifyService.nmu_search(m, kmax, budget)
        logger.info(f"n_mu = {result.value}")
        return result.value

    @staticmethod
    def na_witness(ds: DerivativeSystem, result: OracleResult) -> Nfa:
        """
        The atomic nfa on the generators found by na_search.
        """
        return LangalgService.generator_nfa(
            ds.alphabet, list(result.generators),
            lambda idx, k: LangalgService.quotient(ds, idx, k),
            ds.language, ds.epsilon_class,
        )

    @staticmethod
    def nmu_witness(m: MonoidRecognizer, result: OracleResult) -> Nfa:
        """
        The subatomic nfa on the generators found by nmu_search.
        """
        return LangalgService.generator_nfa(
            m.alphabet, list(result.generators),
            lambda idx, k: LangalgService.monoid_quotient(m, idx, k),
            sum(1 << x for x in m.finals), 0,
        )
