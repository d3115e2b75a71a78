"""
Service layer for biclique covers and bipartite dimension.
"""
from typing import List, Optional, Tuple
import logging

import numpy as np

from app.core.config import settings
from app.core.errors import BudgetExceeded
from app.models.certificate import BicliqueCover
from app.models.relation import Rel, members, popcount

logger = logging.getLogger(__name__)

Biclique = Tuple[int, int]

# randomized greedy runs tried for the initial upper bound when a seed is given
RESTARTS = 16


def _edge_mask(r: Rel, rows: int, cols: int) -> int:
    """Edges of rows x cols as bits i * n_cols + j."""
    out = 0
    for i in members(rows):
        out |= cols << (i * r.n_cols)
    return out


def _all_edges(r: Rel) -> int:
    out = 0
    for i, row in enumerate(r.bits):
        out |= row << (i * r.n_cols)
    return out


class BicliqueService:
    """
    Service for biclique covers of finite relations.
    """

    @staticmethod
    def verify_cover(r: Rel, c: BicliqueCover) -> bool:
        """
        Each biclique lies inside r and together they cover r.
        """
        covered = [0] * r.n_rows
        for rows, cols in c.bicliques:
            if rows >> r.n_rows or cols >> r.n_cols:
                return False
            for i in members(rows):
                if cols & ~r.bits[i]:
                    return False
                covered[i] |= cols
        return tuple(covered) == r.bits

    @staticmethod
    def maximal_bicliques(r: Rel) -> List[Biclique]:
        """
        Maximal bicliques with both sides nonempty, from the intersection
        closure of the nonempty rows, in canonical (extent, intent) order.
        """
        intents = set()
        frontier = {row for row in r.bits if row}
        while frontier:
            intents |= frontier
            nxt = set()
            for a in frontier:
                for row in r.bits:
                    meet = a & row
                    if meet and meet not in intents:
                        nxt.add(meet)
            frontier = nxt
        out = []
        for cols in intents:
            rows = sum(1 << i for i, row in enumerate(r.bits) if cols & ~row == 0)
            out.append((rows, cols))
        return sorted(out, key=lambda b: (popcount(b[0]), b[0], b[1]))

    @staticmethod
    def fooling_bound(r: Rel, edges: Optional[List[Tuple[int, int]]] = None) -> int:
        """
        Size of a greedily built fooling set: edges no two of which fit in one biclique.
        """
        chosen: List[Tuple[int, int]] = []
        for i, j in edges if edges is not None else r.pairs():
            if all(not (r.has(i, l) and r.has(k, j)) for k, l in chosen):
                chosen.append((i, j))
        return len(chosen)

    @staticmethod
    def greedy_cover(r: Rel, rng: Optional[np.random.Generator] = None) -> BicliqueCover:
        """
        Repeatedly take the maximal biclique covering most uncovered edges.

        Ties go to the first biclique in canonical order, or to a random one
        when rng is given.
        """
        concepts = BicliqueService.maximal_bicliques(r)
        masks = [_edge_mask(r, rows, cols) for rows, cols in concepts]
        tie = -np.arange(len(concepts)) if rng is None else rng.random(len(concepts))
        uncovered = _all_edges(r)
        picked: List[Biclique] = []
        while uncovered:
            best = max(range(len(concepts)), key=lambda k: (popcount(masks[k] & uncovered), tie[k]))
            picked.append(concepts[best])
            uncovered &= ~masks[best]
        return BicliqueCover(bicliques=tuple(picked))

    @staticmethod
    def exact_dim(
        r: Rel,
        kmax: Optional[int] = None,
        budget: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> Tuple[Optional[int], Optional[BicliqueCover]]:
        """
        Least k <= kmax admitting a cover by k bicliques, with a witness.

        Iterative deepening over k from the fooling-set bound, branching on
        the uncovered edge with fewest maximal bicliques through it. With a
        seed, the greedy upper bound is the best of RESTARTS randomized runs;
        the dimension does not depend on it, the witness cover may.
        """
        if kmax is None:
            kmax = settings.DEFAULT_KMAX if settings.DEFAULT_KMAX > 0 else min(r.n_rows, r.n_cols)
        budget = settings.DEFAULT_BUDGET if budget is None else budget
        all_edges = _all_edges(r)
        if not all_edges:
            return 0, BicliqueCover()
        concepts = BicliqueService.maximal_bicliques(r)
        masks = [_edge_mask(r, rows, cols) for rows, cols in concepts]
        edge_ids = [i * r.n_cols + j for i, j in r.pairs()]
        through = {e: [k for k, m in enumerate(masks) if m >> e & 1] for e in edge_ids}
        greedy = BicliqueService.greedy_cover(r)
        if seed is not None:
            rng = np.random.default_rng(seed)
            for _ in range(RESTARTS):
                candidate = BicliqueService.greedy_cover(r, rng)
                if len(candidate) < len(greedy):
                    greedy = candidate
        lower = BicliqueService.fooling_bound(r)
        upper = len(greedy)
        logger.debug(f"dim search: {len(concepts)} maximal bicliques, bounds [{lower}, {upper}]")
        if lower == upper:
            return (upper, greedy) if upper <= kmax else (None, None)
        nodes = 0

        def search(uncovered: int, k: int, picked: List[int]) -> Optional[List[int]]:
            nonlocal nodes
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded("exact_dim budget exhausted", lower=lower, upper=upper)
            if not uncovered:
                return list(picked)
            if k == 0:
                return None
            remaining = [(e // r.n_cols, e % r.n_cols) for e in edge_ids if uncovered >> e & 1]
            if BicliqueService.fooling_bound(r, remaining) > k:
                return None
            edge = min(
                (e for e in edge_ids if uncovered >> e & 1),
                key=lambda e: (len(through[e]), e),
            )
            for c in through[edge]:
                picked.append(c)
                found = search(uncovered & ~masks[c], k - 1, picked)
                picked.pop()
                if found is not None:
                    return found
            return None

        for k in range(lower, min(kmax, upper - 1) + 1):
            found = search(all_edges, k, [])
            if found is not None:
                cover = BicliqueCover(bicliques=tuple(concepts[c] for c in found))
                logger.info(f"dim = {k} after {nodes} search nodes")
                return k, cover
            lower = k + 1
        if upper <= kmax:
            logger.info(f"dim = {upper} (greedy cover optimal) after {nodes} search nodes")
            return upper, greedy
        return None, None
