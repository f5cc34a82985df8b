"""Upper central series, A-center series and hypercenters.

Terms are stored as subgroups of the original group, never of successive quotients.
``Z_{i+1}`` is computed directly as ``{g : g^-1 a(g) in Z_i for every generator a}``.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import GroupError, NotAChain, NotInvariant
from .group_core import GroupTable, SubgroupRef, is_normal, subgroup_from_mask, trivial_subgroup
from .morphisms import AutSubgroup, inner_automorphism_group, invariance_witness

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AscendingSeries:
    """``1 = Z_0 < Z_1 < ... < Z_k`` for the action of ``action`` on ``group``.

    ``stabilized`` means ``Z_k = Z_{k+1}``; it is False only when the computation was
    truncated by ``max_steps``.
    """

    group: GroupTable
    action: AutSubgroup
    terms: Tuple[SubgroupRef, ...]
    stabilized: bool

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    @property
    def top(self) -> SubgroupRef:
        return self.terms[-1]

    @property
    def is_hypercentral(self) -> bool:
        return self.top.is_whole

    def term(self, i: int) -> SubgroupRef:
        if i < 0:
            raise IndexError(i)
        if i < len(self.terms):
            return self.terms[i]
        if self.stabilized:
            return self.top
        raise IndexError(f"series truncated at step {self.length}")

    def orders(self) -> List[int]:
        return [t.order for t in self.terms]


def _next_layer(G: GroupTable, gen_images: np.ndarray, mask: np.ndarray) -> np.ndarray:
    layer = np.ones(G.order, dtype=bool)
    for alpha in gen_images:
        layer &= mask[G.mul[G.inv, alpha]]
    return layer


def a_center_series(G: GroupTable, A: AutSubgroup, max_steps: Optional[int] = None) -> AscendingSeries:
    if A.group is not G:
        raise GroupError(f"{A.name} does not act on {G.name}")
    terms = [trivial_subgroup(G)]
    mask = terms[0].mask
    stabilized = False
    while max_steps is None or len(terms) - 1 < max_steps:
        nxt = _next_layer(G, A.generator_images, mask)
        if np.array_equal(nxt, mask):
            stabilized = True
            break
        terms.append(subgroup_from_mask(G, nxt))
        mask = nxt
    if max_steps is not None and not stabilized:
        stabilized = bool(np.array_equal(_next_layer(G, A.generator_images, mask), mask))
    logger.debug(f"{A.name}-center series of {G.name}: {[t.order for t in terms]}")
    return AscendingSeries(G, A, tuple(terms), stabilized)


def upper_central_series(G: GroupTable) -> AscendingSeries:
    return a_center_series(G, inner_automorphism_group(G))


def hypercenter(G: GroupTable, A: Optional[AutSubgroup] = None) -> SubgroupRef:
    """``Z_inf(G, A)``; the ordinary hypercenter when ``A`` is omitted."""
    series = upper_central_series(G) if A is None else a_center_series(G, A)
    return series.top


def hypercentral_type(G: GroupTable, A: AutSubgroup) -> Optional[int]:
    series = a_center_series(G, A)
    return series.length if series.is_hypercentral else None


def nilpotency_class(G: GroupTable) -> Optional[int]:
    """Class of ``G`` or None when ``G`` is not nilpotent. The trivial group has class 0."""
    series = upper_central_series(G)
    return series.length if series.is_hypercentral else None


def check_chain(A: AutSubgroup, series: Sequence[SubgroupRef]) -> None:
    """Raise unless ``series`` is an ascending chain of ``A``-invariant normal subgroups."""
    if not series:
        raise NotAChain("empty chain")
    G = A.group
    for i, term in enumerate(series):
        if term.parent is not G:
            raise NotAChain(f"term {i} is not a subgroup of {G.name}")
        if not is_normal(G, term):
            raise NotAChain(f"term {i} is not normal in {G.name}")
        witness = invariance_witness(term, A)
        if witness is not None:
            raise NotInvariant(*witness)
    for i, (lower, upper) in enumerate(zip(series, series[1:])):
        if not lower.issubset(upper):
            raise NotAChain(f"term {i} is not contained in term {i + 1}")


def acts_trivially_on_factor(A: AutSubgroup, lower: SubgroupRef, upper: SubgroupRef) -> bool:
    """``a(m) m^-1 in lower`` for every ``m`` in ``upper`` and every generator ``a``."""
    G = A.group
    m = upper.array
    for alpha in A.generator_images:
        if not lower.mask[G.mul[alpha[m], G.inv[m]]].all():
            return False
    return True


def stabilizes_series(A: AutSubgroup, series: Sequence[SubgroupRef]) -> bool:
    check_chain(A, series)
    return all(acts_trivially_on_factor(A, lo, hi) for lo, hi in zip(series, series[1:]))
