"""Finite-instance checks of the hypercenter index bounds and their supporting claims.

Every ``verify_*`` function returns a :class:`CheckReport`. Premises are checked, never
assumed: when they fail the report carries ``verdict = premises_unmet`` and the reason
in ``witness["reason"]``.
"""

import functools
import json
import logging
import math
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Set, Tuple, Union

import numpy as np
import sympy

from .bounds import bound_f, bound_kos
from .config import config
from .constructions import digit_vectors, elementary_abelian_group
from .errors import CapExceeded, GroupError, NotAChain, NotInvariant, NotOddPrime, PremiseFailed
from .group_core import (
    GroupTable,
    SubgroupRef,
    centralizer,
    closure_mask,
    intersection,
    is_normal,
    normal_subgroups,
    product_subgroup,
    quotient,
    semidirect_product,
    subgroup_from_mask,
    subgroup_table,
    whole_group,
)
from .morphisms import (
    AutSubgroup,
    count_automorphisms,
    fixed_points,
    induced_action,
    inner_automorphism_group,
    inner_member_indices,
    invariant_normal_subgroups,
    is_invariant,
    is_normalized_by_inner,
    restrict_action_to_quotient,
)
from .series import (
    a_center_series,
    acts_trivially_on_factor,
    check_chain,
    hypercentral_type,
    nilpotency_class,
    upper_central_series,
)

logger = logging.getLogger(__name__)

Quantity = Union[int, float]


class Verdict(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    PREMISES_UNMET = "premises_unmet"


@dataclass
class CheckReport:
    """Outcome of one check on one instance."""

    check_name: str
    group_name: str
    premises_ok: bool
    verdict: Verdict
    quantities: Dict[str, Quantity] = field(default_factory=dict)
    witness: Optional[Dict[str, Any]] = None

    def __post_init__(self):
        if self.premises_ok == (self.verdict == Verdict.PREMISES_UNMET):
            raise ValueError(f"verdict {self.verdict.value} inconsistent with premises_ok={self.premises_ok}")

    @classmethod
    def unmet(cls, check_name: str, group_name: str, reason: str,
              quantities: Optional[Dict[str, Quantity]] = None) -> 'CheckReport':
        return cls(check_name, group_name, False, Verdict.PREMISES_UNMET,
                   dict(quantities or {}), {"reason": reason})

    @classmethod
    def decide(cls, check_name: str, group_name: str, ok: bool,
               quantities: Dict[str, Quantity], witness: Optional[Dict[str, Any]] = None) -> 'CheckReport':
        verdict = Verdict.HOLDS if ok else Verdict.FAILS
        return cls(check_name, group_name, True, verdict, quantities, witness)

    @property
    def sort_key(self) -> Tuple[str, str, str, str]:
        return (self.check_name, self.group_name,
                json.dumps(self.quantities, sort_keys=True, default=str),
                json.dumps(self.witness, sort_keys=True, default=str))

    def to_dict(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {
            "check_name": self.check_name,
            "group_name": self.group_name,
            "premises_ok": self.premises_ok,
            "quantities": dict(self.quantities),
            "verdict": self.verdict.value,
        }
        if self.witness is not None:
            doc["witness"] = self.witness
        return doc


def sort_reports(reports: Sequence[CheckReport]) -> List[CheckReport]:
    return sorted(reports, key=lambda r: r.sort_key)


def subgroup_witness(H: SubgroupRef) -> Dict[str, Any]:
    return {"order": H.order, "elements": list(H.elems)}


def _require(condition: bool, reason: str) -> None:
    if not condition:
        raise PremiseFailed(reason)


def _check(check_name: str) -> Callable:
    """Turn ``PremiseFailed`` raised inside a check into a premises_unmet report."""
    def decorator(fn):
        @functools.wraps(fn)
        def wrapper(G: GroupTable, *args, **kwargs) -> CheckReport:
            try:
                return fn(G, *args, **kwargs)
            except PremiseFailed as e:
                logger.debug(f"{check_name} on {G.name}: premises unmet ({e})")
                return CheckReport.unmet(check_name, G.name, str(e))
        return wrapper
    return decorator


def quotient_is_nilpotent(G: GroupTable, N: SubgroupRef) -> bool:
    Q, _ = quotient(G, N)
    return nilpotency_class(Q) is not None


def quotient_is_a_hypercentral(G: GroupTable, N: SubgroupRef, A: AutSubgroup) -> bool:
    action = restrict_action_to_quotient(G, N, A)
    return hypercentral_type(action.group, action) is not None


def minimal_nilpotent_quotient_witness(G: GroupTable) -> SubgroupRef:
    """Smallest normal ``N`` with ``G/N`` nilpotent (ties: lexicographic element set)."""
    for N in normal_subgroups(G):
        if quotient_is_nilpotent(G, N):
            return N
    return whole_group(G)


def minimal_a_hypercentral_witness(G: GroupTable, A: AutSubgroup) -> Tuple[SubgroupRef, int]:
    """Smallest A-invariant normal ``L`` with ``G/L`` A-hypercentral, and candidates tried."""
    tried = 0
    for L in invariant_normal_subgroups(G, A):
        tried += 1
        if quotient_is_a_hypercentral(G, L, A):
            return L, tried
    return whole_group(G), tried


AUT_COUNT_MEMO_SIZE = 256

_aut_counts: "OrderedDict[Tuple[bytes, int], Tuple[int, bool]]" = OrderedDict()
_aut_counts_lock = threading.Lock()


def cached_automorphism_count(G: GroupTable, limit: int) -> Tuple[int, bool]:
    """``count_automorphisms`` memoised on the table contents, least recently used evicted."""
    key = (G.mul.tobytes(), limit)
    with _aut_counts_lock:
        if key in _aut_counts:
            _aut_counts.move_to_end(key)
            return _aut_counts[key]
    result = count_automorphisms(G, limit=limit)
    with _aut_counts_lock:
        _aut_counts[key] = result
        while len(_aut_counts) > AUT_COUNT_MEMO_SIZE:
            _aut_counts.popitem(last=False)
    return result


def outer_hypercenter_index(G: GroupTable, A: AutSubgroup) -> int:
    """Index of the hypercenter of ``A / (A cap Inn(G))``."""
    AG = A.as_group()
    inner = inner_automorphism_group(G)
    inner_mask = np.array([row.tobytes() in inner.index for row in A.images])
    I = subgroup_from_mask(AG, inner_mask)
    Q, _ = quotient(AG, I)
    return Q.order // upper_central_series(Q).top.order


# ---------------------------------------------------------------------------
# Index bounds
# ---------------------------------------------------------------------------

@_check("theorem1")
def verify_theorem1(G: GroupTable, L: SubgroupRef) -> CheckReport:
    """``[G : Z_inf(G)] <= |Aut(L)| |Z(L)|`` when ``G/L`` is hypercentral.

    ``|Aut(L)|`` is counted only as far as the comparison needs; ``aut_l_exact`` tells
    whether ``aut_l_order`` is the full count or a lower bound.
    """
    _require(is_normal(G, L), "L is not normal in G")
    _require(quotient_is_nilpotent(G, L), "G/L is not hypercentral")
    top = upper_central_series(G).top
    lhs = G.order // top.order
    L_table, _ = subgroup_table(L)
    z_l = centralizer(L_table, range(L_table.order)).order
    needed = -(-lhs // z_l)
    aut_l, exact = cached_automorphism_count(L_table, max(needed, config.aut_count_limit))
    rhs = aut_l * z_l
    quantities = {
        "lhs_index": lhs,
        "rhs_bound": rhs,
        "aut_l_order": aut_l,
        "aut_l_exact": int(exact),
        "z_l_order": z_l,
        "l_order": L.order,
        "hypercenter_order": top.order,
        "equality": int(exact and lhs == rhs),
    }
    return CheckReport.decide("theorem1", G.name, lhs <= rhs, quantities, {"L": subgroup_witness(L)})


@_check("lemma1")
def verify_lemma1(G: GroupTable, A_sub: SubgroupRef, H: SubgroupRef) -> CheckReport:
    _require(A_sub.issubset(H), "A is not contained in H")
    _require(is_normal(G, A_sub) and is_normal(G, H), "A and H must be normal in G")
    C = centralizer(G, H.elems)
    _require(A_sub.issubset(C), "A is not central in H")
    _require(quotient_is_nilpotent(G, C), "G/C_G(H) is not nilpotent")
    Q, proj = quotient(G, A_sub)
    upper_q = upper_central_series(Q).top
    _require(bool(upper_q.mask[proj.image[H.array]].all()), "H/A is not in the hypercenter of G/A")
    top = upper_central_series(G).top
    product = product_subgroup(G, top, A_sub)
    quantities = {
        "h_order": H.order,
        "a_order": A_sub.order,
        "hypercenter_order": top.order,
        "product_order": product.order,
        "centralizer_order": C.order,
    }
    witness = {"reading": "locally nilpotent premise checked as nilpotent (finite case)"}
    return CheckReport.decide("lemma1", G.name, H.issubset(product), quantities, witness)


@_check("coprime")
def coprime_decomposition(X: GroupTable, Q: AutSubgroup) -> CheckReport:
    """``X = [X, Q] x C_X(Q)`` for abelian ``X`` and ``gcd(|X|, |Q|) = 1``."""
    if Q.group is not X:
        raise GroupError(f"{Q.name} does not act on {X.name}")
    _require(X.is_abelian, "X is not abelian")
    _require(math.gcd(X.order, Q.order) == 1, f"gcd(|X|, |Q|) = {math.gcd(X.order, Q.order)}")
    moved = X.mul[X.inv[None, :], Q.images]
    commutators = subgroup_from_mask(X, closure_mask(X, np.unique(moved)))
    fixed = fixed_points(X, Q)
    meet = intersection(commutators, fixed)
    joint = product_subgroup(X, commutators, fixed)
    quantities = {
        "x_order": X.order,
        "q_order": Q.order,
        "commutator_order": commutators.order,
        "centralizer_order": fixed.order,
        "intersection_order": meet.order,
    }
    ok = meet.is_trivial and joint.is_whole
    return CheckReport.decide("coprime", X.name, ok, quantities,
                              {"commutator": subgroup_witness(commutators),
                               "centralizer": subgroup_witness(fixed)})


@_check("corollary2")
def verify_corollary2(G: GroupTable, L: SubgroupRef, m: int) -> CheckReport:
    """``Z_{d+m}(G) = Z_inf(G)`` with ``d = |L|`` when ``G/L`` is nilpotent of class ``<= m``."""
    _require(is_normal(G, L), "L is not normal in G")
    Q, _ = quotient(G, L)
    c = nilpotency_class(Q)
    _require(c is not None, "G/L is not nilpotent")
    _require(c <= m, f"G/L has class {c} > m = {m}")
    d = L.order
    series = upper_central_series(G)
    quantities = {
        "d": d,
        "m": m,
        "quotient_class": c,
        "z_dm_order": series.term(d + m).order,
        "hypercenter_order": series.top.order,
        "index_mod_z2m": G.order // series.term(2 * m).order,
        "series_length": series.length,
    }
    return CheckReport.decide("corollary2", G.name, series.term(d + m) == series.top, quantities,
                              {"L": subgroup_witness(L)})


@_check("kos")
def search_kos_witness(G: GroupTable) -> CheckReport:
    if G.order > config.enum_cap:
        raise CapExceeded("normal subgroup enumeration", G.order, config.enum_cap)
    top = upper_central_series(G).top
    t = G.order // top.order
    witness = minimal_nilpotent_quotient_witness(G)
    bound = bound_kos(t)
    quantities = {
        "t": t,
        "witness_order": witness.order,
        "kos_raw": bound.raw,
        "kos_ceil": bound.ceil,
    }
    return CheckReport.decide("kos", G.name, bound.admits(witness.order), quantities,
                              {"L": subgroup_witness(witness)})


# ---------------------------------------------------------------------------
# Actions and the holomorph
# ---------------------------------------------------------------------------

@_check("claim_star")
def verify_claim_star(G: GroupTable, A: AutSubgroup) -> CheckReport:
    """``G_d Gbar_d <= Z_d(S)`` in ``S = G x| A`` for every ``d`` up to stabilization."""
    inner = inner_automorphism_group(G)
    _require(inner.issubset(A), "A does not contain Inn(G)")
    if G.order * A.order > config.table_cap:
        raise CapExceeded("semidirect product", G.order * A.order, config.table_cap)
    S, _, _ = semidirect_product(G, A)
    g_series = a_center_series(G, A)
    s_series = upper_central_series(S)
    bar = inner_member_indices(G, A)
    n = G.order
    failures: List[int] = []
    steps = max(g_series.length, s_series.length) + 1
    for delta in range(steps + 1):
        g_d = g_series.term(delta).array
        s_d = (bar[g_d][:, None] * n + g_d[None, :]).ravel()
        if not s_series.term(delta).mask[s_d].all():
            failures.append(delta)
    quantities = {
        "s_order": S.order,
        "a_order": A.order,
        "deltas_checked": steps + 1,
        "failures": len(failures),
        "g_series_length": g_series.length,
        "s_series_length": s_series.length,
    }
    witness = {
        "g_series_orders": g_series.orders(),
        "s_series_orders": s_series.orders(),
        "failed_deltas": failures,
    }
    return CheckReport.decide("claim_star", G.name, not failures, quantities, witness)


@_check("theorem2_h")
def verify_theorem2_H(G: GroupTable, A: AutSubgroup, L: SubgroupRef) -> CheckReport:
    """Records ``(d, k, [G : Z_inf(G, A)])`` for an A-invariant ``L`` with ``G/L`` A-hypercentral.

    Also checks that ``A`` acts trivially on ``G/N`` where ``N`` is the preimage of
    ``A cap Inn(G)`` under the bar map.
    """
    _require(is_normalized_by_inner(G, A), "A is not normalized by Inn(G)")
    _require(is_normal(G, L), "L is not normal in G")
    _require(is_invariant(L, A), "L is not A-invariant")
    _require(quotient_is_a_hypercentral(G, L, A), "G/L is not A-hypercentral")
    top = a_center_series(G, A).top
    index = G.order // top.order
    k = outer_hypercenter_index(G, A)
    conj = G.mul[G.mul[G.elements[:, None], G.elements[None, :]], G.inv[:, None]]
    n_mask = np.array([row.tobytes() in A.index for row in conj])
    moved = G.mul[G.inv[None, :], A.generator_images] if A.generator_images.size else np.array([G.identity])
    ga_in_n = bool(n_mask[moved].all())
    quantities = {
        "d": L.order,
        "k": k,
        "index": index,
        "a_order": A.order,
        "n_order": int(n_mask.sum()),
        "ga_in_n": int(ga_in_n),
    }
    return CheckReport.decide("theorem2_h", G.name, ga_in_n, quantities, {"L": subgroup_witness(L)})


@_check("theorem2_b")
def verify_theorem2_B(G: GroupTable, A: AutSubgroup) -> CheckReport:
    """Minimal A-invariant normal ``L`` with ``G/L`` A-hypercentral, tabulated with ``(t, k)``."""
    _require(is_normalized_by_inner(G, A), "A is not normalized by Inn(G)")
    if G.order > config.enum_cap:
        raise CapExceeded("invariant subgroup enumeration", G.order, config.enum_cap)
    top = a_center_series(G, A).top
    L, tried = minimal_a_hypercentral_witness(G, A)
    quantities = {
        "t": G.order // top.order,
        "k": outer_hypercenter_index(G, A),
        "witness_order": L.order,
        "candidates_checked": tried,
    }
    return CheckReport.decide("theorem2_b", G.name, quotient_is_a_hypercentral(G, L, A),
                              quantities, {"L": subgroup_witness(L)})


# ---------------------------------------------------------------------------
# The truncated counterexample family
# ---------------------------------------------------------------------------

def example_name(p: int, n: int) -> str:
    return f"Ex({p},{n})"


def build_example(p: int, n: int) -> Tuple[GroupTable, AutSubgroup]:
    """``(Z/p)^(n+1)`` on basis ``a_0..a_n`` with ``A = <tau, gamma_1..gamma_n>``.

    ``gamma_i`` sends ``a_0`` to ``a_0 a_i``, ``tau`` sends ``a_0`` to ``a_0^2``; both fix
    ``Z = <a_1..a_n>``. An element's index is ``sum c_i p^i`` for ``prod a_i^c_i``.
    """
    if isinstance(p, bool) or not isinstance(p, int) or p < 3 or not sympy.isprime(p):
        raise NotOddPrime(p)
    if n < 1:
        raise GroupError(f"example rank must be positive, got {n}")
    if p ** (n + 1) > config.table_cap:
        raise CapExceeded("example group", p ** (n + 1), config.table_cap)
    G = elementary_abelian_group(p, n + 1)
    G = GroupTable(G.mul, G.identity, G.inv, example_name(p, n))
    digits = digit_vectors(p, n + 1)
    weights = p ** np.arange(n + 1)
    tau = digits.copy()
    tau[:, 0] = (2 * digits[:, 0]) % p
    images = [tau @ weights]
    for i in range(1, n + 1):
        gamma = digits.copy()
        gamma[:, i] = (digits[:, i] + digits[:, 0]) % p
        images.append(gamma @ weights)
    A = AutSubgroup.generate(G, images, name=f"A{p},{n}")
    logger.info(f"Built {G.name}: |G| = {G.order}, |A| = {A.order}")
    return G, A


def example_z(G: GroupTable, p: int) -> SubgroupRef:
    """``Z = <a_1..a_n>``, the elements with no ``a_0`` component."""
    return subgroup_from_mask(G, G.elements % p == 0)


def verify_example(p: int, n: int) -> CheckReport:
    """No proper A-invariant ``K`` has A-hypercentral ``G/K``; all of them lie in ``Z``."""
    G, A = build_example(p, n)
    Z = example_z(G, p)
    first = a_center_series(G, A).term(1)
    a_ok = first == Z and Z.index == p
    invariant = invariant_normal_subgroups(G, A)
    proper = [K for K in invariant if not K.is_whole]
    b_ok = all(K.issubset(Z) for K in proper)
    c_ok = not any(quotient_is_a_hypercentral(G, K, A) for K in proper)
    # tau acts on G/Z as multiplication by 2
    on_top = restrict_action_to_quotient(G, Z, A)
    d_ok = on_top.order > 1 and not fixed_points(on_top.group, on_top).is_whole
    quantities = {
        "p": p,
        "n": n,
        "g_order": G.order,
        "z_index": Z.index,
        "a_order": A.order,
        "a_is_abelian": int(A.is_abelian),
        "proper_invariant_count": len(proper),
        "first_center_is_z": int(a_ok),
        "invariant_inside_z": int(b_ok),
        "no_hypercentral_quotient": int(c_ok),
        "top_action_order": on_top.order,
    }
    return CheckReport.decide("example", G.name, a_ok and b_ok and c_ok and d_ok, quantities)


# ---------------------------------------------------------------------------
# Series hypotheses
# ---------------------------------------------------------------------------

@_check("corollary3")
def verify_corollary3(G: GroupTable, chain: Sequence[Tuple[SubgroupRef, SubgroupRef]]) -> CheckReport:
    """``G = G_0 >= F_1 >= G_1 >= ... >= G_n = 1``: minimal hypercentral-quotient witness ``<= f(t)``.

    ``f`` is evaluated at ``min(t, bound_f_cap)``; since ``f`` is increasing this never
    overstates the bound.
    """
    _require(len(chain) > 0, "empty chain")
    previous = whole_group(G)
    t = 1
    orders = []
    for i, (F, Gi) in enumerate(chain, 1):
        _require(is_normal(G, F) and is_normal(G, Gi), f"F_{i} or G_{i} is not normal")
        _require(Gi.issubset(F) and F.issubset(previous), f"chain is not descending at step {i}")
        t_i = F.order // Gi.order
        _require(t_i > 1, f"F_{i}/G_{i} is trivial")
        Q, proj = quotient(G, F)
        top = upper_central_series(Q).top
        _require(bool(top.mask[proj.image[previous.array]].all()),
                 f"G_{i - 1}/F_{i} is not in the hypercenter of G/F_{i}")
        t *= t_i
        orders.append(t_i)
        previous = Gi
    _require(previous.is_trivial, "G_n is not trivial")
    if G.order > config.enum_cap:
        raise CapExceeded("normal subgroup enumeration", G.order, config.enum_cap)
    witness = minimal_nilpotent_quotient_witness(G)
    evaluated_at = min(t, config.bound_f_cap)
    if evaluated_at < t:
        logger.warning(f"f({t}) beyond cap; comparing against f({evaluated_at}) <= f({t})")
    bound = bound_f(evaluated_at)
    quantities: Dict[str, Quantity] = {
        "t": t,
        "n": len(chain),
        "witness_order": witness.order,
        "f_evaluated_at": evaluated_at,
        "f_log2": bound.log2,
        "hypercenter_index": G.order // upper_central_series(G).top.order,
    }
    return CheckReport.decide("corollary3", G.name, bound.admits(witness.order), quantities,
                              {"L": subgroup_witness(witness), "factor_orders": orders})


@_check("corollary4")
def verify_corollary4(G: GroupTable, A: AutSubgroup, series: Sequence[SubgroupRef],
                      marked: Optional[Set[int]] = None) -> CheckReport:
    """Witnesses for both halves of the stabilized-series statement.

    ``marked`` holds the indices ``i`` of the factors ``series[i+1]/series[i]`` allowed
    to carry a nontrivial action; every other factor must be stabilized by ``A``.
    """
    _require(is_normalized_by_inner(G, A), "A is not normalized by Inn(G)")
    try:
        check_chain(A, series)
    except (NotAChain, NotInvariant) as e:
        raise PremiseFailed(f"supplied chain rejected: {e}") from e
    _require(series[0].is_trivial and series[-1].is_whole, "chain must run from 1 to G")
    factors = range(len(series) - 1)
    marked = set(factors) if marked is None else set(marked)
    for i in factors:
        if i not in marked:
            _require(acts_trivially_on_factor(A, series[i], series[i + 1]),
                     f"A acts nontrivially on unmarked factor {i}")
    if G.order > config.enum_cap:
        raise CapExceeded("invariant subgroup enumeration", G.order, config.enum_cap)

    tower = a_center_series(G, A)
    g0 = tower.top
    first_ok = all(acts_trivially_on_factor(A, lo, hi) for lo, hi in zip(tower.terms, tower.terms[1:]))

    L, _ = minimal_a_hypercentral_witness(G, A)
    induced = induced_action(G, L, A)
    upper = a_center_series(induced.quotient, induced.action)
    lifted = [induced.projection.preimage(term) for term in upper.terms]
    second_ok = upper.is_hypercentral and all(
        acts_trivially_on_factor(A, lo, hi) for lo, hi in zip(lifted, lifted[1:]))

    quantities = {
        "g0_order": g0.order,
        "g0_index": g0.index,
        "l_order": L.order,
        "chain_length": len(series) - 1,
        "marked_factors": len(marked & set(factors)),
    }
    witness = {
        "g0_series_orders": tower.orders(),
        "quotient_series_orders": [t.order for t in lifted],
        "L": subgroup_witness(L),
    }
    return CheckReport.decide("corollary4", G.name, first_ok and second_ok, quantities, witness)
