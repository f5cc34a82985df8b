"""Catalog sweeps and the concurrent runner.

A sweep is a list of jobs, one per catalog group; each job returns the reports for that
group. Jobs run on worker threads through anyio; the merged list is sorted so the output
does not depend on scheduling.
"""

import functools
import logging
import math
import time
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import anyio
import anyio.to_thread

from .catalog import CatalogEntry
from .config import config
from .errors import CapExceeded
from .group_core import GroupTable, SubgroupRef, centralizer, intersection, normal_subgroups, quotient
from .morphisms import (
    AutSubgroup,
    automorphism_group,
    count_automorphisms,
    inner_automorphism_group,
    invariant_normal_subgroups,
    is_normalized_by_inner,
)
from .series import nilpotency_class, upper_central_series
from .theorems import (
    CheckReport,
    coprime_decomposition,
    example_z,
    quotient_is_a_hypercentral,
    quotient_is_nilpotent,
    search_kos_witness,
    sort_reports,
    verify_claim_star,
    verify_corollary2,
    verify_corollary3,
    verify_corollary4,
    verify_example,
    verify_lemma1,
    verify_theorem1,
    verify_theorem2_B,
    verify_theorem2_H,
)

logger = logging.getLogger(__name__)

SweepJob = Callable[[], List[CheckReport]]

EXAMPLE_PARAMETERS: Tuple[Tuple[int, int], ...] = ((3, 1), (3, 2), (5, 1), (5, 2))


async def run_jobs(jobs: Sequence[SweepJob], max_workers: Optional[int] = None) -> List[CheckReport]:
    """Run ``jobs`` on at most ``max_workers`` threads and return the sorted reports."""
    limiter = anyio.CapacityLimiter(max_workers or config.max_workers)
    results: List[CheckReport] = []

    async def run_one(job: SweepJob) -> None:
        results.extend(await anyio.to_thread.run_sync(job, limiter=limiter))

    async with anyio.create_task_group() as tg:
        for job in jobs:
            tg.start_soon(run_one, job)
    return sort_reports(results)


def run_sweep(jobs: Sequence[SweepJob], max_workers: Optional[int] = None) -> List[CheckReport]:
    return anyio.run(functools.partial(run_jobs, jobs, max_workers))


def _job(label: str, body: Callable[[], List[CheckReport]]) -> SweepJob:
    """Skip (with a warning) instances that exceed a configured cap."""
    def job() -> List[CheckReport]:
        try:
            return body()
        except CapExceeded as e:
            logger.warning(f"Skipping {label}: {e}")
            return []
    return job


def _tag(report: CheckReport, **fields) -> CheckReport:
    report.witness = {**(report.witness or {}), **fields}
    return report


def _small_automorphism_group(G: GroupTable, limit: int) -> Optional[AutSubgroup]:
    """``Aut(G)`` when it has at most ``limit`` members, else None."""
    if G.order > config.aut_cap or limit < 1:
        return None
    count, exact = count_automorphisms(G, limit=limit + 1)
    if not exact or count > limit:
        return None
    return automorphism_group(G)


def _actions(entry: CatalogEntry) -> List[Tuple[str, GroupTable, AutSubgroup]]:
    """(label, group, action) pairs the Theorem 2 sweeps run over."""
    G = entry.build()
    pairs = [("inn", G, inner_automorphism_group(G))]
    aut = _small_automorphism_group(G, 2048)
    if aut is not None:
        pairs.append(("aut", G, aut))
    stored = entry.action()
    if stored is not None:
        pairs.append(("stored", stored.group, stored))
    return pairs


# ---------------------------------------------------------------------------
# Job builders, one per check
# ---------------------------------------------------------------------------

def theorem1_jobs(entries: Sequence[CatalogEntry]) -> List[SweepJob]:
    def body(entry: CatalogEntry) -> List[CheckReport]:
        G = entry.build()
        return [verify_theorem1(G, L) for L in normal_subgroups(G) if quotient_is_nilpotent(G, L)]
    return [_job(f"theorem1 on {e.name}", functools.partial(body, e)) for e in entries]


def kos_jobs(entries: Sequence[CatalogEntry]) -> List[SweepJob]:
    return [_job(f"kos on {e.name}", lambda e=e: [search_kos_witness(e.build())]) for e in entries]


def corollary2_jobs(entries: Sequence[CatalogEntry]) -> List[SweepJob]:
    def body(entry: CatalogEntry) -> List[CheckReport]:
        G = entry.build()
        reports = []
        for L in normal_subgroups(G):
            c = nilpotency_class(quotient(G, L)[0])
            if c is not None:
                reports.append(verify_corollary2(G, L, c))
        return reports
    return [_job(f"corollary2 on {e.name}", functools.partial(body, e)) for e in entries]


def lemma1_jobs(entries: Sequence[CatalogEntry]) -> List[SweepJob]:
    """``A = Z(L)``, ``H = C_G(L)`` for each ``L`` with ``G/L`` nilpotent."""
    def body(entry: CatalogEntry) -> List[CheckReport]:
        G = entry.build()
        reports = []
        for L in normal_subgroups(G):
            if quotient_is_nilpotent(G, L):
                H = centralizer(G, L.elems)
                reports.append(_tag(verify_lemma1(G, intersection(H, L), H), l_order=L.order))
        return reports
    return [_job(f"lemma1 on {e.name}", functools.partial(body, e)) for e in entries]


def claim_star_jobs(entries: Sequence[CatalogEntry]) -> List[SweepJob]:
    def body(entry: CatalogEntry) -> List[CheckReport]:
        G = entry.build()
        reports = []
        inner = inner_automorphism_group(G)
        if G.order * inner.order <= config.table_cap:
            reports.append(_tag(verify_claim_star(G, inner), action="inn"))
        aut = _small_automorphism_group(G, config.table_cap // G.order)
        if aut is not None:
            reports.append(_tag(verify_claim_star(G, aut), action="aut"))
        return reports
    return [_job(f"claim_star on {e.name}", functools.partial(body, e)) for e in entries]


def coprime_actions(X: GroupTable) -> List[AutSubgroup]:
    """Cyclic subgroups of ``Aut(X)`` of order coprime to ``|X|`` (when ``Aut(X)`` is small)."""
    aut = _small_automorphism_group(X, 2048)
    if aut is None:
        if X.order % 2:
            return [AutSubgroup.generate(X, [X.inv], name="inv")]
        return []
    orders = aut.as_group().element_orders
    seen: Dict[bytes, AutSubgroup] = {}
    for k, row in enumerate(aut.images):
        if orders[k] > 1 and math.gcd(int(orders[k]), X.order) == 1:
            Q = AutSubgroup.generate(X, [row], name=f"<a{k}>")
            seen.setdefault(Q.images.tobytes(), Q)
    return list(seen.values())


def coprime_jobs(entries: Sequence[CatalogEntry], max_order: int = 81) -> List[SweepJob]:
    def body(entry: CatalogEntry) -> List[CheckReport]:
        reports = []
        if entry.is_abelian and entry.order <= max_order:
            X = entry.build()
            reports += [_tag(coprime_decomposition(X, Q), action=Q.name) for Q in coprime_actions(X)]
        stored = entry.action()
        if stored is not None and stored.group.is_abelian and \
                math.gcd(stored.group.order, stored.order) == 1:
            reports.append(_tag(coprime_decomposition(stored.group, stored), action=entry.name))
        return reports
    return [_job(f"coprime on {e.name}", functools.partial(body, e)) for e in entries]


def theorem2_h_jobs(entries: Sequence[CatalogEntry]) -> List[SweepJob]:
    def body(entry: CatalogEntry) -> List[CheckReport]:
        reports = []
        for label, G, A in _actions(entry):
            if not is_normalized_by_inner(G, A):
                continue
            for L in invariant_normal_subgroups(G, A):
                if quotient_is_a_hypercentral(G, L, A):
                    reports.append(_tag(verify_theorem2_H(G, A, L), action=label))
            if label == "stored" and entry.kind == "example":
                # G/Z is not A-hypercentral, so this report always has unmet premises
                Z = example_z(G, entry.params[0])
                reports.append(_tag(verify_theorem2_H(G, A, Z), action=label))
        return reports
    return [_job(f"theorem2_h on {e.name}", functools.partial(body, e)) for e in entries]


def theorem2_b_jobs(entries: Sequence[CatalogEntry]) -> List[SweepJob]:
    def body(entry: CatalogEntry) -> List[CheckReport]:
        return [_tag(verify_theorem2_B(G, A), action=label)
                for label, G, A in _actions(entry) if is_normalized_by_inner(G, A)]
    return [_job(f"theorem2_b on {e.name}", functools.partial(body, e)) for e in entries]


def example_jobs(entries: Sequence[CatalogEntry] = ()) -> List[SweepJob]:
    return [_job(f"example ({p}, {n})", lambda p=p, n=n: [verify_example(p, n)])
            for p, n in EXAMPLE_PARAMETERS]


def _corollary3_chains(G: GroupTable) -> List[List[Tuple[SubgroupRef, SubgroupRef]]]:
    """One-step chain ``G >= G >= 1`` and, per proper normal ``N``, ``G >= G >= N >= K >= 1``."""
    normals = normal_subgroups(G)
    whole, trivial = normals[-1], normals[0]
    if whole.is_trivial:
        return []
    chains = [[(whole, trivial)]]
    for N in normals[1:-1]:
        for K in normals[1:]:
            if not K.issubset(N):
                continue
            Q, proj = quotient(G, K)
            top = upper_central_series(Q).top
            if top.mask[proj.image[N.array]].all():
                chains.append([(whole, N), (K, trivial)])
                break
    return chains


def corollary3_jobs(entries: Sequence[CatalogEntry]) -> List[SweepJob]:
    def body(entry: CatalogEntry) -> List[CheckReport]:
        G = entry.build()
        return [_tag(verify_corollary3(G, chain), chain_steps=len(chain)) for chain in _corollary3_chains(G)]
    return [_job(f"corollary3 on {e.name}", functools.partial(body, e)) for e in entries]


def corollary4_jobs(entries: Sequence[CatalogEntry]) -> List[SweepJob]:
    """Inner action with the upper central series (last factor marked), plus stored actions."""
    def body(entry: CatalogEntry) -> List[CheckReport]:
        G = entry.build()
        series = list(upper_central_series(G).terms)
        marked = set()
        if not series[-1].is_whole:
            marked.add(len(series) - 1)
            series.append(normal_subgroups(G)[-1])
        reports = [_tag(verify_corollary4(G, inner_automorphism_group(G), series, marked), action="inn")]
        stored = entry.action()
        if stored is not None and entry.kind == "example":
            chain = [series[0], example_z(G, entry.params[0]), normal_subgroups(G)[-1]]
            reports.append(_tag(verify_corollary4(G, stored, chain, {1}), action="stored"))
        return reports
    return [_job(f"corollary4 on {e.name}", functools.partial(body, e)) for e in entries]


SWEEPS: Dict[str, Callable[[Sequence[CatalogEntry]], List[SweepJob]]] = {
    "theorem1": theorem1_jobs,
    "kos": kos_jobs,
    "corollary2": corollary2_jobs,
    "lemma1": lemma1_jobs,
    "claim_star": claim_star_jobs,
    "coprime": coprime_jobs,
    "theorem2_h": theorem2_h_jobs,
    "theorem2_b": theorem2_b_jobs,
    "example": example_jobs,
    "corollary3": corollary3_jobs,
    "corollary4": corollary4_jobs,
}


def sweep_jobs(check: str, entries: Sequence[CatalogEntry]) -> List[SweepJob]:
    """Jobs for one check name, or for every check when ``check == "all"``."""
    if check == "all":
        return [job for name in SWEEPS for job in SWEEPS[name](entries)]
    if check not in SWEEPS:
        raise KeyError(check)
    return SWEEPS[check](entries)


def run_checks(check: str, entries: Sequence[CatalogEntry],
               max_workers: Optional[int] = None) -> List[CheckReport]:
    """Run ``check`` (or every check, one after another) and log how long each took."""
    names = list(SWEEPS) if check == "all" else [check]
    reports: List[CheckReport] = []
    for name in names:
        started = time.perf_counter()
        part = run_sweep(sweep_jobs(name, entries), max_workers)
        logger.info(f"{name}: {len(part)} reports over {len(entries)} groups "
                    f"in {time.perf_counter() - started:.1f}s")
        reports.extend(part)
    return sort_reports(reports)
