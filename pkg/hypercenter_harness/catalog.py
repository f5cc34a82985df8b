"""The group catalog swept by the checks.

Entries are built lazily and cached. Names follow one scheme: ``C12``, ``D8``, ``Q8``,
``S4``, ``E3^2``, ``Ex(3,1)``, ``Hol(C5)``, ``E3^2:swap`` and ``AxB`` for direct
products, which :meth:`GroupCatalog.get` also resolves on the fly.
"""

import logging
import math
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np
import sympy

from .config import config
from .constructions import (
    cyclic_group,
    digit_vectors,
    dihedral_group,
    elementary_abelian_group,
    quaternion_group,
    symmetric_group,
)
from .errors import GroupError
from .group_core import GroupTable, center, direct_product, semidirect_product
from .morphisms import AutSubgroup, automorphism_group, count_automorphisms
from .series import upper_central_series
from .theorems import build_example, example_name

logger = logging.getLogger(__name__)

ABELIAN_KINDS = ("cyclic", "elementary_abelian", "example")


@dataclass
class CatalogEntry:
    """A named recipe for a group, plus the action stored with it (if any)."""

    name: str
    kind: str
    params: Tuple[Any, ...]
    order: int
    cached: Optional[GroupTable] = field(default=None, repr=False)
    cached_action: Optional[AutSubgroup] = field(default=None, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def build(self) -> GroupTable:
        with self._lock:
            if self.cached is None:
                self.cached, self.cached_action = self._construct()
            return self.cached

    def action(self) -> Optional[AutSubgroup]:
        """The stored action: ``A`` for example entries, the acting group for semidirect ones."""
        self.build()
        return self.cached_action

    @property
    def is_abelian(self) -> bool:
        if self.kind == "table":
            return self.build().is_abelian
        if self.kind in ABELIAN_KINDS:
            return True
        if self.kind == "direct_product":
            return all(part.is_abelian for part in self.params)
        return False

    @property
    def elementary_prime(self) -> Optional[int]:
        """``p`` when this is an elementary abelian p-group (including ``C_p``)."""
        if self.kind == "elementary_abelian":
            return self.params[0]
        if self.kind == "cyclic" and sympy.isprime(self.order):
            return self.order
        return None

    def describe(self) -> Dict[str, Any]:
        params = [p.name if isinstance(p, CatalogEntry) else p for p in self.params]
        return {"name": self.name, "kind": self.kind, "order": self.order, "params": params}

    def _construct(self) -> Tuple[GroupTable, Optional[AutSubgroup]]:
        kind, params = self.kind, self.params
        if kind == "cyclic":
            return cyclic_group(*params), None
        if kind == "dihedral":
            return dihedral_group(*params), None
        if kind == "quaternion":
            return quaternion_group(*params), None
        if kind == "symmetric":
            return symmetric_group(*params), None
        if kind == "elementary_abelian":
            return elementary_abelian_group(*params), None
        if kind == "example":
            return build_example(*params)
        if kind == "direct_product":
            left, right = params
            return direct_product(left.build(), right.build()), None
        if kind == "semidirect":
            base, action_name = params
            N = base.build()
            A = _named_action(N, action_name)
            S, _, _ = semidirect_product(N, A)
            S = GroupTable(S.mul, S.identity, S.inv, self.name)
            return S, A
        raise GroupError(f"unknown catalog kind {kind!r}")


def _named_action(N: GroupTable, action_name: str) -> AutSubgroup:
    if action_name == "aut":
        return automorphism_group(N)
    if action_name in ("swap", "inv1"):
        digits = digit_vectors(3, 2)
        moved = digits.copy()
        if action_name == "swap":
            moved = digits[:, ::-1]
        else:
            moved[:, 0] = (-digits[:, 0]) % 3
        return AutSubgroup.generate(N, [moved @ np.array([1, 3])], name=action_name)
    raise GroupError(f"unknown action {action_name!r}")


class GroupCatalog:
    """Ordered, name-unique collection of catalog entries."""

    def __init__(self, entries: Optional[List[CatalogEntry]] = None):
        self._entries: Dict[str, CatalogEntry] = {}
        self._lock = threading.RLock()
        for entry in entries or []:
            self.add(entry)

    def add(self, entry: CatalogEntry) -> CatalogEntry:
        if entry.order > config.table_cap:
            raise GroupError(f"{entry.name} of order {entry.order} exceeds the table cap")
        with self._lock:
            if entry.name in self._entries:
                raise GroupError(f"duplicate catalog name {entry.name!r}")
            self._entries[entry.name] = entry
        return entry

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[CatalogEntry]:
        with self._lock:
            return iter(list(self._entries.values()))

    def __contains__(self, name: str) -> bool:
        return self._find(name) is not None

    def entries(self, max_order: Optional[int] = None, kind: Optional[str] = None) -> List[CatalogEntry]:
        return [e for e in self
                if (max_order is None or e.order <= max_order) and (kind is None or e.kind == kind)]

    def get(self, name: str) -> CatalogEntry:
        entry = self._find(name)
        if entry is None:
            raise GroupError(f"unknown group {name!r}")
        return entry

    def group(self, name: str) -> GroupTable:
        return self.get(name).build()

    def _find(self, name: str) -> Optional[CatalogEntry]:
        with self._lock:
            return self._find_locked(name)

    def _find_locked(self, name: str) -> Optional[CatalogEntry]:
        if name in self._entries:
            return self._entries[name]
        # "AxB": try every split point, leftmost first
        for k, ch in enumerate(name):
            if ch != "x" or k == 0 or k == len(name) - 1:
                continue
            left, right = self._find_locked(name[:k]), self._find_locked(name[k + 1:])
            if left is not None and right is not None:
                entry = product_entry(left, right)
                entry.name = name
                self._entries[name] = entry
                return entry
        return None


def product_entry(left: CatalogEntry, right: CatalogEntry) -> CatalogEntry:
    return CatalogEntry(f"{left.name}x{right.name}", "direct_product", (left, right), left.order * right.order)


def _base_entries() -> List[CatalogEntry]:
    entries = [CatalogEntry(f"C{n}", "cyclic", (n,), n) for n in range(1, 65)]
    entries += [CatalogEntry(f"D{order}", "dihedral", (order,), order) for order in range(8, 65, 2)]
    entries += [CatalogEntry("Q8", "quaternion", (8,), 8), CatalogEntry("Q16", "quaternion", (16,), 16)]
    entries += [CatalogEntry("S3", "symmetric", (3,), 6), CatalogEntry("S4", "symmetric", (4,), 24)]
    for p in (2, 3, 5, 7):
        k = 2
        while p ** k <= 81:
            entries.append(CatalogEntry(f"E{p}^{k}", "elementary_abelian", (p, k), p ** k))
            k += 1
    return entries


def _skip_product(left: CatalogEntry, right: CatalogEntry) -> bool:
    """Products already present under another name."""
    if left.order < 2 or right.order < 2:
        return True
    p, q = left.elementary_prime, right.elementary_prime
    if p is not None and p == q:
        return True
    return left.kind == "cyclic" and right.kind == "cyclic" and math.gcd(left.order, right.order) == 1


def default_catalog(max_order: int = 64) -> GroupCatalog:
    """Standard families, the example truncations, small holomorphs and pairwise products."""
    catalog = GroupCatalog()
    base = _base_entries()
    for entry in base:
        catalog.add(entry)
    for p, n in ((3, 1), (3, 2), (5, 1)):
        catalog.add(CatalogEntry(example_name(p, n), "example", (p, n), p ** (n + 1)))
    for n, aut_order in ((3, 2), (4, 2), (5, 4), (7, 6)):
        catalog.add(CatalogEntry(f"Hol(C{n})", "semidirect", (catalog.get(f"C{n}"), "aut"), n * aut_order))
    e9 = catalog.get("E3^2")
    catalog.add(CatalogEntry("E3^2:swap", "semidirect", (e9, "swap"), 18))
    catalog.add(CatalogEntry("E3^2:inv1", "semidirect", (e9, "inv1"), 18))
    for i, left in enumerate(base):
        for right in base[i:]:
            if left.order * right.order <= max_order and not _skip_product(left, right):
                catalog.add(product_entry(left, right))
    logger.debug(f"Default catalog holds {len(catalog)} entries")
    return catalog


@lru_cache(maxsize=None)
def shared_catalog() -> GroupCatalog:
    return default_catalog()


def resolve_group(name: Optional[str] = None, path: Optional[str] = None,
                  perm_path: Optional[str] = None, catalog: Optional[GroupCatalog] = None) -> GroupTable:
    """Exactly one of a catalog name, a Cayley file or a permutation file."""
    given = [x for x in (name, path, perm_path) if x is not None]
    if len(given) != 1:
        raise GroupError("give exactly one of a group name, a Cayley file or a permutation file")
    if path is not None:
        from .cayley_io import parse_cayley_file
        return parse_cayley_file(path)
    if perm_path is not None:
        from .cayley_io import parse_permutation_generators
        return parse_permutation_generators(perm_path)
    return (catalog or shared_catalog()).group(name)


def group_summary(G: GroupTable) -> Dict[str, Any]:
    """Order, center, nilpotency class, hypercenter and ``|Aut|`` of ``G``."""
    series = upper_central_series(G)
    summary: Dict[str, Any] = {
        "name": G.name,
        "order": G.order,
        "abelian": G.is_abelian,
        "center_order": center(G).order,
        "nilpotency_class": series.length if series.is_hypercentral else None,
        "hypercenter_order": series.top.order,
        "upper_central_orders": series.orders(),
    }
    if G.order <= config.aut_cap:
        count, exact = count_automorphisms(G, limit=config.aut_member_cap)
        summary["aut_order"] = count
        summary["aut_exact"] = exact
    else:
        summary["aut_order"] = None
        summary["aut_exact"] = False
    summary["inn_order"] = G.order // summary["center_order"]
    return summary
