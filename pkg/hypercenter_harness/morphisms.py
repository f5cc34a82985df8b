"""Automorphisms, inner automorphisms and A-invariance.

An automorphism is stored as its image array. An :class:`AutSubgroup` is an explicit,
closed list of such arrays sorted lexicographically, so the identity map is always
member ``0``.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .config import config
from .errors import CapExceeded, GroupError, NotAutomorphism, NotInvariant
from .group_core import (
    GroupMap,
    GroupTable,
    SubgroupRef,
    closure_mask,
    generating_set,
    greedy_generating_set,
    group_from_trusted_table,
    join_lattice,
    quotient,
    subgroup_from_mask,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Automorphism:
    """A bijective multiplication-preserving self-map of ``group``."""

    group: GroupTable
    image: np.ndarray

    @classmethod
    def from_image(cls, group: GroupTable, image: Sequence[int]) -> 'Automorphism':
        arr = np.array(image, dtype=np.int64)
        n = group.order
        if arr.shape != (n,) or np.unique(arr).size != n or arr.min() < 0 or arr.max() >= n:
            raise NotAutomorphism(f"image is not a permutation of the {n} elements of {group.name}")
        if not np.array_equal(arr[group.mul], group.mul[arr[:, None], arr[None, :]]):
            raise NotAutomorphism(f"image does not preserve multiplication in {group.name}")
        arr.setflags(write=False)
        return cls(group, arr)

    @cached_property
    def key(self) -> bytes:
        return self.image.tobytes()

    def __call__(self, x: int) -> int:
        return int(self.image[x])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.group is other.group and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def compose(self, first: 'Automorphism') -> 'Automorphism':
        """``self o first``."""
        return Automorphism(self.group, self.image[first.image])

    def inverse(self) -> 'Automorphism':
        return Automorphism(self.group, np.argsort(self.image))

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.image, np.arange(self.group.order)))


def _image_rows(group: GroupTable, maps: Iterable) -> np.ndarray:
    rows = [np.asarray(m.image if isinstance(m, Automorphism) else m, dtype=np.int64) for m in maps]
    if not rows:
        return np.zeros((0, group.order), dtype=np.int64)
    return np.vstack(rows)


@dataclass(frozen=True, eq=False)
class AutSubgroup:
    """A subgroup of ``Aut(group)`` held as an explicit closed member list.

    ``images[i]`` is the image array of member ``i``; ``generator_images`` are the
    generators the members were closed from (possibly empty for the trivial group).
    """

    group: GroupTable
    images: np.ndarray
    generator_images: np.ndarray
    name: str = "A"

    @classmethod
    def generate(cls, group: GroupTable, generators: Iterable, name: str = "A") -> 'AutSubgroup':
        """Close ``generators`` (Automorphisms or image arrays) under composition."""
        gens = _image_rows(group, generators)
        identity = np.arange(group.order, dtype=np.int64)
        gens = np.array([g for g in gens if not np.array_equal(g, identity)], dtype=np.int64)
        gens = gens.reshape(-1, group.order)
        seen: Dict[bytes, np.ndarray] = {identity.tobytes(): identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for member in frontier:
                for g in gens:
                    composed = member[g]
                    k = composed.tobytes()
                    if k not in seen:
                        seen[k] = composed
                        nxt.append(composed)
                        if len(seen) > config.aut_member_cap:
                            raise CapExceeded("automorphism subgroup", len(seen), config.aut_member_cap)
            frontier = nxt
        return cls.from_members(group, seen.values(), gens, name)

    @classmethod
    def from_members(cls, group: GroupTable, members: Iterable[np.ndarray],
                     generators: np.ndarray, name: str = "A") -> 'AutSubgroup':
        """Wrap a member set already known to be closed."""
        ordered = sorted((np.asarray(m, dtype=np.int64) for m in members), key=lambda a: a.tolist())
        images = np.vstack(ordered) if ordered else np.arange(group.order)[None, :]
        images.setflags(write=False)
        gens = np.array(generators, dtype=np.int64).reshape(-1, group.order)
        gens.setflags(write=False)
        return cls(group, images, gens, name)

    @classmethod
    def trivial(cls, group: GroupTable) -> 'AutSubgroup':
        return cls.generate(group, [], name="1")

    @property
    def order(self) -> int:
        return int(self.images.shape[0])

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"AutSubgroup({self.name!r} on {self.group.name!r}, order={self.order})"

    @cached_property
    def index(self) -> Dict[bytes, int]:
        return {row.tobytes(): i for i, row in enumerate(self.images)}

    @property
    def members(self) -> List[Automorphism]:
        return [Automorphism(self.group, row) for row in self.images]

    @property
    def generators(self) -> List[Automorphism]:
        return [Automorphism(self.group, row) for row in self.generator_images]

    def __iter__(self) -> Iterator[Automorphism]:
        return iter(self.members)

    def __contains__(self, item: object) -> bool:
        if isinstance(item, Automorphism):
            return item.group is self.group and item.key in self.index
        return np.asarray(item, dtype=np.int64).tobytes() in self.index

    def index_of(self, image) -> int:
        key = np.asarray(image, dtype=np.int64).tobytes()
        if key not in self.index:
            raise GroupError(f"map is not a member of {self.name}")
        return self.index[key]

    def issubset(self, other: 'AutSubgroup') -> bool:
        return all(row.tobytes() in other.index for row in self.images)

    @cached_property
    def composition_table(self) -> np.ndarray:
        """``table[i, j]`` is the member index of ``members[i] o members[j]``."""
        a = self.order
        table = np.empty((a, a), dtype=np.int64)
        for i in range(a):
            composed = self.images[i][self.images]
            for j in range(a):
                table[i, j] = self.index[composed[j].tobytes()]
        table.setflags(write=False)
        return table

    @cached_property
    def _as_group(self) -> GroupTable:
        return group_from_trusted_table(self.composition_table, self.name)

    def as_group(self) -> GroupTable:
        """The abstract group on member indices (composition as multiplication)."""
        return self._as_group

    @property
    def is_abelian(self) -> bool:
        return self.as_group().is_abelian


def _require_same_group(G: GroupTable, A: AutSubgroup) -> None:
    if A.group is not G:
        raise GroupError(f"{A.name} does not act on {G.name}")


# ---------------------------------------------------------------------------
# Automorphism search
# ---------------------------------------------------------------------------

class _AutomorphismSearch:
    """Backtracking over generator images.

    For each prefix ``gens[:j+1]`` of a greedy generating set we keep a spanning tree of
    the generated subgroup ``H_j`` (every element written as parent * generator) and the
    list of Cayley-graph edges ``(x, i, x * g_i)``. Choosing images for the first
    ``j + 1`` generators defines the map on ``H_j`` through the tree; it extends to a
    homomorphism iff every edge is respected.
    """

    def __init__(self, G: GroupTable):
        self.G = G
        self.gens = greedy_generating_set(G)
        self.orders = G.element_orders
        self.levels = [self._level(j) for j in range(len(self.gens))]

    def _level(self, j: int):
        G, gens = self.G, self.gens[: j + 1]
        order = [G.identity]
        parent = {G.identity: (-1, -1)}
        head = 0
        while head < len(order):
            x = order[head]
            head += 1
            for i, g in enumerate(gens):
                y = int(G.mul[x, g])
                if y not in parent:
                    parent[y] = (x, i)
                    order.append(y)
        elems = np.array(order, dtype=np.int64)
        tree = [(y, parent[y][0], parent[y][1]) for y in order[1:]]
        src = np.repeat(elems, len(gens))
        which = np.tile(np.arange(len(gens)), elems.size)
        dst = G.mul[src, np.array(gens, dtype=np.int64)[which]]
        return elems, tree, (src, which, dst)

    def _images_for_level(self, j: int, chosen: List[int]) -> Optional[np.ndarray]:
        elems, tree, (src, which, dst) = self.levels[j]
        img = np.full(self.G.order, -1, dtype=np.int64)
        img[self.G.identity] = self.G.identity
        for y, x, i in tree:
            img[y] = self.G.mul[img[x], chosen[i]]
        chosen_arr = np.array(chosen, dtype=np.int64)
        if not np.array_equal(img[dst], self.G.mul[img[src], chosen_arr[which]]):
            return None
        if np.unique(img[elems]).size != elems.size:
            return None
        return img

    def _candidates(self, j: int, chosen: List[int]) -> np.ndarray:
        target_order = self.orders[self.gens[j]]
        candidates = self.orders == target_order
        if chosen:
            candidates &= ~closure_mask(self.G, chosen)
        return np.flatnonzero(candidates)

    def __iter__(self) -> Iterator[np.ndarray]:
        if not self.gens:
            yield np.arange(self.G.order, dtype=np.int64)
            return
        yield from self._extend(0, [])

    def _extend(self, j: int, chosen: List[int]) -> Iterator[np.ndarray]:
        for y in self._candidates(j, chosen):
            chosen.append(int(y))
            img = self._images_for_level(j, chosen)
            if img is not None:
                if j + 1 == len(self.gens):
                    yield img
                else:
                    yield from self._extend(j + 1, chosen)
            chosen.pop()


def _check_aut_cap(G: GroupTable) -> None:
    if G.order > config.aut_cap:
        raise CapExceeded("automorphism search", G.order, config.aut_cap)


def automorphism_group(G: GroupTable) -> AutSubgroup:
    """The full ``Aut(G)``, by backtracking over images of a greedy generating set."""
    _check_aut_cap(G)
    members = []
    for img in _AutomorphismSearch(G):
        members.append(img)
        if len(members) > config.aut_member_cap:
            raise CapExceeded("automorphism group", len(members), config.aut_member_cap)
    # any generating set of the abstract group will do; take one on member indices
    A = AutSubgroup.from_members(G, members, np.zeros((0, G.order)), name=f"Aut({G.name})")
    gens = A.images[generating_set(A.as_group())]
    A = AutSubgroup(G, A.images, gens, A.name)
    logger.info(f"Found {A.order} automorphisms of {G.name}")
    return A


def count_automorphisms(G: GroupTable, limit: Optional[int] = None) -> Tuple[int, bool]:
    """Count automorphisms of ``G``, stopping at ``limit``.

    Returns ``(count, exact)``; ``exact`` is False when the search stopped early, in
    which case ``count == limit`` is a lower bound.
    """
    _check_aut_cap(G)
    count = 0
    for _ in _AutomorphismSearch(G):
        count += 1
        if limit is not None and count >= limit:
            logger.debug(f"Stopped counting automorphisms of {G.name} at {limit}")
            return count, False
    return count, True


# ---------------------------------------------------------------------------
# Inner automorphisms and invariance
# ---------------------------------------------------------------------------

def _conjugation_rows(G: GroupTable, conjugators: np.ndarray) -> np.ndarray:
    """Row ``k`` is ``x -> g x g^-1`` for ``g = conjugators[k]``."""
    g = np.asarray(conjugators, dtype=np.int64)
    x = G.elements
    return G.mul[G.mul[g[:, None], x[None, :]], G.inv[g][:, None]]


def inner_automorphism_group(G: GroupTable) -> AutSubgroup:
    """``Inn(G)`` without the bar map."""
    rows = _conjugation_rows(G, G.elements)
    distinct = {row.tobytes(): row for row in rows}
    gens = _conjugation_rows(G, np.array(generating_set(G), dtype=np.int64))
    identity = np.arange(G.order)
    gens = np.array([g for g in gens if not np.array_equal(g, identity)]).reshape(-1, G.order)
    return AutSubgroup.from_members(G, distinct.values(), gens, name=f"Inn({G.name})")


def inner_automorphisms(G: GroupTable) -> Tuple[AutSubgroup, GroupMap]:
    """``Inn(G)`` and the homomorphism ``g -> (x -> g x g^-1)`` onto it."""
    inn = inner_automorphism_group(G)
    rows = _conjugation_rows(G, G.elements)
    bar = np.array([inn.index[row.tobytes()] for row in rows], dtype=np.int64)
    return inn, GroupMap(G, inn.as_group(), bar)


def inner_member_indices(G: GroupTable, A: AutSubgroup) -> np.ndarray:
    """Member index in ``A`` of conjugation by each ``g``; raises if ``Inn(G)`` is not in ``A``."""
    _require_same_group(G, A)
    return np.array([A.index_of(row) for row in _conjugation_rows(G, G.elements)], dtype=np.int64)


def is_normalized_by_inner(G: GroupTable, A: AutSubgroup) -> bool:
    """True iff conjugating every member of ``A`` by every inner automorphism stays in ``A``."""
    _require_same_group(G, A)
    for c in _conjugation_rows(G, np.array(generating_set(G), dtype=np.int64)):
        c_inv = np.argsort(c)
        for alpha in A.generator_images:
            if c_inv[alpha[c]].tobytes() not in A.index:
                return False
    return True


def invariant_closure_mask(G: GroupTable, gen_images: np.ndarray, seeds: Iterable[int]) -> np.ndarray:
    mask = closure_mask(G, seeds)
    if gen_images.size == 0:
        return mask
    while True:
        elems = np.flatnonzero(mask)
        moved = np.unique(gen_images[:, elems])
        if mask[moved].all():
            return mask
        mask = closure_mask(G, np.concatenate([elems, moved]))


def a_invariant_closure(G: GroupTable, A: AutSubgroup, S: Iterable[int]) -> SubgroupRef:
    """Smallest subgroup containing ``S`` and mapped into itself by ``A``."""
    _require_same_group(G, A)
    return subgroup_from_mask(G, invariant_closure_mask(G, A.generator_images, S))


def fixed_points(G: GroupTable, A: AutSubgroup) -> SubgroupRef:
    """``C_G(A)``."""
    _require_same_group(G, A)
    if A.generator_images.shape[0] == 0:
        return subgroup_from_mask(G, np.ones(G.order, dtype=bool))
    return subgroup_from_mask(G, np.all(A.generator_images == G.elements[None, :], axis=0))


def invariance_witness(N: SubgroupRef, A: AutSubgroup) -> Optional[Tuple[int, int]]:
    """First ``(element, generator index)`` moved outside ``N``, or None when invariant."""
    for k, alpha in enumerate(A.generator_images):
        outside = np.flatnonzero(~N.mask[alpha[N.array]])
        if outside.size:
            return int(N.array[outside[0]]), k
    return None


def is_invariant(N: SubgroupRef, A: AutSubgroup) -> bool:
    return invariance_witness(N, A) is None


@dataclass(frozen=True)
class InducedAction:
    quotient: GroupTable
    projection: GroupMap
    action: AutSubgroup


def induced_action(G: GroupTable, N: SubgroupRef, A: AutSubgroup) -> InducedAction:
    """Quotient ``G/N`` together with the maps ``A`` induces on it (duplicates merged)."""
    _require_same_group(G, A)
    witness = invariance_witness(N, A)
    if witness is not None:
        raise NotInvariant(*witness)
    Q, proj = quotient(G, N)
    labels = proj.image
    reps = np.unique(labels, return_index=True)[1]
    induced = labels[A.generator_images[:, reps]] if A.generator_images.size else []
    action = AutSubgroup.generate(Q, induced, name=f"{A.name}|{Q.name}")
    return InducedAction(Q, proj, action)


def restrict_action_to_quotient(G: GroupTable, N: SubgroupRef, A: AutSubgroup) -> AutSubgroup:
    return induced_action(G, N, A).action


def invariant_normal_subgroups(G: GroupTable, A: AutSubgroup) -> List[SubgroupRef]:
    """Normal subgroups mapped into themselves by ``A``, sorted by order then elements."""
    _require_same_group(G, A)
    if G.order > config.enum_cap:
        raise CapExceeded("invariant subgroup enumeration", G.order, config.enum_cap)
    inner = _conjugation_rows(G, np.array(generating_set(G), dtype=np.int64))
    acting = np.vstack([A.generator_images.reshape(-1, G.order), inner.reshape(-1, G.order)])
    atoms = [invariant_closure_mask(G, acting, [x]) for x in range(G.order)]
    result = join_lattice(G, atoms)
    logger.debug(f"{G.name} has {len(result)} {A.name}-invariant normal subgroups")
    return result
