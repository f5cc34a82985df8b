"""Finite groups as Cayley tables.

Elements are the indices ``0..n-1`` of a dense multiplication table. Everything the
other modules need (closures, centralizers, commutators, quotients, products and the
normal subgroup lattice) is a direct scan of that table, vectorised with numpy.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .config import config
from .errors import (
    CapExceeded,
    GroupError,
    NoIdentity,
    NoInverse,
    NotAssociative,
    NotClosed,
    NotNormal,
)

if TYPE_CHECKING:
    from .morphisms import AutSubgroup

logger = logging.getLogger(__name__)


def _readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=np.int64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GroupTable:
    """A finite group stored as an ``n x n`` multiplication table on ``0..n-1``.

    Instances are immutable; build them with :func:`make_group_from_table` (validated)
    or with the constructors in this module, which only produce tables that are groups
    by construction.
    """

    mul: np.ndarray
    identity: int
    inv: np.ndarray
    name: str = "G"

    @property
    def order(self) -> int:
        return int(self.mul.shape[0])

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"GroupTable({self.name!r}, order={self.order})"

    @cached_property
    def elements(self) -> np.ndarray:
        return _readonly(np.arange(self.order))

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=np.int64)
        current = np.arange(self.order)
        for k in range(1, self.order + 1):
            done = (current == self.identity) & (orders == 0)
            orders[done] = k
            if orders.all():
                break
            current = self.mul[current, np.arange(self.order)]
        return _readonly(orders)

    def element_order(self, x: int) -> int:
        return int(self.element_orders[x])

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))


@dataclass(frozen=True, eq=False)
class SubgroupRef:
    """A subset of ``parent`` certified closed under multiplication and inversion."""

    parent: GroupTable
    elems: Tuple[int, ...]

    @classmethod
    def of(cls, parent: GroupTable, elems: Iterable[int], check: bool = True) -> 'SubgroupRef':
        items = tuple(sorted({int(x) for x in elems}))
        ref = cls(parent, items)
        if check:
            if not items or items[0] < 0 or items[-1] >= parent.order:
                raise GroupError(f"element indices out of range for {parent.name}")
            if parent.identity not in items:
                raise GroupError("subset does not contain the identity")
            arr = ref.array
            products = parent.mul[np.ix_(arr, arr)]
            if not ref.mask[products].all() or not ref.mask[parent.inv[arr]].all():
                raise GroupError(f"subset of {parent.name} is not closed under the group operations")
        return ref

    @cached_property
    def array(self) -> np.ndarray:
        return _readonly(self.elems)

    @cached_property
    def mask(self) -> np.ndarray:
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[list(self.elems)] = True
        mask.setflags(write=False)
        return mask

    @property
    def order(self) -> int:
        return len(self.elems)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def __len__(self) -> int:
        return self.order

    def __iter__(self) -> Iterator[int]:
        return iter(self.elems)

    def __contains__(self, x: object) -> bool:
        return isinstance(x, (int, np.integer)) and 0 <= x < self.parent.order and bool(self.mask[x])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubgroupRef):
            return NotImplemented
        return self.parent is other.parent and self.elems == other.elems

    def __hash__(self) -> int:
        return hash((id(self.parent), self.elems))

    def __repr__(self) -> str:
        return f"SubgroupRef({self.parent.name!r}, order={self.order})"

    def issubset(self, other: 'SubgroupRef') -> bool:
        return bool(other.mask[self.array].all())


@dataclass(frozen=True, eq=False)
class GroupMap:
    """A multiplication-preserving map ``source -> target`` given by an image array."""

    source: GroupTable
    target: GroupTable
    image: np.ndarray

    @classmethod
    def of(cls, source: GroupTable, target: GroupTable, image: Sequence[int],
           check: bool = True) -> 'GroupMap':
        gmap = cls(source, target, _readonly(image))
        if check:
            if gmap.image.shape != (source.order,):
                raise GroupError("image array must have one entry per source element")
            if gmap.image.min() < 0 or gmap.image.max() >= target.order:
                raise GroupError("image entries out of range for the target")
            if int(gmap.image[source.identity]) != target.identity:
                raise GroupError("map does not send identity to identity")
            if not gmap.is_homomorphism():
                raise GroupError(f"map {source.name} -> {target.name} is not multiplication-preserving")
        return gmap

    def __call__(self, x: int) -> int:
        return int(self.image[x])

    def is_homomorphism(self) -> bool:
        img = self.image
        return bool(np.array_equal(img[self.source.mul],
                                   self.target.mul[img[:, None], img[None, :]]))

    def kernel(self) -> SubgroupRef:
        return subgroup_from_mask(self.source, self.image == self.target.identity)

    def image_subgroup(self) -> SubgroupRef:
        return SubgroupRef.of(self.target, np.unique(self.image), check=False)

    def preimage(self, sub: SubgroupRef) -> SubgroupRef:
        return subgroup_from_mask(self.source, sub.mask[self.image])

    def compose(self, first: 'GroupMap') -> 'GroupMap':
        """``self o first`` (apply ``first``, then ``self``)."""
        if first.target is not self.source:
            raise GroupError("maps are not composable")
        return GroupMap(first.source, self.target, _readonly(self.image[first.image]))


# ---------------------------------------------------------------------------
# Construction and validation
# ---------------------------------------------------------------------------

def _locate_identity(mul: np.ndarray) -> Optional[int]:
    idx = np.arange(mul.shape[0])
    left = np.all(mul == idx[None, :], axis=1)
    right = np.all(mul == idx[:, None], axis=0)
    hits = np.flatnonzero(left & right)
    return int(hits[0]) if hits.size else None


def _locate_inverses(mul: np.ndarray, identity: int) -> Tuple[Optional[np.ndarray], Optional[int]]:
    hit = mul == identity
    two_sided = hit & hit.T
    has_inverse = two_sided.any(axis=1)
    if not has_inverse.all():
        return None, int(np.flatnonzero(~has_inverse)[0])
    return two_sided.argmax(axis=1), None


def _first_associativity_failure(mul: np.ndarray) -> Optional[Tuple[int, int, int]]:
    n = mul.shape[0]
    if n <= config.assoc_exhaustive_cap:
        for x in range(n):
            left = mul[mul[x]]
            right = mul[x][mul]
            bad = np.argwhere(left != right)
            if bad.size:
                y, z = bad[0]
                return x, int(y), int(z)
        return None

    logger.warning(f"Order {n} above exhaustive cap {config.assoc_exhaustive_cap}; "
                   f"sampling {config.assoc_samples} triples for associativity")
    rng = np.random.default_rng(config.seed)
    xs, ys, zs = rng.integers(0, n, size=(3, config.assoc_samples))
    bad = np.flatnonzero(mul[mul[xs, ys], zs] != mul[xs, mul[ys, zs]])
    if bad.size:
        i = bad[0]
        return int(xs[i]), int(ys[i]), int(zs[i])
    return None


def _as_square_table(raw_table) -> np.ndarray:
    try:
        mul = np.array(raw_table, dtype=np.int64)
    except (TypeError, ValueError) as e:
        raise GroupError(f"table is not a rectangular integer array: {e}") from e
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
        raise GroupError(f"table must be a non-empty square array, got shape {mul.shape}")
    if mul.shape[0] > config.table_cap:
        raise CapExceeded("table", mul.shape[0], config.table_cap)
    return mul


def make_group_from_table(raw_table, name: str = "G") -> GroupTable:
    """Validate a raw multiplication table and locate identity and inverses.

    Raises the first violated axiom in the order closure, identity, inverses,
    associativity; each error names the first violating tuple.
    """
    mul = _as_square_table(raw_table)
    n = mul.shape[0]
    bad = np.argwhere((mul < 0) | (mul >= n))
    if bad.size:
        x, y = (int(v) for v in bad[0])
        raise NotClosed(x, y, int(mul[x, y]))
    identity = _locate_identity(mul)
    if identity is None:
        raise NoIdentity()
    inv, missing = _locate_inverses(mul, identity)
    if missing is not None:
        raise NoInverse(missing)
    triple = _first_associativity_failure(mul)
    if triple is not None:
        raise NotAssociative(triple)
    logger.debug(f"Validated table {name} of order {n}")
    return GroupTable(_readonly(mul), identity, _readonly(inv), name)


def group_from_trusted_table(mul: np.ndarray, name: str) -> GroupTable:
    """Wrap a table that is a group by construction (quotients, products, ...)."""
    mul = np.asarray(mul, dtype=np.int64)
    if mul.shape[0] > config.table_cap:
        raise CapExceeded("table", mul.shape[0], config.table_cap)
    identity = int(np.flatnonzero(mul[:, 0] == 0)[0])
    inv = np.argmax(mul == identity, axis=1)
    return GroupTable(_readonly(mul), identity, _readonly(inv), name)


def verify_axioms(G: GroupTable) -> None:
    """Re-check all four table invariants of ``G``; raises on the first violation."""
    checked = make_group_from_table(G.mul, G.name)
    if checked.identity != G.identity or not np.array_equal(checked.inv, G.inv):
        raise GroupError(f"stored identity or inverses of {G.name} are wrong")


# ---------------------------------------------------------------------------
# Subgroups
# ---------------------------------------------------------------------------

def subgroup_from_mask(G: GroupTable, mask: np.ndarray) -> SubgroupRef:
    return SubgroupRef(G, tuple(int(x) for x in np.flatnonzero(mask)))


def trivial_subgroup(G: GroupTable) -> SubgroupRef:
    return SubgroupRef(G, (G.identity,))


def whole_group(G: GroupTable) -> SubgroupRef:
    return SubgroupRef(G, tuple(range(G.order)))


def _check_indices(G: GroupTable, elems: np.ndarray) -> None:
    if elems.size and (elems.min() < 0 or elems.max() >= G.order):
        raise GroupError(f"element index out of range for {G.name}")


def closure_mask(G: GroupTable, seeds: Iterable[int]) -> np.ndarray:
    """Membership mask of the subgroup generated by ``seeds``."""
    mask = np.zeros(G.order, dtype=bool)
    mask[G.identity] = True
    gens = np.unique(np.fromiter((int(s) for s in seeds), dtype=np.int64))
    _check_indices(G, gens)
    gens = gens[gens != G.identity]
    if gens.size == 0:
        return mask
    frontier = np.array([G.identity])
    while frontier.size:
        products = G.mul[np.ix_(frontier, gens)].ravel()
        new = np.unique(products[~mask[products]])
        mask[new] = True
        frontier = new
    return mask


def generated_subgroup(G: GroupTable, gens: Iterable[int]) -> SubgroupRef:
    return subgroup_from_mask(G, closure_mask(G, gens))


def generating_set(G: GroupTable) -> List[int]:
    """A small generating set: scan elements in index order, keep those outside the span."""
    gens: List[int] = []
    mask = closure_mask(G, gens)
    for x in range(G.order):
        if not mask[x]:
            gens.append(x)
            mask = closure_mask(G, gens)
    return gens


def greedy_generating_set(G: GroupTable) -> List[int]:
    """Generating set chosen by repeatedly adding the element with the largest closure gain."""
    gens: List[int] = []
    mask = closure_mask(G, gens)
    while not mask.all():
        best, best_size = -1, -1
        for x in np.flatnonzero(~mask):
            size = int(closure_mask(G, gens + [int(x)]).sum())
            if size > best_size:
                best, best_size = int(x), size
        gens.append(best)
        mask = closure_mask(G, gens)
    return gens


def centralizer(G: GroupTable, S: Iterable[int]) -> SubgroupRef:
    """``C_G(S) = {g : gs = sg for all s in S}``."""
    s = np.unique(np.fromiter((int(x) for x in S), dtype=np.int64))
    _check_indices(G, s)
    if s.size == 0:
        return whole_group(G)
    commute = G.mul[:, s] == G.mul[s, :].T
    return subgroup_from_mask(G, commute.all(axis=1))


def center(G: GroupTable) -> SubgroupRef:
    return centralizer(G, range(G.order))


def commutator_subgroup(G: GroupTable, H: SubgroupRef, K: SubgroupRef) -> SubgroupRef:
    """Subgroup generated by all ``[h, k] = h^-1 k^-1 h k``."""
    h, k = H.array, K.array
    partial = G.mul[G.inv[h][:, None], G.inv[k][None, :]]
    partial = G.mul[partial, h[:, None]]
    commutators = G.mul[partial, k[None, :]]
    return generated_subgroup(G, np.unique(commutators))


def intersection(H: SubgroupRef, K: SubgroupRef) -> SubgroupRef:
    return subgroup_from_mask(H.parent, H.mask & K.mask)


def product_subgroup(G: GroupTable, H: SubgroupRef, K: SubgroupRef) -> SubgroupRef:
    """The product set ``HK``; a subgroup whenever one factor normalises the other."""
    return SubgroupRef.of(G, np.unique(G.mul[np.ix_(H.array, K.array)]), check=False)


def _normality_witness(G: GroupTable, H: SubgroupRef) -> Optional[Tuple[int, int]]:
    g, h = G.elements, H.array
    conj = G.mul[G.mul[G.inv[g][:, None], h[None, :]], g[:, None]]
    bad = np.argwhere(~H.mask[conj])
    if bad.size:
        gi, hi = bad[0]
        return int(h[hi]), int(g[gi])
    return None


def is_normal(G: GroupTable, H: SubgroupRef) -> bool:
    return _normality_witness(G, H) is None


def subgroup_table(H: SubgroupRef, name: Optional[str] = None) -> Tuple[GroupTable, GroupMap]:
    """Materialise ``H`` as a group of its own, plus the inclusion map into the parent."""
    G = H.parent
    position = np.full(G.order, -1, dtype=np.int64)
    position[H.array] = np.arange(H.order)
    mul = position[G.mul[np.ix_(H.array, H.array)]]
    T = group_from_trusted_table(mul, name or f"{G.name}[{H.order}]")
    return T, GroupMap(T, G, H.array)


# ---------------------------------------------------------------------------
# Quotients and products
# ---------------------------------------------------------------------------

def quotient(G: GroupTable, N: SubgroupRef) -> Tuple[GroupTable, GroupMap]:
    """``G/N`` with cosets ordered by their minimal member, plus the projection."""
    witness = _normality_witness(G, N)
    if witness is not None:
        raise NotNormal(*witness)
    labels = np.full(G.order, -1, dtype=np.int64)
    reps: List[int] = []
    for g in range(G.order):
        if labels[g] < 0:
            labels[G.mul[g, N.array]] = len(reps)
            reps.append(g)
    rep_arr = np.array(reps, dtype=np.int64)
    qmul = labels[G.mul[np.ix_(rep_arr, rep_arr)]]
    Q = group_from_trusted_table(qmul, f"{G.name}/{N.order}")
    return Q, GroupMap(G, Q, _readonly(labels))


def direct_product(G: GroupTable, H: GroupTable) -> GroupTable:
    """Componentwise table; ``(g, h)`` has index ``g * |H| + h``."""
    n, m = G.order, H.order
    if n * m > config.table_cap:
        raise CapExceeded("direct product", n * m, config.table_cap)
    idx = np.arange(n * m)
    gi, hi = idx // m, idx % m
    mul = G.mul[gi[:, None], gi[None, :]] * m + H.mul[hi[:, None], hi[None, :]]
    return group_from_trusted_table(mul, f"{G.name}x{H.name}")


def direct_product_embeddings(G: GroupTable, H: GroupTable,
                              P: GroupTable) -> Tuple[GroupMap, GroupMap]:
    m = H.order
    if P.order != G.order * m:
        raise GroupError(f"{P.name} is not the direct product of {G.name} and {H.name}")
    left = GroupMap(G, P, _readonly(np.arange(G.order) * m + H.identity))
    right = GroupMap(H, P, _readonly(G.identity * m + np.arange(m)))
    return left, right


def direct_product_factors(G: GroupTable, H: GroupTable,
                           P: GroupTable) -> Tuple[SubgroupRef, SubgroupRef]:
    left, right = direct_product_embeddings(G, H, P)
    return left.image_subgroup(), right.image_subgroup()


def semidirect_product(N: GroupTable, A: 'AutSubgroup') -> Tuple[GroupTable, GroupMap, GroupMap]:
    """``N x| A`` with the left action ``(n1, a1)(n2, a2) = (n1 a1(n2), a1 a2)``.

    The pair ``(n, a)`` has index ``a * |N| + n`` where ``a`` indexes ``A.members``
    (identity first). Returns the table and the embeddings ``N -> S`` and ``A -> S``.
    Inside ``S``, conjugating an embedded ``n`` by an embedded ``a`` gives ``a(n)``.
    """
    if A.group is not N:
        raise GroupError(f"action is not on {N.name}")
    n, a = N.order, A.order
    if n * a > config.table_cap:
        raise CapExceeded("semidirect product", n * a, config.table_cap)
    images = A.images
    comp = A.composition_table
    idx = np.arange(n * a)
    ai, ni = idx // n, idx % n
    acted = images[ai[:, None], ni[None, :]]
    mul = comp[ai[:, None], ai[None, :]] * n + N.mul[ni[:, None], acted]
    S = group_from_trusted_table(mul, f"{N.name}:{A.name}")
    A_group = A.as_group()
    embed_n = GroupMap(N, S, _readonly(np.arange(n)))
    embed_a = GroupMap(A_group, S, _readonly(np.arange(a) * n + N.identity))
    return S, embed_n, embed_a


# ---------------------------------------------------------------------------
# Normal subgroup lattice
# ---------------------------------------------------------------------------

def conjugacy_classes(G: GroupTable) -> List[Tuple[int, ...]]:
    seen = np.zeros(G.order, dtype=bool)
    classes: List[Tuple[int, ...]] = []
    for x in range(G.order):
        if not seen[x]:
            members = np.unique(G.mul[G.mul[G.inv, x], G.elements])
            seen[members] = True
            classes.append(tuple(int(m) for m in members))
    return classes


def join_lattice(G: GroupTable, atoms: Sequence[np.ndarray]) -> List[SubgroupRef]:
    """All joins of ``atoms`` (masks of normal subgroups), trivial subgroup included.

    The join of two normal subgroups is their product set, so each step is one table
    lookup. Sorted by order, then by element set.
    """
    trivial = np.zeros(G.order, dtype=bool)
    trivial[G.identity] = True
    found: Dict[bytes, np.ndarray] = {np.packbits(trivial).tobytes(): trivial}
    atom_list = list({np.packbits(a).tobytes(): a for a in atoms}.values())
    atom_elems = [np.flatnonzero(a) for a in atom_list]
    queue = [trivial]
    while queue:
        current = queue.pop()
        current_elems = np.flatnonzero(current)
        for atom, elems in zip(atom_list, atom_elems):
            if current[elems].all():
                continue
            joined = np.zeros(G.order, dtype=bool)
            joined[G.mul[np.ix_(current_elems, elems)].ravel()] = True
            key = np.packbits(joined).tobytes()
            if key not in found:
                found[key] = joined
                queue.append(joined)
    subgroups = [subgroup_from_mask(G, m) for m in found.values()]
    subgroups.sort(key=lambda s: (s.order, s.elems))
    return subgroups


def normal_subgroups(G: GroupTable) -> List[SubgroupRef]:
    """Every normal subgroup, as joins of normal closures of conjugacy classes."""
    if G.order > config.enum_cap:
        raise CapExceeded("normal subgroup enumeration", G.order, config.enum_cap)
    atoms = [closure_mask(G, cls) for cls in conjugacy_classes(G)]
    result = join_lattice(G, atoms)
    logger.debug(f"{G.name} has {len(result)} normal subgroups")
    return result
