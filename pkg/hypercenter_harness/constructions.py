"""Table constructors for the standard families."""

import logging
from typing import Dict, List, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation
from sympy.combinatorics.named_groups import SymmetricGroup

from .config import config
from .errors import CapExceeded, GroupError
from .group_core import GroupTable, group_from_trusted_table

logger = logging.getLogger(__name__)


def cyclic_group(n: int) -> GroupTable:
    if n < 1:
        raise GroupError(f"cyclic order must be positive, got {n}")
    idx = np.arange(n)
    return group_from_trusted_table((idx[:, None] + idx[None, :]) % n, f"C{n}")


def dihedral_group(order: int) -> GroupTable:
    """Symmetries of the ``order/2``-gon; ``r^i s^j`` has index ``i + m j``."""
    if order < 4 or order % 2:
        raise GroupError(f"dihedral order must be even and at least 4, got {order}")
    m = order // 2
    idx = np.arange(order)
    i, j = idx % m, idx // m
    # r^a s^b . r^c s^d = r^(a + (-1)^b c) s^(b + d)
    sign = np.where(j == 1, -1, 1)
    rot = (i[:, None] + sign[:, None] * i[None, :]) % m
    ref = (j[:, None] + j[None, :]) % 2
    return group_from_trusted_table(rot + m * ref, f"D{order}")


def dicyclic_group(order: int) -> GroupTable:
    """``<x, y | x^2m = 1, y^2 = x^m, y x = x^-1 y>``; ``x^i y^j`` has index ``i + 2m j``."""
    if order < 8 or order % 4:
        raise GroupError(f"dicyclic order must be a multiple of 4 and at least 8, got {order}")
    m = order // 4
    n = 2 * m
    idx = np.arange(order)
    i, j = idx % n, idx // n
    sign = np.where(j == 1, -1, 1)
    rot = i[:, None] + sign[:, None] * i[None, :]
    both = (j[:, None] == 1) & (j[None, :] == 1)
    rot = (rot + np.where(both, m, 0)) % n
    ref = (j[:, None] + j[None, :]) % 2
    name = f"Q{order}" if order & (order - 1) == 0 else f"Dic{order}"
    return group_from_trusted_table(rot + n * ref, name)


def quaternion_group(order: int = 8) -> GroupTable:
    return dicyclic_group(order)


def elementary_abelian_group(p: int, k: int) -> GroupTable:
    """``(Z/p)^k``; the digit vector ``c`` has index ``sum c_i p^i``."""
    n = p ** k
    if n > config.table_cap:
        raise CapExceeded("elementary abelian group", n, config.table_cap)
    digits = digit_vectors(p, k)
    summed = (digits[:, None, :] + digits[None, :, :]) % p
    return group_from_trusted_table(summed @ (p ** np.arange(k)), f"E{p}^{k}")


def digit_vectors(p: int, k: int) -> np.ndarray:
    """Row ``x`` holds the base-``p`` digits of ``x``, least significant first."""
    idx = np.arange(p ** k)
    return (idx[:, None] // (p ** np.arange(k))[None, :]) % p


def permutation_group_table(perms: Sequence[Permutation], name: str) -> GroupTable:
    """Cayley table of a closed list of permutations, sorted so the identity comes first.

    Multiplication follows sympy's convention: ``p * q`` applies ``p`` first.
    """
    if len(perms) > config.table_cap:
        raise CapExceeded("permutation group", len(perms), config.table_cap)
    forms: List[Tuple[int, ...]] = sorted({tuple(p.array_form) for p in perms})
    arrays = np.array(forms, dtype=np.int64)
    position: Dict[bytes, int] = {row.tobytes(): i for i, row in enumerate(arrays)}
    n = len(forms)
    mul = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        # (p_a * p_b)(x) = p_b(p_a(x))
        composed = arrays[:, arrays[a]]
        for b in range(n):
            key = composed[b].tobytes()
            if key not in position:
                raise GroupError(f"permutations of {name} are not closed under composition")
            mul[a, b] = position[key]
    logger.debug(f"Tabulated permutation group {name} of order {n}")
    return group_from_trusted_table(mul, name)


def symmetric_group(n: int) -> GroupTable:
    return permutation_group_table(list(SymmetricGroup(n).generate()), f"S{n}")
