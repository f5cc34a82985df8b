"""The bounding functions ``g``, ``kos`` and ``f``.

``g(t) = t^(1 + log2 t)`` and ``kos(t) = t^((1 + log2 t) / 2)``. Powers of two are
evaluated with exact integer arithmetic; other arguments use mpmath at a working
precision large enough for the ceiling to be exact. Values above
``2^config.bound_exact_bits`` are only tracked as a lower bound on ``log2``.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from mpmath import mp, mpf

from .config import config
from .errors import BoundOverflow, GroupError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundValue:
    """One evaluated bound.

    ``ceil`` is None when the value was too large to keep exactly; ``log2`` is then a
    certified lower bound on ``log2`` of the true value.
    """

    name: str
    t_or_d: int
    raw: float
    ceil: Optional[int]
    log2: float

    @property
    def exact(self) -> bool:
        return self.ceil is not None

    def admits(self, value: int) -> bool:
        """True iff ``value <= bound`` can be certified."""
        if self.ceil is not None:
            return value <= self.ceil
        return math.log2(value) <= self.log2

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "t": self.t_or_d,
            "raw": self.raw,
            "ceil": self.ceil,
            "log2": self.log2,
        }


def _to_float(value) -> float:
    try:
        return float(value)
    except OverflowError:
        return math.inf


def _power_bound(x: int, halve: bool) -> Tuple[Optional[int], float, float]:
    """``x^((1 + log2 x) / (2 if halve else 1))`` as (ceil or None, raw, log2)."""
    divisor = 2 if halve else 1
    if x & (x - 1) == 0:
        k = x.bit_length() - 1
        bits, rem = divmod(k * (1 + k), divisor)
        if rem == 0:
            exact = 1 << bits
            if bits > config.bound_exact_bits:
                return None, math.inf, float(bits)
            return exact, _to_float(exact), float(bits)
    lx = math.log2(x)
    log2_value = lx * (1 + lx) / divisor
    if log2_value > config.bound_exact_bits:
        # stay strictly below the true value
        return None, math.inf, log2_value * (1 - 1e-12)
    with mp.workprec(int(log2_value) + 96):
        value = mpf(x) ** ((1 + mp.log(x, 2)) / divisor)
        ceil = int(mp.ceil(value))
        raw = _to_float(value)
    return ceil, raw, log2_value


def _check_t(t: int) -> None:
    if not isinstance(t, int) or t < 1:
        raise GroupError(f"bound argument must be a positive integer, got {t!r}")


def bound_g(t: int) -> BoundValue:
    _check_t(t)
    ceil, raw, log2 = _power_bound(t, halve=False)
    return BoundValue("g", t, raw, ceil, log2)


def bound_kos(t: int) -> BoundValue:
    _check_t(t)
    ceil, raw, log2 = _power_bound(t, halve=True)
    return BoundValue("kos", t, raw, ceil, log2)


def _g_step(value: Optional[int], log2_value: float) -> Tuple[Optional[int], float]:
    """One application of ``ceil(g(.))``, exact when possible, else in log space."""
    if value is not None:
        ceil, _, log2 = _power_bound(value, halve=False)
        if ceil is not None:
            return ceil, log2
        return None, log2
    # log2 g(x) = l (1 + l) with l = log2 x, monotone in l
    return None, log2_value * (1 + log2_value)


def bound_f(t: int) -> BoundValue:
    """``f(1) = 1``, ``f(s + 1) = (s + 1) * ceil(g(ceil(g(f(s)))))``."""
    _check_t(t)
    if t > config.bound_f_cap:
        raise BoundOverflow("f", t, config.bound_f_cap)
    value: Optional[int] = 1
    log2_value = 0.0
    for s in range(2, t + 1):
        value, log2_value = _g_step(value, log2_value)
        value, log2_value = _g_step(value, log2_value)
        if value is not None:
            value *= s
            log2_value = math.log2(value)
            if value.bit_length() > config.bound_exact_bits:
                value = None
        else:
            log2_value += math.log2(s)
        if math.isinf(log2_value):
            raise BoundOverflow("f", t, config.bound_f_cap)
    raw = _to_float(value) if value is not None else math.inf
    logger.debug(f"f({t}) has log2 {log2_value:.6g}")
    return BoundValue("f", t, raw, value, log2_value)
