"""Finite-group hypercenter harness.

Cayley-table groups, automorphism actions, A-center series, the bounding functions and
the checks that compare them, with a CLI and an MCP server on top.
"""

__version__ = "0.1.0"

from .bounds import BoundValue, bound_f, bound_g, bound_kos
from .config import HarnessConfig, config
from .errors import (
    BoundOverflow,
    CapExceeded,
    GroupError,
    NoIdentity,
    NoInverse,
    NotAChain,
    NotAssociative,
    NotAutomorphism,
    NotClosed,
    NotInvariant,
    NotNormal,
    NotOddPrime,
    ParseError,
    PremiseFailed,
    ReportWriteError,
)
from .group_core import GroupMap, GroupTable, SubgroupRef, make_group_from_table
from .morphisms import AutSubgroup, Automorphism, automorphism_group, inner_automorphism_group
from .series import AscendingSeries, a_center_series, hypercenter, upper_central_series
from .theorems import CheckReport, Verdict

__all__ = [
    "__version__",
    "AscendingSeries",
    "AutSubgroup",
    "Automorphism",
    "BoundOverflow",
    "BoundValue",
    "CapExceeded",
    "CheckReport",
    "GroupError",
    "GroupMap",
    "GroupTable",
    "HarnessConfig",
    "NoIdentity",
    "NoInverse",
    "NotAChain",
    "NotAssociative",
    "NotAutomorphism",
    "NotClosed",
    "NotInvariant",
    "NotNormal",
    "NotOddPrime",
    "ParseError",
    "PremiseFailed",
    "ReportWriteError",
    "SubgroupRef",
    "Verdict",
    "a_center_series",
    "automorphism_group",
    "bound_f",
    "bound_g",
    "bound_kos",
    "config",
    "hypercenter",
    "inner_automorphism_group",
    "make_group_from_table",
    "upper_central_series",
]
