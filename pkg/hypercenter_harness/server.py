"""
Hypercenter Harness MCP Server

Exposes the group catalog, the A-center series, the bound functions and the checks
as Model Context Protocol tools. Every tool returns a JSON-ready dictionary; failures
come back as ``{"status": "error", "message": ...}`` instead of raising.
"""

import logging
from typing import Any, Dict, Optional

from mcp.server.fastmcp import FastMCP

from .bounds import bound_f, bound_g, bound_kos
from .catalog import group_summary, shared_catalog
from .cayley_io import ReportDocument, normalise
from .errors import BoundOverflow
from .morphisms import AutSubgroup, automorphism_group, inner_automorphism_group
from .series import a_center_series
from .sweeps import SWEEPS, run_jobs, sweep_jobs

# Logging goes to stderr so it does not interfere with stdio JSON-RPC
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[logging.StreamHandler()]
)
logger = logging.getLogger(__name__)

mcp = FastMCP("Hypercenter Harness")


def _error(e: Exception) -> Dict[str, Any]:
    logger.error(f"{type(e).__name__}: {e}")
    return {"status": "error", "message": str(e)}


@mcp.tool()
def group_info(group: str) -> dict:
    """Summarise one catalog group.

    Args:
        group: Catalog name, e.g. ``S3``, ``D8``, ``Q8xC3`` or ``Ex(3,1)``

    Returns:
        Dictionary with order, center order, nilpotency class, hypercenter order and |Aut|
    """
    logger.info(f"Summarising group: {group}")
    try:
        return {"status": "success", **normalise(group_summary(shared_catalog().group(group)))}
    except Exception as e:
        return _error(e)


@mcp.tool()
def group_series(group: str, action: str = "inner") -> dict:
    """Compute the A-center series of a catalog group.

    Args:
        group: Catalog name
        action: 'inner' (upper central series), 'aut', 'trivial' or 'stored'

    Returns:
        Dictionary with the term orders and whether the series reaches the whole group
    """
    logger.info(f"Computing {action} series of {group}")
    try:
        entry = shared_catalog().get(group)
        G = entry.build()
        if action == "inner":
            A = inner_automorphism_group(G)
        elif action == "aut":
            A = automorphism_group(G)
        elif action == "trivial":
            A = AutSubgroup.trivial(G)
        elif action == "stored":
            A = entry.action()
            if A is None or A.group is not G:
                raise ValueError(f"{group} has no stored action on itself")
        else:
            raise ValueError(f"unknown action {action!r}")
        series = a_center_series(G, A)
        return {
            "status": "success",
            "group": G.name,
            "action": A.name,
            "action_order": A.order,
            "orders": series.orders(),
            "length": series.length,
            "hypercentral": series.is_hypercentral,
        }
    except Exception as e:
        return _error(e)


@mcp.tool()
async def verify_check(check: str, group: Optional[str] = None) -> dict:
    """Run one check on a catalog group.

    Args:
        check: One of the check names, or 'all'
        group: Catalog name; may be omitted for the 'example' check

    Returns:
        Report document with a verdict summary and one entry per report
    """
    logger.info(f"Running {check} on {group or 'the example family'}")
    try:
        if check != "all" and check not in SWEEPS:
            raise ValueError(f"unknown check {check!r}; expected one of {sorted(SWEEPS)} or 'all'")
        entries = [shared_catalog().get(group)] if group else []
        reports = await run_jobs(sweep_jobs(check, entries))
        return {"status": "success", **normalise(ReportDocument(reports).to_dict())}
    except Exception as e:
        return _error(e)


@mcp.tool()
def bound_values(t: int) -> dict:
    """Evaluate g(t), kos(t) and f(t).

    Args:
        t: Positive integer argument

    Returns:
        Dictionary with one entry per bound; f is reported as an error entry beyond its cap
    """
    logger.info(f"Evaluating bounds at t={t}")
    try:
        values: Dict[str, Any] = {"g": bound_g(t).to_dict(), "kos": bound_kos(t).to_dict()}
        try:
            values["f"] = bound_f(t).to_dict()
        except BoundOverflow as e:
            values["f"] = {"error": str(e)}
        return {"status": "success", "t": t, **normalise(values)}
    except Exception as e:
        return _error(e)


@mcp.tool()
def list_catalog(max_order: int = 64) -> dict:
    """List catalog groups up to an order.

    Args:
        max_order: Largest order included

    Returns:
        Dictionary with the matching entries (name, kind, order, params)
    """
    logger.info(f"Listing catalog up to order {max_order}")
    try:
        groups = [entry.describe() for entry in shared_catalog().entries(max_order=max_order)]
        return {"status": "success", "count": len(groups), "groups": groups}
    except Exception as e:
        return _error(e)


def serve(transport: str = "stdio", port: int = 8000) -> int:
    """Run the server on ``transport``; ``port`` applies to the HTTP transports."""
    logger.info(f"Starting Hypercenter Harness MCP Server with {transport} transport")
    try:
        if transport != "stdio":
            logger.info(f"Listening on port {port}")
            mcp.settings.port = port
        mcp.run(transport=transport)
    except KeyboardInterrupt:
        logger.info("Received interrupt signal")
    except Exception as e:
        logger.error(f"Server error: {e}")
        return 1
    return 0
