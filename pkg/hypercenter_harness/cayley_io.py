"""File formats: Cayley tables, permutation generators and report documents.

Cayley file (JSON)::

    {"name": "C4", "order": 4, "mul": [[0, 1, 2, 3], ...]}

Permutation file::

    # comment
    N=3
    (1 2)
    (1 2 3)
"""

import csv
import io
import json
import logging
import math
import re
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from sympy.combinatorics import Permutation, PermutationGroup

from . import __version__
from .config import config
from .constructions import permutation_group_table
from .errors import CapExceeded, ParseError, ReportWriteError
from .group_core import GroupTable, make_group_from_table
from .theorems import CheckReport, Verdict, sort_reports

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_HEADER = re.compile(r"^\s*N\s*=\s*(\d+)\s*$")
_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cayley_file(path: PathLike) -> GroupTable:
    """Read a Cayley file and validate the table it holds."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParseError(f"cannot read file: {e}", path=str(path)) from e
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno, str(path)) from e
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", 1, 1, str(path))
    for key, kind in (("name", str), ("order", int), ("mul", list)):
        if not isinstance(doc.get(key), kind) or isinstance(doc.get(key), bool):
            raise ParseError(f"field {key!r} missing or not a {kind.__name__}", 1, 1, str(path))
    order, mul = doc["order"], doc["mul"]
    if order < 1 or len(mul) != order:
        raise ParseError(f"'mul' has {len(mul)} rows, expected {order}", 1, 1, str(path))
    for r, row in enumerate(mul):
        if not isinstance(row, list) or len(row) != order or \
                not all(isinstance(v, int) and not isinstance(v, bool) for v in row):
            raise ParseError(f"row {r} of 'mul' is not {order} integers", 1, 1, str(path))
    return make_group_from_table(mul, doc["name"])


def format_cayley(G: GroupTable) -> str:
    """One row per line, so diffs stay readable."""
    rows = ",\n".join("    " + json.dumps([int(v) for v in row]) for row in G.mul)
    return (
        "{\n"
        f'  "name": {json.dumps(G.name)},\n'
        f'  "order": {G.order},\n'
        '  "mul": [\n'
        f"{rows}\n"
        "  ]\n"
        "}\n"
    )


def write_cayley_file(G: GroupTable, path: PathLike) -> None:
    try:
        Path(path).write_text(format_cayley(G))
    except OSError as e:
        raise ReportWriteError(f"cannot write {path}: {e}") from e


def parse_permutation_generators(path: PathLike) -> GroupTable:
    """Close the generators in a permutation file and tabulate the group they generate."""
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as e:
        raise ParseError(f"cannot read file: {e}", path=str(path)) from e

    degree: Optional[int] = None
    generators: List[Permutation] = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if degree is None:
            header = _HEADER.match(line)
            if header is None or int(header.group(1)) < 1:
                raise ParseError("expected header 'N=<points>'", lineno, 1, str(path))
            degree = int(header.group(1))
            continue
        generators.append(_parse_cycles(line, lineno, degree, str(path)))
    if degree is None:
        raise ParseError("missing header 'N=<points>'", len(lines) or 1, 1, str(path))

    if not generators:
        generators = [Permutation(list(range(degree)))]
    group = PermutationGroup(generators)
    order = int(group.order())
    if order > config.table_cap:
        raise CapExceeded("permutation group", order, config.table_cap)
    logger.info(f"Read {len(generators)} generators on {degree} points from {path.name}; order {order}")
    return permutation_group_table(list(group.generate()), path.stem)


def _parse_cycles(line: str, lineno: int, degree: int, path: str) -> Permutation:
    cycles: List[List[int]] = []
    seen = set()
    position = 0
    for match in _CYCLE.finditer(line):
        gap = line[position:match.start()]
        if gap.strip():
            raise ParseError(f"unexpected text {gap.strip()!r}", lineno, position + 1, path)
        position = match.end()
        tokens = match.group(1).replace(",", " ").split()
        cycle = []
        for token in tokens:
            column = match.start() + 2 + match.group(1).find(token)
            if not token.isdigit():
                raise ParseError(f"bad point {token!r}", lineno, column, path)
            point = int(token)
            if not 1 <= point <= degree:
                raise ParseError(f"point {point} outside 1..{degree}", lineno, column, path)
            if point in seen:
                raise ParseError(f"point {point} repeated", lineno, column, path)
            seen.add(point)
            cycle.append(point - 1)
        if len(cycle) > 1:
            cycles.append(cycle)
    tail = line[position:]
    if tail.strip() or position == 0:
        raise ParseError("expected a permutation in cycle notation", lineno, position + 1, path)
    return Permutation(cycles, size=degree)


# ---------------------------------------------------------------------------
# Report documents
# ---------------------------------------------------------------------------

@dataclass
class ReportDocument:
    reports: List[CheckReport]
    tool_version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    @property
    def summary(self) -> Dict[str, int]:
        counts = {v.value: 0 for v in Verdict}
        for report in self.reports:
            counts[report.verdict.value] += 1
        return counts

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
            "summary": self.summary,
            "reports": [r.to_dict() for r in sort_reports(self.reports)],
        }


def normalise(value: Any) -> Any:
    """Floats to 12 significant digits; non-finite floats become strings."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return str(value)
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {str(k): normalise(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [normalise(v) for v in value]
    if hasattr(value, "item"):
        return normalise(value.item())
    return value


def render_json(doc: ReportDocument) -> str:
    return json.dumps(normalise(doc.to_dict()), sort_keys=True, indent=2) + "\n"


def render_csv(doc: ReportDocument) -> str:
    reports = sort_reports(doc.reports)
    keys = sorted({k for r in reports for k in r.quantities})
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["check_name", "group_name", "premises_ok", "verdict"]
                    + [f"q.{k}" for k in keys] + ["witness"])
    for r in reports:
        quantities = normalise(r.quantities)
        writer.writerow([r.check_name, r.group_name, str(r.premises_ok).lower(), r.verdict.value]
                        + [quantities.get(k, "") for k in keys]
                        + [json.dumps(normalise(r.witness), sort_keys=True) if r.witness else ""])
    return buffer.getvalue()


def emit_report(doc: ReportDocument, fmt: str, path: PathLike) -> None:
    """Write ``doc`` as ``json`` or ``csv``; ``path`` ``-`` means stdout."""
    if fmt == "json":
        text = render_json(doc)
    elif fmt == "csv":
        text = render_csv(doc)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    try:
        if str(path) == "-":
            sys.stdout.write(text)
        else:
            Path(path).write_text(text)
    except OSError as e:
        raise ReportWriteError(f"cannot write {path}: {e}") from e
    logger.info(f"Wrote {len(doc.reports)} reports as {fmt} to {path}")
