"""TSPLIB reading: planar coordinate instances (EUC_2D style)."""

from __future__ import annotations

import re

from .geometry import PointSet

__all__ = ["parse_tsplib", "serialize_tsplib"]

_SECTION_RE = re.compile(r"^[A-Z][A-Z0-9_]*\s*$")
_ACCEPTED_WEIGHT_TYPES = {"EUC_2D"}


def parse_tsplib(text: str) -> PointSet:
    """Parse NODE_COORD_SECTION coordinates from a TSPLIB document.

    Points come back in file order with 1-based TSPLIB indices mapped to
    0-based ids.  Non-coordinate sections are ignored, DOS line endings and a
    trailing EOF token are tolerated.  Documents declaring a non-EUC_2D edge
    weight type are rejected; coordinate lines that fail to parse raise with
    their line number.
    """
    lines = text.splitlines()
    weight_type = None
    coord_start = None
    for ln, raw in enumerate(lines):
        line = raw.strip()
        if not line:
            continue
        if line.upper().startswith("EDGE_WEIGHT_TYPE"):
            _, _, value = line.partition(":")
            weight_type = value.strip() or None
        if line.upper().rstrip(":").strip() == "NODE_COORD_SECTION":
            coord_start = ln + 1
            break
    if coord_start is None:
        raise ValueError("missing NODE_COORD_SECTION")
    if weight_type is not None and weight_type not in _ACCEPTED_WEIGHT_TYPES:
        raise ValueError(
            f"unsupported EDGE_WEIGHT_TYPE {weight_type!r}; only planar "
            f"coordinate instances ({', '.join(sorted(_ACCEPTED_WEIGHT_TYPES))}) are supported"
        )
    coords: list[tuple[float, float]] = []
    for ln in range(coord_start, len(lines)):
        line = lines[ln].strip()
        if not line:
            continue
        if line.upper() == "EOF":
            break
        parts = line.split()
        if len(parts) == 3:
            try:
                int(float(parts[0]))
                x, y = float(parts[1]), float(parts[2])
            except ValueError:
                raise ValueError(
                    f"malformed coordinate line {ln + 1}: {line!r}"
                ) from None
            coords.append((x, y))
            continue
        if _SECTION_RE.match(line) or ":" in line:
            break  # another section follows; coordinates are done
        raise ValueError(f"malformed coordinate line {ln + 1}: {line!r}")
    if not coords:
        raise ValueError("NODE_COORD_SECTION contains no coordinates")
    return PointSet(coords)


def serialize_tsplib(points: PointSet, name: str = "points") -> str:
    """Minimal EUC_2D document holding the coordinates of ``points``."""
    out = [
        f"NAME : {name}",
        "TYPE : TSP",
        f"DIMENSION : {len(points)}",
        "EDGE_WEIGHT_TYPE : EUC_2D",
        "NODE_COORD_SECTION",
    ]
    for i in range(len(points)):
        out.append(f"{i + 1} {points.xs[i]!r} {points.ys[i]!r}")
    out.append("EOF")
    return "\n".join(out) + "\n"
