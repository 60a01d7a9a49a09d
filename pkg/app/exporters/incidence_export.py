from __future__ import annotations

import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, Sequence, Tuple

import igraph as ig

from app.errors import ExportError
from app.geometry.incidence import IncidenceStructure

log = logging.getLogger(__name__)

FORMATS = ("text", "dot")


def _text(S: IncidenceStructure) -> str:
    out = [f"# {S.name}"]
    if S.order is not None:
        out.append(f"order {S.order[0]} {S.order[1]}")
    out.append(f"points {S.num_points}")
    for i, label in enumerate(S.points):
        shade = f" {S.shading[i]}" if S.shading is not None else ""
        out.append(f"{i} {label}{shade}")
    out.append(f"lines {S.num_lines}")
    out.extend(" ".join(str(x) for x in line) for line in S.lines)
    return "\n".join(out) + "\n"


def graph_to_dot(g: ig.Graph) -> str:
    fd, path = tempfile.mkstemp(suffix=".dot")
    os.close(fd)
    try:
        g.write_dot(path)
        return Path(path).read_text(encoding="utf-8")
    finally:
        os.unlink(path)


def export_incidence(S: IncidenceStructure, fmt: str = "text") -> str:
    """Point table plus one row of point indices per line, or a bipartite DOT graph."""
    fmt = (fmt or "").lower()
    if fmt == "text":
        return _text(S)
    if fmt == "dot":
        g = S.incidence_graph()
        g.vs["type"] = [int(t) for t in g.vs["type"]]  # 0 point, 1 line
        return graph_to_dot(g)
    raise ExportError(f"unknown incidence format {fmt!r}; expected one of {', '.join(FORMATS)}")


def export_graph(labels: Sequence[str], adjacency, fmt: str = "dot", name: str = "graph") -> str:
    """Simple graph on labelled vertices: DOT, or a text edge list."""
    n = len(labels)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if adjacency[i][j]]
    fmt = (fmt or "").lower()
    if fmt == "dot":
        g = ig.Graph(n=n, edges=edges)
        g.vs["label"] = list(labels)
        return graph_to_dot(g)
    if fmt == "text":
        out = [f"# {name}", f"vertices {n}"] + [f"{i} {label}" for i, label in enumerate(labels)]
        out.append(f"edges {len(edges)}")
        out.extend(f"{i} {j}" for i, j in edges)
        return "\n".join(out) + "\n"
    raise ExportError(f"unknown graph format {fmt!r}; expected one of {', '.join(FORMATS)}")


class FileSink:
    """Writes named documents into one directory; same input, same bytes."""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir or "exports"
        Path(self.out_dir).mkdir(parents=True, exist_ok=True)

    def send(self, documents: Iterable[Tuple[str, str]]) -> Dict[str, Any]:
        written = []
        for name, text in documents:
            p = Path(self.out_dir) / name
            p.write_text(text, encoding="utf-8", newline="\n")
            written.append(str(p))
            log.debug("[Export] wrote %s (%d bytes)", p, len(text))
        return {"ok": len(written), "failed": 0, "dest": "file", "paths": written}
