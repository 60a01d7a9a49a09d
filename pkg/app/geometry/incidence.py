from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import igraph as ig
import numpy as np

from app.errors import InconsistencyError


@dataclass(frozen=True, eq=False)
class IncidenceStructure:
    name: str
    points: tuple[str, ...]
    lines: tuple[tuple[int, ...], ...]
    shading: Optional[tuple[str, ...]] = None
    order: Optional[tuple[int, int]] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = len(self.points)
        for i, line in enumerate(self.lines):
            if len(set(line)) != len(line):
                raise InconsistencyError(f"line {i} of {self.name} repeats a point")
            if any(not 0 <= x < n for x in line):
                raise InconsistencyError(f"line {i} of {self.name} refers to a missing point")
        if self.shading is not None and len(self.shading) != n:
            raise InconsistencyError(f"{self.name}: {len(self.shading)} shades for {n} points")

    @property
    def num_points(self) -> int:
        return len(self.points)

    @property
    def num_lines(self) -> int:
        return len(self.lines)

    def incidence_graph(self) -> ig.Graph:
        """Bipartite point/line graph; points first, then lines."""
        n = self.num_points
        edges = [(x, n + j) for j, line in enumerate(self.lines) for x in line]
        g = ig.Graph.Bipartite([False] * n + [True] * self.num_lines, edges)
        g.vs["label"] = list(self.points) + [f"L{j}" for j in range(self.num_lines)]
        g.vs["kind"] = ["point"] * n + ["line"] * self.num_lines
        if self.shading is not None:
            g.vs["shade"] = list(self.shading) + ["line"] * self.num_lines
        return g

    def collinearity(self) -> np.ndarray:
        adj = np.zeros((self.num_points, self.num_points), dtype=bool)
        for line in self.lines:
            idx = np.asarray(line, dtype=np.int64)
            adj[np.ix_(idx, idx)] = True
        np.fill_diagonal(adj, False)
        return adj

    def collinearity_graph(self) -> ig.Graph:
        if not self.num_points:
            return ig.Graph()
        g = ig.Graph.Adjacency(self.collinearity().astype(int).tolist(), mode="undirected")
        g.vs["label"] = list(self.points)
        return g

    def lines_per_point(self) -> list[int]:
        counts = [0] * self.num_points
        for line in self.lines:
            for x in line:
                counts[x] += 1
        return counts

    def fingerprint(self) -> tuple:
        """Isomorphism invariant: counts, degree sequences and line sizes."""
        return (
            self.num_points,
            self.num_lines,
            tuple(sorted(self.lines_per_point())),
            tuple(sorted(len(line) for line in self.lines)),
            tuple(sorted(self.collinearity_graph().degree())),
        )

    def is_isomorphic(self, other: "IncidenceStructure") -> bool:
        a, b = self.incidence_graph(), other.incidence_graph()
        if self.fingerprint() != other.fingerprint():
            return False
        return a.isomorphic_vf2(b, color1=[int(t) for t in a.vs["type"]], color2=[int(t) for t in b.vs["type"]])


def structure_from_flats(name: str, labels: Sequence[str], points, flats, shading: Optional[Sequence[str]] = None,
                         order: Optional[tuple[int, int]] = None) -> IncidenceStructure:
    """Points given as ProjectivePoints, lines as Flats over the same space."""
    where = {P: i for i, P in enumerate(points)}
    lines = tuple(tuple(sorted(where[P] for P in F.points if P in where)) for F in flats)
    return IncidenceStructure(name, tuple(labels), lines,
                              tuple(shading) if shading is not None else None, order)
