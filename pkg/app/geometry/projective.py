from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from app.linear.gfp import GFpVector, GFpVectorSpace, SubspaceGF


def normalize(vec: GFpVector) -> Optional[GFpVector]:
    """Scale so the first non-zero coordinate is 1; None for o."""
    for c in vec.coords:
        if c:
            return pow(c, -1, vec.p) * vec
    return None


@dataclass(frozen=True)
class ProjectivePoint:
    rep: GFpVector

    def __post_init__(self) -> None:
        norm = normalize(self.rep)
        if norm is None:
            raise ValueError("the zero vector is not a projective point")
        object.__setattr__(self, "rep", norm)

    @property
    def p(self) -> int:
        return self.rep.p

    @property
    def index(self) -> int:
        return self.rep.index

    def multiples(self) -> list[GFpVector]:
        return [m * self.rep for m in range(1, self.p)]


def projective_points(V: GFpVectorSpace) -> list[ProjectivePoint]:
    """All points of P(V), ordered by the index of their normalized vector."""
    if V.dim < 1:
        raise ValueError("P(V) needs dim V >= 1")
    first = (V.vectors != 0).argmax(axis=1)
    lead = V.vectors[np.arange(V.size), first]
    return [ProjectivePoint(V.vector(i)) for i in np.flatnonzero(lead == 1)]


@dataclass(frozen=True, eq=False)
class Flat:
    """P(S); the zero subspace is the empty flat of projective dimension -1."""

    subspace: SubspaceGF

    @property
    def proj_dim(self) -> int:
        return self.subspace.dim - 1

    @property
    def key(self) -> tuple[tuple[int, ...], ...]:
        return self.subspace.key

    @cached_property
    def points(self) -> list[ProjectivePoint]:
        V = self.subspace.ambient
        out = []
        for i in sorted(int(i) for i in self.subspace.member_indices):
            v = V.vector(i)
            if not v.is_zero and normalize(v) == v:
                out.append(ProjectivePoint(v))
        return out

    def __contains__(self, P: ProjectivePoint) -> bool:
        return self.subspace.contains(P.rep)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Flat) and self.subspace == other.subspace

    def __hash__(self) -> int:
        return hash(self.subspace)

    def __repr__(self) -> str:
        return f"Flat(proj_dim={self.proj_dim}, basis={list(self.key)})"


def span_flat(V: GFpVectorSpace, *points: ProjectivePoint) -> Flat:
    return Flat(SubspaceGF.span(V, [P.rep.coords for P in points]))


def point_label(V: GFpVectorSpace, P: ProjectivePoint) -> str:
    """Shortest element label among the cosets of P's vectors (ties by id)."""
    G = V.group
    candidates = [x for v in P.multiples() for x in V.source.cosets[V.coset_by_index[v.index]]]
    best = min(candidates, key=lambda x: (len(G.labels[x]), x))
    return G.labels[best]
