"""Symplectic polar spaces W(2r-1, p) built from a group and a central modulus.

Totally isotropic flats of P(G/Z(G)) are the commutative subgroups of G
containing Z(G).  For a smaller modulus N the form is degenerate with
radical Z(G)/N, and the polar space lives on the quotient by the radical.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from app.errors import DegeneracyError
from app.forms import AlternatingForm, bilinear_form, choose_generator, radical
from app.groups.core import FiniteGroup, Subgroup, center
from app.geometry.projective import Flat, ProjectivePoint, point_label, projective_points
from app.linear.gfp import (
    GFpVectorSpace,
    SubspaceGF,
    all_subspaces,
    null_space,
    subgroup_of_subspace,
    subspace_of_subgroup,
    vector_space,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class QuotientFlat:
    """A flat of P(V/V-perp) seen in V: it has two projective dimensions."""

    flat: Flat   # in the polar space over G/Z(G)
    lift: Flat   # the flat of P(V) spanned together with the radical

    @property
    def dimensions(self) -> tuple[int, int]:
        return self.lift.proj_dim, self.flat.proj_dim


@dataclass(frozen=True, eq=False)
class PolarSpaceW:
    space: GFpVectorSpace
    form: AlternatingForm
    rank: int
    points: list[ProjectivePoint]
    iso_flats: dict[int, list[Flat]]
    lifts: Optional[dict[tuple, QuotientFlat]] = field(default=None)
    lifted_space: Optional[GFpVectorSpace] = field(default=None)

    @property
    def p(self) -> int:
        return self.space.p

    @property
    def lines(self) -> list[Flat]:
        return self.iso_flats.get(1, [])

    def labels(self) -> list[str]:
        return [point_label(self.space, P) for P in self.points]

    def point_index(self, P: ProjectivePoint) -> int:
        return self.points.index(P)

    def two_dimensions(self, F: Flat) -> tuple[int, int]:
        if self.lifts is None:
            return F.proj_dim, F.proj_dim
        return self.lifts[F.key].dimensions


def is_totally_isotropic(form: AlternatingForm, S: SubspaceGF) -> bool:
    B = S.basis_matrix
    return not form.values(B, B).any()


def perp(form: AlternatingForm, F: Flat, allow_degenerate: bool = False) -> Flat:
    V = form.space
    if not allow_degenerate and radical(form).dim:
        raise DegeneracyError("perp on a degenerate form; pass allow_degenerate=True to include the radical")
    B = F.subspace.basis_matrix
    if B.shape[0] == 0:
        return Flat(SubspaceGF.whole(V))
    return Flat(SubspaceGF.span(V, null_space(V.p, B @ form.gram, V.dim)))


def conjugate_points(W: PolarSpaceW, P: ProjectivePoint, R: ProjectivePoint) -> bool:
    return W.form.value(P.rep, R.rep) == 0


def symplectic_polar_space(G: FiniteGroup, p: int, N: Optional[Subgroup] = None,
                           g_index: Optional[int] = None) -> PolarSpaceW:
    Z = center(G)
    if N is not None and N != Z:
        raise DegeneracyError(f"modulus of order {N.order} is not the centre (order {Z.order}); "
                              f"use quotient_polar_space for a degenerate form")
    V = vector_space(G, Z, p)
    form = bilinear_form(V, choose_generator(G, p, g_index))
    if radical(form).dim:
        raise DegeneracyError("commutator form on G/Z(G) is degenerate")
    r = V.dim // 2
    flats = {k - 1: [Flat(S) for S in all_subspaces(V, k) if is_totally_isotropic(form, S)]
             for k in range(1, r + 1)}
    W = PolarSpaceW(V, form, r, projective_points(V), flats)
    log.info("[Polar] W(%d,%d) for %s: %d points, %d isotropic lines",
             2 * r - 1, p, G.name, len(W.points), len(W.lines))
    return W


def quotient_polar_space(G: FiniteGroup, N: Subgroup, p: int, g_index: Optional[int] = None) -> PolarSpaceW:
    V = vector_space(G, N, p)
    form = bilinear_form(V, choose_generator(G, p, g_index))
    W = symplectic_polar_space(G, p, g_index=g_index)
    if N == W.space.modulus:
        return W
    rad = radical(form)
    lifts: dict[tuple, QuotientFlat] = {}
    for F in [Flat(SubspaceGF.zero(W.space))] + [F for k in sorted(W.iso_flats) for F in W.iso_flats[k]]:
        lift = Flat(subspace_of_subgroup(V, subgroup_of_flat(W.space, F)))
        assert rad <= lift.subspace
        lifts[F.key] = QuotientFlat(F, lift)
    log.info("[Polar] quotient by a radical of dimension %d for |N|=%d", rad.dim, N.order)
    return PolarSpaceW(W.space, W.form, W.rank, W.points, W.iso_flats, lifts=lifts, lifted_space=V)


def subgroup_of_flat(V: GFpVectorSpace, F: Flat) -> Subgroup:
    return subgroup_of_subspace(V, F.subspace)


@dataclass(frozen=True)
class Condensation:
    point: ProjectivePoint
    label: str
    members: tuple[int, ...]
    labels: tuple[str, ...]


def condensation(G: FiniteGroup, N: Subgroup, P: ProjectivePoint) -> Condensation:
    """Group elements collapsing onto P: the cosets of P's non-zero vectors."""
    V = vector_space(G, N, P.p)
    members = sorted(x for v in P.multiples() for x in V.source.cosets[V.coset_by_index[v.index]])
    assert len(members) == (P.p - 1) * N.order
    return Condensation(P, point_label(V, P), tuple(members), tuple(G.labels[x] for x in members))


def commutation_matrix(W: PolarSpaceW) -> np.ndarray:
    """Conjugacy of distinct points, as a boolean adjacency matrix."""
    reps = np.array([P.rep.coords for P in W.points], dtype=np.int64)
    adj = W.form.values(reps, reps) == 0
    np.fill_diagonal(adj, False)
    return adj
