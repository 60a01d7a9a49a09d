"""Non-singular quadrics over GF(2) from the squaring map, modulo K.

Point counts in PG(n, 2):
    parabolic   n = 2k      2^(2k) - 1             Witt index k
    hyperbolic  n = 2k + 1  2^(2k+1) + 2^k - 1     Witt index k + 1
    elliptic    n = 2k + 1  2^(2k+1) - 2^k - 1     Witt index k
The largest singular flats have projective dimension (Witt index - 1).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from app.errors import DegeneracyError, InconsistencyError, NotApplicableError
from app.forms import AlternatingForm, QuadraticFormOverGF2, polar_form, quadratic_form, radical
from app.groups.core import FiniteGroup, Subgroup, center, exponent_divides, generated_subgroup, torsion_center_K
from app.geometry.polar import PolarSpaceW, QuotientFlat, quotient_polar_space, subgroup_of_flat
from app.geometry.projective import Flat, ProjectivePoint, projective_points
from app.linear.gfp import GFpVectorSpace, SubspaceGF, all_subspaces, vector_space

log = logging.getLogger(__name__)

PARABOLIC, HYPERBOLIC, ELLIPTIC = "parabolic", "hyperbolic", "elliptic"

DARK, LIGHT, NUCLEUS = "dark", "light", "nucleus"


def classify_quadric(n: int, count: int, max_flat_dim: int) -> tuple[str, int, int]:
    """(tag, k, witt index) from the ambient dimension and the point count."""
    if n % 2 == 0:
        k = n // 2
        table = {PARABOLIC: (2 ** (2 * k) - 1, k)}
    else:
        k = (n - 1) // 2
        table = {HYPERBOLIC: (2 ** (2 * k + 1) + 2 ** k - 1, k + 1),
                 ELLIPTIC: (2 ** (2 * k + 1) - 2 ** k - 1, k)}
    for tag, (expected, witt) in table.items():
        if count == expected:
            if max_flat_dim != witt - 1:
                raise InconsistencyError(f"{tag} quadric in PG({n},2) should have singular flats up to "
                                         f"dimension {witt - 1}, found {max_flat_dim}")
            return tag, k, witt
    raise InconsistencyError(f"{count} singular points match no non-singular quadric of PG({n},2)")


def quadric_symbol(tag: str, n: int) -> str:
    sign = {HYPERBOLIC: "+", ELLIPTIC: "-"}.get(tag, "")
    return f"Q{sign}({n},2)"


@dataclass(frozen=True, eq=False)
class Quadric:
    space: GFpVectorSpace
    Q: QuadraticFormOverGF2
    polar: AlternatingForm
    points: list[ProjectivePoint]          # all of P(V)
    singular_points: list[ProjectivePoint]
    singular_flats: dict[int, list[Flat]]  # by projective dimension
    tag: str
    k: int
    witt: int
    nucleus: Optional[ProjectivePoint]

    @property
    def n(self) -> int:
        return self.space.dim - 1

    @property
    def symbol(self) -> str:
        return quadric_symbol(self.tag, self.n)

    @property
    def lines(self) -> list[Flat]:
        return self.singular_flats.get(1, [])

    def shading(self, P: ProjectivePoint) -> str:
        if self.nucleus is not None and P == self.nucleus:
            return NUCLEUS
        return DARK if self.Q.value(P.rep) == 0 else LIGHT


def _is_singular(Q: QuadraticFormOverGF2, S: SubspaceGF) -> bool:
    return not Q.values[S.member_indices].any()


def quadric_of_group(G: FiniteGroup, N: Optional[Subgroup] = None) -> Quadric:
    K = torsion_center_K(G)
    if N is not None and N != K:
        raise DegeneracyError(f"a non-singular quadric needs N = K (|K| = {K.order}), got |N| = {N.order}")
    V = vector_space(G, K, 2)
    Q = quadratic_form(V)
    polar = polar_form(Q)
    rad = radical(polar)
    if (Q.values[rad.member_indices[1:]] == 0).any():
        raise InconsistencyError("Q vanishes on a non-zero radical vector")

    points = projective_points(V)
    singular = [P for P in points if Q.value(P.rep) == 0]
    flats: dict[int, list[Flat]] = {}
    for dim in range(1, V.dim + 1):
        found = [Flat(S) for S in all_subspaces(V, dim) if _is_singular(Q, S)]
        if not found:
            break
        flats[dim - 1] = found
    max_flat_dim = max(flats, default=-1)

    n = V.dim - 1
    tag, k, witt = classify_quadric(n, len(singular), max_flat_dim)
    nucleus = None
    if n % 2 == 0:
        if rad.dim != 1:
            raise InconsistencyError(f"parabolic quadric needs a radical point, radical has dimension {rad.dim}")
        nucleus = Flat(rad).points[0]
        assert nucleus not in singular
    elif rad.dim:
        raise InconsistencyError("odd-dimensional ambient space with a non-zero radical")
    Qd = Quadric(V, Q, polar, points, singular, flats, tag, k, witt, nucleus)
    log.info("[Quadric] %s for %s: %d points, %d singular lines", Qd.symbol, G.name, len(singular), len(Qd.lines))
    return Qd


@dataclass(frozen=True, eq=False)
class NucleusJoin:
    """Singular flats P(S) -> P(S + radical), read as flats of W over G/Z(G)."""

    quadric: Quadric
    polar: PolarSpaceW
    images: dict[tuple, QuotientFlat]  # singular flat key (empty flat included) -> W flat

    def image(self, F: Flat) -> Flat:
        return self.images[F.key].flat


def join_with_nucleus(Qd: Quadric) -> NucleusJoin:
    if Qd.nucleus is None:
        raise NotApplicableError(f"{Qd.symbol} has no nucleus")
    V = Qd.space
    G = V.group
    Z = center(G)
    W = quotient_polar_space(G, V.modulus, 2)
    by_lift = {qf.lift.key: qf for qf in W.lifts.values()}
    nucleus_flat = Flat(SubspaceGF.span(V, [Qd.nucleus.rep.coords]))

    sources = [Flat(SubspaceGF.zero(V))] + [F for d in sorted(Qd.singular_flats) for F in Qd.singular_flats[d]]
    images: dict[tuple, QuotientFlat] = {}
    for F in sources:
        lifted = Flat(F.subspace.join(nucleus_flat.subspace))
        qf = by_lift.get(lifted.key)
        if qf is None or qf.flat.proj_dim != F.proj_dim:
            raise InconsistencyError(f"joining {F} with the nucleus gives no isotropic flat")
        # T -> T.Z(G) on the group level
        T = subgroup_of_flat(V, F)
        C = generated_subgroup(G, set(T.members) | set(Z.members))
        if not exponent_divides(T, 2) or C != subgroup_of_flat(V, qf.lift) or not _commutative(C):
            raise InconsistencyError(f"subgroup correspondence fails for a singular flat of dimension {F.proj_dim}")
        images[F.key] = qf

    per_dim = {d: len(fs) for d, fs in W.iso_flats.items()}
    hit = {}
    for qf in images.values():
        hit.setdefault(qf.flat.proj_dim, set()).add(qf.flat.key)
    if any(len(hit.get(d, ())) != cnt for d, cnt in per_dim.items()):
        raise InconsistencyError("join with the nucleus is not onto the symplectic polar space")
    return NucleusJoin(Qd, W, images)


def _commutative(S: Subgroup) -> bool:
    G = S.parent
    m = list(S.members)
    block = G.mul[m][:, m]
    return bool((block == block.T).all())
