"""GQ(2,4) from W(3,3) and a chosen point U.

Points: the 27 points of W not collinear with U.  Lines: the totally
isotropic lines missing U, cut down to those points, plus the hyperbolic
lines through U with U removed.
"""

from __future__ import annotations

import logging

import numpy as np

from app.errors import InconsistencyError, NotApplicableError
from app.geometry.incidence import IncidenceStructure
from app.geometry.polar import PolarSpaceW, conjugate_points
from app.geometry.projective import Flat, ProjectivePoint, span_flat

log = logging.getLogger(__name__)


def _hyperbolic_lines_through(W: PolarSpaceW, U: ProjectivePoint) -> list[Flat]:
    seen: dict[tuple, Flat] = {}
    for R in W.points:
        if not conjugate_points(W, U, R):
            line = span_flat(W.space, U, R)
            seen.setdefault(line.key, line)
    return [seen[k] for k in sorted(seen)]


def verify_gq(S: IncidenceStructure) -> None:
    """Each point off a line is collinear with exactly one point of it."""
    adj = S.collinearity()
    for j, line in enumerate(S.lines):
        on_line = np.zeros(S.num_points, dtype=bool)
        on_line[list(line)] = True
        hits = adj[:, list(line)].sum(axis=1)
        bad = np.flatnonzero(~on_line & (hits != 1))
        if bad.size:
            raise InconsistencyError(f"{S.name}: point {S.points[bad[0]]} sees {hits[bad[0]]} points of line {j}")


def derive_gq24(W: PolarSpaceW, U: ProjectivePoint) -> IncidenceStructure:
    if W.p != 3 or W.space.dim != 4:
        raise NotApplicableError(f"GQ(2,4) derivation needs W(3,3), got rank {W.rank} over GF({W.p})")
    if U not in W.points:
        raise NotApplicableError("U is not a point of the polar space")

    keep = [P for P in W.points if not conjugate_points(W, U, P)]
    where = {P: i for i, P in enumerate(keep)}
    iso = [F for F in W.lines if U not in F]
    hyp = _hyperbolic_lines_through(W, U)
    lines = [tuple(sorted(where[P] for P in F.points if P in where)) for F in iso + hyp]

    labels = W.labels()
    S = IncidenceStructure(
        "GQ(2,4)",
        tuple(labels[W.point_index(P)] for P in keep),
        tuple(lines),
        order=(2, 4),
        meta={"isotropic_lines": len(iso), "hyperbolic_lines": len(hyp), "U": labels[W.point_index(U)]},
    )
    if S.num_points != 27 or S.num_lines != 45 or any(len(line) != 3 for line in S.lines) \
            or set(S.lines_per_point()) != {5}:
        raise InconsistencyError(f"derived structure is not of order (2,4): {S.fingerprint()[:2]}")
    verify_gq(S)
    log.info("[GQ] GQ(2,4) from %s: %d + %d lines", S.meta["U"], len(iso), len(hyp))
    return S
