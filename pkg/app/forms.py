"""Conditions 1-5, the commutator form [.,.]_g and the squaring form Q.

Condition 1: N contains G' and G^(p).
Condition 2: G' has order p.
Condition 3: N lies in the centre Z(G).
Condition 4: G^(2) lies in G' (p = 2 only).
Condition 5: N has exponent 2 (p = 2 only).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.errors import ConditionViolation, InconsistencyError, NotApplicableError, SpecError
from app.groups.core import (
    FiniteGroup,
    Subgroup,
    center,
    commutator,
    commutator_table,
    derived_subgroup,
    n0_subgroup,
    powers,
    torsion_center_K,
)
from app.linear.gfp import (
    GFpVector,
    GFpVectorSpace,
    SubspaceGF,
    null_space,
    subgroup_of_subspace,
    subspace_of_subgroup,
    subspaces_within,
    vector_space,
)

log = logging.getLogger(__name__)


class Level(str, Enum):
    vector_space = "vector_space"
    bilinear = "bilinear"
    quadratic = "quadratic"


class ConditionReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: int
    modulus_order: int
    cond1: bool
    cond2: bool
    cond3: bool
    cond4: Optional[bool] = None  # None: not applicable for odd p
    cond5: Optional[bool] = None
    witnesses: dict[str, list[int]] = Field(default_factory=dict)

    def holds(self, *conditions: int) -> bool:
        return all(getattr(self, f"cond{c}") is True for c in conditions)

    def first_failure(self, *conditions: int) -> Optional[int]:
        for c in conditions:
            if getattr(self, f"cond{c}") is not True:
                return c
        return None


_MEANING = {
    1: "N must contain G' and every p-th power",
    2: "the commutator subgroup must have order p",
    3: "N must lie in the centre",
    4: "every square must lie in the commutator subgroup",
    5: "N must have exponent 2",
}


def check_conditions(G: FiniteGroup, N: Subgroup, p: int) -> ConditionReport:
    """Evaluate every condition independently; never raises for a failed one."""
    witnesses: dict[str, list[int]] = {}
    comm = commutator_table(G)

    outside = ~N.mask[comm]
    bad_pow = np.flatnonzero(~N.mask[powers(G, p)])
    if outside.any():
        a, b = np.argwhere(outside)[0]
        witnesses["cond1"] = [int(a), int(b)]
    elif bad_pow.size:
        witnesses["cond1"] = [int(bad_pow[0])]

    D = derived_subgroup(G)
    if D.order != p:
        witnesses["cond2"] = list(D.members[1:3])

    Z = center(G)
    off = [x for x in N.members if x not in Z]
    if off:
        x = off[0]
        y = int(np.flatnonzero(G.mul[x] != G.mul[:, x])[0])
        witnesses["cond3"] = [x, y]

    cond4 = cond5 = None
    if p == 2:
        sq = powers(G, 2)
        bad_sq = np.flatnonzero(~D.mask[sq])
        cond4 = not bad_sq.size
        if bad_sq.size:
            witnesses["cond4"] = [int(bad_sq[0])]
        bad_n = [x for x in N.members if sq[x] != 0]
        cond5 = not bad_n
        if bad_n:
            witnesses["cond5"] = [bad_n[0]]

    report = ConditionReport(
        p=p, modulus_order=N.order,
        cond1="cond1" not in witnesses, cond2=D.order == p, cond3="cond3" not in witnesses,
        cond4=cond4, cond5=cond5, witnesses=witnesses,
    )
    log.debug("[Forms] conditions for %s, |N|=%d, p=%d: %s", G.name, N.order, p, report)
    return report


def raise_for(G: FiniteGroup, report: ConditionReport, *conditions: int) -> None:
    c = report.first_failure(*conditions)
    if c is None:
        return
    witness = report.witnesses.get(f"cond{c}", [])
    shown = ", ".join(G.labels[x] for x in witness)
    raise ConditionViolation(c, f"{_MEANING[c]}" + (f" (witness: {shown})" if shown else ""),
                             witness=witness, report=report)


@dataclass(frozen=True, eq=False)
class GeneratorChoice:
    """g in G' minus e, and psi_g: g^m -> m as an id-indexed table (-1 off G')."""

    group: FiniteGroup
    p: int
    g: int
    psi_table: np.ndarray

    def psi(self, x: int) -> int:
        v = int(self.psi_table[self.group.element(x)])
        if v < 0:
            raise ConditionViolation(2, f"{self.group.labels[x]} is not in the commutator subgroup", witness=(x,))
        return v


def choose_generator(G: FiniteGroup, p: int, index: Optional[int] = None) -> GeneratorChoice:
    D = derived_subgroup(G)
    if D.order != p:
        raise ConditionViolation(2, f"{_MEANING[2]}, |G'| = {D.order}", witness=D.members[1:3])
    choices = D.members[1:]
    i = index or 0
    if not 0 <= i < len(choices):
        raise SpecError(f"generator index {i} outside 0..{len(choices) - 1}")
    g = choices[i]
    table = np.full(G.order, -1, dtype=np.int64)
    x = 0
    for m in range(p):
        table[x] = m
        x = int(G.mul[x, g])
    assert x == 0
    table.setflags(write=False)
    return GeneratorChoice(G, p, g, table)


@dataclass(frozen=True, eq=False)
class AlternatingForm:
    space: GFpVectorSpace
    gc: Optional[GeneratorChoice]
    gram: np.ndarray

    def value(self, v: GFpVector, w: GFpVector) -> int:
        return int(v.array() @ self.gram @ w.array()) % self.space.p

    def values(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        return (np.asarray(rows) @ self.gram @ np.asarray(cols).T) % self.space.p

    @cached_property
    def table(self) -> np.ndarray:
        """[v, w] for all vector-index pairs."""
        vecs = self.space.vectors
        return self.values(vecs, vecs)

    @property
    def is_degenerate(self) -> bool:
        return radical(self).dim > 0


def bilinear_form(V: GFpVectorSpace, gc: GeneratorChoice) -> AlternatingForm:
    G, p = V.group, V.p
    raise_for(G, check_conditions(G, V.modulus, p), 1, 2, 3)
    reps = [V.source.rep[c] for c in V.basis]
    gram = np.array([[gc.psi(commutator(G, a, b)) for b in reps] for a in reps], dtype=np.int64).reshape(V.dim, V.dim)
    assert (np.diag(gram) == 0).all() and np.array_equal((gram + gram.T) % p, np.zeros_like(gram))

    # [xN, yN]_g = psi_g([x, y]) for every pair of representatives
    C = V.coords[V.source.coset_of]
    expected = (C @ gram @ C.T) % p
    actual = gc.psi_table[commutator_table(G)]
    if not np.array_equal(expected, actual):
        x, y = np.argwhere(expected != actual)[0]
        raise InconsistencyError(f"commutator form is not well defined at ({G.labels[x]}, {G.labels[y]})")
    gram.setflags(write=False)
    log.info("[Forms] alternating form on GF(%d)^%d for %s", p, V.dim, G.name)
    return AlternatingForm(V, gc, gram)


def commute_iff_orthogonal(G: FiniteGroup, N: Subgroup, gc: GeneratorChoice, x: int, y: int) -> tuple[bool, bool]:
    V = vector_space(G, N, gc.p)
    form = bilinear_form(V, gc)
    commute = bool(G.mul[G.element(x), G.element(y)] == G.mul[y, x])
    orthogonal = form.value(V.vector_of_element(x), V.vector_of_element(y)) == 0
    return commute, orthogonal


def radical(form: AlternatingForm) -> SubspaceGF:
    V = form.space
    return SubspaceGF.span(V, null_space(V.p, form.gram, V.dim))


@dataclass(frozen=True, eq=False)
class QuadraticFormOverGF2:
    space: GFpVectorSpace
    gc: GeneratorChoice
    values: np.ndarray  # indexed by vector index

    def value(self, v: GFpVector) -> int:
        return int(self.values[v.index])

    @cached_property
    def zero_set(self) -> np.ndarray:
        return np.flatnonzero(self.values == 0)


def quadratic_form(V: GFpVectorSpace, gc: Optional[GeneratorChoice] = None) -> QuadraticFormOverGF2:
    G = V.group
    if V.p != 2:
        raise NotApplicableError(f"quadratic forms are only defined for p = 2, got p = {V.p}")
    raise_for(G, check_conditions(G, V.modulus, 2), 1, 2, 3, 4, 5)
    gc = gc or choose_generator(G, 2)
    sq = powers(G, 2)
    reps = np.asarray(V.source.rep)[V.coset_by_index]
    values = gc.psi_table[sq[reps]]

    # Q(xN) = psi_g(x^2) for every representative
    per_element = gc.psi_table[sq]
    if not np.array_equal(per_element, values[V.vector_index_of_element]):
        x = int(np.flatnonzero(per_element != values[V.vector_index_of_element])[0])
        raise InconsistencyError(f"quadratic form is not well defined at {G.labels[x]}")
    assert values[0] == 0 and (values >= 0).all()
    values.setflags(write=False)
    log.info("[Forms] quadratic form on GF(2)^%d for %s", V.dim, G.name)
    return QuadraticFormOverGF2(V, gc, values)


def polar_form(Q: QuadraticFormOverGF2) -> AlternatingForm:
    V = Q.space
    vecs = V.vectors
    sums = V.indices(vecs[:, None, :] + vecs[None, :, :])
    polar = (Q.values[sums] + Q.values[:, None] + Q.values[None, :]) % 2
    unit = np.eye(V.dim, dtype=np.int64)
    ui = V.indices(unit)
    gram = polar[np.ix_(ui, ui)].astype(np.int64)
    if not np.array_equal((vecs @ gram @ vecs.T) % 2, polar):
        raise InconsistencyError("polar form of Q is not bilinear")
    gram.setflags(write=False)
    return AlternatingForm(V, Q.gc, gram)


def radical_kernel(Q: QuadraticFormOverGF2) -> SubspaceGF:
    """Zeros of Q on the radical of its polar form; Q is linear there."""
    rad = radical(polar_form(Q))
    members = rad.member_indices
    return SubspaceGF.span(Q.space, Q.space.vectors[members[Q.values[members] == 0]])


def squares_in_derived(G: FiniteGroup) -> bool:
    return bool(derived_subgroup(G).mask[powers(G, 2)].all())


def enumerate_admissible_N(G: FiniteGroup, p: int, level: Level | str) -> list[Subgroup]:
    level = Level(level)
    N0 = n0_subgroup(G, p)
    if level is Level.vector_space:
        upper = Subgroup(G, tuple(range(G.order)))
        needed: tuple[int, ...] = (1,)
    else:
        D = derived_subgroup(G)
        if D.order != p:
            raise ConditionViolation(2, f"{_MEANING[2]}, |G'| = {D.order}", witness=D.members[1:3])
        upper, needed = center(G), (1, 2, 3)
        if level is Level.quadratic:
            if p != 2:
                raise NotApplicableError(f"quadratic level needs p = 2, got p = {p}")
            if not squares_in_derived(G):
                report = check_conditions(G, N0, p)
                raise_for(G, report, 4)
            upper, needed = torsion_center_K(G), (1, 2, 3, 4, 5)
    if not N0 <= upper:
        log.info("[Forms] no admissible modulus for %s at level %s", G.name, level.value)
        return []

    V0 = vector_space(G, N0, p)
    U = subspace_of_subgroup(V0, upper)
    found = [subgroup_of_subspace(V0, S) for k in range(U.dim + 1) for S in subspaces_within(U, k)]
    for N in found:
        if not check_conditions(G, N, p).holds(*needed):
            raise InconsistencyError(f"enumerated modulus of order {N.order} fails conditions {needed}")
    return sorted(found, key=lambda N: (N.order, N.members))


def factor_space_map(G: FiniteGroup, N0: Subgroup, N: Subgroup, p: int) -> np.ndarray:
    """Matrix M of the surjection G/N0 -> G/N, as row vectors: v0 @ M = v."""
    if not N0 <= N:
        raise InconsistencyError("the finer modulus must be contained in the coarser one")
    V0, V = vector_space(G, N0, p), vector_space(G, N, p)
    M = np.array([V.coords[V.source.coset_of[V0.source.rep[c]]] for c in V0.basis],
                 dtype=np.int64).reshape(V0.dim, V.dim)
    lhs = (V0.coords[V0.source.coset_of] @ M) % p
    rhs = V.coords[V.source.coset_of]
    if not np.array_equal(lhs, rhs):
        raise InconsistencyError("factor-space map is not induced by the identity on G")
    return M


def commutator_map(V: GFpVectorSpace) -> np.ndarray:
    """[x, y] in G' for every vector-index pair (xN, yN); no generator needed."""
    G = V.group
    raise_for(G, check_conditions(G, V.modulus, V.p), 1, 3)
    reps = np.asarray(V.source.rep)[V.coset_by_index]
    return commutator_table(G)[np.ix_(reps, reps)]
