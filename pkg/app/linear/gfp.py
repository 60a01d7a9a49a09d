"""Commutative factor groups of exponent p read as GF(p) vector spaces.

Vectors are indexed base p with the first coordinate most significant, so
vector index 0 is the zero vector o.  Subspaces are stored as reduced
row-echelon bases, which makes them canonical and hashable.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import galois
import numpy as np

from app.errors import ConditionViolation, InconsistencyError
from app.groups.core import FactorGroup, FiniteGroup, Subgroup, factor_group, group_cached

log = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def field(p: int) -> type[galois.FieldArray]:
    return galois.GF(p)


def rref(p: int, rows: np.ndarray) -> np.ndarray:
    """Reduced row-echelon basis of the row space (zero rows dropped)."""
    rows = np.asarray(rows, dtype=np.int64) % p
    if rows.size == 0 or not rows.any():
        return np.zeros((0, rows.shape[-1] if rows.ndim == 2 else 0), dtype=np.int64)
    reduced = np.asarray(field(p)(rows).row_reduce(), dtype=np.int64)
    return reduced[reduced.any(axis=1)]


def null_space(p: int, matrix: np.ndarray, dim: int) -> np.ndarray:
    """Basis rows of {w : matrix @ w = 0}."""
    matrix = np.asarray(matrix, dtype=np.int64).reshape(-1, dim) % p
    if not matrix.any():
        return np.eye(dim, dtype=np.int64)
    ns = np.asarray(field(p)(matrix).null_space(), dtype=np.int64).reshape(-1, dim)
    return rref(p, ns)


def rank(p: int, rows: np.ndarray) -> int:
    return int(rref(p, rows).shape[0])


def all_vectors(p: int, d: int) -> np.ndarray:
    """Every vector of GF(p)^d, row i having index i."""
    if d == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(p), repeat=d)), dtype=np.int64)


def index_weights(p: int, d: int) -> np.ndarray:
    return p ** np.arange(d - 1, -1, -1, dtype=np.int64)


@dataclass(frozen=True)
class GFpVector:
    p: int
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(int(c) % self.p for c in self.coords))

    def __add__(self, other: "GFpVector") -> "GFpVector":
        assert self.p == other.p and len(self.coords) == len(other.coords)
        return GFpVector(self.p, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __rmul__(self, m: int) -> "GFpVector":
        return GFpVector(self.p, tuple(m * c for c in self.coords))

    def __neg__(self) -> "GFpVector":
        return (-1) * self

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def index(self) -> int:
        k = 0
        for c in self.coords:
            k = k * self.p + c
        return k

    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class GFpVectorSpace:
    """(V, +) := (G/N, .) with an explicit basis of cosets."""

    p: int
    dim: int
    source: FactorGroup
    basis: tuple[int, ...]
    coords: np.ndarray          # coset index -> coordinate row
    coset_by_index: np.ndarray  # vector index -> coset index

    @property
    def group(self) -> FiniteGroup:
        return self.source.parent

    @property
    def modulus(self) -> Subgroup:
        return self.source.modulus

    @property
    def size(self) -> int:
        return self.p ** self.dim

    @cached_property
    def vectors(self) -> np.ndarray:
        v = all_vectors(self.p, self.dim)
        v.setflags(write=False)
        return v

    @cached_property
    def weights(self) -> np.ndarray:
        return index_weights(self.p, self.dim)

    @cached_property
    def vector_index_of_element(self) -> np.ndarray:
        """Group element id -> index of the vector of its coset."""
        idx = self.coords[self.source.coset_of] @ self.weights
        idx.setflags(write=False)
        return idx

    def indices(self, rows: np.ndarray) -> np.ndarray:
        return (np.asarray(rows, dtype=np.int64) % self.p) @ self.weights

    def vector(self, index: int) -> GFpVector:
        return GFpVector(self.p, tuple(int(c) for c in self.vectors[index]))

    def coord_of(self, coset: int) -> GFpVector:
        return GFpVector(self.p, tuple(int(c) for c in self.coords[coset]))

    def vector_of_element(self, x: int) -> GFpVector:
        return self.coord_of(int(self.source.coset_of[self.group.element(x)]))

    def representative(self, vec: GFpVector) -> int:
        return self.source.rep[coset_to_word(self, vec)]


def _span_mask(F: FactorGroup, basis: Sequence[int], p: int) -> np.ndarray:
    reached = np.zeros(F.order, dtype=bool)
    reached[0] = True
    for b in basis:
        current = np.flatnonzero(reached)
        step = current
        for _ in range(p - 1):
            step = F.table[step, b]
            reached[step] = True
    return reached


def as_vector_space(F: FactorGroup, p: int) -> GFpVectorSpace:
    G = F.parent
    asym = F.table != F.table.T
    if asym.any():
        a, b = np.argwhere(asym)[0]
        raise ConditionViolation(1, f"{G.name}/N is not commutative: {G.labels[F.rep[a]]} and "
                                    f"{G.labels[F.rep[b]]} do not commute modulo N",
                                 witness=(F.rep[a], F.rep[b]))
    for c in range(F.order):
        if F.power(c, p) != 0:
            raise ConditionViolation(1, f"{G.labels[F.rep[c]]}^{p} is not in N", witness=(F.rep[c],))

    basis: list[int] = []
    reached = _span_mask(F, basis, p)
    for c in range(F.order):
        if not reached[c]:
            basis.append(c)
            reached = _span_mask(F, basis, p)
    d = len(basis)
    if p ** d != F.order:
        raise InconsistencyError(f"factor group of order {F.order} is not a GF({p}) space of dimension {d}")

    vecs = all_vectors(p, d)
    coset_by_index = np.zeros(len(vecs), dtype=np.int64)
    for i, v in enumerate(vecs):
        c = 0
        for b, m in zip(basis, v):
            c = int(F.table[c, F.power(b, int(m))])
        coset_by_index[i] = c
    if len(set(coset_by_index.tolist())) != F.order:
        raise InconsistencyError("coordinate map is not a bijection")
    coords = np.zeros((F.order, d), dtype=np.int64)
    coords[coset_by_index] = vecs

    # additivity: coords(u.v) = coords(u) + coords(v)
    lhs = coords[F.table]
    rhs = (coords[:, None, :] + coords[None, :, :]) % p
    if not np.array_equal(lhs, rhs):
        raise InconsistencyError("coordinate map is not additive")
    coords.setflags(write=False)
    coset_by_index.setflags(write=False)
    log.debug("[GFp] %s/N (|N|=%d) as GF(%d)^%d", G.name, F.modulus.order, p, d)
    return GFpVectorSpace(p, d, F, tuple(basis), coords, coset_by_index)


def coset_to_word(V: GFpVectorSpace, vec: GFpVector) -> int:
    if len(vec.coords) != V.dim or vec.p != V.p:
        raise InconsistencyError(f"vector {vec.coords} does not live in GF({V.p})^{V.dim}")
    return int(V.coset_by_index[vec.index])


def scalar_multiple(V: GFpVectorSpace, m: int, vec: GFpVector) -> GFpVector:
    """m.v evaluated through the group: the coset of x^m for any x in v."""
    return V.coord_of(V.source.power(coset_to_word(V, vec), m % V.p))


@group_cached
def vector_space(G: FiniteGroup, N: Subgroup, p: int) -> GFpVectorSpace:
    return as_vector_space(factor_group(G, N), p)


@dataclass(frozen=True, eq=False)
class SubspaceGF:
    ambient: GFpVectorSpace
    basis_matrix: np.ndarray  # reduced row-echelon rows

    @classmethod
    def span(cls, V: GFpVectorSpace, rows: Iterable[Sequence[int]] | np.ndarray) -> "SubspaceGF":
        m = np.asarray(list(rows) if not isinstance(rows, np.ndarray) else rows, dtype=np.int64)
        m = m.reshape(-1, V.dim)
        basis = rref(V.p, m)
        basis.setflags(write=False)
        return cls(V, basis)

    @classmethod
    def zero(cls, V: GFpVectorSpace) -> "SubspaceGF":
        return cls.span(V, np.zeros((0, V.dim), dtype=np.int64))

    @classmethod
    def whole(cls, V: GFpVectorSpace) -> "SubspaceGF":
        return cls.span(V, np.eye(V.dim, dtype=np.int64))

    @property
    def dim(self) -> int:
        return int(self.basis_matrix.shape[0])

    @cached_property
    def key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(c) for c in row) for row in self.basis_matrix)

    @cached_property
    def member_indices(self) -> np.ndarray:
        """Vector indices of all p^dim members, in coefficient order."""
        coeffs = all_vectors(self.ambient.p, self.dim)
        return self.ambient.indices(coeffs @ self.basis_matrix)

    @cached_property
    def member_mask(self) -> np.ndarray:
        mask = np.zeros(self.ambient.size, dtype=bool)
        mask[self.member_indices] = True
        return mask

    def contains(self, vec: GFpVector) -> bool:
        return bool(self.member_mask[vec.index])

    def __le__(self, other: "SubspaceGF") -> bool:
        return bool(other.member_mask[self.member_indices].all())

    def join(self, other: "SubspaceGF") -> "SubspaceGF":
        return SubspaceGF.span(self.ambient, np.vstack([self.basis_matrix, other.basis_matrix]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubspaceGF):
            return NotImplemented
        return self.ambient is other.ambient and self.key == other.key

    def __hash__(self) -> int:
        return hash((id(self.ambient), self.key))

    def __repr__(self) -> str:
        return f"SubspaceGF(dim={self.dim}, basis={list(self.key)})"


def echelon_forms(d: int, k: int, p: int) -> Iterator[np.ndarray]:
    """Every k x d reduced row-echelon matrix over GF(p), once each.

    Ordered by pivot columns, then by the free entries lexicographically.
    """
    for pivots in itertools.combinations(range(d), k):
        free = [(i, j) for i, piv in enumerate(pivots) for j in range(piv + 1, d) if j not in pivots]
        for values in itertools.product(range(p), repeat=len(free)):
            m = np.zeros((k, d), dtype=np.int64)
            for i, piv in enumerate(pivots):
                m[i, piv] = 1
            for (i, j), val in zip(free, values):
                m[i, j] = val
            yield m


def subspaces_within(S: SubspaceGF, k: int) -> list[SubspaceGF]:
    V = S.ambient
    if not 0 <= k <= S.dim:
        return []
    return [SubspaceGF.span(V, (m @ S.basis_matrix) % V.p) for m in echelon_forms(S.dim, k, V.p)]


def all_subspaces(V: GFpVectorSpace, k: int) -> list[SubspaceGF]:
    if not 0 <= k <= V.dim:
        raise ValueError(f"dimension {k} outside 0..{V.dim}")
    return [SubspaceGF(V, m) for m in echelon_forms(V.dim, k, V.p)]


def subgroup_of_subspace(V: GFpVectorSpace, S: SubspaceGF) -> Subgroup:
    cosets = V.coset_by_index[S.member_indices]
    members = sorted(x for c in cosets for x in V.source.cosets[c])
    return Subgroup(V.group, tuple(members))


def subspace_of_subgroup(V: GFpVectorSpace, T: Subgroup) -> SubspaceGF:
    """S/N for a subgroup N <= S <= G."""
    if not V.modulus <= T:
        raise InconsistencyError(f"subgroup of order {T.order} does not contain the modulus")
    rows = V.coords[np.unique(V.source.coset_of[list(T.members)])]
    S = SubspaceGF.span(V, rows)
    assert T.order == V.modulus.order * V.p ** S.dim
    return S
