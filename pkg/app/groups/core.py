"""Finite groups given by dense Cayley tables, elements are ids 0..order-1 with 0 = e."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, wraps
from typing import Callable, Iterable, Optional, Sequence, TypeVar

import numpy as np

from app.config import settings
from app.errors import GroupAxiomError, GroupSizeError, InvalidElementError, NormalityError

log = logging.getLogger(__name__)

GroupElement = int
T = TypeVar("T")


def group_cached(func: Callable[..., T]) -> Callable[..., T]:
    """Memoize on the group passed first; entries live exactly as long as that group."""

    @wraps(func)
    def wrapper(G: "FiniteGroup", *args):
        key = (func.__name__, *args)
        memo = G._memo
        if key not in memo:
            memo[key] = func(G, *args)
        return memo[key]

    return wrapper


class FiniteGroup:
    """Group with an exhaustively validated multiplication table.

    The table is read-only after construction; `labels` holds one display
    string per id and `class_labels` the same string with any scalar phase
    stripped (they coincide for plain Cayley-table input).
    """

    def __init__(self, mul: Sequence[Sequence[int]] | np.ndarray, labels: Optional[Sequence[str]] = None,
                 class_labels: Optional[Sequence[str]] = None, name: str = "G"):
        table = np.asarray(mul, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise GroupAxiomError(f"multiplication table must be square and non-empty, got shape {table.shape}")
        n = int(table.shape[0])
        if n > settings.max_group_order:
            raise GroupSizeError(f"group order {n} exceeds the dense-table bound {settings.max_group_order}")
        if table.min() < 0 or table.max() >= n:
            bad = np.argwhere((table < 0) | (table >= n))[0]
            raise GroupAxiomError("table entry out of range", witness=bad)

        ids = np.arange(n)
        if not (np.array_equal(table[0], ids) and np.array_equal(table[:, 0], ids)):
            bad = int(np.flatnonzero((table[0] != ids) | (table[:, 0] != ids))[0])
            raise GroupAxiomError("id 0 is not a two-sided identity", witness=(bad,))

        has_inv = table == 0
        if not has_inv.any(axis=1).all():
            bad = int(np.flatnonzero(~has_inv.any(axis=1))[0])
            raise GroupAxiomError("element without right inverse", witness=(bad,))
        inv = has_inv.argmax(axis=1)
        if not np.array_equal(table[inv, ids], np.zeros(n, dtype=np.int64)):
            bad = int(np.flatnonzero(table[inv, ids] != 0)[0])
            raise GroupAxiomError("right inverse is not a left inverse", witness=(bad, int(inv[bad])))

        self.order = n
        self.mul = table
        self.inv = inv.astype(np.int64)
        self.name = name
        self.labels = tuple(labels) if labels is not None else tuple(f"g{i}" for i in range(n))
        self.class_labels = tuple(class_labels) if class_labels is not None else self.labels
        self._memo: dict[tuple, object] = {}
        if len(self.labels) != n or len(self.class_labels) != n:
            raise GroupAxiomError(f"expected {n} labels, got {len(self.labels)}")

        self._check_associative()
        self.mul.setflags(write=False)
        self.inv.setflags(write=False)
        log.debug("[GroupCore] built %s of order %d", name, n)

    def _check_associative(self) -> None:
        # Light's test: the elements a with (xa)y = x(ay) for all x, y form a
        # submagma, so checking a generating set is exhaustive.
        t = self.mul
        for a in self._generators():
            left = t[t[:, a], :]
            right = t[:, t[a, :]]
            if not np.array_equal(left, right):
                x, y = np.argwhere(left != right)[0]
                raise GroupAxiomError("multiplication is not associative", witness=(int(x), a, int(y)))

    def _generators(self) -> list[int]:
        gens: list[int] = []
        reached = np.zeros(self.order, dtype=bool)
        reached[0] = True
        for x in range(1, self.order):
            if reached[x]:
                continue
            gens.append(x)
            # closure under right multiplication by the generators found so far
            frontier = np.flatnonzero(reached)
            while frontier.size:
                nxt = np.unique(self.mul[np.ix_(frontier, gens)])
                nxt = nxt[~reached[nxt]]
                reached[nxt] = True
                frontier = nxt
        return gens

    def element(self, x: int) -> GroupElement:
        if not isinstance(x, (int, np.integer)) or not 0 <= int(x) < self.order:
            raise InvalidElementError(f"{x!r} is not an element id of {self.name} (order {self.order})")
        return int(x)

    def label(self, x: int) -> str:
        return self.labels[self.element(x)]

    def power(self, x: int, m: int) -> GroupElement:
        return int(powers(self, m)[self.element(x)])

    @property
    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        m = np.asarray(self.members, dtype=np.int64)
        t = self.parent.mul
        if not self.members or self.members[0] != 0:
            raise GroupAxiomError("subgroup must contain the identity")
        if list(self.members) != sorted(set(self.members)):
            raise GroupAxiomError("subgroup members must be sorted and distinct")
        mask = self.mask
        if not mask[t[np.ix_(m, m)]].all() or not mask[self.parent.inv[m]].all():
            raise GroupAxiomError("member set is not closed under multiplication and inverses")
        assert self.parent.order % len(self.members) == 0, "Lagrange"

    @property
    def order(self) -> int:
        return len(self.members)

    @cached_property
    def mask(self) -> np.ndarray:
        out = np.zeros(self.parent.order, dtype=bool)
        out[list(self.members)] = True
        out.setflags(write=False)
        return out

    @cached_property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    def __contains__(self, x: object) -> bool:
        return x in self.member_set

    def __len__(self) -> int:
        return len(self.members)

    def __le__(self, other: "Subgroup") -> bool:
        return self.member_set <= other.member_set

    def __lt__(self, other: "Subgroup") -> bool:
        return self.member_set < other.member_set

    def labels(self) -> list[str]:
        return [self.parent.labels[x] for x in self.members]


@dataclass(frozen=True, eq=False)
class FactorGroup:
    """G/N with cosets ordered by smallest member; coset 0 is N itself."""

    parent: FiniteGroup
    modulus: Subgroup
    cosets: tuple[tuple[int, ...], ...]
    rep: tuple[int, ...]
    coset_of: np.ndarray
    table: np.ndarray

    @property
    def order(self) -> int:
        return len(self.cosets)

    @property
    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def power(self, c: int, m: int) -> int:
        out = 0
        for _ in range(m):
            out = int(self.table[out, c])
        return out


def _subgroup(G: FiniteGroup, members: Iterable[int]) -> Subgroup:
    return Subgroup(G, tuple(sorted({int(x) for x in members})))


def commutator(G: FiniteGroup, a: int, b: int) -> GroupElement:
    a, b = G.element(a), G.element(b)
    t, inv = G.mul, G.inv
    return int(t[a, t[b, t[inv[a], inv[b]]]])


def commutator_table(G: FiniteGroup) -> np.ndarray:
    """[a, b] for every pair, as an order x order array."""
    t, inv = G.mul, G.inv
    return t[t, t[inv[:, None], inv[None, :]]]


def generated_subgroup(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    gens = sorted({G.element(x) for x in seed} - {0})
    reached = np.zeros(G.order, dtype=bool)
    reached[0] = True
    frontier = np.array([0])
    while gens and frontier.size:
        nxt = np.unique(G.mul[np.ix_(frontier, gens)])
        nxt = nxt[~reached[nxt]]
        reached[nxt] = True
        frontier = nxt
    return _subgroup(G, np.flatnonzero(reached))


@group_cached
def derived_subgroup(G: FiniteGroup) -> Subgroup:
    return generated_subgroup(G, np.unique(commutator_table(G)).tolist())


@group_cached
def center(G: FiniteGroup) -> Subgroup:
    central = (G.mul == G.mul.T).all(axis=1)
    return _subgroup(G, np.flatnonzero(central))


@group_cached
def powers(G: FiniteGroup, m: int) -> np.ndarray:
    """x^m for every element x (negative m goes through inverses)."""
    base = np.arange(G.order) if m >= 0 else G.inv.copy()
    e = abs(m)
    out = np.zeros(G.order, dtype=np.int64)
    while e:
        if e & 1:
            out = G.mul[out, base]
        base = G.mul[base, base]
        e >>= 1
    out.setflags(write=False)
    return out


def power_set(G: FiniteGroup, M: Iterable[int], m: int) -> set[int]:
    ids = [G.element(x) for x in M]
    return {int(x) for x in powers(G, m)[ids]} if ids else set()


@group_cached
def n0_subgroup(G: FiniteGroup, p: int) -> Subgroup:
    seed = set(derived_subgroup(G).members) | power_set(G, range(G.order), p)
    N0 = generated_subgroup(G, seed)
    assert is_normal(G, N0)
    return N0


def conjugation_witness(G: FiniteGroup, S: Subgroup) -> Optional[tuple[int, int]]:
    """First (x, a) with x a x^-1 outside S, or None when S is normal."""
    m = np.asarray(S.members)
    conj = G.mul[G.mul[:, m], G.inv[:, None]]
    outside = ~S.mask[conj]
    if not outside.any():
        return None
    x, j = np.argwhere(outside)[0]
    return int(x), int(m[j])


def is_normal(G: FiniteGroup, S: Subgroup) -> bool:
    return conjugation_witness(G, S) is None


@group_cached
def torsion_center_K(G: FiniteGroup) -> Subgroup:
    sq = powers(G, 2)
    return _subgroup(G, [x for x in center(G).members if sq[x] == 0])


def exponent_divides(S: Subgroup, m: int) -> bool:
    return bool((powers(S.parent, m)[list(S.members)] == 0).all())


@group_cached
def factor_group(G: FiniteGroup, N: Subgroup) -> FactorGroup:
    witness = conjugation_witness(G, N)
    if witness is not None:
        raise NormalityError(f"subgroup of order {N.order} is not normal in {G.name}: "
                             f"conjugating {G.labels[witness[1]]} by {G.labels[witness[0]]} leaves it")
    m = np.asarray(N.members)
    coset_of = np.full(G.order, -1, dtype=np.int64)
    cosets: list[tuple[int, ...]] = []
    for x in range(G.order):
        if coset_of[x] >= 0:
            continue
        members = tuple(sorted(int(y) for y in G.mul[x, m]))
        coset_of[list(members)] = len(cosets)
        cosets.append(members)
    rep = tuple(c[0] for c in cosets)
    r = np.asarray(rep)
    table = coset_of[G.mul[np.ix_(r, r)]]
    # induced multiplication must not depend on the representatives
    induced = table[coset_of[:, None], coset_of[None, :]]
    assert np.array_equal(induced, coset_of[G.mul]), "coset multiplication is not well defined"
    assert len(cosets) * N.order == G.order
    coset_of.setflags(write=False)
    table.setflags(write=False)
    return FactorGroup(G, N, tuple(cosets), rep, coset_of, table)
