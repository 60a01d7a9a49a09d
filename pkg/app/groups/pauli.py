"""Generalized Pauli groups: complex and real multi-qubit, odd-prime multi-qudit.

An element is phase * X^b Z^c (tensor over n factors) with the shift X and
clock Z satisfying Z X = omega X Z.  Ids are assigned phase-major, then the
x-vector, then the z-vector, each lexicographic with the first factor most
significant, so id 0 is the identity.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from app.config import settings
from app.errors import SpecError
from app.groups.core import FiniteGroup
from app.groups.cyclotomic import CyclotomicMatrix
from app.utils import is_prime

log = logging.getLogger(__name__)


class Flavor(str, Enum):
    complex_qubit = "complex_qubit"
    real_qubit = "real_qubit"
    qudit_odd = "qudit_odd"


_QUBIT_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_COMPLEX_PREFIX = ("", "i", "-", "-i")


@dataclass(frozen=True)
class PauliSpec:
    p: int
    n: int
    flavor: Flavor

    def __post_init__(self) -> None:
        object.__setattr__(self, "flavor", Flavor(self.flavor))
        if not is_prime(self.p):
            raise SpecError(f"qudit rank {self.p} is not prime")
        if self.n < 1:
            raise SpecError(f"need at least one tensor factor, got n={self.n}")
        if self.flavor in (Flavor.complex_qubit, Flavor.real_qubit) and self.p != 2:
            raise SpecError(f"flavor {self.flavor.value} requires p = 2, got p = {self.p}")
        if self.flavor is Flavor.qudit_odd and self.p == 2:
            raise SpecError("flavor qudit_odd requires an odd prime")

    @property
    def phase_order(self) -> int:
        return {Flavor.complex_qubit: 4, Flavor.real_qubit: 2}.get(self.flavor, self.p)

    @property
    def kappa(self) -> int:
        """omega = zeta^kappa with zeta the primitive phase_order-th root."""
        return self.phase_order // self.p

    @property
    def order(self) -> int:
        return self.phase_order * self.p ** (2 * self.n)

    @property
    def name(self) -> str:
        return f"{self.flavor.value}[p={self.p},n={self.n}]"


@dataclass(frozen=True)
class PauliElement:
    phase: int
    xvec: tuple[int, ...]
    zvec: tuple[int, ...]


def _check(spec: PauliSpec, u: PauliElement) -> None:
    if len(u.xvec) != spec.n or len(u.zvec) != spec.n:
        raise SpecError(f"element has {len(u.xvec)}/{len(u.zvec)} factors, spec expects {spec.n}")
    if not 0 <= u.phase < spec.phase_order or any(not 0 <= c < spec.p for c in u.xvec + u.zvec):
        raise SpecError(f"element {u} out of range for {spec.name}")


def _digits(k: int, p: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        k, r = divmod(k, p)
        out.append(r)
    return tuple(reversed(out))


def _undigits(v: tuple[int, ...], p: int) -> int:
    k = 0
    for c in v:
        k = k * p + c
    return k


def encode(spec: PauliSpec, u: PauliElement) -> int:
    _check(spec, u)
    q = spec.p ** spec.n
    return (u.phase * q + _undigits(u.xvec, spec.p)) * q + _undigits(u.zvec, spec.p)


def decode(spec: PauliSpec, k: int) -> PauliElement:
    if not 0 <= k < spec.order:
        raise SpecError(f"id {k} out of range for {spec.name}")
    q = spec.p ** spec.n
    rest, z = divmod(k, q)
    phase, x = divmod(rest, q)
    return PauliElement(phase, _digits(x, spec.p, spec.n), _digits(z, spec.p, spec.n))


def pauli_multiply(spec: PauliSpec, u: PauliElement, v: PauliElement) -> PauliElement:
    _check(spec, u)
    _check(spec, v)
    p = spec.p
    cocycle = sum(c * b for c, b in zip(u.zvec, v.xvec))
    return PauliElement(
        (u.phase + v.phase + spec.kappa * cocycle) % spec.phase_order,
        tuple((a + b) % p for a, b in zip(u.xvec, v.xvec)),
        tuple((a + b) % p for a, b in zip(u.zvec, v.zvec)),
    )


def to_matrix(spec: PauliSpec, u: PauliElement) -> CyclotomicMatrix:
    _check(spec, u)
    p, m = spec.p, spec.phase_order
    j = np.arange(p)
    out = CyclotomicMatrix.identity(1, m)
    for b, c in zip(u.xvec, u.zvec):
        # X^b Z^c |j> = omega^(c j) |j + b>
        out = out.kron(CyclotomicMatrix.monomial(m, (j + b) % p, spec.kappa * c * j))
    return out.scale(u.phase)


def _factor_label(spec: PauliSpec, b: int, c: int) -> str:
    if spec.p == 2:
        return _QUBIT_LETTERS[(b, c)]
    if b == 0 and c == 0:
        return "I"
    xs = ("X" + (str(b) if b > 1 else "")) if b else ""
    zs = ("Z" + (str(c) if c > 1 else "")) if c else ""
    return xs + zs


def label_of(spec: PauliSpec, u: PauliElement, with_phase: bool = False) -> str:
    sep = "" if spec.p == 2 else "."
    body = sep.join(_factor_label(spec, b, c) for b, c in zip(u.xvec, u.zvec))
    if not with_phase:
        return body
    ys = sum(1 for b, c in zip(u.xvec, u.zvec) if b and c)
    if spec.flavor is Flavor.complex_qubit:
        # X Z = -i Y
        prefix = _COMPLEX_PREFIX[(u.phase + 3 * ys) % 4]
    elif spec.flavor is Flavor.real_qubit:
        # X Z = -Y with Y = Z X
        prefix = "-" if (u.phase + ys) % 2 else ""
    else:
        prefix = "" if u.phase == 0 else "w" + (str(u.phase) if u.phase > 1 else "")
    return prefix + body


class PauliGroup(FiniteGroup):
    def __init__(self, spec: PauliSpec, mul: np.ndarray):
        elements = [decode(spec, k) for k in range(spec.order)]
        super().__init__(mul,
                         labels=[label_of(spec, u, with_phase=True) for u in elements],
                         class_labels=[label_of(spec, u) for u in elements],
                         name=spec.name)
        self.spec = spec

    def element_of(self, k: int) -> PauliElement:
        return decode(self.spec, self.element(k))

    def id_of(self, u: PauliElement) -> int:
        return encode(self.spec, u)

    def matrix(self, k: int) -> CyclotomicMatrix:
        return to_matrix(self.spec, self.element_of(k))


def build_pauli_group(spec: PauliSpec) -> PauliGroup:
    p, n, m = spec.p, spec.n, spec.phase_order
    q = p ** n
    ids = np.arange(spec.order)
    rest, zidx = np.divmod(ids, q)
    phase, xidx = np.divmod(rest, q)
    weights = p ** np.arange(n - 1, -1, -1)
    X = (xidx[:, None] // weights[None, :]) % p
    Z = (zidx[:, None] // weights[None, :]) % p

    ph = (phase[:, None] + phase[None, :] + spec.kappa * (Z @ X.T)) % m
    xs = np.zeros((spec.order, spec.order), dtype=np.int64)
    zs = np.zeros((spec.order, spec.order), dtype=np.int64)
    for i in range(n):
        xs += ((X[:, i][:, None] + X[:, i][None, :]) % p) * weights[i]
        zs += ((Z[:, i][:, None] + Z[:, i][None, :]) % p) * weights[i]
    mul = (ph * q + xs) * q + zs
    group = PauliGroup(spec, mul)
    log.info("[Pauli] built %s of order %d", spec.name, spec.order)
    return group


def verify_against_matrices(group: PauliGroup) -> Optional[tuple[int, int]]:
    """First pair whose table product disagrees with the matrix product, or None."""
    spec = group.spec
    if spec.order > settings.exhaustive_pair_limit:
        log.warning("[Pauli] skipping matrix oracle for %s (order %d)", spec.name, spec.order)
        return None
    mats = [group.matrix(k) for k in range(spec.order)]
    lookup = {mat.key(): k for k, mat in enumerate(mats)}
    if len(lookup) != spec.order:
        raise SpecError(f"matrix representation of {spec.name} is not faithful")
    for a in range(spec.order):
        for b in range(spec.order):
            if lookup.get((mats[a] @ mats[b]).key()) != group.mul[a, b]:
                return a, b
    return None
