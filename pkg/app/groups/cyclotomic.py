"""Exact matrices over Z[zeta_m].

Every entry is kept as an integer coefficient vector over the powers
zeta^0 .. zeta^(m-1); products of monomial matrices (one non-zero per row
and column, as for every generalized Pauli operator) keep each entry a
single power of zeta, so equality of such matrices is decided exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True, eq=False)
class CyclotomicMatrix:
    m: int
    coeffs: np.ndarray  # shape (rows, cols, m)

    @classmethod
    def identity(cls, size: int, m: int) -> "CyclotomicMatrix":
        c = np.zeros((size, size, m), dtype=np.int64)
        c[np.arange(size), np.arange(size), 0] = 1
        return cls(m, c)

    @classmethod
    def monomial(cls, m: int, rows: np.ndarray, exponents: np.ndarray) -> "CyclotomicMatrix":
        """Column j has the single entry zeta^exponents[j] in row rows[j]."""
        size = len(rows)
        c = np.zeros((size, size, m), dtype=np.int64)
        c[np.asarray(rows), np.arange(size), np.asarray(exponents) % m] = 1
        return cls(m, c)

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape[0], self.coeffs.shape[1]

    def _fold(self, prod: np.ndarray) -> np.ndarray:
        # prod[..., k, l] holds the coefficient of zeta^(k+l)
        out = np.zeros(prod.shape[:-2] + (self.m,), dtype=np.int64)
        for k in range(self.m):
            for l in range(self.m):
                out[..., (k + l) % self.m] += prod[..., k, l]
        return out

    def __matmul__(self, other: "CyclotomicMatrix") -> "CyclotomicMatrix":
        assert self.m == other.m and self.shape[1] == other.shape[0]
        prod = np.einsum("ijk,jlm->ilkm", self.coeffs, other.coeffs)
        return CyclotomicMatrix(self.m, self._fold(prod))

    def kron(self, other: "CyclotomicMatrix") -> "CyclotomicMatrix":
        assert self.m == other.m
        (a, b), (c, d) = self.shape, other.shape
        prod = np.einsum("ijk,uvl->iujvkl", self.coeffs, other.coeffs).reshape(a * c, b * d, self.m, self.m)
        return CyclotomicMatrix(self.m, self._fold(prod))

    def scale(self, k: int) -> "CyclotomicMatrix":
        """Multiply by zeta^k."""
        return CyclotomicMatrix(self.m, np.roll(self.coeffs, k % self.m, axis=2))

    def transpose(self) -> "CyclotomicMatrix":
        return CyclotomicMatrix(self.m, self.coeffs.transpose(1, 0, 2))

    def conjugate(self) -> "CyclotomicMatrix":
        # zeta^k -> zeta^(-k)
        idx = (-np.arange(self.m)) % self.m
        return CyclotomicMatrix(self.m, self.coeffs[:, :, idx])

    def adjoint(self) -> "CyclotomicMatrix":
        return self.conjugate().transpose()

    def entry(self, i: int, j: int) -> Optional[tuple[int, int]]:
        """(k, m) for an entry equal to zeta_m^k, None for zero."""
        c = self.coeffs[i, j]
        nz = np.flatnonzero(c)
        if nz.size == 0:
            return None
        if nz.size != 1 or c[nz[0]] != 1:
            raise ValueError(f"entry ({i}, {j}) is not a single root of unity")
        return int(nz[0]), self.m

    def key(self) -> bytes:
        return self.coeffs.tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CyclotomicMatrix):
            return NotImplemented
        return self.m == other.m and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.m, self.key()))
