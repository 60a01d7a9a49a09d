import itertools

import numpy as np
import pytest

from app.groups.core import FiniteGroup, generated_subgroup
from app.groups.pauli import PauliSpec, build_pauli_group

# smallest loop that is not a group: Latin square, identity 0, x.x = 0
LOOP5 = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


def cocycle_group(m, beta, name):
    """Central extension of GF(2)^m by GF(2): (s, v)(t, w) = (s + t + beta(v, w), v + w).

    beta is bilinear, so the product is associative; id = s * 2^m + index(v).
    """
    vecs = list(itertools.product(range(2), repeat=m))
    size = 2 ** m
    table = np.zeros((2 * size, 2 * size), dtype=np.int64)
    for s, t in itertools.product(range(2), repeat=2):
        for i, v in enumerate(vecs):
            for j, w in enumerate(vecs):
                u = tuple((a + b) % 2 for a, b in zip(v, w))
                k = vecs.index(u)
                table[s * size + i, t * size + j] = ((s + t + beta(v, w)) % 2) * size + k
    labels = [f"{'-' if s else '+'}{''.join(map(str, v))}" for s in range(2) for v in vecs]
    return FiniteGroup(table, labels=labels, name=name)


def label_id(G, label):
    return G.labels.index(label)


def is_commutative_subgroup(T):
    m = list(T.members)
    sub = T.parent.mul[np.ix_(m, m)]
    return bool((sub == sub.T).all())


def subgroups_above(G, base, keep):
    """Every subgroup T >= base with keep(T), grown one element at a time.

    keep must be inherited by subgroups that still contain base, so each
    kept subgroup is reached through a chain of kept ones.
    """
    found = {base}
    frontier = [base]
    while frontier:
        grown = []
        for T in frontier:
            for x in range(G.order):
                if T.mask[x]:
                    continue
                U = generated_subgroup(G, list(T.members) + [x])
                if U not in found and keep(U):
                    found.add(U)
                    grown.append(U)
        frontier = grown
    return found


@pytest.fixture(scope="session")
def complex1():
    return build_pauli_group(PauliSpec(2, 1, "complex_qubit"))


@pytest.fixture(scope="session")
def complex2():
    return build_pauli_group(PauliSpec(2, 2, "complex_qubit"))


@pytest.fixture(scope="session")
def real1():
    return build_pauli_group(PauliSpec(2, 1, "real_qubit"))


@pytest.fixture(scope="session")
def real2():
    return build_pauli_group(PauliSpec(2, 2, "real_qubit"))


@pytest.fixture(scope="session")
def qutrit2():
    return build_pauli_group(PauliSpec(3, 2, "qudit_odd"))


@pytest.fixture(scope="session")
def quaternion():
    # i = +10, j = +01, k = +11; every non-central element squares to -1
    return cocycle_group(2, lambda v, w: (v[0] * w[0] + v[0] * w[1] + v[1] * w[1]) % 2, "Q8")


@pytest.fixture(scope="session")
def elliptic_group():
    # Q(v) = v1 v2 + v3^2 + v3 v4 + v4^2, an elliptic form on GF(2)^4
    return cocycle_group(
        4, lambda v, w: (v[0] * w[1] + v[2] * w[3] + v[2] * w[2] + v[3] * w[3]) % 2, "elliptic32")


@pytest.fixture(scope="session")
def dihedral_by_two():
    # D8 x C2: |G'| = 2 while K = Z(G) has order 4
    return cocycle_group(3, lambda v, w: (v[0] * w[1]) % 2, "D8xC2")


@pytest.fixture(scope="session")
def klein():
    return FiniteGroup([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]], name="V4")


@pytest.fixture(scope="session")
def examples(complex1, complex2, real1, real2, qutrit2):
    """(group, p) for the five worked examples."""
    return {
        "complex1": (complex1, 2),
        "complex2": (complex2, 2),
        "real1": (real1, 2),
        "real2": (real2, 2),
        "qutrit2": (qutrit2, 3),
    }
