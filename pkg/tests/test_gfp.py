import numpy as np
import pytest

from app.errors import ConditionViolation
from app.groups.core import Subgroup, center, factor_group, n0_subgroup, torsion_center_K
from app.linear.gfp import (
    GFpVector,
    SubspaceGF,
    all_subspaces,
    as_vector_space,
    coset_to_word,
    scalar_multiple,
    subgroup_of_subspace,
    subspace_of_subgroup,
    subspaces_within,
    vector_space,
)
from app.utils import gaussian_binomial

from conftest import label_id


def test_dimensions(complex1, qutrit2):
    assert vector_space(complex1, torsion_center_K(complex1), 2).dim == 3
    assert vector_space(complex1, center(complex1), 2).dim == 2
    V = vector_space(qutrit2, center(qutrit2), 3)
    assert V.dim == 4 and V.size == 81


def test_non_commutative_quotient_violates_condition_1(complex1):
    with pytest.raises(ConditionViolation) as exc:
        as_vector_space(factor_group(complex1, Subgroup(complex1, (0,))), 2)
    assert exc.value.condition == 1
    a, b = exc.value.witness
    assert complex1.mul[a, b] != complex1.mul[b, a]


def test_wrong_exponent_violates_condition_1(complex1):
    # G/K is elementary abelian of exponent 2, so p = 3 fails
    with pytest.raises(ConditionViolation) as exc:
        as_vector_space(factor_group(complex1, torsion_center_K(complex1)), 3)
    assert exc.value.condition == 1


def test_coset_to_word(complex1):
    V = vector_space(complex1, center(complex1), 2)
    assert coset_to_word(V, GFpVector(2, (0, 0))) == 0
    for i, b in enumerate(V.basis):
        unit = GFpVector(2, tuple(int(i == j) for j in range(V.dim)))
        assert coset_to_word(V, unit) == b
    # the sum of the two basis classes is the class of XZ, i.e. of Y
    both = coset_to_word(V, GFpVector(2, (1, 1)))
    assert label_id(complex1, "Y") in V.source.cosets[both]


def test_coordinates_invert_words(examples):
    for G, p in examples.values():
        V = vector_space(G, center(G), p)
        for i in range(V.size):
            v = V.vector(i)
            assert V.coord_of(coset_to_word(V, v)) == v


def test_scalar_action_goes_through_powers(qutrit2):
    V = vector_space(qutrit2, center(qutrit2), 3)
    for i in range(1, V.size):
        v = V.vector(i)
        for m in range(5):
            assert coset_to_word(V, m * v) == V.source.power(coset_to_word(V, v), m % 3)
            assert scalar_multiple(V, m, v) == m * v


def test_zero_scalar_gives_the_zero_vector(complex1):
    V = vector_space(complex1, center(complex1), 2)
    v = V.vector(3)
    assert not v.is_zero
    assert scalar_multiple(V, 0, v).is_zero
    assert scalar_multiple(V, 2, v).is_zero


def test_p_times_v_is_zero(examples):
    for G, p in examples.values():
        V = vector_space(G, center(G), p)
        assert all((p * V.vector(i)).is_zero for i in range(V.size))


@pytest.mark.parametrize("d,p,k", [(4, 2, 1), (4, 3, 1), (4, 2, 2), (4, 3, 2), (5, 2, 2), (2, 2, 1)])
def test_subspace_counts(examples, d, p, k):
    G = {(4, 2): examples["real2"][0], (4, 3): examples["qutrit2"][0],
         (5, 2): examples["complex2"][0], (2, 2): examples["real1"][0]}[(d, p)]
    N = torsion_center_K(G) if d == 5 else center(G)
    V = vector_space(G, N, p)
    assert V.dim == d
    subs = all_subspaces(V, k)
    assert len(subs) == gaussian_binomial(d, k, p)
    assert len({S.key for S in subs}) == len(subs)
    assert all(S.dim == k for S in subs)


def test_known_counts(real2, qutrit2):
    assert len(all_subspaces(vector_space(real2, center(real2), 2), 1)) == 15
    assert len(all_subspaces(vector_space(qutrit2, center(qutrit2), 3), 1)) == 40
    assert len(all_subspaces(vector_space(real2, center(real2), 2), 0)) == 1


def test_span_is_canonical(qutrit2):
    V = vector_space(qutrit2, center(qutrit2), 3)
    a = SubspaceGF.span(V, [[1, 2, 0, 1], [0, 1, 1, 0]])
    b = SubspaceGF.span(V, [[1, 0, 1, 1], [0, 2, 2, 0], [1, 2, 0, 1]])
    assert a == b and hash(a) == hash(b)
    assert a.dim == 2


def test_subgroup_correspondence(examples):
    for G, p in examples.values():
        N = n0_subgroup(G, p)
        V = vector_space(G, N, p)
        assert subgroup_of_subspace(V, SubspaceGF.zero(V)) == N
        assert subgroup_of_subspace(V, SubspaceGF.whole(V)).order == G.order
        for k in range(V.dim + 1):
            if len(all_subspaces(V, k)) > 200:
                continue
            for S in all_subspaces(V, k):
                T = subgroup_of_subspace(V, S)
                assert N <= T
                assert subspace_of_subgroup(V, T) == S


def test_radical_line_gives_the_centre(complex1):
    V = vector_space(complex1, torsion_center_K(complex1), 2)
    S = subspace_of_subgroup(V, center(complex1))
    assert S.dim == 1
    assert subgroup_of_subspace(V, S) == center(complex1)


def test_subspaces_within(complex2):
    V = vector_space(complex2, torsion_center_K(complex2), 2)
    U = subspace_of_subgroup(V, center(complex2))
    assert [S.dim for S in subspaces_within(U, 1)] == [1]
    assert subspaces_within(U, 2) == []
    assert np.array_equal(subspaces_within(U, 1)[0].basis_matrix, U.basis_matrix)
