import itertools

import numpy as np
import pytest

from app.errors import DegeneracyError
from app.forms import bilinear_form, choose_generator, radical
from app.geometry.polar import (
    commutation_matrix,
    condensation,
    conjugate_points,
    is_totally_isotropic,
    perp,
    quotient_polar_space,
    subgroup_of_flat,
    symplectic_polar_space,
)
from app.geometry.projective import Flat, ProjectivePoint, point_label, projective_points, span_flat
from app.groups.core import center, generated_subgroup, torsion_center_K
from app.linear.gfp import (
    GFpVector,
    SubspaceGF,
    all_subspaces,
    subgroup_of_subspace,
    subspace_of_subgroup,
    vector_space,
)

from conftest import is_commutative_subgroup, label_id, subgroups_above


def _point(W, label):
    return W.points[W.labels().index(label)]


@pytest.mark.parametrize("name,points,lines,per_line,per_point", [
    ("complex1", 3, 0, 0, 0),
    ("real2", 15, 15, 3, 3),
    ("complex2", 15, 15, 3, 3),
    ("qutrit2", 40, 40, 4, 4),
])
def test_polar_space_counts(examples, name, points, lines, per_line, per_point):
    G, p = examples[name]
    W = symplectic_polar_space(G, p)
    assert len(W.points) == points
    assert len(W.lines) == lines
    assert all(len(F.points) == per_line for F in W.lines)
    if lines:
        counts = [sum(P in F for F in W.lines) for P in W.points]
        assert set(counts) == {per_point}


def test_projective_points_are_normalized(qutrit2):
    V = vector_space(qutrit2, center(qutrit2), 3)
    pts = projective_points(V)
    assert len(pts) == 40
    assert all(next(c for c in P.rep.coords if c) == 1 for P in pts)
    assert ProjectivePoint(GFpVector(3, (0, 2, 1, 0))) == ProjectivePoint(GFpVector(3, (0, 1, 2, 0)))
    with pytest.raises(ValueError):
        ProjectivePoint(GFpVector(3, (0, 0, 0, 0)))


def test_doily_labels(real2):
    W = symplectic_polar_space(real2, 2)
    labels = W.labels()
    assert len(set(labels)) == 15
    assert "II" not in labels
    assert {"XI", "IZ", "ZI", "YY"} <= set(labels)


def test_every_isotropic_line_is_a_commuting_triple(real2):
    W = symplectic_polar_space(real2, 2)
    for F in W.lines:
        assert is_totally_isotropic(W.form, F.subspace)
        T = subgroup_of_flat(W.space, F)
        m = list(T.members)
        block = real2.mul[np.ix_(m, m)]
        assert (block == block.T).all()


def test_conjugate_points(real2, qutrit2):
    W = symplectic_polar_space(real2, 2)
    assert conjugate_points(W, _point(W, "XI"), _point(W, "IZ"))
    assert not conjugate_points(W, _point(W, "XI"), _point(W, "ZI"))

    W3 = symplectic_polar_space(qutrit2, 3)
    V = W3.space
    xi = ProjectivePoint(V.vector_of_element(label_id(qutrit2, "X.I")))
    zi = ProjectivePoint(V.vector_of_element(label_id(qutrit2, "Z.I")))
    iz = ProjectivePoint(V.vector_of_element(label_id(qutrit2, "I.Z")))
    assert not conjugate_points(W3, xi, zi)
    assert conjugate_points(W3, xi, iz)


def test_every_point_is_self_conjugate(qutrit2):
    W = symplectic_polar_space(qutrit2, 3)
    assert all(conjugate_points(W, P, P) for P in W.points)


def test_perp_of_a_point_is_a_hyperplane(real2, qutrit2):
    for G, p in ((real2, 2), (qutrit2, 3)):
        W = symplectic_polar_space(G, p)
        for P in W.points[:5]:
            F = span_flat(W.space, P)
            H = perp(W.form, F)
            assert H.proj_dim == W.space.dim - 2
            assert P in H
            assert perp(W.form, H) == F


def test_perp_of_an_isotropic_line_is_itself(qutrit2):
    W = symplectic_polar_space(qutrit2, 3)
    assert all(perp(W.form, F) == F for F in W.lines)


def test_perp_is_an_involution_on_every_flat(qutrit2):
    W = symplectic_polar_space(qutrit2, 3)
    V = W.space
    seen = 0
    for k in range(V.dim + 1):
        for S in all_subspaces(V, k):
            F = Flat(S)
            H = perp(W.form, F)
            assert H.subspace.dim == V.dim - k
            assert perp(W.form, H) == F
            seen += 1
    assert seen == 1 + 40 + 130 + 40 + 1


def test_perp_of_the_empty_flat_is_everything(real2):
    W = symplectic_polar_space(real2, 2)
    assert perp(W.form, Flat(SubspaceGF.zero(W.space))).proj_dim == 3


def test_perp_refuses_a_degenerate_form(complex1):
    W = quotient_polar_space(complex1, torsion_center_K(complex1), 2)
    V = W.lifted_space
    form = bilinear_form(V, choose_generator(complex1, 2))
    F = Flat(SubspaceGF.span(V, [V.vector(1).coords]))
    with pytest.raises(DegeneracyError):
        perp(form, F)
    H = perp(form, F, allow_degenerate=True)
    assert radical(form) <= H.subspace


def test_symplectic_space_needs_the_centre(complex1):
    with pytest.raises(DegeneracyError):
        symplectic_polar_space(complex1, 2, N=torsion_center_K(complex1))


def test_quotient_lifts(complex1, complex2):
    K = torsion_center_K(complex1)
    W = quotient_polar_space(complex1, K, 2)
    assert W.lifted_space.dim == 3
    for P in W.points:
        assert W.two_dimensions(span_flat(W.space, P)) == (1, 0)
    assert W.two_dimensions(Flat(SubspaceGF.zero(W.space))) == (0, -1)

    W2 = quotient_polar_space(complex2, torsion_center_K(complex2), 2)
    assert {W2.two_dimensions(F) for F in W2.lines} == {(2, 1)}
    for F in W2.lines:
        lift = W2.lifts[F.key].lift
        assert subgroup_of_flat(W2.lifted_space, lift) == subgroup_of_flat(W2.space, F)


def test_quotient_with_the_centre_is_the_plain_space(real2):
    W = quotient_polar_space(real2, center(real2), 2)
    assert W.lifts is None
    F = W.lines[0]
    assert W.two_dimensions(F) == (1, 1)


def test_condensation(complex1, qutrit2):
    K = torsion_center_K(complex1)
    V = vector_space(complex1, K, 2)
    P = ProjectivePoint(V.vector_of_element(label_id(complex1, "X")))
    c = condensation(complex1, K, P)
    assert sorted(c.labels) == ["-X", "X"]
    assert c.label == "X"

    Z = center(qutrit2)
    V3 = vector_space(qutrit2, Z, 3)
    P3 = ProjectivePoint(V3.vector_of_element(label_id(qutrit2, "X.Z")))
    c3 = condensation(qutrit2, Z, P3)
    assert len(c3.members) == 6
    assert c3.label in ("X.Z", "X2.Z2")


def test_condensation_of_w_points(real2):
    Z = center(real2)
    W = symplectic_polar_space(real2, 2)
    seen = set()
    for P in W.points:
        c = condensation(real2, Z, P)
        assert len(c.members) == Z.order
        seen |= set(c.members)
    assert len(seen) == real2.order - Z.order


def test_point_label_prefers_short_labels(complex1):
    V = vector_space(complex1, center(complex1), 2)
    labels = {point_label(V, P) for P in projective_points(V)}
    assert labels == {"X", "Y", "Z"}


def test_subgroups_of_flats(complex2):
    W = symplectic_polar_space(complex2, 2)
    Z = center(complex2)
    for F in W.lines:
        T = subgroup_of_flat(W.space, F)
        assert T.order == 4 * Z.order
        assert Z <= T
    for P, R in itertools.combinations(W.points[:6], 2):
        T = subgroup_of_flat(W.space, span_flat(W.space, P, R))
        commutative = bool((complex2.mul[np.ix_(T.members, T.members)]
                            == complex2.mul[np.ix_(T.members, T.members)].T).all())
        assert commutative == conjugate_points(W, P, R)


@pytest.mark.parametrize("fixture", ["complex1", "complex2"])
def test_isotropic_flats_are_the_commutative_subgroups(request, fixture):
    G = request.getfixturevalue(fixture)
    W = symplectic_polar_space(G, 2)
    V = W.space
    groups = subgroups_above(G, center(G), is_commutative_subgroup)
    flats = {SubspaceGF.zero(V)} | {F.subspace for fs in W.iso_flats.values() for F in fs}
    assert len(groups) == len(flats)
    assert {subspace_of_subgroup(V, T) for T in groups} == flats
    assert {subgroup_of_subspace(V, S) for S in flats} == groups


def test_commutation_matrix(real2, qutrit2):
    W = symplectic_polar_space(real2, 2)
    adj = commutation_matrix(W)
    assert adj.shape == (15, 15)
    assert (adj == adj.T).all() and not adj.diagonal().any()
    assert set(adj.sum(axis=1)) == {6}
    assert set(commutation_matrix(symplectic_polar_space(qutrit2, 3)).sum(axis=1)) == {12}


def test_commutation_transfers_to_the_group(real2):
    W = symplectic_polar_space(real2, 2)
    adj = commutation_matrix(W)
    reps = [W.space.representative(P.rep) for P in W.points]
    for i, j in itertools.combinations(range(len(reps)), 2):
        x, y = reps[i], reps[j]
        assert adj[i, j] == (real2.mul[x, y] == real2.mul[y, x])


def test_generator_choice_does_not_change_the_geometry(qutrit2):
    a = symplectic_polar_space(qutrit2, 3, g_index=0)
    b = symplectic_polar_space(qutrit2, 3, g_index=1)
    assert [F.key for F in a.lines] == [F.key for F in b.lines]


def test_lines_are_spanned_by_their_points(real2):
    W = symplectic_polar_space(real2, 2)
    for F in W.lines:
        P, R = F.points[:2]
        assert span_flat(W.space, P, R) == F


def test_isotropic_subgroup_through_a_point(complex1):
    S = generated_subgroup(complex1, [label_id(complex1, "X")] + list(center(complex1).members))
    W = symplectic_polar_space(complex1, 2)
    F = Flat(subspace_of_subgroup(W.space, S))
    assert F.proj_dim == 0
    assert point_label(W.space, F.points[0]) == "X"
