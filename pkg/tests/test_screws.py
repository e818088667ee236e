"""Slider transport, six-column ordering, and screw-measure resultants.

The moment transport sign is pinned by an independent oracle coded here
first: the moment of a force F applied at point a, taken about pivot b, is
(a - b) x F. Expected values below were frozen from that oracle, not from
the library.
"""

import numpy as np
import numpy.testing as npt
import pytest

from screwmech.screws import (
    DEFAULT_TOL,
    ScrewAtom,
    ScrewMeasure,
    SixColumn,
    Slider,
    SliderReduction,
    combine_basis,
    cross_matrix,
    decompose_in_basis,
    reductions_close,
    screw_basis,
    screw_resultant,
    six_coords,
    slider_reduce,
)


def moment_about(application, force, pivot):
    # Textbook statics oracle, independent of the library's transport rule.
    return np.cross(np.asarray(application, float) - np.asarray(pivot, float), force)


# --- cross_matrix ---


def test_cross_matrix_unit_x():
    expected = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])
    npt.assert_array_equal(cross_matrix([1.0, 0.0, 0.0]), expected)


def test_cross_matrix_zero():
    npt.assert_array_equal(cross_matrix([0.0, 0.0, 0.0]), np.zeros((3, 3)))


def test_cross_matrix_annihilates_itself():
    f = np.array([1.0, 2.0, 3.0])
    npt.assert_array_equal(cross_matrix(f) @ f, np.zeros(3))


def test_cross_matrix_matches_np_cross_and_is_antisymmetric():
    rng = np.random.default_rng(11)
    for _ in range(200):
        f, g = rng.standard_normal(3), rng.standard_normal(3)
        F, G = cross_matrix(f), cross_matrix(g)
        npt.assert_allclose(F @ g, np.cross(f, g), atol=1e-15)
        npt.assert_array_equal(F, -F.T)
        # anticommutativity f x g + g x f = 0
        npt.assert_allclose(F @ g + G @ f, np.zeros(3), atol=1e-15)


# --- slider reduction / transport ---


def test_reduce_homogeneous_force_oracle_value():
    # unit force along z applied at the origin, reduced at (1,0,0)
    s = Slider.force([0.0, 0.0, 1.0], at=[0.0, 0.0, 0.0])
    frozen = moment_about([0, 0, 0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0])
    npt.assert_array_equal(frozen, [0.0, 1.0, 0.0])  # oracle, computed by hand too
    red = slider_reduce(s, [1.0, 0.0, 0.0])
    npt.assert_allclose(red.p, [0.0, 0.0, 1.0], atol=0)
    npt.assert_allclose(red.q, frozen, atol=1e-15)


def test_reduce_force_about_origin_oracle_value():
    # unit force along x applied at (0,1,0), moment about the origin
    s = Slider.force([1.0, 0.0, 0.0], at=[0.0, 1.0, 0.0])
    frozen = moment_about([0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0])
    npt.assert_array_equal(frozen, [0.0, 0.0, -1.0])
    red = s.reduce_at([0.0, 0.0, 0.0])
    npt.assert_allclose(red.q, frozen, atol=1e-15)


def test_reduce_at_base_point_is_identity():
    s = Slider([0.3, -0.2, 0.9], [1.0, 2.0, 3.0], [-0.5, 0.0, 0.25])
    red = slider_reduce(s, s.base_point)
    npt.assert_array_equal(red.p, s.p)
    npt.assert_array_equal(red.q, s.q)


def test_pure_couple_is_position_independent():
    s = Slider.couple([0.0, 4.0, -1.0])
    rng = np.random.default_rng(5)
    for _ in range(20):
        red = s.reduce_at(rng.standard_normal(3))
        npt.assert_array_equal(red.p, np.zeros(3))
        npt.assert_array_equal(red.q, [0.0, 4.0, -1.0])


def test_transport_two_legs_equals_direct_1000_triples():
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(1000):
        x, y, z = rng.standard_normal((3, 3)) * 3.0
        p, q = rng.standard_normal(3), rng.standard_normal(3)
        s = Slider(x, p, q)
        via_y = s.reduce_at(y).transported(z)
        direct = s.reduce_at(z)
        worst = max(worst, np.max(np.abs(via_y.q - direct.q)))
        npt.assert_array_equal(via_y.p, direct.p)
    assert worst <= 1e-12


def test_transport_round_trip_is_identity():
    red = SliderReduction([1.0, -2.0, 0.5], [0.0, 3.0, 1.0], [0.2, 0.2, -0.7])
    back = red.transported([5.0, -1.0, 2.0]).transported(red.at)
    assert reductions_close(red, back, tol=1e-12)


def test_homogeneous_flag_tracks_moment_at_base():
    assert Slider.force([1.0, 0.0, 0.0], at=[9.0, 9.0, 9.0]).homogeneous
    assert not Slider([0, 0, 0], [1, 0, 0], [0, 1e-30, 0]).homogeneous


# --- six-column ordering ---


def test_six_coords_wrench_and_twist_orderings():
    red = SliderReduction([1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 0.0])
    npt.assert_array_equal(six_coords(red, "wrench").data, [1, 0, 0, 0, 2, 0])
    npt.assert_array_equal(six_coords(red, "twist").data, [0, 2, 0, 1, 0, 0])


def test_reorder_is_involution():
    col = SixColumn(np.arange(6.0), "wrench")
    twice = col.reordered().reordered()
    assert twice.order == "wrench"
    npt.assert_array_equal(twice.data, col.data)
    assert col.reordered().order == "twist"


def test_six_column_accessors_agree_across_orderings():
    red = SliderReduction([1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [0.0, 0.0, 0.0])
    for order in ("wrench", "twist"):
        col = six_coords(red, order)
        npt.assert_array_equal(col.p, red.p)
        npt.assert_array_equal(col.q, red.q)


def test_six_column_rejects_unknown_order():
    with pytest.raises(ValueError, match="order"):
        SixColumn(np.zeros(6), "spiral")


# --- screw measures ---


def test_resultant_of_opposed_forces_is_pure_couple():
    # atoms p = +z at (1,0,0) and p = -z at (-1,0,0); oracle: moment sum about origin
    atoms = [
        ScrewAtom.force([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]),
        ScrewAtom.force([0.0, 0.0, -1.0], [-1.0, 0.0, 0.0]),
    ]
    frozen = moment_about([1, 0, 0], [0, 0, 1.0], [0, 0, 0]) + moment_about(
        [-1, 0, 0], [0, 0, -1.0], [0, 0, 0]
    )
    npt.assert_array_equal(frozen, [0.0, -2.0, 0.0])
    red = screw_resultant(ScrewMeasure(atoms), [0.0, 0.0, 0.0])
    npt.assert_allclose(red.p, np.zeros(3), atol=0)
    npt.assert_allclose(red.q, frozen, atol=1e-15)


def test_empty_measure_gives_zero_reduction():
    red = screw_resultant(ScrewMeasure([]), [3.0, 1.0, -2.0])
    npt.assert_array_equal(red.p, np.zeros(3))
    npt.assert_array_equal(red.q, np.zeros(3))


def test_single_atom_at_reduction_point_scales_by_weight():
    at = [0.5, -0.5, 2.0]
    s = Slider(at, [1.0, 2.0, 3.0], [4.0, 5.0, 6.0])
    red = screw_resultant(ScrewMeasure([ScrewAtom(at, s, 2.5)]), at)
    npt.assert_allclose(red.p, [2.5, 5.0, 7.5], atol=0)
    npt.assert_allclose(red.q, [10.0, 12.5, 15.0], atol=0)


def test_resultant_linear_in_weights_and_additive():
    rng = np.random.default_rng(7)
    atoms_a = [
        ScrewAtom(pt, Slider(pt, p, q), w)
        for pt, p, q, w in (
            (rng.standard_normal(3), rng.standard_normal(3), rng.standard_normal(3), rng.random())
            for _ in range(6)
        )
    ]
    atoms_b = [
        ScrewAtom(pt, Slider(pt, p, q), w)
        for pt, p, q, w in (
            (rng.standard_normal(3), rng.standard_normal(3), rng.standard_normal(3), rng.random())
            for _ in range(4)
        )
    ]
    at = rng.standard_normal(3)
    ma, mb = ScrewMeasure(atoms_a), ScrewMeasure(atoms_b)
    ra, rb = screw_resultant(ma, at), screw_resultant(mb, at)
    rsum = screw_resultant(ma + mb, at)
    npt.assert_allclose(rsum.p, ra.p + rb.p, atol=1e-12)
    npt.assert_allclose(rsum.q, ra.q + rb.q, atol=1e-12)
    scaled = screw_resultant(ma.scaled(3.5), at)
    npt.assert_allclose(scaled.p, 3.5 * ra.p, atol=1e-12)
    npt.assert_allclose(scaled.q, 3.5 * ra.q, atol=1e-12)


def test_atom_weight_must_be_nonnegative():
    with pytest.raises(ValueError, match="weight"):
        ScrewAtom.force([1.0, 0.0, 0.0], [0.0, 0.0, 0.0], weight=-1.0)


# --- basis ---


def test_basis_reductions_are_coordinate_screws():
    basis = screw_basis()
    assert len(basis) == 6
    expected = [
        ([1, 0, 0], [0, 0, 0]),
        ([0, 1, 0], [0, 0, 0]),
        ([0, 0, 1], [0, 0, 0]),
        ([0, 0, 0], [1, 0, 0]),
        ([0, 0, 0], [0, 1, 0]),
        ([0, 0, 0], [0, 0, 1]),
    ]
    for measure, (p, q) in zip(basis, expected):
        red = screw_resultant(measure, [0.0, 0.0, 0.0])
        npt.assert_array_equal(red.p, p)
        npt.assert_array_equal(red.q, q)


def test_decompose_coordinates():
    red = SliderReduction([1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [0.0, 0.0, 0.0])
    npt.assert_array_equal(decompose_in_basis(red), [1, 2, 3, 4, 5, 6])


def test_basis_round_trip_tight():
    rng = np.random.default_rng(99)
    for _ in range(100):
        red = SliderReduction(
            rng.standard_normal(3), rng.standard_normal(3), rng.standard_normal(3)
        )
        coeffs = decompose_in_basis(red)
        rebuilt = combine_basis(coeffs)
        ref = red.transported([0.0, 0.0, 0.0])
        npt.assert_allclose(rebuilt.p, ref.p, atol=1e-14)
        npt.assert_allclose(rebuilt.q, ref.q, atol=1e-14)


def test_default_tolerance_exported():
    assert DEFAULT_TOL == 1e-12
