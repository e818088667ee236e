"""Euler / Cayley-vector / quaternion parameterizations against textbook
oracles: elementary-rotation products, Rodrigues axis-angle, closed-form
quaternion matrices, and finite-difference angular velocity.
"""

import numpy as np
import numpy.testing as npt
import pytest

from oracles import (
    central_difference,
    euler123,
    integrate_rk4,
    quat_from_axis_angle,
    quat_matrix,
    random_rotation,
    rodrigues,
)
from screwmech.errors import NumericalError, ParameterizationSingularity
from screwmech.rotations import (
    EulerAngles,
    Quaternion,
    euler_from_rotation,
    euler_rate_map,
    euler_rate_map_dot,
    euler_to_rotation,
    fedorov_from_rotation,
    fedorov_rate,
    fedorov_rate_map,
    fedorov_rate_map_dot,
    quat_from_rotation,
    quat_product,
    quat_rate,
    quat_rate_map,
    quat_rate_matrix,
    quat_to_fedorov,
    rotation_from_fedorov,
    rotation_from_quat,
)


def fd_omega(C_of_t, t, h=1e-6):
    """Angular velocity by central differences of the rotation itself."""
    C = C_of_t(t)
    A = C.T @ central_difference(C_of_t, t, h)
    A = 0.5 * (A - A.T)
    return np.array([A[2, 1], A[0, 2], A[1, 0]])


# --- Euler 1-2-3 ---


class TestEuler:
    def test_zero_angles_identity(self):
        npt.assert_array_equal(euler_to_rotation(EulerAngles(0, 0, 0)), np.eye(3))

    def test_quarter_turn_about_first_axis(self):
        C = euler_to_rotation(EulerAngles(np.pi / 2, 0, 0))
        npt.assert_allclose(C, [[1, 0, 0], [0, 0, -1], [0, 1, 0]], atol=1e-15)

    def test_matches_elementary_product_oracle(self):
        rng = np.random.default_rng(20)
        for _ in range(50):
            phi, theta, psi = rng.uniform(-np.pi, np.pi, 3)
            npt.assert_allclose(
                euler_to_rotation(EulerAngles(phi, theta, psi)),
                euler123(phi, theta, psi),
                atol=1e-15,
            )

    def test_orthonormal_unit_det(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            C = euler_to_rotation(EulerAngles(*rng.uniform(-np.pi, np.pi, 3)))
            npt.assert_allclose(C.T @ C, np.eye(3), atol=1e-14)
            npt.assert_allclose(np.linalg.det(C), 1.0, atol=1e-14)

    def test_round_trip_off_gimbal(self):
        rng = np.random.default_rng(22)
        for _ in range(200):
            theta = rng.uniform(-np.pi / 2 + 0.05, np.pi / 2 - 0.05)
            a = EulerAngles(rng.uniform(-np.pi, np.pi), theta, rng.uniform(-np.pi, np.pi))
            C = euler_to_rotation(a)
            back = euler_from_rotation(C)
            npt.assert_allclose(euler_to_rotation(back), C, atol=1e-10)
            npt.assert_allclose(back.as_array(), a.as_array(), atol=1e-10)

    def test_extraction_raises_at_gimbal(self):
        C = euler_to_rotation(EulerAngles(0.3, np.pi / 2, -0.2))
        with pytest.raises(ParameterizationSingularity, match="gimbal"):
            euler_from_rotation(C)

    def test_rate_map_single_axis_spin(self):
        D = euler_rate_map(EulerAngles(0, 0, 0))
        npt.assert_allclose(D.omega([0.7, 0, 0]), [0.7, 0, 0], atol=0)

    def test_rate_map_vs_finite_difference(self):
        def angles(t):
            return EulerAngles(0.9 * np.sin(t), 0.7 * np.cos(1.3 * t), -0.5 * t)

        def rates(t):
            return np.array([0.9 * np.cos(t), -0.91 * np.sin(1.3 * t), -0.5])

        for t in (0.0, 0.6, 1.7, 3.1):
            w_fd = fd_omega(lambda s: euler_to_rotation(angles(s)), t)
            w = euler_rate_map(angles(t)).omega(rates(t))
            npt.assert_allclose(w, w_fd, atol=1e-6)

    def test_rate_map_inverse_and_gimbal_error(self):
        a = EulerAngles(0.4, 0.9, -1.2)
        D = euler_rate_map(a)
        w = np.array([0.3, -0.1, 0.8])
        npt.assert_allclose(D.omega(D.rates(w)), w, atol=1e-12)
        with pytest.raises(ParameterizationSingularity, match="singular"):
            euler_rate_map(EulerAngles(0.1, np.pi / 2, 0.2)).rates(w)

    def test_rate_map_dot_vs_finite_difference(self):
        def angles(t):
            return EulerAngles(0.4 * t, 0.3 * np.sin(t), 0.8 * np.cos(t))

        def rates(t):
            return np.array([0.4, 0.3 * np.cos(t), -0.8 * np.sin(t)])

        t = 0.83
        Ddot_fd = central_difference(lambda s: euler_rate_map(angles(s)).D, t)
        npt.assert_allclose(euler_rate_map_dot(angles(t), rates(t)), Ddot_fd, atol=1e-6)


# --- Cayley / Fedorov vector ---


class TestFedorov:
    def test_identity_maps_to_zero(self):
        npt.assert_array_equal(fedorov_from_rotation(np.eye(3)), np.zeros(3))

    def test_quarter_turn_about_z(self):
        C = rodrigues([0.0, 0.0, np.pi / 2])
        npt.assert_allclose(fedorov_from_rotation(C), [0.0, 0.0, 1.0], atol=1e-12)
        npt.assert_allclose(rotation_from_fedorov([0.0, 0.0, 1.0]), C, atol=1e-12)

    def test_half_turn_is_singular(self):
        with pytest.raises(ParameterizationSingularity, match="pi"):
            fedorov_from_rotation(rodrigues([np.pi, 0.0, 0.0]))

    def test_norm_is_tan_half_angle(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            axis = rng.standard_normal(3)
            axis /= np.linalg.norm(axis)
            angle = rng.uniform(0.0, 2.8)
            f = fedorov_from_rotation(rodrigues(axis * angle))
            npt.assert_allclose(np.linalg.norm(f), np.tan(angle / 2.0), atol=1e-9)

    def test_round_trip_and_eigenvector(self):
        rng = np.random.default_rng(24)
        for _ in range(200):
            C = random_rotation(rng, max_angle=np.pi * 0.9)
            f = fedorov_from_rotation(C)
            npt.assert_allclose(rotation_from_fedorov(f), C, atol=1e-10)
            npt.assert_allclose(C @ f, f, atol=1e-12)

    def test_rate_at_origin(self):
        npt.assert_allclose(
            fedorov_rate(np.zeros(3), [0.0, 0.0, 1.0]), [0.0, 0.0, 0.5], atol=0
        )

    def test_rate_is_exact_inverse_of_rate_map(self):
        rng = np.random.default_rng(25)
        for frame in ("body", "parent"):
            for _ in range(100):
                f = rng.standard_normal(3)
                w = rng.standard_normal(3)
                fdot = fedorov_rate(f, w, frame=frame)
                npt.assert_allclose(
                    fedorov_rate_map(f, frame=frame).omega(fdot), w, atol=1e-12
                )

    def test_frame_relation_parent_equals_rotated_body(self):
        rng = np.random.default_rng(26)
        f = rng.standard_normal(3) * 0.6
        C = rotation_from_fedorov(f)
        Db = fedorov_rate_map(f, frame="body").D
        Dp = fedorov_rate_map(f, frame="parent").D
        npt.assert_allclose(C @ Db, Dp, atol=1e-12)

    def test_rate_map_vs_finite_difference(self):
        def f_of_t(t):
            return np.array([0.4 * np.sin(t), 0.3 * t, -0.5 * np.cos(t)])

        def fdot_of_t(t):
            return np.array([0.4 * np.cos(t), 0.3, 0.5 * np.sin(t)])

        for t in (0.1, 0.9, 1.8):
            w_fd = fd_omega(lambda s: rotation_from_fedorov(f_of_t(s)), t)
            w = fedorov_rate_map(f_of_t(t), frame="body").omega(fdot_of_t(t))
            npt.assert_allclose(w, w_fd, atol=1e-6)

    def test_rate_map_dot_vs_finite_difference(self):
        def f_of_t(t):
            return np.array([0.2 * t, 0.5 * np.sin(t), 0.1])

        fdot = lambda t: np.array([0.2, 0.5 * np.cos(t), 0.0])
        t = 0.42
        for frame in ("body", "parent"):
            Ddot_fd = central_difference(lambda s: fedorov_rate_map(f_of_t(s), frame).D, t)
            npt.assert_allclose(
                fedorov_rate_map_dot(f_of_t(t), fdot(t), frame), Ddot_fd, atol=1e-6
            )

    def test_constant_spin_integration_vs_axis_angle(self):
        w = np.array([0.3, -0.4, 0.5])

        def rhs(t, f):
            return fedorov_rate(f, w)

        _, states = integrate_rk4(rhs, np.zeros(3), t_end=2.0, dt=1e-3)
        C_end = rotation_from_fedorov(states[-1])
        npt.assert_allclose(C_end, rodrigues(w * 2.0), atol=1e-8)

    def test_printed_variant_reported_wrong_beyond_small_f(self):
        # agrees at f = 0 ...
        w = np.array([0.2, -0.7, 0.4])
        npt.assert_allclose(
            fedorov_rate(np.zeros(3), w, printed_variant=True),
            fedorov_rate(np.zeros(3), w),
            atol=1e-15,
        )
        # ... but is NOT the rate-map inverse away from it, in either frame
        f = np.array([0.3, -0.2, 0.4])
        variant = fedorov_rate(f, w, printed_variant=True)
        for frame in ("body", "parent"):
            exact = fedorov_rate(f, w, frame=frame)
            assert np.max(np.abs(variant - exact)) > 1e-2
            resid = fedorov_rate_map(f, frame=frame).omega(variant) - w
            assert np.max(np.abs(resid)) > 1e-2


# --- quaternions ---


class TestQuaternion:
    def test_identity_product(self):
        m = Quaternion(0.3, [0.1, -0.2, 0.5])
        out = quat_product(Quaternion.identity(), m)
        npt.assert_array_equal(out.as4(), m.as4())

    def test_pure_vector_product(self):
        e1 = Quaternion(0.0, [1.0, 0.0, 0.0])
        e2 = Quaternion(0.0, [0.0, 1.0, 0.0])
        out = quat_product(e1, e2)
        npt.assert_array_equal(out.as4(), [0.0, 0.0, 0.0, 1.0])

    def test_conjugate_product_gives_norm_square(self):
        q = Quaternion(1.2, [-0.3, 0.4, 2.0])
        out = quat_product(q, q.conj())
        npt.assert_allclose(out.lam0, q.norm() ** 2, atol=1e-14)
        npt.assert_allclose(out.lam, np.zeros(3), atol=1e-14)

    def test_norm_multiplicative_and_associative(self):
        rng = np.random.default_rng(27)
        for _ in range(50):
            a, b, c = (Quaternion(rng.standard_normal(), rng.standard_normal(3)) for _ in range(3))
            ab = quat_product(a, b)
            npt.assert_allclose(ab.norm(), a.norm() * b.norm(), atol=1e-12)
            left = quat_product(ab, c)
            right = quat_product(a, quat_product(b, c))
            npt.assert_allclose(left.as4(), right.as4(), atol=1e-12)

    def test_rotation_examples(self):
        npt.assert_array_equal(rotation_from_quat(Quaternion.identity()), np.eye(3))
        flip = rotation_from_quat(Quaternion(0.0, [0.0, 0.0, 1.0]))
        npt.assert_allclose(flip, np.diag([-1.0, -1.0, 1.0]), atol=1e-15)

    def test_rotation_matches_textbook_oracle(self):
        rng = np.random.default_rng(28)
        for _ in range(50):
            q4 = rng.standard_normal(4)
            q4 /= np.linalg.norm(q4)
            q = Quaternion(q4[0], q4[1:])
            npt.assert_allclose(rotation_from_quat(q), quat_matrix(q4[0], q4[1:]), atol=1e-14)

    def test_non_unit_rejected(self):
        with pytest.raises(NumericalError, match="norm"):
            rotation_from_quat(Quaternion(1.0, [0.1, 0.0, 0.0]))

    def test_double_cover_exact(self):
        rng = np.random.default_rng(29)
        q4 = rng.standard_normal(4)
        q4 /= np.linalg.norm(q4)
        a = rotation_from_quat(Quaternion(q4[0], q4[1:]))
        b = rotation_from_quat(Quaternion(-q4[0], -q4[1:]))
        npt.assert_array_equal(a, b)

    def test_extraction_round_trip_canonical_sign(self):
        rng = np.random.default_rng(30)
        for _ in range(200):
            C = random_rotation(rng, max_angle=np.pi * 0.999)
            q = quat_from_rotation(C)
            assert q.lam0 >= 0.0
            npt.assert_allclose(abs(q.norm() - 1.0), 0.0, atol=1e-12)
            npt.assert_allclose(rotation_from_quat(q), C, atol=1e-10)

    def test_agreement_with_cayley_vector(self):
        rng = np.random.default_rng(31)
        count = 0
        while count < 100:
            q4 = rng.standard_normal(4)
            q4 /= np.linalg.norm(q4)
            if abs(q4[0]) <= 0.1:
                continue
            count += 1
            q = Quaternion(q4[0], q4[1:])
            f = quat_to_fedorov(q)
            npt.assert_allclose(rotation_from_fedorov(f), rotation_from_quat(q), atol=1e-10)

    def test_rate_zero_omega(self):
        q = quat_from_rotation(random_rotation(np.random.default_rng(32)))
        npt.assert_array_equal(quat_rate(q, np.zeros(3)).as4(), np.zeros(4))

    def test_rate_matrix_and_product_forms_agree(self):
        rng = np.random.default_rng(33)
        for _ in range(50):
            q4 = rng.standard_normal(4)
            q4 /= np.linalg.norm(q4)
            q = Quaternion(q4[0], q4[1:])
            w = rng.standard_normal(3)
            via_product = quat_rate(q, w).as4()
            via_matrix = quat_rate_matrix(w) @ q4
            npt.assert_allclose(via_product, via_matrix, atol=1e-14)
            # norm preservation: qdot orthogonal to q
            npt.assert_allclose(via_product @ q4, 0.0, atol=1e-14)

    def test_body_and_space_forms_agree(self):
        rng = np.random.default_rng(34)
        q = quat_from_rotation(random_rotation(rng))
        w_body = rng.standard_normal(3)
        w_space = rotation_from_quat(q) @ w_body
        a = quat_rate(q, w_body, frame="body").as4()
        b = quat_rate(q, w_space, frame="space").as4()
        npt.assert_allclose(a, b, atol=1e-12)

    def test_rate_map_inverts_rate(self):
        rng = np.random.default_rng(35)
        for _ in range(50):
            q = quat_from_rotation(random_rotation(rng))
            w = rng.standard_normal(3)
            qdot = quat_rate(q, w)
            npt.assert_allclose(quat_rate_map(q).omega(qdot.as4()), w, atol=1e-12)
            # minimum-norm inversion lands back on the tangent rate
            npt.assert_allclose(quat_rate_map(q).rates(w), qdot.as4(), atol=1e-12)

    def test_rate_map_vs_finite_difference(self):
        def q4_of_t(t):
            raw = np.array([1.0 + 0.3 * np.sin(t), 0.2 * t, 0.4 * np.cos(t), -0.3])
            return raw / np.linalg.norm(raw)

        def C_of_t(t):
            q4 = q4_of_t(t)
            return rotation_from_quat(Quaternion(q4[0], q4[1:]))

        for t in (0.2, 1.1, 2.3):
            qdot_fd = central_difference(q4_of_t, t)
            q4 = q4_of_t(t)
            w = quat_rate_map(Quaternion(q4[0], q4[1:])).omega(qdot_fd)
            npt.assert_allclose(w, fd_omega(C_of_t, t), atol=1e-6)

    def test_half_turn_integration(self):
        w = np.array([0.0, 0.0, 1.0])

        def rhs(t, q4):
            q = Quaternion(q4[0], q4[1:])
            return quat_rate(q, w).as4()

        n = int(round(np.pi / 1e-3))
        dt = np.pi / n  # grid must land exactly on t = pi
        q4 = np.array([1.0, 0.0, 0.0, 0.0])
        t = 0.0
        for i in range(n):
            k1 = rhs(t, q4)
            k2 = rhs(t + dt / 2, q4 + dt / 2 * k1)
            k3 = rhs(t + dt / 2, q4 + dt / 2 * k2)
            k4 = rhs(t + dt, q4 + dt * k3)
            q4 = q4 + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            q4 /= np.linalg.norm(q4)  # renormalize each step
            t += dt
        C = rotation_from_quat(Quaternion(q4[0], q4[1:]))
        npt.assert_allclose(C, np.diag([-1.0, -1.0, 1.0]), atol=1e-8)

    def test_rate_map_dot_is_rate_map_of_qdot(self):
        from screwmech.rotations import quat_rate_map_dot

        rng = np.random.default_rng(36)
        q = quat_from_rotation(random_rotation(rng))
        w = rng.standard_normal(3)
        qdot = quat_rate(q, w)
        t = 0.31

        def D_of_t(s):
            # linearize the path q + (s-t) qdot; map is linear in q
            q4 = q.as4() + (s - t) * qdot.as4()
            return quat_rate_map(Quaternion(q4[0], q4[1:])).D

        Ddot_fd = central_difference(D_of_t, t)
        npt.assert_allclose(quat_rate_map_dot(qdot), Ddot_fd, atol=1e-6)
