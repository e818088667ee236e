"""Stepping-kernel checks.

The flat-array kernels must reproduce the matrix assembly route from
`trees` at arbitrary states, both backends must agree with each other,
repeated runs must be bitwise identical, and the point-cloud kernel must
track an independently coded RK4 reference.
"""

from __future__ import annotations

import numpy as np
import numpy.testing as npt
import pytest

from oracles import integrate_rk4, quat_from_axis_angle

from screwmech import _kernels_py
from screwmech.body import MassAtom, assemble_inertia
from screwmech.engine import pack_tree_state, tree_arrays
from screwmech.frames import FramePose, VelocityState
from screwmech.trees import (
    FREE6,
    Joint,
    MultibodyTree,
    SystemState,
    TreeBody,
    absolute_poses,
    assemble_system,
    gravity_wrenches,
    joint_project,
    state_from_joint_coords,
)

_BACKENDS = {"python": _kernels_py}
try:
    from screwmech import _kernels as _kernels_c

    _BACKENDS["compiled"] = _kernels_c
except ImportError:  # extension not built in this environment
    _kernels_c = None

needs_compiled = pytest.mark.skipif(
    "compiled" not in _BACKENDS, reason="compiled extension not built"
)


@pytest.fixture(params=sorted(_BACKENDS))
def kernels(request):
    return _BACKENDS[request.param]


def _lopsided_body(rng, parent, joint, mass=1.0):
    # four non-coplanar atoms so the 6x6 inertia has full rank
    pts = np.array(
        [[0.3, 0.1, -0.2], [-0.2, 0.4, 0.1], [0.1, -0.3, 0.35], [0.25, 0.2, 0.3]]
    ) + 0.1 * rng.normal(size=(4, 3))
    atoms = [MassAtom(p, mass * w) for p, w in zip(pts, (0.2, 0.3, 0.1, 0.4))]
    return TreeBody(assemble_inertia(atoms), atoms, parent, joint)


def _branching_tree(rng):
    """Revolute, then a prismatic child and a free6 child off the same body."""
    return MultibodyTree(
        [
            _lopsided_body(rng, 0, Joint("revolute", axis=np.array([0.0, 0.0, 1.0]))),
            _lopsided_body(rng, 1, Joint("prismatic", axis=np.array([1.0, 0.0, 0.0]))),
            _lopsided_body(rng, 1, Joint(FREE6)),
        ]
    )


def _random_state(tree, rng):
    orient, trans, vel = [], [], []
    for b in tree.bodies:
        q = rng.normal(size=4)
        orient.append(q / np.linalg.norm(q))
        trans.append(0.5 * rng.normal(size=3))
        tw = b.joint.subspace @ rng.normal(size=b.joint.dof)
        vel.append(VelocityState(tw[:3], tw[3:]))
    return SystemState("quaternion", orient, trans, vel)


def _quat_rate(q, w):
    # dq/dt = q * (0, w) / 2 with w in child-frame components
    q0, qv = q[0], q[1:]
    return 0.5 * np.concatenate([[-qv @ w], q0 * w + np.cross(qv, w)])


def _reference_rhs(tree, state, gravity, extra=None):
    """Packed-state derivative built from the matrix route, not the kernel."""
    poses = absolute_poses(tree, state)
    wr = gravity_wrenches(tree, poses, gravity)
    if extra is not None:
        wr = [w + e for w, e in zip(wr, extra)]
    red = joint_project(assemble_system(tree, state, wr), tree)
    quat_rates = [
        _quat_rate(q, v.w) for q, v in zip(state.orient, state.vel_r)
    ]
    trans_rates = [
        v.v - np.cross(v.w, d) for v, d in zip(state.vel_r, state.trans)
    ]
    return np.concatenate(quat_rates + trans_rates + [red.qddot])


def _kernel_args(tree, gravity, wr_times=None, wr_values=None):
    if wr_times is None:
        wr_times = np.zeros(0)
        wr_values = np.zeros((0, tree.k, 6))
    return tree_arrays(tree) + (np.asarray(gravity, float), wr_times, wr_values)


class TestTreeRhs:
    def test_matches_matrix_route(self, kernels):
        rng = np.random.default_rng(1804)
        for _ in range(6):
            tree = _branching_tree(rng)
            state = _random_state(tree, rng)
            gravity = rng.normal(size=3)
            y = pack_tree_state(tree, state)
            got = kernels.tree_rhs(0.0, y, *_kernel_args(tree, gravity))
            want = _reference_rhs(tree, state, gravity)
            npt.assert_allclose(got, want, atol=1e-10)

    def test_single_revolute_chain(self, kernels):
        rng = np.random.default_rng(52)
        tree = MultibodyTree(
            [
                _lopsided_body(rng, 0, Joint("revolute", axis=np.array([0.0, 1.0, 0.0]))),
                _lopsided_body(rng, 1, Joint("revolute", axis=np.array([0.0, 0.0, 1.0]))),
            ]
        )
        state = _random_state(tree, rng)
        y = pack_tree_state(tree, state)
        g = np.array([0.0, -9.81, 0.0])
        got = kernels.tree_rhs(0.3, y, *_kernel_args(tree, g))
        npt.assert_allclose(got, _reference_rhs(tree, state, g), atol=1e-10)

    def test_wrench_table_interpolates(self, kernels):
        rng = np.random.default_rng(9)
        tree = _branching_tree(rng)
        state = _random_state(tree, rng)
        y = pack_tree_state(tree, state)
        g = np.zeros(3)
        w0 = rng.normal(size=(tree.k, 6))
        w1 = rng.normal(size=(tree.k, 6))
        times = np.array([0.0, 2.0])
        values = np.stack([w0, w1])
        mid = kernels.tree_rhs(1.0, y, *_kernel_args(tree, g, times, values))
        want = _reference_rhs(tree, state, g, extra=0.5 * (w0 + w1))
        npt.assert_allclose(mid, want, atol=1e-10)

    def test_wrench_table_clamps_ends(self, kernels):
        rng = np.random.default_rng(10)
        tree = _branching_tree(rng)
        state = _random_state(tree, rng)
        y = pack_tree_state(tree, state)
        g = np.zeros(3)
        times = np.array([1.0, 2.0])
        values = rng.normal(size=(2, tree.k, 6))
        args = _kernel_args(tree, g, times, values)
        npt.assert_array_equal(
            kernels.tree_rhs(0.0, y, *args), kernels.tree_rhs(1.0, y, *args)
        )
        npt.assert_array_equal(
            kernels.tree_rhs(5.0, y, *args), kernels.tree_rhs(2.0, y, *args)
        )


class TestSimulateTree:
    def test_constant_spin_quaternion(self, kernels):
        # spherical body, no gravity: body-frame spin stays constant and the
        # quaternion follows the axis-angle closed form
        atoms = [
            MassAtom(np.asarray(p, float), 0.5)
            for p in [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]]
        ]
        tree = MultibodyTree([TreeBody(assemble_inertia(atoms), atoms, 0, Joint(FREE6))])
        w = np.array([0.3, -0.5, 0.4])
        state = state_from_joint_coords(
            tree, [FramePose.identity()], [np.concatenate([np.zeros(3), w])]
        )
        y0 = pack_tree_state(tree, state)
        times, states = kernels.simulate_tree(
            y0, 0.0, 1e-3, 1000, 100, *_kernel_args(tree, np.zeros(3))
        )
        angle = np.linalg.norm(w)
        for t, y in zip(times, states):
            q0, qv = quat_from_axis_angle(w / angle, angle * t)
            npt.assert_allclose(y[:4], np.concatenate([[q0], qv]), atol=1e-9)
            npt.assert_allclose(y[10:13], w, atol=1e-9)

    def test_records_and_unit_quats(self, kernels):
        rng = np.random.default_rng(77)
        tree = _branching_tree(rng)
        state = _random_state(tree, rng)
        y0 = pack_tree_state(tree, state)
        times, states = kernels.simulate_tree(
            y0, 0.0, 1e-3, 40, 8, *_kernel_args(tree, np.array([0.0, -9.81, 0.0]))
        )
        assert states.shape[0] == 6
        npt.assert_allclose(times, np.arange(6) * 8e-3, atol=1e-15)
        npt.assert_array_equal(states[0], y0)
        for y in states[1:]:
            for i in range(tree.k):
                assert abs(np.linalg.norm(y[4 * i : 4 * i + 4]) - 1.0) < 1e-14

    def test_repeat_is_bitwise_identical(self, kernels):
        rng = np.random.default_rng(33)
        tree = _branching_tree(rng)
        y0 = pack_tree_state(tree, _random_state(tree, rng))
        args = _kernel_args(tree, np.array([0.0, 0.0, -3.7]))
        _, a = kernels.simulate_tree(y0, 0.0, 1e-3, 60, 10, *args)
        _, b = kernels.simulate_tree(y0, 0.0, 1e-3, 60, 10, *args)
        npt.assert_array_equal(a, b)


@needs_compiled
class TestBackendAgreement:
    def test_tree_rhs(self):
        rng = np.random.default_rng(211)
        for _ in range(4):
            tree = _branching_tree(rng)
            y = pack_tree_state(tree, _random_state(tree, rng))
            args = _kernel_args(tree, rng.normal(size=3))
            npt.assert_allclose(
                _kernels_c.tree_rhs(0.1, y, *args),
                _kernels_py.tree_rhs(0.1, y, *args),
                atol=1e-12,
            )

    def test_tree_trajectories(self):
        rng = np.random.default_rng(212)
        tree = _branching_tree(rng)
        y0 = pack_tree_state(tree, _random_state(tree, rng))
        args = _kernel_args(tree, np.array([0.0, -9.81, 0.0]))
        tc, sc = _kernels_c.simulate_tree(y0, 0.0, 1e-3, 200, 20, *args)
        tp, sp = _kernels_py.simulate_tree(y0, 0.0, 1e-3, 200, 20, *args)
        npt.assert_array_equal(tc, tp)
        npt.assert_allclose(sc, sp, atol=1e-9)

    def test_points_rhs_and_trajectories(self):
        rng = np.random.default_rng(213)
        n = 3
        y0 = rng.normal(size=6 * n)
        m0s = np.array([1.0, 2.0, 0.5])
        nus = np.array([0.0, -0.01, 0.0])
        ex = np.vstack([np.zeros(3), [1.0, 0.0, 0.0], np.zeros(3)])
        fc = np.zeros((n, 3))
        args = (m0s, nus, ex, 0.8, np.array([0.0, 0.0, -1.0]), fc)
        npt.assert_allclose(
            _kernels_c.points_rhs(0.2, y0, *args),
            _kernels_py.points_rhs(0.2, y0, *args),
            atol=1e-12,
        )
        tc, sc = _kernels_c.simulate_points(y0, 0.0, 1e-3, 300, 50, *args)
        tp, sp = _kernels_py.simulate_points(y0, 0.0, 1e-3, 300, 50, *args)
        npt.assert_array_equal(tc, tp)
        npt.assert_allclose(sc, sp, atol=1e-9)


class TestPointsKernel:
    def test_two_body_matches_generic_rk4(self, kernels):
        # same classical equations coded flat in the reference closure
        gamma = 1.0
        m = np.array([1.0, 2.0])
        y0 = np.array(
            [-2.0 / 3.0, 0, 0, 1.0 / 3.0, 0, 0, 0, 2 / np.sqrt(3.0), 0, 0, -1 / np.sqrt(3.0), 0]
        )

        def ref(t, y):
            x = y[:6].reshape(2, 3)
            v = y[6:]
            d = x[1] - x[0]
            r = np.linalg.norm(d)
            f = gamma * m[0] * m[1] * d / r**3
            return np.concatenate([v, f / m[0], -f / m[1]])

        tr, yr = integrate_rk4(ref, y0, 2.0, 1e-3)
        tk, yk = kernels.simulate_points(
            y0, 0.0, 1e-3, 2000, 100,
            m, np.zeros(2), np.zeros((2, 3)), gamma, np.zeros(3), np.zeros((2, 3)),
        )
        npt.assert_allclose(yk, yr[::100], atol=1e-10)

    def test_rocket_log_law(self, kernels):
        m0, nu, u = 1.0, -0.08, np.array([-2.0, 0.0, 0.0])
        times, states = kernels.simulate_points(
            np.zeros(6), 0.0, 1e-3, 10000, 1000,
            np.array([m0]), np.array([nu]), u[None, :], 0.0, np.zeros(3), np.zeros((1, 3)),
        )
        for t, y in zip(times, states):
            want = -u * np.log(m0 / (m0 + nu * t))
            npt.assert_allclose(y[3:], want, atol=1e-8)

    def test_uniform_gravity_parabola(self, kernels):
        # quadratic in t, so fixed-step RK4 lands on it exactly at grid points
        g = np.array([0.0, 0.0, -9.81])
        x0 = np.array([1.0, 2.0, 3.0])
        v0 = np.array([0.5, -0.25, 4.0])
        times, states = kernels.simulate_points(
            np.concatenate([x0, v0]), 0.0, 0.01, 100, 10,
            np.array([2.0]), np.zeros(1), np.zeros((1, 3)), 0.0, g, np.zeros((1, 3)),
        )
        for t, y in zip(times, states):
            npt.assert_allclose(y[:3], x0 + v0 * t + 0.5 * g * t * t, atol=1e-12)
            npt.assert_allclose(y[3:], v0 + g * t, atol=1e-12)

    def test_constant_force_on_variable_mass(self, kernels):
        # rho(t) = 1 - 0.05 t under force (1,0,0): vdot = 1/rho, closed form log
        times, states = kernels.simulate_points(
            np.zeros(6), 0.0, 1e-3, 5000, 500,
            np.array([1.0]), np.array([-0.05]), np.zeros((1, 3)), 0.0, np.zeros(3),
            np.array([[1.0, 0.0, 0.0]]),
        )
        for t, y in zip(times, states):
            npt.assert_allclose(y[3], -np.log(1.0 - 0.05 * t) / 0.05, atol=1e-9)

    def test_repeat_is_bitwise_identical(self, kernels):
        rng = np.random.default_rng(5)
        y0 = rng.normal(size=12)
        args = (
            np.array([1.0, 3.0]), np.zeros(2), np.zeros((2, 3)), 1.0,
            np.zeros(3), np.zeros((2, 3)),
        )
        _, a = kernels.simulate_points(y0, 0.0, 1e-3, 100, 10, *args)
        _, b = kernels.simulate_points(y0, 0.0, 1e-3, 100, 10, *args)
        npt.assert_array_equal(a, b)
