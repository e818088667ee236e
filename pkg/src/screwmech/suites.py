"""Self-check suites behind the `validate` subcommand.

Each suite re-verifies a module's core invariants at runtime on seeded
random samples: transform group closure, parameterization round trips,
dynamics route agreement, measure cancellations, constitutive round trips.
They are deliberately cheap (a few hundred milliseconds together) but
sensitive: a sign flip in any shared kinematic factor shows up here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import body, constitutive, frames, points, rotations, screws, trees
from .frames import FramePose, VelocityState


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _check(name, value, tol):
    return CheckResult(name, bool(value <= tol), f"max residual {value:.3e} (tol {tol:.0e})")


def _random_pose(rng, scale=1.0):
    u = rng.uniform(-1, 1, 3)
    angle = rng.uniform(0.1, 2.8)
    u = u / np.linalg.norm(u) * angle
    q = rotations.Quaternion(np.cos(angle / 2), np.sin(angle / 2) * u / angle)
    return FramePose(rotations.rotation_from_quat(q), rng.uniform(-scale, scale, 3))


def transform_suite(seed=12345, n=60):
    rng = np.random.default_rng(seed)
    worst_comp = worst_inv = worst_fd = 0.0
    h = 1e-6
    for _ in range(n):
        pa, pb = _random_pose(rng), _random_pose(rng)
        La, Lb = frames.wrench_transform(pa).matrix, frames.wrench_transform(pb).matrix
        Lab = frames.wrench_transform(frames.pose_compose(pa, pb)).matrix
        worst_comp = max(worst_comp, np.abs(La @ Lb - Lab).max())
        Li = frames.wrench_transform(frames.pose_inverse(pa)).matrix
        worst_inv = max(worst_inv, np.abs(La @ Li - np.eye(6)).max())

        vel = VelocityState(rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3))
        fac = frames.derivative_factors(pa, vel)
        # step the pose along the frozen body twist, difference the transform
        w, v = vel.w, vel.v

        def stepped(s):
            rot = rotations.rotation_from_quat(
                rotations.Quaternion(1.0, 0.5 * s * w).normalized()
            )
            return FramePose(pa.C @ rot, pa.d0 + s * (pa.C @ v))

        fd = (
            frames.wrench_transform(stepped(0.5 * h)).matrix
            - frames.wrench_transform(stepped(-0.5 * h)).matrix
        ) / h
        worst_fd = max(worst_fd, np.abs(La @ fac.phi_wrench - fd).max())
    return [
        _check("transform-group composition closes", worst_comp, 1e-12),
        _check("transform inverse matches pose inverse", worst_inv, 1e-12),
        _check("transform derivative factor matches finite difference", worst_fd, 1e-5),
    ]


def rotation_suite(seed=23456, n=80):
    rng = np.random.default_rng(seed)
    worst_rt = worst_eig = worst_agree = 0.0
    for _ in range(n):
        C = _random_pose(rng).C
        q = rotations.quat_from_rotation(C)
        worst_rt = max(worst_rt, np.abs(rotations.rotation_from_quat(q) - C).max())
        f = rotations.fedorov_from_rotation(C)
        worst_eig = max(worst_eig, np.abs(C @ f - f).max())
        worst_agree = max(worst_agree, np.abs(rotations.quat_to_fedorov(q) - f).max())
        e = rotations.euler_from_rotation(C)
        worst_rt = max(worst_rt, np.abs(rotations.euler_to_rotation(e) - C).max())
    return [
        _check("orientation parameter round trips", worst_rt, 1e-10),
        _check("rotation fixes its own invariant axis", worst_eig, 1e-12),
        _check("quaternion and invariant-vector routes agree", worst_agree, 1e-10),
    ]


def body_suite():
    corners = [body.MassAtom(p, 1.0) for p in
               [(sx, sy, sz) for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)]]
    ins = body.assemble_inertia(corners)
    gap = np.abs(ins.theta - np.diag([8.0, 8.0, 8.0, 16.0, 16.0, 16.0])).max()
    sym = np.abs(ins.theta - ins.theta.T).max()
    return [
        _check("unit-cube corner inertia is exact", gap, 0.0),
        _check("inertia screw is symmetric", sym, 0.0),
    ]


def tree_suite():
    rng = np.random.default_rng(34567)
    z = [0, 0, 1]
    a = 1.0 / (2 * np.sqrt(3.0))
    atoms1 = [body.MassAtom([0.5 - a, 0, 0], 0.6), body.MassAtom([0.5 + a, 0, 0], 0.6)]
    atoms2 = [body.MassAtom([0.4 - a, 0, 0], 0.35), body.MassAtom([0.4 + a, 0, 0], 0.35)]
    tree = trees.MultibodyTree(
        [
            trees.TreeBody(body.assemble_inertia(atoms1), atoms1, 0, trees.Joint("revolute", axis=z)),
            trees.TreeBody(
                body.assemble_inertia(atoms2), atoms2, 1,
                trees.Joint("revolute", axis=z, offset=FramePose(np.eye(3), [1.0, 0, 0])),
            ),
        ]
    )
    st = trees.state_from_joint_coords(tree, [0.8, -0.5], [0.6, -0.2], kind="euler")
    fg = trees.gravity_wrenches(tree, trees.absolute_poses(tree, st), [0.0, -9.81, 0.0])

    red = trees.joint_project(trees.assemble_system(tree, st, fg), tree)
    lag = trees.lagrange_assemble(tree, st, fg)
    Nt = np.zeros((12, 2))
    Nt[5, 0] = 1.0
    Nt[11, 1] = 1.0
    rA, rB, rF, rates = lag.restricted(Nt)
    qdd_lag = np.linalg.solve(rA, rF - rB @ rates)
    route_gap = np.abs(qdd_lag - red.qddot).max()

    power = red.constraint_power_residual()

    # analytic kinematics-matrix derivative vs a finite difference step
    h = 1e-6
    Ld = trees.kinematics_matrix_dot(tree, st)
    vr = [v.twist() for v in st.vel_r]
    stp = trees.orientation_step(st, st.vel_r, h)
    stm = trees.orientation_step(st, st.vel_r, -h)
    fd = (trees.kinematics_matrix(tree, stp) - trees.kinematics_matrix(tree, stm)) / (2 * h)
    ld_gap = np.abs(Ld - fd).max()

    path_gap = np.abs(
        trees.kinematics_matrix(tree, st) @ np.concatenate(vr)
        - trees.stack_twists(trees.compose_velocities(tree, st))
    ).max()
    return [
        _check("projected and generalized-coordinate routes agree", route_gap, 1e-8),
        _check("joint reactions do no work", power, 1e-10),
        _check("kinematics matrix derivative matches finite difference", ld_gap, 1e-6),
        _check("path-sum velocities equal the recursion", path_gap, 1e-12),
    ]


def point_suite(seed=45678):
    rng = np.random.default_rng(seed)
    pts = [
        points.MassPoint(rng.uniform(-2, 2, 3), rng.uniform(-1, 1, 3), rng.uniform(0.5, 2))
        for _ in range(5)
    ]
    red = screws.screw_resultant(points.gravity_screws(pts, 1.1))
    cancel = max(np.abs(red.p).max(), np.abs(red.q).max())
    f01 = points.gravity_pair_force(pts[0].x, pts[0].rho, pts[1].x, pts[1].rho, 1.1)
    f10 = points.gravity_pair_force(pts[1].x, pts[1].rho, pts[0].x, pts[0].rho, 1.1)
    skewg = np.abs(f01 + f10).max()
    return [
        _check("mutual gravity screw measure cancels", cancel, 1e-12),
        _check("pair exchange is skew", skewg, 1e-12),
    ]


def constitutive_suite(seed=56789, n=150):
    rng = np.random.default_rng(seed)
    worst3 = worst2 = 0.0
    for _ in range(n):
        law3 = constitutive.IsotropicLaw(3, rng.uniform(0.2, 2, 3))
        U = rng.uniform(-1, 1, (3, 3))
        U = 0.5 * (U + U.T)
        worst3 = max(worst3, np.abs(law3.strain(law3.stress(U)) - U).max())
        law2 = constitutive.IsotropicLaw(2, rng.uniform(0.2, 2, 4))
        V = rng.uniform(-1, 1, (2, 2))
        V = 0.5 * (V + V.T)
        worst2 = max(worst2, np.abs(law2.strain(law2.stress(V)) - V).max())
    return [
        _check("3D constitutive round trip", worst3, 1e-12),
        _check("2D constitutive round trip", worst2, 1e-12),
    ]


ALL_SUITES = (
    ("transforms", transform_suite),
    ("rotations", rotation_suite),
    ("rigid bodies", body_suite),
    ("trees", tree_suite),
    ("mass points", point_suite),
    ("constitutive", constitutive_suite),
)


def run_all(report=None):
    """Run every suite; returns (all_ok, results)."""
    results = []
    for label, fn in ALL_SUITES:
        for r in fn():
            results.append((label, r))
            if report is not None:
                mark = "ok  " if r.ok else "FAIL"
                report(f"{mark} [{label}] {r.name}: {r.detail}")
    return all(r.ok for _, r in results), results
