"""Trees of rigid bodies connected by velocity-subspace joints.

A tree has an immobile ground (index 0) and moving bodies 1..k, each attached
to its parent by one joint. Primary state per edge is the TOTAL relative
orientation (one of three parameterizations), the child-frame translation
d^p, and the relative twist; joint mounting offsets are folded into initial
values by the loaders, so at runtime every joint's motion subspace is a
constant matrix in child-frame coordinates:

    revolute  -> col{0, axis}     prismatic -> col{axis, 0}     free6 -> I6

Assembled dynamics stacks per-body Newton-Euler balances (block-diagonal
inertia A and convective B), relates absolute to relative twists through the
block-lower-triangular kinematics matrix L, and restricts to joint motion by
the block-diagonal subspace matrix N. The same stacked system premultiplied
through coordinate rate maps gives the Lagrange-form blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .body import InertiaScrew, MassAtom, uniform_gravity_wrench
from .errors import NumericalError
from .frames import (
    FramePose,
    VelocityState,
    pose_compose,
    pose_inverse,
    twist_transform,
    wrench_velocity_factor,
)
from .rotations import (
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
    quat_rate,
    quat_rate_map,
    quat_rate_map_dot,
    rotation_from_fedorov,
    rotation_from_quat,
)

REVOLUTE = "revolute"
PRISMATIC = "prismatic"
FREE6 = "free6"

PARAM_KINDS = ("quaternion", "euler", "fedorov")
AXIS_TOL = 1e-12
SUBSPACE_TOL = 1e-9
PROJECTION_COND_LIMIT = 1e12


@dataclass(frozen=True)
class Joint:
    """One edge's motion model: kind, child-frame axis, fixed mounting offset."""

    kind: str
    axis: Optional[np.ndarray] = None
    offset: FramePose = field(default_factory=FramePose.identity)

    def __post_init__(self):
        if self.kind not in (REVOLUTE, PRISMATIC, FREE6):
            raise ValueError(f"unknown joint kind {self.kind!r}")
        if self.kind == FREE6:
            if self.axis is not None:
                raise ValueError("free6 joints take no axis")
            return
        a = np.array(self.axis, dtype=float)
        if a.shape != (3,):
            raise ValueError(f"{self.kind} joint needs a 3-vector axis")
        if abs(np.linalg.norm(a) - 1.0) > AXIS_TOL:
            raise ValueError(
                f"joint axis must be unit length to {AXIS_TOL:.0e}, |axis| = {np.linalg.norm(a)!r}"
            )
        a.setflags(write=False)
        object.__setattr__(self, "axis", a)

    @property
    def dof(self) -> int:
        return 6 if self.kind == FREE6 else 1

    @property
    def subspace(self) -> np.ndarray:
        """6 x dof matrix with orthonormal columns spanning allowed twists."""
        if self.kind == FREE6:
            return np.eye(6)
        S = np.zeros((6, 1))
        if self.kind == REVOLUTE:
            S[3:, 0] = self.axis
        else:
            S[:3, 0] = self.axis
        return S

    def twist_of(self, rates) -> VelocityState:
        tw = self.subspace @ np.atleast_1d(np.asarray(rates, dtype=float))
        return VelocityState(tw[:3], tw[3:])

    def rates_of(self, vel: VelocityState) -> np.ndarray:
        """Joint rates of a twist; exact when the twist lies in the subspace."""
        return self.subspace.T @ vel.twist()


@dataclass(frozen=True)
class TreeBody:
    """A moving body: inertia, source atoms, parent index (0 = ground), joint."""

    inertia: InertiaScrew
    atoms: tuple
    parent: int
    joint: Joint

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        for a in self.atoms:
            if not isinstance(a, MassAtom):
                raise TypeError("TreeBody atoms must be MassAtom instances")


@dataclass(frozen=True)
class LoopClosure:
    """Extra (non-tree) edge: frame of body_a composed with attach should
    coincide with the frame of body_b. Index 0 refers to the ground frame."""

    body_a: int
    body_b: int
    attach: FramePose = field(default_factory=FramePose.identity)


@dataclass(frozen=True)
class MultibodyTree:
    bodies: tuple
    loops: tuple = ()

    def __init__(self, bodies: Iterable[TreeBody], loops: Iterable[LoopClosure] = ()):
        bodies = tuple(bodies)
        if not bodies:
            raise ValueError("a multibody tree needs at least one moving body")
        for i, b in enumerate(bodies):
            if not isinstance(b, TreeBody):
                raise TypeError("tree bodies must be TreeBody instances")
            if not (0 <= b.parent <= i):
                raise ValueError(
                    f"body {i + 1}: parent index {b.parent} breaks topological order "
                    "(parents must come first, 0 is the ground)"
                )
        object.__setattr__(self, "bodies", bodies)
        object.__setattr__(self, "loops", tuple(loops))

    @property
    def k(self) -> int:
        return len(self.bodies)

    @property
    def dofs(self) -> int:
        return sum(b.joint.dof for b in self.bodies)

    def ancestors(self, i: int) -> list:
        """Edge indices (0-based) from the root down to and including i."""
        chain = []
        j = i
        while True:
            chain.append(j)
            p = self.bodies[j].parent
            if p == 0:
                break
            j = p - 1
        return chain[::-1]


# --- per-edge orientation parameterization dispatch ---


def orientation_matrix(kind: str, params) -> np.ndarray:
    p = np.asarray(params, dtype=float)
    if kind == "quaternion":
        return rotation_from_quat(Quaternion(p[0], p[1:]).normalized())
    if kind == "euler":
        return euler_to_rotation(EulerAngles(p[0], p[1], p[2]))
    if kind == "fedorov":
        return rotation_from_fedorov(p)
    raise ValueError(f"unknown parameterization {kind!r}")


def orientation_params(kind: str, C) -> np.ndarray:
    if kind == "quaternion":
        return quat_from_rotation(C).as4()
    if kind == "euler":
        return euler_from_rotation(C).as_array()
    if kind == "fedorov":
        return fedorov_from_rotation(C)
    raise ValueError(f"unknown parameterization {kind!r}")


def orientation_rate(kind: str, params, w_body) -> np.ndarray:
    """Parameter time derivative for a body angular velocity."""
    p = np.asarray(params, dtype=float)
    if kind == "quaternion":
        return quat_rate(Quaternion(p[0], p[1:]), w_body).as4()
    if kind == "euler":
        return euler_rate_map(EulerAngles(p[0], p[1], p[2])).rates(w_body)
    if kind == "fedorov":
        return fedorov_rate(p, w_body)
    raise ValueError(f"unknown parameterization {kind!r}")


def orientation_rate_map(kind: str, params):
    """Rate map D (w = D @ param_rates) for the Lagrange blocks."""
    p = np.asarray(params, dtype=float)
    if kind == "quaternion":
        return quat_rate_map(Quaternion(p[0], p[1:])).D
    if kind == "euler":
        return euler_rate_map(EulerAngles(p[0], p[1], p[2])).D
    if kind == "fedorov":
        return fedorov_rate_map(p, frame="body").D
    raise ValueError(f"unknown parameterization {kind!r}")


def orientation_rate_map_dot(kind: str, params, param_rates) -> np.ndarray:
    p = np.asarray(params, dtype=float)
    r = np.asarray(param_rates, dtype=float)
    if kind == "quaternion":
        return quat_rate_map_dot(Quaternion(r[0], r[1:]))
    if kind == "euler":
        return euler_rate_map_dot(EulerAngles(p[0], p[1], p[2]), r)
    if kind == "fedorov":
        return fedorov_rate_map_dot(p, r, frame="body")
    raise ValueError(f"unknown parameterization {kind!r}")


# --- system state ---


@dataclass(frozen=True)
class SystemState:
    """Per-edge relative orientation parameters, child-frame translations d^p,
    and relative twists (body components of the child)."""

    kind: str
    orient: tuple
    trans: tuple
    vel_r: tuple

    def __init__(self, kind: str, orient, trans, vel_r):
        if kind not in PARAM_KINDS:
            raise ValueError(f"parameterization must be one of {PARAM_KINDS}, got {kind!r}")
        orient = tuple(np.array(o, dtype=float) for o in orient)
        trans = tuple(np.array(t, dtype=float) for t in trans)
        vel_r = tuple(vel_r)
        if not len(orient) == len(trans) == len(vel_r):
            raise ValueError("orient, trans and vel_r must have one entry per edge")
        for v in vel_r:
            if not isinstance(v, VelocityState):
                raise TypeError("vel_r entries must be VelocityState")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "orient", orient)
        object.__setattr__(self, "trans", trans)
        object.__setattr__(self, "vel_r", vel_r)

    @property
    def k(self) -> int:
        return len(self.orient)

    def relative_pose(self, i: int) -> FramePose:
        C = orientation_matrix(self.kind, self.orient[i])
        return FramePose(C, C @ self.trans[i])

    def converted(self, kind: str) -> "SystemState":
        """Same physical state under a different orientation parameterization."""
        orient = [
            orientation_params(kind, orientation_matrix(self.kind, o)) for o in self.orient
        ]
        return SystemState(kind, orient, self.trans, self.vel_r)


def state_from_joint_coords(
    tree: MultibodyTree,
    coords: Sequence,
    rates: Sequence,
    kind: str = "quaternion",
) -> SystemState:
    """Build a state from joint coordinates, folding in mounting offsets.

    Per edge: revolute/prismatic take a scalar coordinate and rate; free6
    takes a FramePose (relative to the mounting frame) and a 6-twist.
    """
    orient, trans, vel = [], [], []
    for b, q, qd in zip(tree.bodies, coords, rates):
        j = b.joint
        if j.kind == REVOLUTE:
            half = 0.5 * float(q)
            Cm = rotation_from_quat(Quaternion(np.cos(half), np.sin(half) * j.axis))
            rel = pose_compose(j.offset, FramePose(Cm, np.zeros(3)))
            vel.append(j.twist_of(qd))
        elif j.kind == PRISMATIC:
            rel = pose_compose(j.offset, FramePose(np.eye(3), float(q) * j.axis))
            vel.append(j.twist_of(qd))
        else:
            if not isinstance(q, FramePose):
                raise TypeError("free6 joint coordinate must be a FramePose")
            rel = pose_compose(j.offset, q)
            tw = np.asarray(qd, dtype=float)
            vel.append(VelocityState(tw[:3], tw[3:]))
        orient.append(orientation_params(kind, rel.C))
        trans.append(rel.dp)
    return SystemState(kind, orient, trans, vel)


# --- kinematics ---


def absolute_poses(tree: MultibodyTree, state: SystemState) -> list:
    poses = []
    for i, b in enumerate(tree.bodies):
        rel = state.relative_pose(i)
        poses.append(rel if b.parent == 0 else pose_compose(poses[b.parent - 1], rel))
    return poses


def compose_velocities(tree: MultibodyTree, state: SystemState) -> list:
    """Absolute twists by the one-pass recursion V_a[p] = X V_a[parent] + V_r[p],
    X being the twist transform of the inverted relative pose."""
    out = []
    for i, b in enumerate(tree.bodies):
        vr = state.vel_r[i]
        if b.parent == 0:
            out.append(vr)
            continue
        X = twist_transform(pose_inverse(state.relative_pose(i))).matrix
        tw = X @ out[b.parent - 1].twist() + vr.twist()
        out.append(VelocityState(tw[:3], tw[3:]))
    return out


def _pairwise_twist_blocks(tree: MultibodyTree, state: SystemState) -> dict:
    """L^tw blocks (s-frame to p-frame) for every p and ancestor edge s."""
    blocks = {}
    for i in range(tree.k):
        X = twist_transform(pose_inverse(state.relative_pose(i))).matrix
        blocks[(i, i)] = np.eye(6)
        chain = tree.ancestors(i)[:-1]  # strict ancestors, root first
        for s in chain:
            # L_{i,s} = X_i @ L_{parent(i), s}
            blocks[(i, s)] = X @ blocks[(tree.bodies[i].parent - 1, s)]
    return blocks


def kinematics_matrix(tree: MultibodyTree, state: SystemState) -> np.ndarray:
    """Block lower-triangular L with V_absolute = L @ V_relative (stacked)."""
    k = tree.k
    L = np.zeros((6 * k, 6 * k))
    blocks = _pairwise_twist_blocks(tree, state)
    for (p, s), B in blocks.items():
        L[6 * p : 6 * p + 6, 6 * s : 6 * s + 6] = B
    return L


def kinematics_matrix_dot(
    tree: MultibodyTree, state: SystemState, v_abs: Optional[list] = None
) -> np.ndarray:
    """Analytic time derivative of L from the velocity factors.

    Block rule: d/dt L_{p,s} = F(V_a[p] - L_{p,s} V_a[s])^T L_{p,s} with F the
    wrench velocity factor; diagonal blocks are constant.
    """
    if v_abs is None:
        v_abs = compose_velocities(tree, state)
    k = tree.k
    Ldot = np.zeros((6 * k, 6 * k))
    blocks = _pairwise_twist_blocks(tree, state)
    for (p, s), B in blocks.items():
        if p == s:
            continue
        diff = v_abs[p].twist() - B @ v_abs[s].twist()
        Ldot[6 * p : 6 * p + 6, 6 * s : 6 * s + 6] = (
            wrench_velocity_factor(diff[:3], diff[3:]).T @ B
        )
    return Ldot


def stack_twists(vels: Sequence[VelocityState]) -> np.ndarray:
    return np.concatenate([v.twist() for v in vels])


# --- assembled dynamics ---


@dataclass(frozen=True)
class AssembledSystem:
    """Stacked per-body Newton-Euler data plus the kinematics matrix.

    A is block-diagonal inertia; B block-diagonal convective+source operator
    acting on absolute twists; F_a the stacked applied wrench column; L the
    kinematics matrix; v_abs the absolute twists of the state it was built at.
    """

    A: np.ndarray
    B: np.ndarray
    F_a: np.ndarray
    L: np.ndarray
    v_abs: tuple
    tree: MultibodyTree
    state: SystemState


def assemble_system(
    tree: MultibodyTree, state: SystemState, wrenches: Optional[Sequence] = None
) -> AssembledSystem:
    """Stack per-body balances at the current state.

    wrenches: per-body 6-columns in body coordinates (applied + environment +
    increment), defaulting to zero.
    """
    k = tree.k
    if state.k != k:
        raise ValueError(f"state has {state.k} edges, tree has {k}")
    v_abs = compose_velocities(tree, state)
    A = np.zeros((6 * k, 6 * k))
    B = np.zeros((6 * k, 6 * k))
    F = np.zeros(6 * k)
    for i, b in enumerate(tree.bodies):
        sl = slice(6 * i, 6 * i + 6)
        A[sl, sl] = b.inertia.theta
        phi = wrench_velocity_factor(v_abs[i].v, v_abs[i].w)
        B[sl, sl] = b.inertia.theta_rate + phi @ b.inertia.theta
        if wrenches is not None:
            F[sl] = np.asarray(wrenches[i], dtype=float)
    L = kinematics_matrix(tree, state)
    return AssembledSystem(A, B, F, L, tuple(v_abs), tree, state)


def joint_subspace_matrix(tree: MultibodyTree) -> np.ndarray:
    """Block-diagonal stack of joint subspaces, 6k x (total dof)."""
    N = np.zeros((6 * tree.k, tree.dofs))
    col = 0
    for i, b in enumerate(tree.bodies):
        S = b.joint.subspace
        N[6 * i : 6 * i + 6, col : col + S.shape[1]] = S
        col += S.shape[1]
    return N


def joint_rates(tree: MultibodyTree, state: SystemState) -> np.ndarray:
    """Stacked joint rates; errors if a relative twist leaves its subspace."""
    parts = []
    for b, vr in zip(tree.bodies, state.vel_r):
        r = b.joint.rates_of(vr)
        back = b.joint.subspace @ r
        gap = np.max(np.abs(back - vr.twist()))
        if gap > SUBSPACE_TOL:
            raise NumericalError(
                f"relative twist leaves the {b.joint.kind} subspace by {gap:.3e}; "
                "the state is inconsistent with the joint model"
            )
        parts.append(r)
    return np.concatenate(parts)


@dataclass(frozen=True)
class ReducedDynamics:
    """Joint-space dynamics: mass_matrix qddot = force - bias realized as the
    already-solved joint accelerations plus enough context to reconstruct
    twist accelerations and the constraint reaction."""

    mass_matrix: np.ndarray
    qddot: np.ndarray
    qdot: np.ndarray
    J: np.ndarray
    Ldot: np.ndarray
    N: np.ndarray
    sys: AssembledSystem

    def relative_accel(self) -> np.ndarray:
        return self.N @ self.qddot

    def absolute_accel(self) -> np.ndarray:
        return self.J @ self.qddot + self.Ldot @ (self.N @ self.qdot)

    def constraint_wrench(self) -> np.ndarray:
        """Stacked reaction wrenches: residual of the unprojected balance."""
        v_a = stack_twists(self.sys.v_abs)
        return self.sys.A @ self.absolute_accel() + self.sys.B @ v_a - self.sys.F_a

    def constraint_power_residual(self) -> float:
        """Reactions should do no work along joint motions (ideal joints)."""
        return float(np.max(np.abs(self.J.T @ self.constraint_wrench())))


def joint_project(sys: AssembledSystem, tree: MultibodyTree) -> ReducedDynamics:
    """Restrict the stacked balance to joint motion subspaces and solve."""
    state = sys.state
    N = joint_subspace_matrix(tree)
    J = sys.L @ N
    A_tilde = J.T @ sys.A @ J
    cond = np.linalg.cond(A_tilde)
    if not np.isfinite(cond) or cond > PROJECTION_COND_LIMIT:
        raise NumericalError(
            f"joint-projected mass matrix is rank deficient (condition {cond:.3e})"
        )
    qdot = joint_rates(tree, state)
    Ldot = kinematics_matrix_dot(tree, state, list(sys.v_abs))
    v_a = stack_twists(sys.v_abs)
    rhs = J.T @ (sys.F_a - sys.B @ v_a - sys.A @ (Ldot @ (N @ qdot)))
    qddot = np.linalg.solve(A_tilde, rhs)
    return ReducedDynamics(A_tilde, qddot, qdot, J, Ldot, N, sys)


# --- kinematic stepping ---


def _kinematic_rates(state: SystemState, vel_r: Sequence[VelocityState]):
    orates = [
        orientation_rate(state.kind, o, v.w) for o, v in zip(state.orient, vel_r)
    ]
    trates = [
        v.v - np.cross(v.w, d) for d, v in zip(state.trans, vel_r)
    ]
    return orates, trates


def orientation_step(state: SystemState, vel_r: Sequence[VelocityState], dt: float) -> SystemState:
    """One RK4 step of the kinematic ODEs with the relative twists held fixed.

    Quaternion parameters are renormalized after the step. The returned state
    carries the supplied twists.
    """
    vel_r = tuple(vel_r)
    o0 = [np.array(o) for o in state.orient]
    t0 = [np.array(t) for t in state.trans]

    def rates(o_list, t_list):
        tmp = SystemState(state.kind, o_list, t_list, vel_r)
        return _kinematic_rates(tmp, vel_r)

    ko1, kt1 = rates(o0, t0)
    ko2, kt2 = rates(
        [o + 0.5 * dt * d for o, d in zip(o0, ko1)],
        [t + 0.5 * dt * d for t, d in zip(t0, kt1)],
    )
    ko3, kt3 = rates(
        [o + 0.5 * dt * d for o, d in zip(o0, ko2)],
        [t + 0.5 * dt * d for t, d in zip(t0, kt2)],
    )
    ko4, kt4 = rates(
        [o + dt * d for o, d in zip(o0, ko3)],
        [t + dt * d for t, d in zip(t0, kt3)],
    )
    new_o = []
    for o, d1, d2, d3, d4 in zip(o0, ko1, ko2, ko3, ko4):
        o = o + (dt / 6.0) * (d1 + 2 * d2 + 2 * d3 + d4)
        if state.kind == "quaternion":
            o = o / np.linalg.norm(o)
        new_o.append(o)
    new_t = [
        t + (dt / 6.0) * (d1 + 2 * d2 + 2 * d3 + d4)
        for t, d1, d2, d3, d4 in zip(t0, kt1, kt2, kt3, kt4)
    ]
    return SystemState(state.kind, new_o, new_t, vel_r)


# --- Lagrange form ---


@dataclass(frozen=True)
class LagrangeSystem:
    """Generalized-coordinate blocks: calA qddot + calB qdot = calF, with
    coordinates (translation quasi-coordinates; orientation parameters) per
    edge and qdot the stacked coordinate rates."""

    calA: np.ndarray
    calB: np.ndarray
    calF: np.ndarray
    M: np.ndarray
    Mdot: np.ndarray
    coord_rates: np.ndarray
    sys: AssembledSystem

    def coordinate_accel(self) -> np.ndarray:
        cond = np.linalg.cond(self.calA)
        if not np.isfinite(cond) or cond > PROJECTION_COND_LIMIT:
            raise NumericalError(
                "Lagrange mass matrix is singular (condition "
                f"{cond:.3e}); quaternion coordinates always produce one rank "
                "deficiency per edge - use a square parameterization or restrict"
            )
        return np.linalg.solve(self.calA, self.calF - self.calB @ self.coord_rates)

    def restricted(self, Ntilde: np.ndarray):
        """Project onto constant coordinate directions (e.g. joint angles).

        Valid when the directions are constant in coordinate space and the
        coordinate rates satisfy qdot = Ntilde @ reduced_rates.
        """
        red_A = Ntilde.T @ self.calA @ Ntilde
        red_B = Ntilde.T @ self.calB @ Ntilde
        red_F = Ntilde.T @ self.calF
        rates, *_ = np.linalg.lstsq(Ntilde, self.coord_rates, rcond=None)
        return red_A, red_B, red_F, rates


def lagrange_assemble(
    tree: MultibodyTree, state: SystemState, wrenches: Optional[Sequence] = None
) -> LagrangeSystem:
    """Build the generalized-coordinate dynamics blocks at the current state."""
    sys = assemble_system(tree, state, wrenches)
    Ldot = kinematics_matrix_dot(tree, state, list(sys.v_abs))
    k = tree.k
    widths = []
    Ms, Mdots, rate_parts = [], [], []
    for i in range(k):
        D = orientation_rate_map(state.kind, state.orient[i])
        c = 3 + D.shape[1]
        widths.append(c)
        vr = state.vel_r[i]
        prate = orientation_rate(state.kind, state.orient[i], vr.w)
        Ddot = orientation_rate_map_dot(state.kind, state.orient[i], prate)
        Mi = np.zeros((6, c))
        Mi[:3, :3] = np.eye(3)
        Mi[3:, 3:] = D
        Md = np.zeros((6, c))
        Md[3:, 3:] = Ddot
        Ms.append(Mi)
        Mdots.append(Md)
        rate_parts.append(np.concatenate([vr.v, prate]))
    n = sum(widths)
    M = np.zeros((6 * k, n))
    Mdot = np.zeros((6 * k, n))
    col = 0
    for i in range(k):
        M[6 * i : 6 * i + 6, col : col + widths[i]] = Ms[i]
        Mdot[6 * i : 6 * i + 6, col : col + widths[i]] = Mdots[i]
        col += widths[i]
    LM = sys.L @ M
    calA = LM.T @ sys.A @ LM
    calB = LM.T @ (sys.A @ (sys.L @ Mdot) + (sys.A @ Ldot + sys.B @ sys.L) @ M)
    calF = LM.T @ sys.F_a
    return LagrangeSystem(calA, calB, calF, M, Mdot, np.concatenate(rate_parts), sys)


# --- loops ---


def loop_residual(tree: MultibodyTree, state: SystemState, closure: LoopClosure):
    """Pose mismatch of a closure edge: (translation residual, C - I).

    Walks both sides only below their lowest common ancestor, so shared path
    factors cancel structurally and a degenerate loop is exactly zero.
    """

    def chain(idx: int) -> list:
        return [] if idx == 0 else tree.ancestors(idx - 1)

    ca, cb = chain(closure.body_a), chain(closure.body_b)
    shared = 0
    while shared < min(len(ca), len(cb)) and ca[shared] == cb[shared]:
        shared += 1

    def pose_below(edges: list) -> FramePose:
        p = FramePose.identity()
        for e in edges:
            p = pose_compose(p, state.relative_pose(e))
        return p

    err = pose_compose(
        pose_inverse(pose_below(cb[shared:])),
        pose_compose(pose_below(ca[shared:]), closure.attach),
    )
    return err.d0, err.C - np.eye(3)


# --- environment wrenches ---


def gravity_wrenches(tree: MultibodyTree, poses: Sequence[FramePose], g_world) -> list:
    """Per-body uniform-gravity wrenches in body coordinates."""
    return [
        uniform_gravity_wrench(b.inertia, pose, g_world)
        for b, pose in zip(tree.bodies, poses)
    ]
