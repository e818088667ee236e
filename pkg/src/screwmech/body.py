"""Single rigid body: inertia screw matrices from mass atoms and the
Newton-Euler momentum balance in body coordinates.

Mass distributions are finite atom lists (a quadrature of the continuous
case). The 6x6 inertia screw matrix couples the body twist col{v, w} to the
momentum wrench col{P, L_O}; its source-rate companion plays the same role
for the mass gained or lost through Meshchersky sources, and equals the time
derivative of the inertia matrix when source rates are constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import NumericalError
from .frames import (
    FramePose,
    VelocityState,
    point_velocity,
    pose_inverse,
    wrench_transform,
    wrench_velocity_factor,
)
from .screws import ScrewAtom, ScrewMeasure, Slider, SliderReduction, cross_matrix, screw_resultant

CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class MassAtom:
    """Lumped mass at body position r_p, with an optional source rate.

    rho_mu is the atom's mass (kg, > 0); nu_mu its mass gain rate (kg/s),
    negative for a sink.
    """

    r_p: np.ndarray
    rho_mu: float
    nu_mu: float = 0.0

    def __post_init__(self):
        r = np.array(self.r_p, dtype=float)
        if r.shape != (3,) or not np.all(np.isfinite(r)):
            raise ValueError("atom position must be a finite 3-vector")
        r.setflags(write=False)
        object.__setattr__(self, "r_p", r)
        m = float(self.rho_mu)
        if not np.isfinite(m) or m <= 0.0:
            raise ValueError(f"atom mass must be positive, got {m}")
        object.__setattr__(self, "rho_mu", m)
        object.__setattr__(self, "nu_mu", float(self.nu_mu))


def theta_point(r_p) -> np.ndarray:
    """Unit-mass point inertia block [[I, -r_hat], [r_hat, -r_hat^2]].

    Applied to a twist col{v, w} its top rows give the velocity of the body
    point at r_p, so the mass-weighted sum of these matrices converts twists
    to momentum wrenches.
    """
    rx = cross_matrix(np.asarray(r_p, dtype=float))
    out = np.empty((6, 6))
    out[:3, :3] = np.eye(3)
    out[:3, 3:] = -rx
    out[3:, :3] = rx
    out[3:, 3:] = -(rx @ rx)
    return out


@dataclass(frozen=True)
class InertiaScrew:
    """6x6 inertia matrix and its source-rate companion.

    Block structure (m = total mass, c = center of mass, J = inertia tensor
    about the body origin):  [[m I, -m c_hat], [m c_hat, J]].
    """

    theta: np.ndarray
    theta_rate: np.ndarray

    def __post_init__(self):
        for name in ("theta", "theta_rate"):
            a = np.array(getattr(self, name), dtype=float)
            if a.shape != (6, 6):
                raise ValueError(f"{name} must be 6x6")
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def total_mass(self) -> float:
        return float(self.theta[0, 0])

    @property
    def condition(self) -> float:
        # cached: the matrix is frozen and this runs once per integration, not per step
        cached = getattr(self, "_condition", None)
        if cached is None:
            cached = float(np.linalg.cond(self.theta))
            object.__setattr__(self, "_condition", cached)
        return cached

    @property
    def first_moment(self) -> np.ndarray:
        """m*c in body components (axial vector of the lower-left block)."""
        B = self.theta[3:, :3]
        return np.array([B[2, 1], B[0, 2], B[1, 0]])

    def momentum(self, vel: VelocityState) -> np.ndarray:
        """Momentum wrench col{P, L_O} at the body origin, body components."""
        return self.theta @ vel.twist()

    def kinetic_energy(self, vel: VelocityState) -> float:
        V = vel.twist()
        return 0.5 * float(V @ (self.theta @ V))


def assemble_inertia(atoms: Iterable[MassAtom]) -> InertiaScrew:
    """Mass- and source-weighted sums of the point inertia blocks."""
    atoms = list(atoms)
    if not atoms:
        raise ValueError("inertia assembly needs at least one mass atom")
    theta = np.zeros((6, 6))
    rate = np.zeros((6, 6))
    for a in atoms:
        block = theta_point(a.r_p)
        theta += a.rho_mu * block
        rate += a.nu_mu * block
    return InertiaScrew(theta, rate)


@dataclass(frozen=True)
class BodyState:
    """Pose of the body frame in the world frame plus body quasi-velocities."""

    pose: FramePose
    vel: VelocityState


def newton_euler_accel(ins: InertiaScrew, state: BodyState, wrench_body) -> np.ndarray:
    """Body-frame twist acceleration from the momentum balance.

        theta @ Vdot + (theta_rate + Phi @ theta) @ V = F

    with Phi the wrench velocity factor of V. F collects applied, increment
    and environment wrenches already reduced to body coordinates; use
    body_wrench_from_world for world-frame input.
    """
    theta = ins.theta
    cond = ins.condition
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise NumericalError(
            "newton-euler: inertia screw matrix is singular or near-singular "
            f"(condition {cond:.3e}); the mass distribution is degenerate - "
            "at least three non-collinear atoms are required"
        )
    V = state.vel.twist()
    phi = wrench_velocity_factor(state.vel.v, state.vel.w)
    F = np.asarray(wrench_body, dtype=float)
    return np.linalg.solve(theta, F - (ins.theta_rate + phi @ theta) @ V)


def body_motion_measures(atoms: Iterable[MassAtom], vel: VelocityState):
    """Atom-sum motion measures: kinetic energy and the momentum screw.

    Returns (K, reduction at the body origin in body components). Agreement
    with the quadratic form 0.5 V' theta V and with theta @ V is a test
    property, not assumed here: this route goes atom by atom.
    """
    K = 0.0
    measure = []
    for a in atoms:
        v_x = point_velocity(vel, a.r_p)
        K += 0.5 * a.rho_mu * float(v_x @ v_x)
        measure.append(ScrewAtom(a.r_p, Slider.force(a.rho_mu * v_x, a.r_p)))
    red = screw_resultant(ScrewMeasure(measure), (0.0, 0.0, 0.0))
    return K, red


def world_momentum(ins: InertiaScrew, state: BodyState) -> np.ndarray:
    """Momentum wrench re-read at the world origin in world components."""
    return wrench_transform(state.pose).matrix @ ins.momentum(state.vel)


def body_wrench_from_world(pose: FramePose, wrench_world) -> np.ndarray:
    """Re-read a world-origin wrench column in body-origin body components."""
    return wrench_transform(pose_inverse(pose)).matrix @ np.asarray(wrench_world, dtype=float)


def uniform_gravity_wrench(ins: InertiaScrew, pose: FramePose, g_world) -> np.ndarray:
    """Body-frame wrench of a uniform acceleration field g (world components).

    Force m g and moment (m c) x g, both in body components; exact for any
    atom distribution since the field is constant.
    """
    g_b = pose.C.T @ np.asarray(g_world, dtype=float)
    mc = ins.first_moment
    return np.concatenate([ins.total_mass * g_b, np.cross(mc, g_b)])


def increment_wrench(atoms: Sequence[MassAtom], xi_per_atom) -> np.ndarray:
    """Momentum-increment wrench of mass sources: sum of nu_mu * xi sliders.

    xi_per_atom lists the source velocity density (body components) for each
    atom, in atom order.
    """
    atoms = list(atoms)
    xi = np.asarray(xi_per_atom, dtype=float)
    if xi.shape != (len(atoms), 3):
        raise ValueError(
            f"xi_per_atom must have shape ({len(atoms)}, 3), got {xi.shape}"
        )
    p = np.zeros(3)
    q = np.zeros(3)
    for a, x in zip(atoms, xi):
        thrust = a.nu_mu * x
        p += thrust
        q += np.cross(a.r_p, thrust)
    return np.concatenate([p, q])
