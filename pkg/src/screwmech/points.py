"""Mass points with variable mass, mutual gravitation, and point-built bodies.

The momentum balance for a point that gains or loses mass at rate nu is

    rho * dv/dt = f + xi - nu * v,    xi = nu * u,

with u the ABSOLUTE velocity of the captured or expelled mass. Passing
u = v (mass leaves with no relative velocity) reduces the balance to
rho * dv/dt = f. Callers with exhaust data relative to the point should add
the point's velocity before calling.

Gravitation is attractive: the force on x due to y points from x toward y,
and the pair exchange is skew so every mutual term cancels in the total
screw measure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import NumericalError
from .screws import ScrewAtom, ScrewMeasure, Slider, SliderReduction, as_vec3

COINCIDENCE_TOL = 1e-12
BLOCK_SYMMETRY_TOL = 1e-9


@dataclass(frozen=True)
class MassPoint:
    """Position, velocity, mass, and mass rate of one point."""

    x: np.ndarray
    v: np.ndarray
    rho: float
    nu: float = 0.0

    def __post_init__(self):
        x = as_vec3(self.x)
        v = as_vec3(self.v)
        x.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "rho", float(self.rho))
        object.__setattr__(self, "nu", float(self.nu))
        if self.rho <= 0.0:
            raise ValueError(f"point mass must be positive, got {self.rho}")

    @property
    def momentum(self) -> np.ndarray:
        return self.rho * self.v


def meshchersky_force(nu: float, u_abs) -> np.ndarray:
    """Supply term from mass transfer: rate times absolute stream velocity."""
    return float(nu) * as_vec3(u_abs)


def masspoint_accel(point: MassPoint, force, u_abs=None) -> np.ndarray:
    """Acceleration of a variable-mass point.

    u_abs is the absolute velocity of the transferred mass; omitted means the
    transfer is velocity-matched and contributes nothing.
    """
    f = as_vec3(force)
    if u_abs is None:
        return f / point.rho
    xi = meshchersky_force(point.nu, u_abs)
    return (f + xi - point.nu * point.v) / point.rho


def mass_rate_step(rho0: float, nu: float, t: float) -> float:
    """Mass after time t at constant rate; errors on exhaustion."""
    rho = rho0 + nu * t
    if rho <= 0.0:
        t_empty = -rho0 / nu
        raise NumericalError(
            f"mass exhausted: rho0={rho0} with rate {nu} empties at t={t_empty:.6g} <= {t}"
        )
    return rho


# --- gravitation ---


def gravity_pair_force(x, rho_x, y, rho_y, gamma: float) -> np.ndarray:
    """Force ON the point at x due to the point at y (attractive)."""
    x = as_vec3(x)
    y = as_vec3(y)
    d = y - x
    r = np.linalg.norm(d)
    if r < COINCIDENCE_TOL:
        raise NumericalError(
            f"coincident attracting points (separation {r:.3e} < {COINCIDENCE_TOL:.0e})"
        )
    return gamma * rho_x * rho_y * d / r**3


def gravity_field(points: Sequence[MassPoint], at, gamma: float) -> np.ndarray:
    """Gravitational acceleration produced by the points at a location."""
    at = as_vec3(at)
    g = np.zeros(3)
    for p in points:
        d = p.x - at
        r = np.linalg.norm(d)
        if r < COINCIDENCE_TOL:
            raise NumericalError(
                f"field evaluation coincides with a source point (separation {r:.3e})"
            )
        g += gamma * p.rho * d / r**3
    return g


def gravity_forces(points: Sequence[MassPoint], gamma: float) -> np.ndarray:
    """(n, 3) array of net gravitational forces, one row per point."""
    n = len(points)
    out = np.zeros((n, 3))
    for i in range(n):
        for j in range(i + 1, n):
            f = gravity_pair_force(points[i].x, points[i].rho, points[j].x, points[j].rho, gamma)
            out[i] += f
            out[j] -= f
    return out


def gravity_screws(points: Sequence[MassPoint], gamma: float) -> ScrewMeasure:
    """The gravity forces as a screw measure (one force slider per point)."""
    forces = gravity_forces(points, gamma)
    atoms = [
        ScrewAtom(p.x, Slider.force(f, at=p.x)) for p, f in zip(points, forces)
    ]
    return ScrewMeasure(atoms)


def momentum_measure(points: Sequence[MassPoint]) -> ScrewMeasure:
    """Per-point momentum sliders; its resultant/moment are the totals."""
    atoms = [ScrewAtom(p.x, Slider.force(p.momentum, at=p.x)) for p in points]
    return ScrewMeasure(atoms)


def kinetic_energy(points: Iterable[MassPoint]) -> float:
    return sum(0.5 * p.rho * float(p.v @ p.v) for p in points)


def gravity_potential(points: Sequence[MassPoint], gamma: float) -> float:
    """Pairwise potential; with the attractive sign convention it is negative."""
    u = 0.0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            r = np.linalg.norm(points[j].x - points[i].x)
            if r < COINCIDENCE_TOL:
                raise NumericalError("coincident points have no finite potential")
            u -= gamma * points[i].rho * points[j].rho / r
    return u


# --- bodies built from point distributions, in paired 3x3 blocks ---


@dataclass(frozen=True)
class PointBodyInertia:
    """Quadratic momentum/energy coefficients (A, B, C) of a point cloud.

    The stacked 6x6 block matrix [[A, B], [B^T, C]] must be symmetric
    positive definite for a full-rank cloud.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        B = np.array(self.B, dtype=float)
        C = np.array(self.C, dtype=float)
        for name, M in (("A", A), ("B", B), ("C", C)):
            if M.shape != (3, 3):
                raise ValueError(f"block {name} must be 3x3, got {M.shape}")
        if np.max(np.abs(A - A.T)) > BLOCK_SYMMETRY_TOL:
            raise ValueError("block A must be symmetric")
        if np.max(np.abs(C - C.T)) > BLOCK_SYMMETRY_TOL:
            raise ValueError("block C must be symmetric")
        for M in (A, B, C):
            M.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)

    @property
    def stacked(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.B.T, self.C]])

    def require_positive(self) -> None:
        ev = np.linalg.eigvalsh(self.stacked)
        if ev[0] <= 0.0:
            raise NumericalError(
                f"point-body inertia block matrix is not positive definite (min eig {ev[0]:.3e})"
            )

    @classmethod
    def from_points(cls, masses, positions) -> "PointBodyInertia":
        """Blocks of a rigid point cloud: A = m I, B couples v with w, C is
        the second-moment matrix."""
        m = np.asarray(masses, dtype=float)
        r = np.asarray(positions, dtype=float)
        if r.ndim != 2 or r.shape[1] != 3 or m.shape != (r.shape[0],):
            raise ValueError("need matching masses (n,) and positions (n, 3)")
        A = m.sum() * np.eye(3)
        B = np.zeros((3, 3))
        C = np.zeros((3, 3))
        for mi, ri in zip(m, r):
            rx = np.array(
                [[0.0, -ri[2], ri[1]], [ri[2], 0.0, -ri[0]], [-ri[1], ri[0], 0.0]]
            )
            B += -mi * rx
            C += -mi * rx @ rx
        return cls(A, B, C)


def pointbody_momentum(inertia: PointBodyInertia, v, w):
    """Linear and angular momentum columns of the paired quadratic form."""
    v = as_vec3(v)
    w = as_vec3(w)
    p = inertia.A @ v + inertia.B @ w
    q = inertia.B.T @ v + inertia.C @ w
    return p, q


def pointbody_energy(inertia: PointBodyInertia, v, w) -> float:
    v = as_vec3(v)
    w = as_vec3(w)
    return float(0.5 * v @ (inertia.A @ v) + v @ (inertia.B @ w) + 0.5 * w @ (inertia.C @ w))


def momentum_summary(points: Sequence[MassPoint]) -> SliderReduction:
    """Total momentum and its moment about the origin as one reduction."""
    from .screws import screw_resultant

    return screw_resultant(momentum_measure(points))
