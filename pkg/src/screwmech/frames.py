"""Frame poses, wrench/twist transform groups, and their time derivatives.

Conventions used package-wide:

- A pose holds ``C``, the rotation taking child-frame components to
  parent-frame components, and ``d0``, the child-origin offset expressed in
  parent components. The child-frame offset is then ``dp = C.T @ d0``.
- A velocity state carries body (child-frame) quasi-velocities ``v`` (linear)
  and ``w`` (angular).
- Wrench columns are ordered col{force, moment}; twist columns
  col{linear, angular}. Both transform matrices map child-frame reductions at
  the child origin to parent-frame reductions at the parent origin; the twist
  transform is the inverse transpose of the wrench transform, so the power
  pairing wrench . twist is frame-invariant.

Rotations are validated on entry (orthonormality within 1e-9, det +1); there
is no silent re-orthogonalization here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .screws import cross_matrix

ROTATION_TOL = 1e-9
FACTORIZATION_TOL = 1e-12


def as_rotation(C, tol: float = ROTATION_TOL) -> np.ndarray:
    """Validate and return a proper rotation matrix.

    Raises NumericalError when C'C deviates from I by more than tol or the
    determinant is not +1.
    """
    C = np.array(C, dtype=float)
    if C.shape != (3, 3):
        raise NumericalError(f"rotation must be 3x3, got shape {C.shape}")
    defect = np.max(np.abs(C.T @ C - np.eye(3)))
    if not np.isfinite(defect) or defect > tol:
        raise NumericalError(
            f"matrix is not orthonormal: max |C'C - I| = {defect:.3e} exceeds {tol:.1e}"
        )
    if np.linalg.det(C) < 0.0:
        raise NumericalError("matrix is a reflection (det -1), not a rotation")
    C.setflags(write=False)
    return C


@dataclass(frozen=True)
class FramePose:
    """Child frame placed in a parent frame: rotation C and offset d0."""

    C: np.ndarray
    d0: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "C", as_rotation(self.C))
        d = np.array(self.d0, dtype=float)
        if d.shape != (3,):
            raise NumericalError(f"pose offset must be a 3-vector, got shape {d.shape}")
        d.setflags(write=False)
        object.__setattr__(self, "d0", d)

    @property
    def dp(self) -> np.ndarray:
        """Offset in child components, C.T @ d0."""
        return self.C.T @ self.d0

    @classmethod
    def identity(cls) -> "FramePose":
        return cls(np.eye(3), np.zeros(3))

    def compose(self, inner: "FramePose") -> "FramePose":
        return pose_compose(self, inner)

    def inverse(self) -> "FramePose":
        return pose_inverse(self)

    def apply(self, x_child) -> np.ndarray:
        """Map a point from child to parent coordinates."""
        return self.C @ np.asarray(x_child, dtype=float) + self.d0


def pose_compose(outer: FramePose, inner: FramePose) -> FramePose:
    """Pose of inner's child in outer's parent: C = Co Ci, d0 = do + Co di."""
    return FramePose(outer.C @ inner.C, outer.d0 + outer.C @ inner.d0)


def pose_inverse(pose: FramePose) -> FramePose:
    return FramePose(pose.C.T, -(pose.C.T @ pose.d0))


@dataclass(frozen=True)
class VelocityState:
    """Body-frame quasi-velocities: linear v and angular w."""

    v: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        for name in ("v", "w"):
            a = np.array(getattr(self, name), dtype=float)
            if a.shape != (3,):
                raise NumericalError(f"velocity component {name} must be a 3-vector")
            if not np.all(np.isfinite(a)):
                raise NumericalError(f"velocity component {name} has non-finite entries")
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    def twist(self) -> np.ndarray:
        return np.concatenate([self.v, self.w])

    @classmethod
    def zero(cls) -> "VelocityState":
        return cls(np.zeros(3), np.zeros(3))


def _rotation_pair(C: np.ndarray) -> np.ndarray:
    out = np.zeros((6, 6))
    out[:3, :3] = C
    out[3:, 3:] = C
    return out


def _shift(d: np.ndarray) -> np.ndarray:
    out = np.eye(6)
    out[3:, :3] = cross_matrix(d)
    return out


@dataclass(frozen=True)
class WrenchTransform:
    """6x6 map of wrench columns from child-origin/child-frame coordinates to
    parent-origin/parent-frame coordinates.

    Built two ways, shift(d0) @ pair(C) and pair(C) @ shift(dp); both must
    agree to 1e-12 or construction fails.
    """

    matrix: np.ndarray
    pose: FramePose

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    # frame bookkeeping for callers that track directions
    source = "child"
    target = "parent"

    def apply(self, wrench6) -> np.ndarray:
        return self.matrix @ np.asarray(wrench6, dtype=float)


@dataclass(frozen=True)
class TwistTransform:
    """6x6 map of twist columns, child coordinates to parent coordinates.

    Equals the block-swap conjugation of the wrench transform of the same
    pose, and also its inverse transpose.
    """

    matrix: np.ndarray
    pose: FramePose

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    source = "child"
    target = "parent"

    def apply(self, twist6) -> np.ndarray:
        return self.matrix @ np.asarray(twist6, dtype=float)


def wrench_transform(pose: FramePose) -> WrenchTransform:
    """Wrench transform of a pose; verifies both factorizations agree."""
    left = _shift(pose.d0) @ _rotation_pair(pose.C)
    right = _rotation_pair(pose.C) @ _shift(pose.dp)
    gap = np.max(np.abs(left - right))
    if gap > FACTORIZATION_TOL:
        raise NumericalError(
            f"wrench transform factorizations disagree by {gap:.3e} (pose data inconsistent)"
        )
    return WrenchTransform(left, pose)


_SWAP = np.zeros((6, 6))
_SWAP[:3, 3:] = np.eye(3)
_SWAP[3:, :3] = np.eye(3)
_SWAP.setflags(write=False)


def twist_transform(pose: FramePose) -> TwistTransform:
    """Twist transform of a pose: block-swap conjugation of the wrench one."""
    wr = wrench_transform(pose)
    return TwistTransform(_SWAP @ wr.matrix @ _SWAP, pose)


@dataclass(frozen=True)
class DerivativeFactors:
    """Velocity factors for transform derivatives.

    With L the wrench transform of a moving pose and V its body
    quasi-velocity, Ldot = L @ phi_wrench = psi_wrench @ L. The twist-side
    factors are the negative transposes (inverse-transpose duality).
    """

    phi_wrench: np.ndarray
    psi_wrench: np.ndarray

    @property
    def phi_twist(self) -> np.ndarray:
        return -self.phi_wrench.T

    @property
    def psi_twist(self) -> np.ndarray:
        return -self.psi_wrench.T


def wrench_velocity_factor(v, w) -> np.ndarray:
    """Block factor [[w_hat, 0], [v_hat, w_hat]] of a twist (v, w).

    Appears both as the one-sided derivative factor of moving transforms and
    as the convective operator in the momentum balance.
    """
    out = np.zeros((6, 6))
    wx = cross_matrix(np.asarray(w, dtype=float))
    out[:3, :3] = wx
    out[3:, 3:] = wx
    out[3:, :3] = cross_matrix(np.asarray(v, dtype=float))
    return out


def transported_velocity(pose: FramePose, vel: VelocityState) -> VelocityState:
    """Body twist re-expressed in the parent frame at the parent origin."""
    w0 = pose.C @ vel.w
    u0 = pose.C @ vel.v + np.cross(pose.d0, w0)
    return VelocityState(u0, w0)


def derivative_factors(pose: FramePose, vel: VelocityState) -> DerivativeFactors:
    """Build both one-sided derivative factors of the pose's transforms.

    The child-side factor uses the body components (v, w); the parent-side
    factor must use the parent-origin reduction of the same twist, not just
    the rotated components, or the lower block fails for d0 != 0.
    """
    par = transported_velocity(pose, vel)
    return DerivativeFactors(
        phi_wrench=wrench_velocity_factor(vel.v, vel.w),
        psi_wrench=wrench_velocity_factor(par.v, par.w),
    )


def angular_velocity_from_rotation(C, Cdot, tol: float = 1e-8) -> np.ndarray:
    """Body angular velocity from a rotation and its time derivative.

    Checks that C.T @ Cdot is antisymmetric within tol (i.e. the pair really
    is a rotation and its derivative) before extracting the axial vector.
    """
    C = np.asarray(C, dtype=float)
    Cdot = np.asarray(Cdot, dtype=float)
    A = C.T @ Cdot
    defect = np.max(np.abs(A + A.T))
    if not np.isfinite(defect) or defect > tol:
        raise NumericalError(
            f"C'Cdot is not antisymmetric: defect {defect:.3e} exceeds {tol:.1e}"
        )
    A = 0.5 * (A - A.T)
    return np.array([A[2, 1], A[0, 2], A[1, 0]])


def point_velocity(vel: VelocityState, r_p) -> np.ndarray:
    """Velocity of a body-fixed point at body position r_p (body components)."""
    return vel.v + np.cross(vel.w, np.asarray(r_p, dtype=float))
