"""Rotation parameterizations: 1-2-3 Euler angles, Cayley (Fedorov) vector,
and unit quaternions, each with forward/inverse maps and rate maps.

Rate maps relate parameter rates to the BODY angular velocity w defined by
w_hat = C.T @ Cdot; parent-frame variants are provided where the closed form
differs. The Cayley-vector rate map is exposed in both frames because the two
are easy to confuse: D_body = 2/(1+|f|^2) (I - f_hat) and
D_parent = 2/(1+|f|^2) (I + f_hat) = C @ D_body.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ParameterizationSingularity
from .screws import cross_matrix

GIMBAL_TOL = 1e-10
CAYLEY_TOL = 1e-10
UNIT_TOL = 1e-9


# --- shared rate-map wrapper ---


@dataclass(frozen=True)
class RateMap:
    """Linear map D with omega = D @ rates; invert only off the singular set."""

    D: np.ndarray

    def omega(self, rates) -> np.ndarray:
        return self.D @ np.asarray(rates, dtype=float)

    def rates(self, omega) -> np.ndarray:
        D = self.D
        if D.shape[0] == D.shape[1]:
            det = np.linalg.det(D)
            if abs(det) < GIMBAL_TOL:
                raise ParameterizationSingularity(
                    f"rate map is singular (|det| = {abs(det):.3e}); "
                    "switch orientation coordinates"
                )
            return np.linalg.solve(D, np.asarray(omega, dtype=float))
        # rectangular (quaternion) case: minimum-norm rates on the unit sphere
        return np.linalg.pinv(D) @ np.asarray(omega, dtype=float)


# --- Euler 1-2-3 ---


@dataclass(frozen=True)
class EulerAngles:
    phi: float
    theta: float
    psi: float

    def as_array(self) -> np.ndarray:
        return np.array([self.phi, self.theta, self.psi], dtype=float)


def _elem(axis: int, angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    if axis == 0:
        return np.array([[1, 0, 0], [0, c, -s], [0, s, c]])
    if axis == 1:
        return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def euler_to_rotation(a: EulerAngles) -> np.ndarray:
    """C1(phi) @ C2(theta) @ C3(psi), orthonormal by construction."""
    return _elem(0, a.phi) @ _elem(1, a.theta) @ _elem(2, a.psi)


def euler_from_rotation(C) -> EulerAngles:
    """Extract 1-2-3 angles; fails near gimbal lock (|cos theta| ~ 0)."""
    C = np.asarray(C, dtype=float)
    s_theta = np.clip(C[0, 2], -1.0, 1.0)
    theta = np.arcsin(s_theta)
    if abs(np.cos(theta)) < GIMBAL_TOL:
        raise ParameterizationSingularity(
            "gimbal lock: with |cos theta| ~ 0 only phi +/- psi is determined; "
            "switch orientation coordinates"
        )
    phi = np.arctan2(-C[1, 2], C[2, 2])
    psi = np.arctan2(-C[0, 1], C[0, 0])
    return EulerAngles(phi, theta, psi)


def euler_rate_map(a: EulerAngles) -> RateMap:
    """Columns are the body components of the three elementary spin axes."""
    ct, st = np.cos(a.theta), np.sin(a.theta)
    cp, sp = np.cos(a.psi), np.sin(a.psi)
    D = np.array(
        [
            [cp * ct, sp, 0.0],
            [-sp * ct, cp, 0.0],
            [st, 0.0, 1.0],
        ]
    )
    return RateMap(D)


def euler_rate_map_dot(a: EulerAngles, rates) -> np.ndarray:
    """Time derivative of euler_rate_map along angle rates (chain rule)."""
    rates = np.asarray(rates, dtype=float)
    td, pd = rates[1], rates[2]
    ct, st = np.cos(a.theta), np.sin(a.theta)
    cp, sp = np.cos(a.psi), np.sin(a.psi)
    return np.array(
        [
            [-sp * pd * ct - cp * st * td, cp * pd, 0.0],
            [-cp * pd * ct + sp * st * td, -sp * pd, 0.0],
            [ct * td, 0.0, 0.0],
        ]
    )


# --- Cayley / Fedorov vector ---


def fedorov_from_rotation(C) -> np.ndarray:
    """Cayley image f of a rotation; both closed forms must agree.

    Undefined at rotation angle pi, where C + I is singular.
    """
    C = np.asarray(C, dtype=float)
    denom = 1.0 + np.trace(C)
    if abs(denom) < CAYLEY_TOL:
        raise ParameterizationSingularity(
            "Cayley vector undefined: rotation angle is at or near pi "
            f"(1 + trace = {denom:.3e})"
        )
    A = (C - C.T) / denom
    f = np.array([A[2, 1], A[0, 2], A[1, 0]])
    # resolvent route as an independent cross-check of the same value
    G = (C - np.eye(3)) @ np.linalg.inv(C + np.eye(3))
    g = np.array([G[2, 1], G[0, 2], G[1, 0]])
    gap = np.max(np.abs(f - g))
    if gap > 1e-10:
        raise NumericalError(f"Cayley extraction routes disagree by {gap:.3e}")
    return f


def rotation_from_fedorov(f) -> np.ndarray:
    """Rotation with Cayley vector f, valid for every finite f."""
    f = np.asarray(f, dtype=float)
    n2 = f @ f
    fx = cross_matrix(f)
    C = ((1.0 - n2) * np.eye(3) + 2.0 * np.outer(f, f) + 2.0 * fx) / (1.0 + n2)
    # resolvent form (I+fx)(I-fx)^-1 must give the same matrix
    alt = (np.eye(3) + fx) @ np.linalg.inv(np.eye(3) - fx)
    gap = np.max(np.abs(C - alt))
    if gap > 1e-12:
        raise NumericalError(f"Cayley reconstruction routes disagree by {gap:.3e}")
    return C


def fedorov_rate_map(f, frame: str = "body") -> RateMap:
    """Rate map D with omega = D @ fdot; always invertible."""
    f = np.asarray(f, dtype=float)
    fx = cross_matrix(f)
    scale = 2.0 / (1.0 + f @ f)
    if frame == "body":
        return RateMap(scale * (np.eye(3) - fx))
    if frame == "parent":
        return RateMap(scale * (np.eye(3) + fx))
    raise ValueError(f"frame must be 'body' or 'parent', got {frame!r}")


def fedorov_rate_map_dot(f, fdot, frame: str = "body") -> np.ndarray:
    """d/dt of fedorov_rate_map along fdot."""
    f = np.asarray(f, dtype=float)
    fdot = np.asarray(fdot, dtype=float)
    n2 = f @ f
    sign = -1.0 if frame == "body" else 1.0
    if frame not in ("body", "parent"):
        raise ValueError(f"frame must be 'body' or 'parent', got {frame!r}")
    core = np.eye(3) + sign * cross_matrix(f)
    return (-4.0 * (f @ fdot) / (1.0 + n2) ** 2) * core + (2.0 / (1.0 + n2)) * (
        sign * cross_matrix(fdot)
    )


def fedorov_rate(f, omega, frame: str = "body", printed_variant: bool = False) -> np.ndarray:
    """fdot for a given angular velocity.

    The closed-form inverses are exact:
      body:   fdot = 0.5 (I + f_hat + f f^T) w
      parent: fdot = 0.5 (I - f_hat + f f^T) w

    printed_variant evaluates a published explicit formula,
    0.5 (1+|f|^2)(I-f_hat)^2(I+f_hat) w, verbatim for comparison; it is NOT
    the inverse of either rate map and disagrees at order |f|^2. Kept only so
    tests can document the discrepancy.
    """
    f = np.asarray(f, dtype=float)
    omega = np.asarray(omega, dtype=float)
    fx = cross_matrix(f)
    if printed_variant:
        core = (np.eye(3) - fx) @ (np.eye(3) - fx) @ (np.eye(3) + fx)
        return 0.5 * (1.0 + f @ f) * core @ omega
    if frame == "body":
        return 0.5 * (np.eye(3) + fx + np.outer(f, f)) @ omega
    if frame == "parent":
        return 0.5 * (np.eye(3) - fx + np.outer(f, f)) @ omega
    raise ValueError(f"frame must be 'body' or 'parent', got {frame!r}")


# --- unit quaternions ---


@dataclass(frozen=True)
class Quaternion:
    """Scalar-vector quaternion {lam0, lam}; not forced to unit norm so that
    products and conjugations stay total. Rotation interfaces check the norm.
    """

    lam0: float
    lam: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lam0", float(self.lam0))
        v = np.array(self.lam, dtype=float)
        if v.shape != (3,):
            raise ValueError(f"quaternion vector part must be a 3-vector, got {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "lam", v)

    def as4(self) -> np.ndarray:
        return np.concatenate([[self.lam0], self.lam])

    def norm(self) -> float:
        return float(np.sqrt(self.lam0**2 + self.lam @ self.lam))

    def conj(self) -> "Quaternion":
        return Quaternion(self.lam0, -self.lam)

    def normalized(self) -> "Quaternion":
        n = self.norm()
        if n == 0.0:
            raise NumericalError("cannot normalize the zero quaternion")
        return Quaternion(self.lam0 / n, self.lam / n)

    @classmethod
    def identity(cls) -> "Quaternion":
        return cls(1.0, np.zeros(3))


def quat_product(a: Quaternion, b: Quaternion) -> Quaternion:
    return Quaternion(
        a.lam0 * b.lam0 - a.lam @ b.lam,
        a.lam0 * b.lam + b.lam0 * a.lam + np.cross(a.lam, b.lam),
    )


def _require_unit(q: Quaternion, tol: float = UNIT_TOL) -> None:
    defect = abs(q.norm() - 1.0)
    if defect > tol:
        raise NumericalError(
            f"quaternion norm deviates from 1 by {defect:.3e} (limit {tol:.1e})"
        )


def rotation_from_quat(q: Quaternion) -> np.ndarray:
    """Rotation of a unit quaternion; q and -q give the same matrix."""
    _require_unit(q)
    l0, l = q.lam0, q.lam
    return (
        (l0 * l0 - l @ l) * np.eye(3)
        + 2.0 * np.outer(l, l)
        + 2.0 * l0 * cross_matrix(l)
    )


def quat_from_rotation(C) -> Quaternion:
    """Extraction with the largest-pivot rule; canonicalized to lam0 >= 0."""
    C = np.asarray(C, dtype=float)
    tr = np.trace(C)
    choices = [tr, C[0, 0], C[1, 1], C[2, 2]]
    k = int(np.argmax(choices))
    if k == 0:
        s = 2.0 * np.sqrt(1.0 + tr)
        q = np.array(
            [0.25 * s, (C[2, 1] - C[1, 2]) / s, (C[0, 2] - C[2, 0]) / s, (C[1, 0] - C[0, 1]) / s]
        )
    else:
        i = k - 1
        j, m = (i + 1) % 3, (i + 2) % 3
        s = 2.0 * np.sqrt(1.0 + C[i, i] - C[j, j] - C[m, m])
        vec = np.empty(3)
        vec[i] = 0.25 * s
        vec[j] = (C[j, i] + C[i, j]) / s
        vec[m] = (C[m, i] + C[i, m]) / s
        q = np.concatenate([[(C[m, j] - C[j, m]) / s], vec])
    if q[0] < 0.0 or (q[0] == 0.0 and _leading_negative(q[1:])):
        q = -q
    q = q / np.linalg.norm(q)
    return Quaternion(q[0], q[1:])


def _leading_negative(v: np.ndarray) -> bool:
    for x in v:
        if x != 0.0:
            return x < 0.0
    return False


def quat_rate(q: Quaternion, omega, frame: str = "body") -> Quaternion:
    """Quaternion derivative for angular velocity omega.

    body:  qdot = 0.5 q o {0, w_body};  space: qdot = 0.5 {0, w_space} o q.
    Both preserve the norm exactly (the generator is antisymmetric).
    """
    w = Quaternion(0.0, np.asarray(omega, dtype=float))
    if frame == "body":
        half = quat_product(q, w)
    elif frame == "space":
        half = quat_product(w, q)
    else:
        raise ValueError(f"frame must be 'body' or 'space', got {frame!r}")
    return Quaternion(0.5 * half.lam0, 0.5 * half.lam)


def quat_rate_matrix(omega) -> np.ndarray:
    """4x4 generator G(w) with qdot4 = G @ q4 for body-frame w (includes 1/2)."""
    w = np.asarray(omega, dtype=float)
    G = np.zeros((4, 4))
    G[0, 1:] = -w
    G[1:, 0] = w
    G[1:, 1:] = -cross_matrix(w)
    return 0.5 * G


def quat_rate_map(q: Quaternion) -> RateMap:
    """3x4 map D with w_body = D @ qdot4 on the unit sphere."""
    l0, l = q.lam0, q.lam
    D = np.empty((3, 4))
    D[:, 0] = -2.0 * l
    D[:, 1:] = 2.0 * (l0 * np.eye(3) - cross_matrix(l))
    return RateMap(D)


def quat_rate_map_dot(qdot: Quaternion) -> np.ndarray:
    """d/dt of quat_rate_map along qdot (the map is linear in q)."""
    D = np.empty((3, 4))
    D[:, 0] = -2.0 * qdot.lam
    D[:, 1:] = 2.0 * (qdot.lam0 * np.eye(3) - cross_matrix(qdot.lam))
    return D


def quat_to_fedorov(q: Quaternion) -> np.ndarray:
    """f = lam / lam0; undefined at lam0 = 0 (rotation angle pi)."""
    if abs(q.lam0) < CAYLEY_TOL:
        raise ParameterizationSingularity(
            "Cayley vector undefined at rotation angle pi (lam0 ~ 0)"
        )
    return q.lam / q.lam0
