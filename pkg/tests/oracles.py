"""Independent reference implementations used as test oracles.

Everything here is coded from textbook formulas only (Rodrigues rotation,
elementary rotation products, planar double-pendulum Lagrangian, Tsiolkovsky)
and deliberately avoids calling into screwmech, so agreement between the two
routes is evidence, not tautology.
"""

import numpy as np


def skew(a):
    a = np.asarray(a, dtype=float)
    return np.array([[0, -a[2], a[1]], [a[2], 0, -a[0]], [-a[1], a[0], 0.0]])


def rodrigues(u):
    """Rotation matrix for the axis-angle vector u (angle = |u|)."""
    u = np.asarray(u, dtype=float)
    th = np.linalg.norm(u)
    if th < 1e-14:
        K = skew(u)
        return np.eye(3) + K + 0.5 * (K @ K)
    K = skew(u / th)
    return np.eye(3) + np.sin(th) * K + (1.0 - np.cos(th)) * (K @ K)


def random_rotation(rng, max_angle=np.pi * 0.95):
    axis = rng.standard_normal(3)
    axis /= np.linalg.norm(axis)
    return rodrigues(axis * rng.uniform(0.0, max_angle))


def elem_rot(axis_index, angle):
    """Active elementary rotation about coordinate axis 0, 1 or 2."""
    c, s = np.cos(angle), np.sin(angle)
    if axis_index == 0:
        return np.array([[1, 0, 0], [0, c, -s], [0, s, c]])
    if axis_index == 1:
        return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def euler123(phi, theta, psi):
    """Product C1(phi) C2(theta) C3(psi) of elementary rotations."""
    return elem_rot(0, phi) @ elem_rot(1, theta) @ elem_rot(2, psi)


def quat_matrix(lam0, lam):
    """Rotation of a unit quaternion, textbook closed form."""
    lam = np.asarray(lam, dtype=float)
    return (
        (lam0 * lam0 - lam @ lam) * np.eye(3)
        + 2.0 * np.outer(lam, lam)
        + 2.0 * lam0 * skew(lam)
    )


def quat_from_axis_angle(axis, angle):
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    return np.cos(angle / 2.0), np.sin(angle / 2.0) * axis


def central_difference(f, t, h=1e-6):
    """Second-order central difference of an array-valued path."""
    return (np.asarray(f(t + h)) - np.asarray(f(t - h))) / (2.0 * h)


def rk4_step(f, t, y, h):
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_rk4(f, y0, t_end, dt):
    """Fixed-step RK4 over [0, t_end]; returns (times, states)."""
    n = int(round(t_end / dt))
    times = np.empty(n + 1)
    states = np.empty((n + 1, len(y0)))
    t, y = 0.0, np.asarray(y0, dtype=float).copy()
    times[0], states[0] = t, y
    for i in range(1, n + 1):
        y = rk4_step(f, t, y, dt)
        t = i * dt
        times[i], states[i] = t, y
    return times, states


class DoublePendulumOracle:
    """Planar double pendulum of two uniform rods, worked out by hand.

    Angles are measured from the +x axis, gravity points along -y. Rod 1
    pivots at the origin; rod 2 hangs from rod 1's tip. State vector is
    (th1, th2, th1dot, th2dot).
    """

    def __init__(self, m1, l1, m2, l2, g=9.81):
        self.m1, self.l1, self.m2, self.l2, self.g = m1, l1, m2, l2, g

    def mass_matrix(self, th1, th2):
        M11 = (self.m1 / 3.0 + self.m2) * self.l1**2
        M22 = self.m2 * self.l2**2 / 3.0
        M12 = 0.5 * self.m2 * self.l1 * self.l2 * np.cos(th1 - th2)
        return np.array([[M11, M12], [M12, M22]])

    def rhs(self, t, y):
        th1, th2, w1, w2 = y
        s12 = np.sin(th1 - th2)
        k = 0.5 * self.m2 * self.l1 * self.l2
        b1 = -k * s12 * w2**2 - self.g * (self.m1 / 2.0 + self.m2) * self.l1 * np.cos(th1)
        b2 = k * s12 * w1**2 - self.g * self.m2 * (self.l2 / 2.0) * np.cos(th2)
        acc = np.linalg.solve(self.mass_matrix(th1, th2), np.array([b1, b2]))
        return np.array([w1, w2, acc[0], acc[1]])

    def energy(self, y):
        th1, th2, w1, w2 = y
        M = self.mass_matrix(th1, th2)
        T = 0.5 * np.array([w1, w2]) @ M @ np.array([w1, w2])
        V = self.g * (
            (self.m1 * self.l1 / 2.0 + self.m2 * self.l1) * np.sin(th1)
            + self.m2 * (self.l2 / 2.0) * np.sin(th2)
        )
        return T + V


def tsiolkovsky_dv(u_rel, m0, m1):
    """Speed gained by a rocket in free space, constant relative exhaust."""
    return u_rel * np.log(m0 / m1)
