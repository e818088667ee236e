"""Pure-Python simulation kernels.

Flat-array stepping loops for the simulator: a joint-projected tree
integrator (quaternion edge orientations) and a variable-mass point-cloud
integrator. The compiled extension exposes the same functions with the same
operation ordering; either backend can serve, selected at import time.

Tree state vector layout: k quaternions (4k), k child-frame translations
(3k), then the stacked joint rates (m). Point state layout: n positions
(3n) then n velocities (3n); masses follow their closed-form linear law.

Joint type codes: 0 revolute, 1 prismatic, 2 free6.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

JOINT_DOF = (1, 1, 6)


def _quat_to_rotation(q):
    n = np.sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3])
    l0 = q[0] / n
    l1 = q[1] / n
    l2 = q[2] / n
    l3 = q[3] / n
    C = np.empty((3, 3))
    C[0, 0] = 1.0 - 2.0 * (l2 * l2 + l3 * l3)
    C[0, 1] = 2.0 * (l1 * l2 - l0 * l3)
    C[0, 2] = 2.0 * (l1 * l3 + l0 * l2)
    C[1, 0] = 2.0 * (l1 * l2 + l0 * l3)
    C[1, 1] = 1.0 - 2.0 * (l1 * l1 + l3 * l3)
    C[1, 2] = 2.0 * (l2 * l3 - l0 * l1)
    C[2, 0] = 2.0 * (l1 * l3 - l0 * l2)
    C[2, 1] = 2.0 * (l2 * l3 + l0 * l1)
    C[2, 2] = 1.0 - 2.0 * (l1 * l1 + l2 * l2)
    return C


def _cross_mat(a):
    return np.array([[0.0, -a[2], a[1]], [a[2], 0.0, -a[0]], [-a[1], a[0], 0.0]])


def _wvf_T(v, w):
    """Transpose of the wrench velocity factor [[w^, 0], [v^, w^]]."""
    M = np.zeros((6, 6))
    wx = _cross_mat(w)
    vx = _cross_mat(v)
    M[:3, :3] = -wx
    M[:3, 3:] = -vx
    M[3:, 3:] = -wx
    return M


def _interp_table(t, times, values):
    """Piecewise-linear lookup with clamped ends; values shaped (nt, ...)."""
    nt = times.shape[0]
    if nt == 0:
        return 0.0
    if t <= times[0]:
        return values[0]
    if t >= times[nt - 1]:
        return values[nt - 1]
    j = int(np.searchsorted(times, t, side="right")) - 1
    h = (t - times[j]) / (times[j + 1] - times[j])
    return (1.0 - h) * values[j] + h * values[j + 1]


def tree_rhs(
    t,
    y,
    parents,
    jtypes,
    axes,
    thetas,
    theta_rates,
    masses,
    mcs,
    gravity,
    wr_times,
    wr_values,
):
    """Time derivative of the packed tree state under joint projection."""
    k = parents.shape[0]
    dofs = [JOINT_DOF[jt] for jt in jtypes]
    offs = np.concatenate([[0], np.cumsum(dofs)])
    m = int(offs[-1])
    qdot = y[7 * k : 7 * k + m]

    C_rel = np.empty((k, 3, 3))
    dp = np.empty((k, 3))
    V_r = np.zeros((k, 6))
    for i in range(k):
        C_rel[i] = _quat_to_rotation(y[4 * i : 4 * i + 4])
        dp[i] = y[4 * k + 3 * i : 4 * k + 3 * i + 3]
        r = qdot[offs[i] : offs[i + 1]]
        if jtypes[i] == 0:
            V_r[i, 3:] = axes[i] * r[0]
        elif jtypes[i] == 1:
            V_r[i, :3] = axes[i] * r[0]
        else:
            V_r[i] = r

    # absolute rotations (for gravity) and absolute twists
    C_abs = np.empty((k, 3, 3))
    V_a = np.empty((k, 6))
    X = np.empty((k, 6, 6))
    for i in range(k):
        CT = C_rel[i].T
        X[i, :3, :3] = CT
        X[i, :3, 3:] = -_cross_mat(dp[i]) @ CT
        X[i, 3:, :3] = 0.0
        X[i, 3:, 3:] = CT
        p = parents[i]
        if p == 0:
            C_abs[i] = C_rel[i]
            V_a[i] = V_r[i]
        else:
            C_abs[i] = C_abs[p - 1] @ C_rel[i]
            V_a[i] = X[i] @ V_a[p - 1] + V_r[i]

    # applied wrench and Newton-Euler bias per body
    wr = _interp_table(t, wr_times, wr_values)
    rhsv = np.empty((k, 6))
    for i in range(k):
        gb = C_abs[i].T @ gravity
        F = np.empty(6)
        F[:3] = masses[i] * gb
        F[3:] = np.cross(mcs[i], gb)
        if wr_times.shape[0] > 0:
            F = F + wr[i]
        bias = (theta_rates[i] + _wvf_T(V_a[i, :3], V_a[i, 3:]).T @ thetas[i]) @ V_a[i]
        rhsv[i] = F - bias

    # pairwise twist maps down each ancestor chain
    chains = []
    for i in range(k):
        c = []
        j = i
        while True:
            c.append(j)
            p = parents[j]
            if p == 0:
                break
            j = p - 1
        chains.append(c[::-1])

    blocks = [dict() for _ in range(k)]
    for i in range(k):
        blocks[i][i] = np.eye(6)
        for s in chains[i][:-1]:
            blocks[i][s] = X[i] @ blocks[parents[i] - 1][s]

    J = np.zeros((6 * k, m))
    for i in range(k):
        for s in chains[i]:
            B = blocks[i][s]
            if jtypes[s] == 0:
                J[6 * i : 6 * i + 6, offs[s]] = B[:, 3:] @ axes[s]
            elif jtypes[s] == 1:
                J[6 * i : 6 * i + 6, offs[s]] = B[:, :3] @ axes[s]
            else:
                J[6 * i : 6 * i + 6, offs[s] : offs[s] + 6] = B

    A_t = np.zeros((m, m))
    brhs = np.zeros(m)
    for i in range(k):
        Ji = J[6 * i : 6 * i + 6]
        # convective kinematics: sum_s d/dt(L_{i,s}) V_r[s]
        u = np.zeros(6)
        for s in chains[i]:
            if s == i:
                continue
            B = blocks[i][s]
            diff = V_a[i] - B @ V_a[s]
            u += _wvf_T(diff[:3], diff[3:]) @ (B @ V_r[s])
        r = rhsv[i] - thetas[i] @ u
        A_t += Ji.T @ thetas[i] @ Ji
        brhs += Ji.T @ r

    qddot = np.linalg.solve(A_t, brhs)

    out = np.zeros_like(y)
    for i in range(k):
        q = y[4 * i : 4 * i + 4]
        w = V_r[i, 3:]
        out[4 * i] = 0.5 * (-q[1] * w[0] - q[2] * w[1] - q[3] * w[2])
        out[4 * i + 1] = 0.5 * (q[0] * w[0] + q[2] * w[2] - q[3] * w[1])
        out[4 * i + 2] = 0.5 * (q[0] * w[1] + q[3] * w[0] - q[1] * w[2])
        out[4 * i + 3] = 0.5 * (q[0] * w[2] + q[1] * w[1] - q[2] * w[0])
        out[4 * k + 3 * i : 4 * k + 3 * i + 3] = V_r[i, :3] - np.cross(w, dp[i])
    out[7 * k : 7 * k + m] = qddot
    return out


def simulate_tree(
    y0,
    t0,
    dt,
    nsteps,
    stride,
    parents,
    jtypes,
    axes,
    thetas,
    theta_rates,
    masses,
    mcs,
    gravity,
    wr_times,
    wr_values,
):
    """RK4 drive of tree_rhs, renormalizing quaternions after each step.

    Records every `stride` steps (the initial state included); returns
    (times, states)."""
    k = parents.shape[0]
    args = (
        parents,
        jtypes,
        axes,
        thetas,
        theta_rates,
        masses,
        mcs,
        gravity,
        wr_times,
        wr_values,
    )
    y = np.array(y0, dtype=float)
    nrec = nsteps // stride + 1
    times = np.empty(nrec)
    states = np.empty((nrec, y.shape[0]))
    times[0] = t0
    states[0] = y
    rec = 1
    t = t0
    for n in range(1, nsteps + 1):
        k1 = tree_rhs(t, y, *args)
        k2 = tree_rhs(t + 0.5 * dt, y + 0.5 * dt * k1, *args)
        k3 = tree_rhs(t + 0.5 * dt, y + 0.5 * dt * k2, *args)
        k4 = tree_rhs(t + dt, y + dt * k3, *args)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        for i in range(k):
            q = y[4 * i : 4 * i + 4]
            y[4 * i : 4 * i + 4] = q / np.linalg.norm(q)
        t = t0 + n * dt
        if n % stride == 0:
            times[rec] = t
            states[rec] = y
            rec += 1
    return times, states


def points_rhs(t, y, m0s, nus, exhausts, gamma, gravity, fconst):
    """Time derivative of the packed point-cloud state."""
    n = m0s.shape[0]
    x = y[: 3 * n].reshape(n, 3)
    v = y[3 * n :].reshape(n, 3)
    rho = m0s + nus * t

    f = np.zeros((n, 3))
    for i in range(n):
        for j in range(i + 1, n):
            d = x[j] - x[i]
            r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
            r = np.sqrt(r2)
            c = gamma * rho[i] * rho[j] / (r2 * r)
            f[i] += c * d
            f[j] -= c * d

    out = np.empty_like(y)
    out[: 3 * n] = y[3 * n :]
    for i in range(n):
        acc = (f[i] + fconst[i] + nus[i] * exhausts[i]) / rho[i] + gravity
        out[3 * n + 3 * i : 3 * n + 3 * i + 3] = acc
    return out


def simulate_points(y0, t0, dt, nsteps, stride, m0s, nus, exhausts, gamma, gravity, fconst):
    """RK4 drive of points_rhs; records every `stride` steps."""
    args = (m0s, nus, exhausts, gamma, gravity, fconst)
    y = np.array(y0, dtype=float)
    nrec = nsteps // stride + 1
    times = np.empty(nrec)
    states = np.empty((nrec, y.shape[0]))
    times[0] = t0
    states[0] = y
    rec = 1
    t = t0
    for n in range(1, nsteps + 1):
        k1 = points_rhs(t, y, *args)
        k2 = points_rhs(t + 0.5 * dt, y + 0.5 * dt * k1, *args)
        k3 = points_rhs(t + 0.5 * dt, y + 0.5 * dt * k2, *args)
        k4 = points_rhs(t + dt, y + dt * k3, *args)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t0 + n * dt
        if n % stride == 0:
            times[rec] = t
            states[rec] = y
            rec += 1
    return times, states
