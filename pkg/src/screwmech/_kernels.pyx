# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled stepping kernels.

Same functions, array layouts and operation order as the pure-Python backend
module; see that file for the layout notes. Selected at import time by the
backend shim.
"""

import numpy as np

from libc.math cimport sqrt

BACKEND_NAME = "compiled"

JOINT_DOF = (1, 1, 6)


cdef void _quat_to_C(double q0, double q1, double q2, double q3, double[:, ::1] C) noexcept:
    cdef double n = sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3)
    cdef double l0 = q0 / n, l1 = q1 / n, l2 = q2 / n, l3 = q3 / n
    C[0, 0] = 1.0 - 2.0 * (l2 * l2 + l3 * l3)
    C[0, 1] = 2.0 * (l1 * l2 - l0 * l3)
    C[0, 2] = 2.0 * (l1 * l3 + l0 * l2)
    C[1, 0] = 2.0 * (l1 * l2 + l0 * l3)
    C[1, 1] = 1.0 - 2.0 * (l1 * l1 + l3 * l3)
    C[1, 2] = 2.0 * (l2 * l3 - l0 * l1)
    C[2, 0] = 2.0 * (l1 * l3 - l0 * l2)
    C[2, 1] = 2.0 * (l2 * l3 + l0 * l1)
    C[2, 2] = 1.0 - 2.0 * (l1 * l1 + l2 * l2)


cdef void _mul66(double[:, ::1] A, double[:, ::1] B, double[:, ::1] out) noexcept:
    cdef Py_ssize_t r, c, t
    cdef double s
    for r in range(6):
        for c in range(6):
            s = 0.0
            for t in range(6):
                s += A[r, t] * B[t, c]
            out[r, c] = s


cdef void _mv6(double[:, ::1] A, double[:] x, double[:] out) noexcept:
    cdef Py_ssize_t r, t
    cdef double s
    for r in range(6):
        s = 0.0
        for t in range(6):
            s += A[r, t] * x[t]
        out[r] = s


cdef void _wvf_T_apply(double v0, double v1, double v2, double w0, double w1, double w2,
                       double[:] x, double[:] out) noexcept:
    # out = [[-w^, -v^], [0, -w^]] x   (transpose of the wrench velocity factor)
    out[0] = -(-w2 * x[1] + w1 * x[2]) - (-v2 * x[4] + v1 * x[5])
    out[1] = -(w2 * x[0] - w0 * x[2]) - (v2 * x[3] - v0 * x[5])
    out[2] = -(-w1 * x[0] + w0 * x[1]) - (-v1 * x[3] + v0 * x[4])
    out[3] = -(-w2 * x[4] + w1 * x[5])
    out[4] = -(w2 * x[3] - w0 * x[5])
    out[5] = -(-w1 * x[3] + w0 * x[4])


cdef int _chol_solve(double[:, ::1] A, double[:] b, double[:] x, Py_ssize_t n) noexcept:
    cdef Py_ssize_t i, j, p
    cdef double s
    for j in range(n):
        s = A[j, j]
        for p in range(j):
            s -= A[j, p] * A[j, p]
        if s <= 0.0:
            return 1
        A[j, j] = sqrt(s)
        for i in range(j + 1, n):
            s = A[i, j]
            for p in range(j):
                s -= A[i, p] * A[j, p]
            A[i, j] = s / A[j, j]
    for i in range(n):
        s = b[i]
        for p in range(i):
            s -= A[i, p] * x[p]
        x[i] = s / A[i, i]
    for i in range(n - 1, -1, -1):
        s = x[i]
        for p in range(i + 1, n):
            s -= A[p, i] * x[p]
        x[i] = s / A[i, i]
    return 0


cdef class _TreeWork:
    cdef long[:] parents, jtypes, offs, chain_offs, chain_flat
    cdef double[:, ::1] axes, dp, V_r, V_a
    cdef double[:, :, ::1] C_rel, C_abs, X, thetas, theta_rates
    cdef double[:, :, :, ::1] blocks
    cdef double[:, ::1] J, A_t
    cdef double[:] masses, gravity, brhs, qddot, tmp6, tmp6b, u6
    cdef double[:, ::1] mcs, rhsv, wrbuf, tmp66
    cdef double[:] wr_times
    cdef double[:, :, ::1] wr_values
    cdef Py_ssize_t k, m

    def __init__(self, parents, jtypes, axes, thetas, theta_rates, masses, mcs,
                 gravity, wr_times, wr_values):
        cdef Py_ssize_t k = parents.shape[0]
        self.k = k
        self.parents = np.ascontiguousarray(parents, dtype=np.int64)
        self.jtypes = np.ascontiguousarray(jtypes, dtype=np.int64)
        dofs = [JOINT_DOF[jt] for jt in jtypes]
        offs = np.concatenate([[0], np.cumsum(dofs)]).astype(np.int64)
        self.offs = offs
        self.m = int(offs[k])
        self.axes = np.ascontiguousarray(axes, dtype=np.float64)
        self.thetas = np.ascontiguousarray(thetas, dtype=np.float64)
        self.theta_rates = np.ascontiguousarray(theta_rates, dtype=np.float64)
        self.masses = np.ascontiguousarray(masses, dtype=np.float64)
        self.mcs = np.ascontiguousarray(mcs, dtype=np.float64)
        self.gravity = np.ascontiguousarray(gravity, dtype=np.float64)
        self.wr_times = np.ascontiguousarray(wr_times, dtype=np.float64)
        self.wr_values = np.ascontiguousarray(
            wr_values if wr_values.size else np.zeros((0, k, 6)), dtype=np.float64
        )
        # ancestor chains, root first, flattened
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
        self.chain_offs = np.concatenate(
            [[0], np.cumsum([len(c) for c in chains])]
        ).astype(np.int64)
        self.chain_flat = np.array(
            [s for c in chains for s in c], dtype=np.int64
        )
        self.C_rel = np.empty((k, 3, 3))
        self.C_abs = np.empty((k, 3, 3))
        self.X = np.zeros((k, 6, 6))
        self.dp = np.empty((k, 3))
        self.V_r = np.zeros((k, 6))
        self.V_a = np.empty((k, 6))
        self.blocks = np.empty((k, k, 6, 6))
        self.J = np.zeros((6 * k, self.m))
        self.A_t = np.zeros((self.m, self.m))
        self.brhs = np.empty(self.m)
        self.qddot = np.empty(self.m)
        self.rhsv = np.empty((k, 6))
        self.wrbuf = np.zeros((k, 6))
        self.tmp6 = np.empty(6)
        self.tmp6b = np.empty(6)
        self.u6 = np.empty(6)
        self.tmp66 = np.empty((6, 6))


cdef int _tree_rhs_core(_TreeWork W, double t, double[:] y, double[:] out) except -1:
    cdef Py_ssize_t k = W.k, m = W.m
    cdef Py_ssize_t i, j, p, s, a, b, c, ci, nt
    cdef double h, gb0, gb1, gb2, q0, q1, q2, q3, w0, w1, w2
    cdef double[:] qdot = y[7 * k : 7 * k + m]

    # relative rotations, translations, joint-subspace twists
    for i in range(k):
        _quat_to_C(y[4 * i], y[4 * i + 1], y[4 * i + 2], y[4 * i + 3], W.C_rel[i])
        for a in range(3):
            W.dp[i, a] = y[4 * k + 3 * i + a]
        for a in range(6):
            W.V_r[i, a] = 0.0
        if W.jtypes[i] == 0:
            for a in range(3):
                W.V_r[i, 3 + a] = W.axes[i, a] * qdot[W.offs[i]]
        elif W.jtypes[i] == 1:
            for a in range(3):
                W.V_r[i, a] = W.axes[i, a] * qdot[W.offs[i]]
        else:
            for a in range(6):
                W.V_r[i, a] = qdot[W.offs[i] + a]

    # twist maps across each edge, absolute rotations and twists
    for i in range(k):
        # X = [[C^T, -dp^ C^T], [0, C^T]]
        for a in range(3):
            for b in range(3):
                W.X[i, a, b] = W.C_rel[i, b, a]
                W.X[i, 3 + a, 3 + b] = W.C_rel[i, b, a]
        for b in range(3):
            W.X[i, 0, 3 + b] = -(-W.dp[i, 2] * W.C_rel[i, b, 1] + W.dp[i, 1] * W.C_rel[i, b, 2])
            W.X[i, 1, 3 + b] = -(W.dp[i, 2] * W.C_rel[i, b, 0] - W.dp[i, 0] * W.C_rel[i, b, 2])
            W.X[i, 2, 3 + b] = -(-W.dp[i, 1] * W.C_rel[i, b, 0] + W.dp[i, 0] * W.C_rel[i, b, 1])
        p = W.parents[i]
        if p == 0:
            for a in range(3):
                for b in range(3):
                    W.C_abs[i, a, b] = W.C_rel[i, a, b]
            for a in range(6):
                W.V_a[i, a] = W.V_r[i, a]
        else:
            for a in range(3):
                for b in range(3):
                    h = 0.0
                    for c in range(3):
                        h += W.C_abs[p - 1, a, c] * W.C_rel[i, c, b]
                    W.C_abs[i, a, b] = h
            _mv6(W.X[i], W.V_a[p - 1], W.tmp6)
            for a in range(6):
                W.V_a[i, a] = W.tmp6[a] + W.V_r[i, a]

    # wrench table interpolation
    nt = W.wr_times.shape[0]
    if nt > 0:
        if t <= W.wr_times[0]:
            for i in range(k):
                for a in range(6):
                    W.wrbuf[i, a] = W.wr_values[0, i, a]
        elif t >= W.wr_times[nt - 1]:
            for i in range(k):
                for a in range(6):
                    W.wrbuf[i, a] = W.wr_values[nt - 1, i, a]
        else:
            j = nt - 2
            for ci in range(nt - 1):
                if t < W.wr_times[ci + 1]:
                    j = ci
                    break
            h = (t - W.wr_times[j]) / (W.wr_times[j + 1] - W.wr_times[j])
            for i in range(k):
                for a in range(6):
                    W.wrbuf[i, a] = (1.0 - h) * W.wr_values[j, i, a] + h * W.wr_values[j + 1, i, a]

    # applied wrench minus Newton-Euler bias per body
    for i in range(k):
        gb0 = W.C_abs[i, 0, 0] * W.gravity[0] + W.C_abs[i, 1, 0] * W.gravity[1] + W.C_abs[i, 2, 0] * W.gravity[2]
        gb1 = W.C_abs[i, 0, 1] * W.gravity[0] + W.C_abs[i, 1, 1] * W.gravity[1] + W.C_abs[i, 2, 1] * W.gravity[2]
        gb2 = W.C_abs[i, 0, 2] * W.gravity[0] + W.C_abs[i, 1, 2] * W.gravity[1] + W.C_abs[i, 2, 2] * W.gravity[2]
        W.rhsv[i, 0] = W.masses[i] * gb0
        W.rhsv[i, 1] = W.masses[i] * gb1
        W.rhsv[i, 2] = W.masses[i] * gb2
        W.rhsv[i, 3] = W.mcs[i, 1] * gb2 - W.mcs[i, 2] * gb1
        W.rhsv[i, 4] = W.mcs[i, 2] * gb0 - W.mcs[i, 0] * gb2
        W.rhsv[i, 5] = W.mcs[i, 0] * gb1 - W.mcs[i, 1] * gb0
        if nt > 0:
            for a in range(6):
                W.rhsv[i, a] += W.wrbuf[i, a]
        # bias = (theta_rate + Phi theta) V_a; Phi x computed via the transpose helper
        _mv6(W.thetas[i], W.V_a[i], W.tmp6)
        # tmp6b = Phi(V_a) (theta V_a): Phi = [[w^,0],[v^,w^]]
        w0 = W.V_a[i, 3]
        w1 = W.V_a[i, 4]
        w2 = W.V_a[i, 5]
        W.tmp6b[0] = -w2 * W.tmp6[1] + w1 * W.tmp6[2]
        W.tmp6b[1] = w2 * W.tmp6[0] - w0 * W.tmp6[2]
        W.tmp6b[2] = -w1 * W.tmp6[0] + w0 * W.tmp6[1]
        W.tmp6b[3] = (-W.V_a[i, 2] * W.tmp6[1] + W.V_a[i, 1] * W.tmp6[2]
                      - w2 * W.tmp6[4] + w1 * W.tmp6[5])
        W.tmp6b[4] = (W.V_a[i, 2] * W.tmp6[0] - W.V_a[i, 0] * W.tmp6[2]
                      + w2 * W.tmp6[3] - w0 * W.tmp6[5])
        W.tmp6b[5] = (-W.V_a[i, 1] * W.tmp6[0] + W.V_a[i, 0] * W.tmp6[1]
                      - w1 * W.tmp6[3] + w0 * W.tmp6[4])
        _mv6(W.theta_rates[i], W.V_a[i], W.tmp6)
        for a in range(6):
            W.rhsv[i, a] -= W.tmp6[a] + W.tmp6b[a]

    # pairwise twist maps down each ancestor chain
    for i in range(k):
        for a in range(6):
            for b in range(6):
                W.blocks[i, i, a, b] = 1.0 if a == b else 0.0
        for ci in range(W.chain_offs[i], W.chain_offs[i + 1] - 1):
            s = W.chain_flat[ci]
            _mul66(W.X[i], W.blocks[W.parents[i] - 1, s], W.tmp66)
            for a in range(6):
                for b in range(6):
                    W.blocks[i, s, a, b] = W.tmp66[a, b]

    # J = L N, joint-space mass matrix and right-hand side
    for a in range(6 * k):
        for b in range(m):
            W.J[a, b] = 0.0
    for i in range(k):
        for ci in range(W.chain_offs[i], W.chain_offs[i + 1]):
            s = W.chain_flat[ci]
            if W.jtypes[s] == 0:
                for a in range(6):
                    W.J[6 * i + a, W.offs[s]] = (
                        W.blocks[i, s, a, 3] * W.axes[s, 0]
                        + W.blocks[i, s, a, 4] * W.axes[s, 1]
                        + W.blocks[i, s, a, 5] * W.axes[s, 2]
                    )
            elif W.jtypes[s] == 1:
                for a in range(6):
                    W.J[6 * i + a, W.offs[s]] = (
                        W.blocks[i, s, a, 0] * W.axes[s, 0]
                        + W.blocks[i, s, a, 1] * W.axes[s, 1]
                        + W.blocks[i, s, a, 2] * W.axes[s, 2]
                    )
            else:
                for a in range(6):
                    for b in range(6):
                        W.J[6 * i + a, W.offs[s] + b] = W.blocks[i, s, a, b]

    for a in range(m):
        W.brhs[a] = 0.0
        for b in range(m):
            W.A_t[a, b] = 0.0

    for i in range(k):
        # convective kinematics term u = sum_s d/dt(L_{i,s}) V_r[s]
        for a in range(6):
            W.u6[a] = 0.0
        for ci in range(W.chain_offs[i], W.chain_offs[i + 1] - 1):
            s = W.chain_flat[ci]
            _mv6(W.blocks[i, s], W.V_a[s], W.tmp6)
            for a in range(6):
                W.tmp6[a] = W.V_a[i, a] - W.tmp6[a]
            _mv6(W.blocks[i, s], W.V_r[s], W.tmp6b)
            _wvf_T_apply(W.tmp6[0], W.tmp6[1], W.tmp6[2], W.tmp6[3], W.tmp6[4], W.tmp6[5],
                         W.tmp6b, W.tmp6)
            for a in range(6):
                W.u6[a] += W.tmp6[a]
        _mv6(W.thetas[i], W.u6, W.tmp6)
        for a in range(6):
            W.rhsv[i, a] -= W.tmp6[a]
        # A_t += J_i^T theta_i J_i; brhs += J_i^T rhsv_i
        for a in range(6):
            h = 0.0
            for b in range(6):
                h += W.thetas[i, a, b] * W.rhsv[i, b]
            W.tmp6[a] = h  # unused scratch to keep theta*J below simple
        for b in range(m):
            for a in range(6):
                h = 0.0
                for c in range(6):
                    h += W.thetas[i, a, c] * W.J[6 * i + c, b]
                W.tmp6b[a] = h
            for a in range(m):
                h = 0.0
                for c in range(6):
                    h += W.J[6 * i + c, a] * W.tmp6b[c]
                W.A_t[a, b] += h
        for a in range(m):
            h = 0.0
            for c in range(6):
                h += W.J[6 * i + c, a] * W.rhsv[i, c]
            W.brhs[a] += h

    if _chol_solve(W.A_t, W.brhs, W.qddot, m) != 0:
        raise ValueError("projected mass matrix is not positive definite")

    # kinematic rates
    for i in range(k):
        q0 = y[4 * i]
        q1 = y[4 * i + 1]
        q2 = y[4 * i + 2]
        q3 = y[4 * i + 3]
        w0 = W.V_r[i, 3]
        w1 = W.V_r[i, 4]
        w2 = W.V_r[i, 5]
        out[4 * i] = 0.5 * (-q1 * w0 - q2 * w1 - q3 * w2)
        out[4 * i + 1] = 0.5 * (q0 * w0 + q2 * w2 - q3 * w1)
        out[4 * i + 2] = 0.5 * (q0 * w1 + q3 * w0 - q1 * w2)
        out[4 * i + 3] = 0.5 * (q0 * w2 + q1 * w1 - q2 * w0)
        out[4 * k + 3 * i] = W.V_r[i, 0] - (w1 * W.dp[i, 2] - w2 * W.dp[i, 1])
        out[4 * k + 3 * i + 1] = W.V_r[i, 1] - (w2 * W.dp[i, 0] - w0 * W.dp[i, 2])
        out[4 * k + 3 * i + 2] = W.V_r[i, 2] - (w0 * W.dp[i, 1] - w1 * W.dp[i, 0])
    for a in range(m):
        out[7 * k + a] = W.qddot[a]
    return 0


def tree_rhs(t, y, parents, jtypes, axes, thetas, theta_rates, masses, mcs,
             gravity, wr_times, wr_values):
    """Time derivative of the packed tree state under joint projection."""
    W = _TreeWork(parents, jtypes, axes, thetas, theta_rates, masses, mcs,
                  gravity, np.asarray(wr_times, dtype=float),
                  np.asarray(wr_values, dtype=float))
    y = np.ascontiguousarray(y, dtype=float)
    out = np.zeros_like(y)
    _tree_rhs_core(W, float(t), y, out)
    return out


def simulate_tree(y0, t0, dt, nsteps, stride, parents, jtypes, axes, thetas,
                  theta_rates, masses, mcs, gravity, wr_times, wr_values):
    """RK4 drive of the tree kernel; records every `stride` steps."""
    cdef Py_ssize_t n, i, a, nrec, rec
    cdef double tt, tdt = dt, tt0 = t0
    W = _TreeWork(parents, jtypes, axes, thetas, theta_rates, masses, mcs,
                  gravity, np.asarray(wr_times, dtype=float),
                  np.asarray(wr_values, dtype=float))
    cdef Py_ssize_t k = W.k
    y_arr = np.array(y0, dtype=float)
    cdef double[:] y = y_arr
    cdef Py_ssize_t nl = y_arr.shape[0]
    k1 = np.zeros(nl); k2 = np.zeros(nl); k3 = np.zeros(nl); k4 = np.zeros(nl)
    ytmp = np.zeros(nl)
    cdef double[:] vk1 = k1, vk2 = k2, vk3 = k3, vk4 = k4, vtmp = ytmp
    nrec = nsteps // stride + 1
    times = np.empty(nrec)
    states = np.empty((nrec, nl))
    cdef double[:] vtimes = times
    cdef double[:, ::1] vstates = states
    vtimes[0] = t0
    for a in range(nl):
        vstates[0, a] = y[a]
    rec = 1
    tt = tt0
    cdef double norm
    for n in range(1, nsteps + 1):
        _tree_rhs_core(W, tt, y, vk1)
        for a in range(nl):
            vtmp[a] = y[a] + 0.5 * tdt * vk1[a]
        _tree_rhs_core(W, tt + 0.5 * tdt, vtmp, vk2)
        for a in range(nl):
            vtmp[a] = y[a] + 0.5 * tdt * vk2[a]
        _tree_rhs_core(W, tt + 0.5 * tdt, vtmp, vk3)
        for a in range(nl):
            vtmp[a] = y[a] + tdt * vk3[a]
        _tree_rhs_core(W, tt + tdt, vtmp, vk4)
        for a in range(nl):
            y[a] = y[a] + (tdt / 6.0) * (vk1[a] + 2.0 * vk2[a] + 2.0 * vk3[a] + vk4[a])
        for i in range(k):
            norm = sqrt(y[4 * i] ** 2 + y[4 * i + 1] ** 2 + y[4 * i + 2] ** 2 + y[4 * i + 3] ** 2)
            for a in range(4):
                y[4 * i + a] = y[4 * i + a] / norm
        tt = tt0 + n * tdt
        if n % stride == 0:
            vtimes[rec] = tt
            for a in range(nl):
                vstates[rec, a] = y[a]
            rec += 1
    return times, states


# --- point clouds ---


cdef void _points_rhs_core(double t, double[:] y, double[:] m0s, double[:] nus,
                           double[:, ::1] exhausts, double gamma, double[:] gravity,
                           double[:, ::1] fconst, double[:, ::1] fbuf, double[:] out) noexcept:
    cdef Py_ssize_t n = m0s.shape[0]
    cdef Py_ssize_t i, j, a
    cdef double d0, d1, d2, r2, r, c, rho_i
    for i in range(n):
        for a in range(3):
            fbuf[i, a] = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            d0 = y[3 * j] - y[3 * i]
            d1 = y[3 * j + 1] - y[3 * i + 1]
            d2 = y[3 * j + 2] - y[3 * i + 2]
            r2 = d0 * d0 + d1 * d1 + d2 * d2
            r = sqrt(r2)
            c = gamma * (m0s[i] + nus[i] * t) * (m0s[j] + nus[j] * t) / (r2 * r)
            fbuf[i, 0] += c * d0
            fbuf[i, 1] += c * d1
            fbuf[i, 2] += c * d2
            fbuf[j, 0] -= c * d0
            fbuf[j, 1] -= c * d1
            fbuf[j, 2] -= c * d2
    for i in range(n):
        rho_i = m0s[i] + nus[i] * t
        for a in range(3):
            out[3 * i + a] = y[3 * n + 3 * i + a]
            out[3 * n + 3 * i + a] = (
                (fbuf[i, a] + fconst[i, a] + nus[i] * exhausts[i, a]) / rho_i + gravity[a]
            )


def points_rhs(t, y, m0s, nus, exhausts, gamma, gravity, fconst):
    """Time derivative of the packed point-cloud state."""
    y = np.ascontiguousarray(y, dtype=float)
    m0s = np.ascontiguousarray(m0s, dtype=float)
    n = m0s.shape[0]
    fbuf = np.zeros((n, 3))
    out = np.empty_like(y)
    _points_rhs_core(
        float(t), y, m0s, np.ascontiguousarray(nus, dtype=float),
        np.ascontiguousarray(exhausts, dtype=float), float(gamma),
        np.ascontiguousarray(gravity, dtype=float),
        np.ascontiguousarray(fconst, dtype=float), fbuf, out,
    )
    return out


def simulate_points(y0, t0, dt, nsteps, stride, m0s, nus, exhausts, gamma, gravity, fconst):
    """RK4 drive of the point kernel; records every `stride` steps."""
    cdef Py_ssize_t n, a, nrec, rec, np_
    cdef double tt, tdt = dt, tt0 = t0, g = gamma
    y_arr = np.array(y0, dtype=float)
    cdef double[:] y = y_arr
    cdef Py_ssize_t nl = y_arr.shape[0]
    m0s = np.ascontiguousarray(m0s, dtype=float)
    nus = np.ascontiguousarray(nus, dtype=float)
    exhausts = np.ascontiguousarray(exhausts, dtype=float)
    gravity = np.ascontiguousarray(gravity, dtype=float)
    fconst = np.ascontiguousarray(fconst, dtype=float)
    cdef double[:] vm0 = m0s, vnu = nus, vg = gravity
    cdef double[:, ::1] vex = exhausts, vfc = fconst
    np_ = m0s.shape[0]
    fbuf = np.zeros((np_, 3))
    cdef double[:, ::1] vfbuf = fbuf
    k1 = np.zeros(nl); k2 = np.zeros(nl); k3 = np.zeros(nl); k4 = np.zeros(nl)
    ytmp = np.zeros(nl)
    cdef double[:] vk1 = k1, vk2 = k2, vk3 = k3, vk4 = k4, vtmp = ytmp
    nrec = nsteps // stride + 1
    times = np.empty(nrec)
    states = np.empty((nrec, nl))
    cdef double[:] vtimes = times
    cdef double[:, ::1] vstates = states
    vtimes[0] = t0
    for a in range(nl):
        vstates[0, a] = y[a]
    rec = 1
    tt = tt0
    for n in range(1, nsteps + 1):
        _points_rhs_core(tt, y, vm0, vnu, vex, g, vg, vfc, vfbuf, vk1)
        for a in range(nl):
            vtmp[a] = y[a] + 0.5 * tdt * vk1[a]
        _points_rhs_core(tt + 0.5 * tdt, vtmp, vm0, vnu, vex, g, vg, vfc, vfbuf, vk2)
        for a in range(nl):
            vtmp[a] = y[a] + 0.5 * tdt * vk2[a]
        _points_rhs_core(tt + 0.5 * tdt, vtmp, vm0, vnu, vex, g, vg, vfc, vfbuf, vk3)
        for a in range(nl):
            vtmp[a] = y[a] + tdt * vk3[a]
        _points_rhs_core(tt + tdt, vtmp, vm0, vnu, vex, g, vg, vfc, vfbuf, vk4)
        for a in range(nl):
            y[a] = y[a] + (tdt / 6.0) * (vk1[a] + 2.0 * vk2[a] + 2.0 * vk3[a] + vk4[a])
        tt = tt0 + n * tdt
        if n % stride == 0:
            vtimes[rec] = tt
            for a in range(nl):
                vstates[rec, a] = y[a]
            rec += 1
    return times, states
