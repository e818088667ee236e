"""Run validated models through the stepping kernels and write results.

Output is deterministic for a given model, settings and backend: numbers are
printed with %.17g (full double round trip), the sidecar JSON carries the
model hash and run settings with sorted keys, and nothing time- or
host-dependent is recorded. Rerunning a model must reproduce the output
byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from ._backend import BACKEND, simulate_points, simulate_tree
from .errors import InvariantViolation, NumericalError
from .frames import VelocityState, wrench_transform
from .model import Model
from .points import MassPoint, kinetic_energy, momentum_summary
from .trees import (
    FREE6,
    MultibodyTree,
    SystemState,
    absolute_poses,
    compose_velocities,
    joint_rates,
    loop_residual,
)

_JTYPE_CODE = {"revolute": 0, "prismatic": 1, FREE6: 2}


def tree_arrays(tree: MultibodyTree):
    """Flat kernel parameter arrays for a tree."""
    k = tree.k
    parents = np.array([b.parent for b in tree.bodies], dtype=np.int64)
    jtypes = np.array([_JTYPE_CODE[b.joint.kind] for b in tree.bodies], dtype=np.int64)
    axes = np.zeros((k, 3))
    thetas = np.zeros((k, 6, 6))
    theta_rates = np.zeros((k, 6, 6))
    masses = np.zeros(k)
    mcs = np.zeros((k, 3))
    for i, b in enumerate(tree.bodies):
        if b.joint.axis is not None:
            axes[i] = b.joint.axis
        thetas[i] = b.inertia.theta
        theta_rates[i] = b.inertia.theta_rate
        masses[i] = b.inertia.total_mass
        mcs[i] = b.inertia.first_moment
    return parents, jtypes, axes, thetas, theta_rates, masses, mcs


def pack_tree_state(tree: MultibodyTree, state: SystemState) -> np.ndarray:
    """Kernel state vector: quaternions, child translations, joint rates."""
    st = state if state.kind == "quaternion" else state.converted("quaternion")
    parts = list(st.orient) + list(st.trans) + [joint_rates(tree, st)]
    return np.concatenate(parts)


def unpack_tree_state(tree: MultibodyTree, y: np.ndarray) -> SystemState:
    k = tree.k
    orient = [y[4 * i : 4 * i + 4] for i in range(k)]
    trans = [y[4 * k + 3 * i : 4 * k + 3 * i + 3] for i in range(k)]
    qdot = y[7 * k :]
    vel, off = [], 0
    for b in tree.bodies:
        d = b.joint.dof
        tw = b.joint.subspace @ qdot[off : off + d]
        vel.append(VelocityState(tw[:3], tw[3:]))
        off += d
    return SystemState("quaternion", orient, trans, vel)


def tree_energy_momentum(tree: MultibodyTree, state: SystemState):
    """Total kinetic energy and the 6-momentum at the world origin."""
    poses = absolute_poses(tree, state)
    vels = compose_velocities(tree, state)
    e = 0.0
    p6 = np.zeros(6)
    for body, pose, vel in zip(tree.bodies, poses, vels):
        e += body.inertia.kinetic_energy(vel)
        p6 += wrench_transform(pose).matrix @ body.inertia.momentum(vel)
    return e, p6


@dataclass
class RunResult:
    times: np.ndarray
    states: np.ndarray
    columns: list
    rows: list
    summary: dict


def _check_finite(states: np.ndarray) -> None:
    if not np.all(np.isfinite(states)):
        raise NumericalError(
            "simulation produced non-finite state values (blow-up or division by zero)"
        )


def _run_tree(model: Model) -> RunResult:
    tree = model.tree
    s = model.settings
    y0 = pack_tree_state(tree, model.state0)
    args = tree_arrays(tree)
    try:
        times, states = simulate_tree(
            y0, 0.0, s.dt, s.nsteps, s.record_every, *args,
            model.gravity, model.wrench_times, model.wrench_values,
        )
    except ValueError as e:
        raise NumericalError(str(e))
    _check_finite(states)

    k = tree.k
    columns = ["time"]
    for i in range(1, k + 1):
        columns += [f"body{i}_quat{j}" for j in range(4)]
        columns += [f"body{i}_pos{a}" for a in "xyz"]
        columns += [f"body{i}_v{a}" for a in "xyz"]
        columns += [f"body{i}_w{a}" for a in "xyz"]
    columns += ["kinetic_energy"]
    columns += [f"momentum_{a}" for a in "xyz"] + [f"moment_{a}" for a in "xyz"]

    from .rotations import quat_from_rotation

    rows = []
    worst_loop = 0.0
    for t, y in zip(times, states):
        st = unpack_tree_state(tree, y)
        poses = absolute_poses(tree, st)
        e, p6 = tree_energy_momentum(tree, st)
        row = [t]
        for pose, vel in zip(poses, compose_velocities(tree, st)):
            row += list(quat_from_rotation(pose.C).as4())
            row += list(pose.d0)
            row += list(vel.v) + list(vel.w)
        row += [e] + list(p6)
        rows.append(row)
        for closure in tree.loops:
            dres, rres = loop_residual(tree, st, closure)
            worst_loop = max(worst_loop, np.abs(dres).max(), np.abs(rres).max())
    if tree.loops and worst_loop > model.loop_tolerance:
        raise InvariantViolation(
            f"loop closure residual {worst_loop:.3e} exceeds tolerance "
            f"{model.loop_tolerance:.0e}; the tree motion no longer satisfies the closures"
        )
    summary = {
        "rows": len(rows),
        "kinetic_energy_first": rows[0][-7],
        "kinetic_energy_last": rows[-1][-7],
        "loop_residual_max": worst_loop,
    }
    return RunResult(times, states, columns, rows, summary)


def _run_points(model: Model) -> RunResult:
    s = model.settings
    pts = model.points
    n = len(pts)
    y0 = np.concatenate([np.concatenate([p.x for p in pts]), np.concatenate([p.v for p in pts])])
    m0s = np.array([p.rho for p in pts])
    nus = np.array([p.nu for p in pts])
    try:
        times, states = simulate_points(
            y0, 0.0, s.dt, s.nsteps, s.record_every,
            m0s, nus, model.exhausts, model.gamma, model.gravity, model.forces,
        )
    except ValueError as e:
        raise NumericalError(str(e))
    _check_finite(states)

    columns = ["time"]
    for i in range(1, n + 1):
        columns += [f"point{i}_pos{a}" for a in "xyz"]
        columns += [f"point{i}_vel{a}" for a in "xyz"]
        columns += [f"point{i}_mass"]
    columns += ["kinetic_energy"]
    columns += [f"momentum_{a}" for a in "xyz"] + [f"moment_{a}" for a in "xyz"]

    rows = []
    for t, y in zip(times, states):
        cur = [
            MassPoint(y[3 * i : 3 * i + 3], y[3 * n + 3 * i : 3 * n + 3 * i + 3], m0s[i] + nus[i] * t, nus[i])
            for i in range(n)
        ]
        red = momentum_summary(cur)
        row = [t]
        for p in cur:
            row += list(p.x) + list(p.v) + [p.rho]
        row += [kinetic_energy(cur)] + list(red.p) + list(red.q)
        rows.append(row)
    summary = {
        "rows": len(rows),
        "kinetic_energy_first": rows[0][-7],
        "kinetic_energy_last": rows[-1][-7],
    }
    return RunResult(times, states, columns, rows, summary)


def run_model(model: Model) -> RunResult:
    if model.scenario in ("multibody", "rigid_body"):
        return _run_tree(model)
    return _run_points(model)


def write_csv(path: str, result: RunResult) -> None:
    with open(path, "w", newline="") as f:
        f.write(",".join(result.columns) + "\n")
        for row in result.rows:
            f.write(",".join("%.17g" % v for v in row) + "\n")


def write_sidecar(path: str, model: Model, result: RunResult, csv_name: str) -> None:
    doc = {
        "model_name": model.name,
        "model_sha256": model.sha256,
        "scenario": model.scenario,
        "settings": {
            "t_end": model.settings.t_end,
            "dt": model.settings.dt,
            "record_every": model.settings.record_every,
        },
        "backend": BACKEND,
        "package_version": __version__,
        "columns": result.columns,
        "output": csv_name,
        "rows": result.summary["rows"],
    }
    with open(path, "w", newline="") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")
