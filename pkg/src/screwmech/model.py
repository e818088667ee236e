"""Simulation model files: strict JSON loading and validation.

A model file declares one scenario (multibody, rigid_body, or masspoints),
its physical content, and integrator settings. Validation is strict: every
unknown field is rejected with its JSON path, near-miss spellings are
suggested, and all numeric shapes are checked before anything runs.

Orientation offsets and initial rotations are written as axis-angle
3-vectors (direction = axis, length = angle in radians).
"""

from __future__ import annotations

import difflib
import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .body import MassAtom, assemble_inertia
from .errors import ModelError
from .frames import FramePose, VelocityState
from .points import MassPoint, mass_rate_step
from .rotations import Quaternion, rotation_from_quat
from .trees import (
    FREE6,
    Joint,
    LoopClosure,
    MultibodyTree,
    SystemState,
    TreeBody,
    state_from_joint_coords,
)

SCENARIOS = ("multibody", "rigid_body", "masspoints")
STEP_MATCH_TOL = 1e-9


def _fail(path: str, msg: str) -> "ModelError":
    return ModelError(f"{path}: {msg}")


def _require_dict(obj, path):
    if not isinstance(obj, dict):
        raise _fail(path, f"expected an object, got {type(obj).__name__}")
    return obj


def _require_list(obj, path, min_len=0):
    if not isinstance(obj, list):
        raise _fail(path, f"expected an array, got {type(obj).__name__}")
    if len(obj) < min_len:
        raise _fail(path, f"expected at least {min_len} entries, got {len(obj)}")
    return obj


def _check_keys(obj, path, required, optional):
    known = set(required) | set(optional)
    for key in obj:
        if key not in known:
            hint = difflib.get_close_matches(key, sorted(known), n=1)
            extra = f' (did you mean "{hint[0]}"?)' if hint else ""
            raise _fail(path, f'unknown field "{key}"{extra}')
    for key in required:
        if key not in obj:
            raise _fail(path, f'missing required field "{key}"')


def _number(obj, path):
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise _fail(path, f"expected a number, got {type(obj).__name__}")
    return float(obj)


def _positive(obj, path):
    v = _number(obj, path)
    if v <= 0.0:
        raise _fail(path, f"must be positive, got {v}")
    return v


def _integer(obj, path, minimum=None):
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise _fail(path, f"expected an integer, got {type(obj).__name__}")
    if minimum is not None and obj < minimum:
        raise _fail(path, f"must be at least {minimum}, got {obj}")
    return obj


def _vec(obj, path, n):
    lst = _require_list(obj, path)
    if len(lst) != n:
        raise _fail(path, f"expected {n} numbers, got {len(lst)}")
    return np.array([_number(v, f"{path}[{i}]") for i, v in enumerate(lst)])


def _string(obj, path):
    if not isinstance(obj, str):
        raise _fail(path, f"expected a string, got {type(obj).__name__}")
    return obj


def rotation_from_axis_angle(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    angle = np.linalg.norm(v)
    if angle == 0.0:
        return np.eye(3)
    axis = v / angle
    half = 0.5 * angle
    return rotation_from_quat(Quaternion(np.cos(half), np.sin(half) * axis))


def _pose_from(obj, path, translation_key="translation") -> FramePose:
    _check_keys(obj, path, (), (translation_key, "rotation_axis_angle"))
    d = _vec(obj[translation_key], f"{path}.{translation_key}", 3) if translation_key in obj else np.zeros(3)
    C = (
        rotation_from_axis_angle(_vec(obj["rotation_axis_angle"], f"{path}.rotation_axis_angle", 3))
        if "rotation_axis_angle" in obj
        else np.eye(3)
    )
    return FramePose(C, d)


@dataclass(frozen=True)
class Settings:
    t_end: float
    dt: float
    record_every: int

    @property
    def nsteps(self) -> int:
        return int(round(self.t_end / self.dt))


@dataclass
class Model:
    """A validated scenario ready to run."""

    name: str
    scenario: str
    settings: Settings
    sha256: str
    gravity: np.ndarray
    # multibody / rigid_body
    tree: Optional[MultibodyTree] = None
    state0: Optional[SystemState] = None
    wrench_times: np.ndarray = field(default_factory=lambda: np.zeros(0))
    wrench_values: np.ndarray = field(default_factory=lambda: np.zeros((0, 0, 6)))
    loop_tolerance: float = 1e-8
    # masspoints
    points: Optional[list] = None
    exhausts: Optional[np.ndarray] = None
    forces: Optional[np.ndarray] = None
    gamma: float = 0.0


def _parse_settings(obj, path) -> Settings:
    _check_keys(_require_dict(obj, path), path, ("t_end", "dt"), ("record_every",))
    t_end = _positive(obj["t_end"], f"{path}.t_end")
    dt = _positive(obj["dt"], f"{path}.dt")
    rec = _integer(obj.get("record_every", 1), f"{path}.record_every", minimum=1)
    n = round(t_end / dt)
    if n < 1 or abs(n * dt - t_end) > STEP_MATCH_TOL * max(1.0, t_end):
        raise _fail(path, f"t_end={t_end} is not an integer number of dt={dt} steps")
    return Settings(t_end, dt, rec)


def _parse_atoms(obj, path):
    atoms = []
    for i, a in enumerate(_require_list(obj, path, min_len=1)):
        p = f"{path}[{i}]"
        _check_keys(_require_dict(a, p), p, ("position", "mass"), ("mass_rate",))
        pos = _vec(a["position"], f"{p}.position", 3)
        mass = _positive(a["mass"], f"{p}.mass")
        rate = _number(a.get("mass_rate", 0.0), f"{p}.mass_rate")
        atoms.append(MassAtom(pos, mass, rate))
    return atoms


def _parse_joint(obj, path):
    _require_dict(obj, path)
    _check_keys(
        obj,
        path,
        ("type",),
        ("axis", "offset", "coordinate", "rate", "pose", "twist"),
    )
    kind = _string(obj["type"], f"{path}.type")
    if kind not in ("revolute", "prismatic", "free6"):
        raise _fail(f"{path}.type", f'"{kind}" is not one of revolute, prismatic, free6')
    offset = (
        _pose_from(_require_dict(obj["offset"], f"{path}.offset"), f"{path}.offset")
        if "offset" in obj
        else FramePose.identity()
    )
    if kind == FREE6:
        for bad in ("axis", "coordinate", "rate"):
            if bad in obj:
                raise _fail(path, f'free6 joints take "pose"/"twist", not "{bad}"')
        pose = (
            _pose_from(_require_dict(obj["pose"], f"{path}.pose"), f"{path}.pose")
            if "pose" in obj
            else FramePose.identity()
        )
        twist = _vec(obj.get("twist", [0.0] * 6), f"{path}.twist", 6)
        try:
            return Joint(FREE6, offset=offset), pose, twist
        except ValueError as e:
            raise _fail(path, str(e))
    if "axis" not in obj:
        raise _fail(path, f'{kind} joint requires an "axis" (unit 3-vector)')
    for bad in ("pose", "twist"):
        if bad in obj:
            raise _fail(path, f'{kind} joints take "coordinate"/"rate", not "{bad}"')
    axis = _vec(obj["axis"], f"{path}.axis", 3)
    coord = _number(obj.get("coordinate", 0.0), f"{path}.coordinate")
    rate = _number(obj.get("rate", 0.0), f"{path}.rate")
    try:
        return Joint(kind, axis=axis, offset=offset), coord, rate
    except ValueError as e:
        raise _fail(path, str(e))


def _parse_wrench_table(obj, path, k):
    _check_keys(_require_dict(obj, path), path, ("times", "values"), ())
    times = [_number(t, f"{path}.times[{i}]") for i, t in enumerate(_require_list(obj["times"], f"{path}.times", 1))]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise _fail(f"{path}.times", "must be strictly increasing")
    vals = _require_list(obj["values"], f"{path}.values")
    if len(vals) != len(times):
        raise _fail(f"{path}.values", f"need one entry per time ({len(times)}), got {len(vals)}")
    out = np.zeros((len(times), k, 6))
    for i, row in enumerate(vals):
        row = _require_list(row, f"{path}.values[{i}]")
        if len(row) != k:
            raise _fail(f"{path}.values[{i}]", f"need one 6-column per body ({k}), got {len(row)}")
        for j, w in enumerate(row):
            out[i, j] = _vec(w, f"{path}.values[{i}][{j}]", 6)
    return np.array(times), out


def _parse_multibody(doc, name, settings, sha, path="") -> Model:
    _check_keys(
        doc,
        "model",
        ("scenario", "settings", "bodies"),
        ("name", "gravity", "wrench_table", "loops", "loop_tolerance"),
    )
    gravity = _vec(doc.get("gravity", [0.0, 0.0, 0.0]), "model.gravity", 3)
    bodies_raw = _require_list(doc["bodies"], "model.bodies", min_len=1)
    tree_bodies, coords, rates = [], [], []
    for i, b in enumerate(bodies_raw):
        p = f"model.bodies[{i}]"
        _check_keys(_require_dict(b, p), p, ("atoms", "parent", "joint"), ("name",))
        atoms = _parse_atoms(b["atoms"], f"{p}.atoms")
        parent = _integer(b["parent"], f"{p}.parent", minimum=0)
        if parent > i:
            raise _fail(f"{p}.parent", f"parent {parent} is not an earlier body (bodies are 1-based, 0 is ground)")
        joint, coord, rate = _parse_joint(b["joint"], f"{p}.joint")
        tree_bodies.append(TreeBody(assemble_inertia(atoms), atoms, parent, joint))
        coords.append(coord)
        rates.append(rate)
    loops = []
    if "loops" in doc:
        for i, l in enumerate(_require_list(doc["loops"], "model.loops")):
            p = f"model.loops[{i}]"
            _check_keys(_require_dict(l, p), p, ("body_a", "body_b"), ("attach_translation", "attach_rotation_axis_angle"))
            a = _integer(l["body_a"], f"{p}.body_a", minimum=0)
            bb = _integer(l["body_b"], f"{p}.body_b", minimum=0)
            if a > len(tree_bodies) or bb > len(tree_bodies):
                raise _fail(p, f"loop endpoints must be <= {len(tree_bodies)}")
            d = _vec(l.get("attach_translation", [0, 0, 0]), f"{p}.attach_translation", 3)
            C = rotation_from_axis_angle(
                _vec(l.get("attach_rotation_axis_angle", [0, 0, 0]), f"{p}.attach_rotation_axis_angle", 3)
            )
            loops.append(LoopClosure(a, bb, FramePose(C, d)))
    tree = MultibodyTree(tree_bodies, loops)
    state0 = state_from_joint_coords(tree, coords, rates)
    wt, wv = (
        _parse_wrench_table(doc["wrench_table"], "model.wrench_table", tree.k)
        if "wrench_table" in doc
        else (np.zeros(0), np.zeros((0, tree.k, 6)))
    )
    loop_tol = _positive(doc.get("loop_tolerance", 1e-8), "model.loop_tolerance")
    return Model(
        name=name,
        scenario="multibody",
        settings=settings,
        sha256=sha,
        gravity=gravity,
        tree=tree,
        state0=state0,
        wrench_times=wt,
        wrench_values=wv,
        loop_tolerance=loop_tol,
    )


def _parse_rigid(doc, name, settings, sha) -> Model:
    _check_keys(doc, "model", ("scenario", "settings", "body"), ("name", "gravity", "wrench_table"))
    gravity = _vec(doc.get("gravity", [0.0, 0.0, 0.0]), "model.gravity", 3)
    b = _require_dict(doc["body"], "model.body")
    _check_keys(b, "model.body", ("atoms",), ("name", "pose", "twist"))
    atoms = _parse_atoms(b["atoms"], "model.body.atoms")
    pose = (
        _pose_from(_require_dict(b["pose"], "model.body.pose"), "model.body.pose")
        if "pose" in b
        else FramePose.identity()
    )
    twist = _vec(b.get("twist", [0.0] * 6), "model.body.twist", 6)
    tree = MultibodyTree([TreeBody(assemble_inertia(atoms), atoms, 0, Joint(FREE6))])
    state0 = state_from_joint_coords(tree, [pose], [twist])
    if "wrench_table" in doc:
        # single body: each value row is one 6-column
        raw = _require_dict(doc["wrench_table"], "model.wrench_table")
        _check_keys(raw, "model.wrench_table", ("times", "values"), ())
        wrapped = {"times": raw["times"], "values": [[v] for v in _require_list(raw["values"], "model.wrench_table.values")]}
        wt, wv = _parse_wrench_table(wrapped, "model.wrench_table", 1)
    else:
        wt, wv = np.zeros(0), np.zeros((0, 1, 6))
    return Model(
        name=name,
        scenario="rigid_body",
        settings=settings,
        sha256=sha,
        gravity=gravity,
        tree=tree,
        state0=state0,
        wrench_times=wt,
        wrench_values=wv,
    )


def _parse_masspoints(doc, name, settings, sha) -> Model:
    _check_keys(doc, "model", ("scenario", "settings", "points"), ("name", "gravity", "gamma"))
    gravity = _vec(doc.get("gravity", [0.0, 0.0, 0.0]), "model.gravity", 3)
    gamma = _number(doc.get("gamma", 0.0), "model.gamma")
    pts, exhausts, forces = [], [], []
    for i, p in enumerate(_require_list(doc["points"], "model.points", min_len=1)):
        pp = f"model.points[{i}]"
        _check_keys(
            _require_dict(p, pp),
            pp,
            ("position", "velocity", "mass"),
            ("name", "mass_rate", "exhaust_velocity", "force"),
        )
        pos = _vec(p["position"], f"{pp}.position", 3)
        vel = _vec(p["velocity"], f"{pp}.velocity", 3)
        mass = _positive(p["mass"], f"{pp}.mass")
        rate = _number(p.get("mass_rate", 0.0), f"{pp}.mass_rate")
        pts.append(MassPoint(pos, vel, mass, rate))
        # exhaust velocity is written relative to the point
        exhausts.append(_vec(p.get("exhaust_velocity", [0, 0, 0]), f"{pp}.exhaust_velocity", 3))
        forces.append(_vec(p.get("force", [0, 0, 0]), f"{pp}.force", 3))
        if rate != 0.0:
            try:
                mass_rate_step(mass, rate, settings.t_end)
            except Exception as e:
                raise _fail(pp, f"mass schedule fails before t_end: {e}")
    return Model(
        name=name,
        scenario="masspoints",
        settings=settings,
        sha256=sha,
        gravity=gravity,
        points=pts,
        exhausts=np.array(exhausts),
        forces=np.array(forces),
        gamma=gamma,
    )


def parse_model(doc: dict, sha256: str = "") -> Model:
    _require_dict(doc, "model")
    if "scenario" not in doc:
        raise _fail("model", 'missing required field "scenario"')
    scenario = _string(doc["scenario"], "model.scenario")
    if scenario not in SCENARIOS:
        raise _fail("model.scenario", f'"{scenario}" is not one of {", ".join(SCENARIOS)}')
    if "settings" not in doc:
        raise _fail("model", 'missing required field "settings"')
    settings = _parse_settings(doc["settings"], "model.settings")
    name = _string(doc.get("name", "unnamed"), "model.name")
    if scenario == "multibody":
        return _parse_multibody(doc, name, settings, sha256)
    if scenario == "rigid_body":
        return _parse_rigid(doc, name, settings, sha256)
    return _parse_masspoints(doc, name, settings, sha256)


def load_model(path: str) -> Model:
    try:
        with open(path, "rb") as f:
            raw = f.read()
    except OSError as e:
        raise ModelError(f"cannot read model file {path}: {e}")
    sha = hashlib.sha256(raw).hexdigest()
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ModelError(f"{path}: invalid JSON: {e}")
    return parse_model(doc, sha)
