"""Command-line entry: simulate, validate, info.

Exit codes: 0 success, 1 model problems (unreadable, invalid, or
inconsistent model files), 2 numerical failures (singular projections,
blow-ups, exhausted masses), 3 invariant violations (self-checks or
monitored run invariants failing).
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from ._backend import BACKEND
from .engine import run_model, tree_energy_momentum, write_csv, write_sidecar
from .errors import InvariantViolation, ModelError, NumericalError
from .model import load_model
from .points import kinetic_energy, momentum_summary
from .suites import run_all
from .trees import kinematics_matrix, lagrange_assemble


def _cmd_simulate(args) -> int:
    model = load_model(args.model)
    result = run_model(model)
    out = args.output or os.path.splitext(args.model)[0] + ".csv"
    sidecar = args.sidecar or out + ".run.json"
    write_csv(out, result)
    write_sidecar(sidecar, model, result, os.path.basename(out))
    print(f"{model.name}: {result.summary['rows']} records -> {out} (backend {BACKEND})")
    return 0


def _cmd_validate(args) -> int:
    ok, _ = run_all(report=print)
    if args.model is not None:
        model = load_model(args.model)
        print(f"ok   [model] {args.model} loads as scenario {model.scenario!r}")
    if not ok:
        raise InvariantViolation("one or more self-checks failed")
    print("all checks passed")
    return 0


def _fmt(M) -> str:
    return np.array2string(np.asarray(M), precision=6, suppress_small=True)


def _cmd_info(args) -> int:
    model = load_model(args.model)
    s = model.settings
    print(f"model {model.name!r}: scenario {model.scenario}")
    print(f"settings: t_end={s.t_end} dt={s.dt} record_every={s.record_every} steps={s.nsteps}")
    print(f"backend: {BACKEND}")
    if model.scenario in ("multibody", "rigid_body"):
        tree = model.tree
        for i, b in enumerate(tree.bodies, start=1):
            print(f"body {i}: parent {b.parent}, joint {b.joint.kind}, mass {b.inertia.total_mass:g}")
            print("inertia screw:")
            print(_fmt(b.inertia.theta))
        L = kinematics_matrix(tree, model.state0)
        print(f"kinematics matrix at t=0 ({L.shape[0]}x{L.shape[1]}):")
        print(_fmt(L))
        lag = lagrange_assemble(tree, model.state0)
        print(f"generalized mass matrix at t=0 ({lag.calA.shape[0]}x{lag.calA.shape[1]}):")
        print(_fmt(lag.calA))
        e, p6 = tree_energy_momentum(tree, model.state0)
        print(f"initial kinetic energy {e:.12g}; world 6-momentum {_fmt(p6)}")
    else:
        for i, p in enumerate(model.points, start=1):
            print(f"point {i}: mass {p.rho:g} rate {p.nu:g} at {_fmt(p.x)} vel {_fmt(p.v)}")
        red = momentum_summary(model.points)
        print(f"gamma {model.gamma:g}; kinetic energy {kinetic_energy(model.points):.12g}")
        print(f"momentum {_fmt(red.p)}; moment about origin {_fmt(red.q)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="screwmech",
        description="Screw-measure mechanics: simulate and inspect model files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="integrate a model and write CSV + sidecar")
    sim.add_argument("model", help="model JSON file")
    sim.add_argument("-o", "--output", help="CSV path (default: model name with .csv)")
    sim.add_argument("--sidecar", help="sidecar JSON path (default: <output>.run.json)")
    sim.set_defaults(fn=_cmd_simulate)

    val = sub.add_parser("validate", help="run the invariant self-check suites")
    val.add_argument("model", nargs="?", help="also load-check this model file")
    val.set_defaults(fn=_cmd_validate)

    info = sub.add_parser("info", help="print assembled operators of a model")
    info.add_argument("model", help="model JSON file")
    info.set_defaults(fn=_cmd_info)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ModelError as e:
        print(f"model error: {e}", file=sys.stderr)
        return 1
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 2
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
