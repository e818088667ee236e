"""Sliders, reductions, wrench/twist columns, and discrete screw measures.

A slider is a vector field over space determined by a resultant ``p`` and a
moment ``q`` known at one base point; at any other point ``y`` the resultant
is unchanged and the moment transports by the moment-of-a-force rule

    q_y = q_x + (x - y) x p.

A screw measure is a weighted finite collection of slider atoms; its
reduction at a point is the transported, weighted sum. Wrench and twist are
the two orderings of the stacked 6-column built from a reduction.

Sign convention: the transport rule above is pinned by the physical oracle
"moment of a force p applied at x, taken about y, equals (x - y) x p" and is
used identically everywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-12

WRENCH = "wrench"
TWIST = "twist"


def as_vec3(x) -> np.ndarray:
    """Coerce to a finite float 3-vector (read-only)."""
    v = np.array(x, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite components")
    v.setflags(write=False)
    return v


def cross_matrix(f) -> np.ndarray:
    """Antisymmetric matrix F with F @ g == np.cross(f, g) for every g."""
    f = np.asarray(f, dtype=float)
    return np.array(
        [
            [0.0, -f[2], f[1]],
            [f[2], 0.0, -f[0]],
            [-f[1], f[0], 0.0],
        ]
    )


@dataclass(frozen=True)
class SliderReduction:
    """Value (p, q) of a slider field evaluated at the point ``at``."""

    p: np.ndarray
    q: np.ndarray
    at: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", as_vec3(self.p))
        object.__setattr__(self, "q", as_vec3(self.q))
        object.__setattr__(self, "at", as_vec3(self.at))

    def transported(self, y) -> "SliderReduction":
        y = as_vec3(y)
        q_y = self.q + np.cross(self.at - y, self.p)
        return SliderReduction(self.p, q_y, y)

    def wrench(self) -> np.ndarray:
        return np.concatenate([self.p, self.q])

    def twist(self) -> np.ndarray:
        return np.concatenate([self.q, self.p])


@dataclass(frozen=True)
class Slider:
    """Slider field: resultant ``p`` and moment ``q`` given at ``base_point``.

    ``homogeneous`` is derived, not supplied: it records whether the moment
    vanishes at the base point (a line-bound vector such as a pure force).
    """

    base_point: np.ndarray
    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base_point", as_vec3(self.base_point))
        object.__setattr__(self, "p", as_vec3(self.p))
        object.__setattr__(self, "q", as_vec3(self.q))

    @property
    def homogeneous(self) -> bool:
        return bool(np.all(self.q == 0.0))

    @classmethod
    def force(cls, p, at) -> "Slider":
        """Homogeneous slider: pure resultant applied at ``at``."""
        return cls(at, p, (0.0, 0.0, 0.0))

    @classmethod
    def couple(cls, q, at=(0.0, 0.0, 0.0)) -> "Slider":
        """Free moment: same q everywhere, zero resultant."""
        return cls(at, (0.0, 0.0, 0.0), q)

    def reduce_at(self, y) -> SliderReduction:
        return SliderReduction(self.p, self.q, self.base_point).transported(y)


def slider_reduce(s: Slider, y) -> SliderReduction:
    """Reduction of the slider at point y; identity when y is the base point."""
    return s.reduce_at(y)


@dataclass(frozen=True)
class SixColumn:
    """Stacked 6-column of a reduction, tagged with its ordering.

    wrench order: col{p, q}; twist order: col{q, p}. Reordering twice is the
    identity.
    """

    data: np.ndarray
    order: str

    def __post_init__(self):
        d = np.array(self.data, dtype=float)
        if d.shape != (6,):
            raise ValueError(f"expected a 6-column, got shape {d.shape}")
        if self.order not in (WRENCH, TWIST):
            raise ValueError(f"order must be {WRENCH!r} or {TWIST!r}, got {self.order!r}")
        d.setflags(write=False)
        object.__setattr__(self, "data", d)

    def reordered(self) -> "SixColumn":
        other = TWIST if self.order == WRENCH else WRENCH
        return SixColumn(np.concatenate([self.data[3:], self.data[:3]]), other)

    @property
    def p(self) -> np.ndarray:
        return self.data[:3] if self.order == WRENCH else self.data[3:]

    @property
    def q(self) -> np.ndarray:
        return self.data[3:] if self.order == WRENCH else self.data[:3]


def six_coords(r: SliderReduction, order: str = WRENCH) -> SixColumn:
    """Pack a reduction into a tagged 6-column (wrench or twist order)."""
    if order == WRENCH:
        return SixColumn(r.wrench(), WRENCH)
    if order == TWIST:
        return SixColumn(r.twist(), TWIST)
    raise ValueError(f"unknown ordering {order!r}")


@dataclass(frozen=True)
class ScrewAtom:
    """One atom of a screw measure: a slider density with nonnegative weight."""

    point: np.ndarray
    slider: Slider
    weight: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "point", as_vec3(self.point))
        w = float(self.weight)
        if not np.isfinite(w) or w < 0.0:
            raise ValueError(f"atom weight must be finite and >= 0, got {w}")
        object.__setattr__(self, "weight", w)

    @classmethod
    def force(cls, p, at, weight=1.0) -> "ScrewAtom":
        return cls(at, Slider.force(p, at), weight)

    @classmethod
    def couple(cls, q, at=(0.0, 0.0, 0.0), weight=1.0) -> "ScrewAtom":
        return cls(at, Slider.couple(q, at), weight)


@dataclass(frozen=True)
class ScrewMeasure:
    """Finite atom list; the pure-point realization of a signed screw measure.

    Signs live in the slider directions, weights stay nonnegative. Continuous
    distributions enter as quadrature atoms chosen by the caller.
    """

    atoms: tuple

    def __init__(self, atoms: Iterable[ScrewAtom] = ()):
        object.__setattr__(self, "atoms", tuple(atoms))
        for a in self.atoms:
            if not isinstance(a, ScrewAtom):
                raise TypeError(f"ScrewMeasure atoms must be ScrewAtom, got {type(a).__name__}")

    def __add__(self, other: "ScrewMeasure") -> "ScrewMeasure":
        return ScrewMeasure(self.atoms + other.atoms)

    def scaled(self, factor: float) -> "ScrewMeasure":
        """Same atoms with every weight multiplied by factor >= 0."""
        return ScrewMeasure(
            ScrewAtom(a.point, a.slider, a.weight * factor) for a in self.atoms
        )


def screw_resultant(m: ScrewMeasure, at=(0.0, 0.0, 0.0)) -> SliderReduction:
    """Weighted sum of the measure's atom sliders, reduced at ``at``.

    The empty measure gives the zero reduction. Summation order follows the
    atom list so repeated runs are bit-identical.
    """
    at = as_vec3(at)
    p = np.zeros(3)
    q = np.zeros(3)
    for a in m.atoms:
        red = a.slider.reduce_at(at)
        p = p + a.weight * red.p
        q = q + a.weight * red.q
    return SliderReduction(p, q, at)


def screw_basis() -> tuple:
    """Six unit measures whose reductions at the origin span all (p, q) pairs.

    The first three are unit forces through the origin, the last three unit
    couples; decomposition coefficients of any reduction are then exactly its
    wrench coordinates transported to the origin.
    """
    origin = (0.0, 0.0, 0.0)
    eye = np.eye(3)
    forces = tuple(ScrewMeasure([ScrewAtom.force(eye[i], origin)]) for i in range(3))
    couples = tuple(ScrewMeasure([ScrewAtom.couple(eye[i], origin)]) for i in range(3))
    return forces + couples


def decompose_in_basis(r: SliderReduction) -> np.ndarray:
    """Coefficients of ``r`` in screw_basis(): its wrench column at the origin."""
    return r.transported((0.0, 0.0, 0.0)).wrench()


def combine_basis(coeffs: Sequence[float]) -> SliderReduction:
    """Reduction at the origin of the measure sum_i coeffs[i] * basis_i.

    Negative coefficients flip the slider direction; atom weights stay
    nonnegative.
    """
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (6,):
        raise ValueError(f"expected 6 coefficients, got shape {c.shape}")
    atoms = []
    basis = screw_basis()
    for ci, measure in zip(c, basis):
        atom = measure.atoms[0]
        if ci == 0.0:
            continue
        sgn, w = (1.0, ci) if ci > 0 else (-1.0, -ci)
        flipped = Slider(atom.slider.base_point, sgn * atom.slider.p, sgn * atom.slider.q)
        atoms.append(ScrewAtom(atom.point, flipped, w))
    return screw_resultant(ScrewMeasure(atoms), (0.0, 0.0, 0.0))


def reductions_close(a: SliderReduction, b: SliderReduction, tol: float = DEFAULT_TOL) -> bool:
    """Compare two reductions as slider fields (transport b to a's point first)."""
    bb = b.transported(a.at)
    return bool(
        np.max(np.abs(a.p - bb.p)) <= tol and np.max(np.abs(a.q - bb.q)) <= tol
    )
