"""Isotropic linear constitutive maps between paired symmetric tensors.

In 3D the map is T = r0 I + r1 tr(U) I + r2 U. In 2D a chirality term is
allowed as well: T = r0 I + r1 tr(U) I + r2 U + r3 (J U - U J) with J the
quarter-turn matrix; the bracket keeps T symmetric but is flipped by
reflections, so full orthogonal-group isotropy only holds when r3 = 0.

Closed-form inverses exist exactly when

    3D: (3 r1 + r2) r2 != 0        2D: (2 r1 + r2) (r2^2 + 4 r3^2) != 0

and have the same shape with coefficients

    3D: n0 = -r0/(3 r1 + r2); n1 = -r1/(r2 (3 r1 + r2)); n2 = 1/r2
    2D: n0 = -r0/(2 r1 + r2); n1 = (2 r3^2 - r1 r2)/((2 r1 + r2)(r2^2 + 4 r3^2));
        n2 = r2/(r2^2 + 4 r3^2); n3 = -r3/(r2^2 + 4 r3^2)

The offset sign n0 < 0 for positive r0 is pinned by the round-trip tests:
composing the two maps must return the argument to machine precision, and
the opposite sign fails that by 2 r0 / (dim r1 + r2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import ModelError

CONDITION_MARGIN = 1e-12
SYMMETRY_TOL = 1e-9

_QUARTER_TURN = np.array([[0.0, -1.0], [1.0, 0.0]])

STRAIN = "strain"
STRAIN_RATE = "strain_rate"
STRESS = "stress"


def _sym_check(name: str, M: np.ndarray, dim: int) -> np.ndarray:
    M = np.array(M, dtype=float)
    if M.shape != (dim, dim):
        raise ValueError(f"{name} must be {dim}x{dim}, got {M.shape}")
    if np.max(np.abs(M - M.T)) > SYMMETRY_TOL:
        raise ValueError(f"{name} must be symmetric")
    return M


@dataclass(frozen=True)
class IsotropicLaw:
    """Coefficients of one isotropic map; argument says what it acts on."""

    dim: int
    coeffs: tuple
    argument: str = STRAIN

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError("dimension must be 2 or 3")
        need = 4 if self.dim == 2 else 3
        c = tuple(float(v) for v in self.coeffs)
        if len(c) != need:
            raise ValueError(
                f"{self.dim}D law takes {need} coefficients, got {len(c)}"
            )
        if self.argument not in (STRAIN, STRAIN_RATE, STRESS):
            raise ValueError(f"unknown argument kind {self.argument!r}")
        object.__setattr__(self, "coeffs", c)

    @property
    def condition_value(self) -> float:
        """The invertibility product; zero means no inverse law exists."""
        if self.dim == 3:
            r0, r1, r2 = self.coeffs
            return (3.0 * r1 + r2) * r2
        r0, r1, r2, r3 = self.coeffs
        return (2.0 * r1 + r2) * (r2 * r2 + 4.0 * r3 * r3)

    @property
    def is_correct(self) -> bool:
        scale = max(1.0, max(abs(c) for c in self.coeffs) ** 2)
        return abs(self.condition_value) > CONDITION_MARGIN * scale

    def stress(self, U) -> np.ndarray:
        """Apply the map to a symmetric tensor."""
        U = _sym_check("argument tensor", U, self.dim)
        if self.dim == 3:
            r0, r1, r2 = self.coeffs
            return r0 * np.eye(3) + r1 * np.trace(U) * np.eye(3) + r2 * U
        r0, r1, r2, r3 = self.coeffs
        J = _QUARTER_TURN
        return (
            r0 * np.eye(2)
            + r1 * np.trace(U) * np.eye(2)
            + r2 * U
            + r3 * (J @ U - U @ J)
        )

    def inverse(self) -> "IsotropicLaw":
        """Law with the inverse coefficients; raises for incorrect continua."""
        require_correct(self)
        if self.dim == 3:
            r0, r1, r2 = self.coeffs
            s = 3.0 * r1 + r2
            n = (-r0 / s, -r1 / (r2 * s), 1.0 / r2)
        else:
            r0, r1, r2, r3 = self.coeffs
            s = 2.0 * r1 + r2
            d = r2 * r2 + 4.0 * r3 * r3
            n = (-r0 / s, (2.0 * r3 * r3 - r1 * r2) / (s * d), r2 / d, -r3 / d)
        return IsotropicLaw(self.dim, n, argument=STRESS)

    def strain(self, T) -> np.ndarray:
        """Invert the map on a symmetric tensor."""
        return self.inverse().stress(T)


def require_correct(law: IsotropicLaw) -> None:
    if not law.is_correct:
        raise ModelError(
            "incorrect continuum: invertibility product "
            f"{law.condition_value:.3e} vanishes for coefficients {law.coeffs}"
        )


def material_class(law: IsotropicLaw) -> str:
    """Coarse physical reading of the coefficient pattern."""
    r0 = law.coeffs[0]
    shear = law.coeffs[1:]
    if r0 > 0.0 and all(c == 0.0 for c in shear):
        return "ideal fluid"
    if law.argument == STRAIN and r0 == 0.0:
        return "elastic solid"
    if law.argument == STRAIN_RATE and r0 > 0.0:
        return "viscous fluid"
    return "general"


def velocity_gradient_split(G):
    """Symmetric (stretching) and skew (spin) parts of a velocity gradient."""
    G = np.array(G, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise ValueError(f"velocity gradient must be square, got {G.shape}")
    sym = 0.5 * (G + G.T)
    return sym, G - sym


GradFn = Union[np.ndarray, Callable[[float], np.ndarray]]


def strain_evolve(grad: GradFn, t_end: float, dt: float, s0=None) -> np.ndarray:
    """Integrate dS/dt = sym(grad(t)) from S(0) = s0 (identity by default).

    A constant gradient gives the exact linear growth S = s0 + sym(grad) t.
    """
    fn = grad if callable(grad) else (lambda t: grad)
    dim = np.asarray(fn(0.0)).shape[0]
    S = np.eye(dim) if s0 is None else np.array(s0, dtype=float)
    steps = int(round(t_end / dt))
    if abs(steps * dt - t_end) > 1e-12 * max(1.0, abs(t_end)):
        raise ValueError("t_end must be an integer number of steps")
    t = 0.0
    for _ in range(steps):
        k1 = velocity_gradient_split(fn(t))[0]
        k2 = velocity_gradient_split(fn(t + 0.5 * dt))[0]
        k3 = k2
        k4 = velocity_gradient_split(fn(t + dt))[0]
        S = S + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += dt
    return S
