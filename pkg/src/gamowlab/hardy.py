"""Rational Hardy-class test functions and their Cauchy boundary integrals.

A function of the *lower* class is analytic in the open lower half plane
and square integrable along every horizontal line there; its values inside
are recovered from the real-axis boundary values by

    f(z) = -1/(2 pi i) * int f(E) / (E - z) dE,      Im z < 0,

and the upper class uses the same formula with a ``+`` sign.  Integrating
against a point of the *other* half plane gives zero.

The built-in family is ``(E - i)**-n`` (lower class), ``(E + i)**-n``
(upper class) and the same powers multiplied by the unimodular Blaschke
factors ``(E + i)/(E - i)`` resp. ``(E - i)/(E + i)``.  Their continuations
are closed form, so every boundary integral has an exact answer to compare
against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .errors import OnAxisTarget, WrongHalfPlane
from .numerics import DEFAULT_SPEC, QuadratureSpec, feature_points, integrate_real_line

ON_AXIS_THRESHOLD = 1e-12

HalfPlane = Literal["upper", "lower"]


@dataclass(frozen=True)
class HardyFunction:
    """A function analytic in one half plane, known by a closed formula.

    ``formula`` is evaluated both on the real axis (boundary values) and at
    interior points (analytic continuation).  ``singularities`` lists the
    poles in the opposite half plane; they set the quadrature breakpoints.
    """

    name: str
    half_plane: HalfPlane
    formula: Callable
    decay_order: int
    singularities: tuple[complex, ...] = ()

    def __post_init__(self):
        if self.half_plane not in ("upper", "lower"):
            raise ValueError(f"half_plane must be 'upper' or 'lower', got {self.half_plane!r}")
        if self.decay_order < 1:
            raise ValueError("Hardy functions must decay at least like 1/|E|")

    def eval_boundary(self, E):
        return self.formula(np.asarray(E, dtype=float) + 0j)

    def eval_analytic(self, z):
        z = complex(z)
        if not self.contains(z):
            raise WrongHalfPlane(f"{z!r} is not in the {self.half_plane} half plane of {self.name}")
        return complex(self.formula(z))

    def contains(self, z: complex) -> bool:
        return z.imag < 0 if self.half_plane == "lower" else z.imag > 0

    def conjugate(self) -> "HardyFunction":
        """The function ``conj(f(conj(z)))``, which lives in the other half plane."""
        f = self.formula
        other = "upper" if self.half_plane == "lower" else "lower"
        return HardyFunction(
            name=f"conj({self.name})",
            half_plane=other,
            formula=lambda z: np.conj(f(np.conj(z))),
            decay_order=self.decay_order,
            singularities=tuple(np.conj(s) for s in self.singularities),
        )

    def __add__(self, other: "HardyFunction") -> "HardyFunction":
        if other.half_plane != self.half_plane:
            raise ValueError("cannot add Hardy functions of different half planes")
        f, g = self.formula, other.formula
        return HardyFunction(
            name=f"({self.name} + {other.name})",
            half_plane=self.half_plane,
            formula=lambda z: f(z) + g(z),
            decay_order=min(self.decay_order, other.decay_order),
            singularities=self.singularities + other.singularities,
        )

    def scaled(self, c: complex) -> "HardyFunction":
        f = self.formula
        return HardyFunction(
            name=f"{c!r}*{self.name}",
            half_plane=self.half_plane,
            formula=lambda z: c * f(z),
            decay_order=self.decay_order,
            singularities=self.singularities,
        )


def rational(n: int, half_plane: HalfPlane = "lower") -> HardyFunction:
    """``(E - i)**-n`` for the lower class, ``(E + i)**-n`` for the upper."""
    if n < 1:
        raise ValueError("power must be >= 1")
    pole = 1j if half_plane == "lower" else -1j
    sign = "-" if half_plane == "lower" else "+"
    return HardyFunction(
        name=f"(E{sign}i)^-{n}",
        half_plane=half_plane,
        formula=lambda z: (z - pole) ** (-n),
        decay_order=n,
        singularities=(pole,),
    )


def blaschke(n: int, half_plane: HalfPlane = "lower") -> HardyFunction:
    """Rational power times a unimodular phase, e.g. ``(E+i)/(E-i)**(n+1)``."""
    if n < 1:
        raise ValueError("power must be >= 1")
    pole = 1j if half_plane == "lower" else -1j
    sign = "-" if half_plane == "lower" else "+"
    return HardyFunction(
        name=f"B(E)(E{sign}i)^-{n}",
        half_plane=half_plane,
        formula=lambda z: (z + pole) / (z - pole) ** (n + 1),
        decay_order=n,
        singularities=(pole,),
    )


def zero_function(half_plane: HalfPlane = "lower") -> HardyFunction:
    return HardyFunction(
        name="0",
        half_plane=half_plane,
        formula=lambda z: 0.0 * z,
        decay_order=1,
    )


def builtin_family(half_plane: HalfPlane = "lower") -> dict[str, HardyFunction]:
    family = {}
    for n in range(1, 5):
        f = rational(n, half_plane)
        family[f.name] = f
    for n in (1, 2):
        f = blaschke(n, half_plane)
        family[f.name] = f
    return family


def _boundary_integral(f: HardyFunction, z: complex, spec: QuadratureSpec) -> complex:
    """``int f(E) / (E - z) dE`` over the real line."""
    if abs(z.imag) < ON_AXIS_THRESHOLD:
        raise OnAxisTarget(f"target {z!r} is on the real axis")
    pts = [p for s in f.singularities for p in feature_points(s.real, abs(s.imag))]
    scale = abs(z.imag)

    def integrand(E):
        return f.eval_boundary(E) / (E - z)

    return integrate_real_line(integrand, spec, center=z.real, scale=scale, points=pts).value


def cauchy_eval(f: HardyFunction, z: complex, spec: QuadratureSpec = DEFAULT_SPEC) -> complex:
    """Recover ``f(z)`` from boundary values: ``±1/(2πi) ∫ f(E)/(E-z) dE``.

    The sign is ``+`` for targets in the upper half plane and ``-`` for the
    lower one.  ``z`` must lie in the half plane where ``f`` is analytic.
    """
    z = complex(z)
    if abs(z.imag) < ON_AXIS_THRESHOLD:
        raise OnAxisTarget(f"target {z!r} is on the real axis")
    if not f.contains(z):
        raise WrongHalfPlane(
            f"{z!r} lies outside the {f.half_plane} half plane of {f.name}; use opposite_halfplane_check"
        )
    sign = 1.0 if z.imag > 0 else -1.0
    return sign * _boundary_integral(f, z, spec) / (2j * np.pi)


def opposite_halfplane_check(f: HardyFunction, z: complex, spec: QuadratureSpec = DEFAULT_SPEC) -> complex:
    """``∫ f(E)/(E-z) dE`` for ``z`` across the axis from f's domain; should vanish."""
    z = complex(z)
    if abs(z.imag) < ON_AXIS_THRESHOLD:
        raise OnAxisTarget(f"target {z!r} is on the real axis")
    if f.contains(z):
        raise WrongHalfPlane(f"{z!r} lies inside the {f.half_plane} half plane of {f.name}")
    return _boundary_integral(f, z, spec)


def gamow_functional_value(pole, f: HardyFunction, spec: QuadratureSpec = DEFAULT_SPEC) -> complex:
    """Action of the decaying Gamow functional on a test function.

    Evaluates the lower-class ``f`` at the resonance energy ``z_R`` through
    the boundary integral.
    """
    if f.half_plane != "lower":
        raise WrongHalfPlane("the decaying Gamow functional acts on lower-class functions")
    return cauchy_eval(f, pole.z, spec)
