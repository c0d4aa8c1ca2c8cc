"""Resonance poles and normalized Gamow vectors in the energy representation.

Conventions
-----------
A pole is ``z_R = E_R - i*Gamma/2``.  The decaying vector is
``psi_D(E) = alpha / (E - z_R)`` and the growing vector
``psi_G(E) = alpha / (E - conj(z_R))``, with ``alpha = sqrt(Gamma/(2 pi))``
so that both have unit L2 norm for every width.

Some texts attach ``conj(z_R)`` to the decaying vector instead; the two
choices differ by complex conjugation of the energy profile and give the
same densities and averages.

Amplitudes evolve as ``exp(-i z_R t)``, i.e. the modulus decays like
``exp(-Gamma t / 2)`` and the probability like ``exp(-Gamma t)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import NonPositiveWidth, WrongTimeDomain
from .numerics import DEFAULT_SPEC, QuadratureSpec, feature_points, integrate_real_line

Kind = Literal["decaying", "growing"]


class UnanchoredOverlap(UserWarning):
    """Overlap between Gamow vectors of different poles (no reference value)."""


@dataclass(frozen=True)
class ResonancePole:
    energy: float
    width: float

    def __post_init__(self):
        if not (math.isfinite(self.energy) and math.isfinite(self.width)):
            raise ValueError("pole parameters must be finite")
        if not self.width > 0:
            raise NonPositiveWidth(f"resonance width must be positive, got {self.width}")

    @classmethod
    def from_complex(cls, z: complex) -> "ResonancePole":
        return cls(energy=z.real, width=-2.0 * z.imag)

    @property
    def z(self) -> complex:
        return complex(self.energy, -0.5 * self.width)

    @property
    def half_width(self) -> float:
        return 0.5 * self.width


def normalization(pole: ResonancePole) -> float:
    """Constant ``alpha`` giving ``int |alpha/(E - z_R)|^2 dE = 1``."""
    if not pole.width > 0:
        raise NonPositiveWidth(f"resonance width must be positive, got {pole.width}")
    return math.sqrt(pole.width / (2.0 * math.pi))


@dataclass(frozen=True)
class GamowVector:
    pole: ResonancePole
    kind: Kind = "decaying"

    def __post_init__(self):
        if self.kind not in ("decaying", "growing"):
            raise ValueError(f"kind must be 'decaying' or 'growing', got {self.kind!r}")

    @property
    def alpha(self) -> float:
        return normalization(self.pole)

    @property
    def eigenvalue(self) -> complex:
        z = self.pole.z
        return z if self.kind == "decaying" else z.conjugate()

    def __call__(self, E):
        return self.alpha / (np.asarray(E) - self.eigenvalue)

    def features(self) -> tuple[float, float]:
        return self.pole.energy, self.pole.half_width


def decaying(pole: ResonancePole) -> GamowVector:
    return GamowVector(pole, "decaying")


def growing(pole: ResonancePole) -> GamowVector:
    return GamowVector(pole, "growing")


def evaluate(g: GamowVector, E):
    """Energy-representation wave function of ``g`` at ``E``."""
    return g(E)


def breit_wigner_density(g: GamowVector, E):
    """``|psi(E)|^2 = (Gamma/2pi) / ((E - E_R)^2 + (Gamma/2)^2)``."""
    x = np.asarray(E, dtype=float) - g.pole.energy
    gam = g.pole.half_width
    return (gam / np.pi) / (x * x + gam * gam)


def overlap(a: GamowVector, b: GamowVector, spec: QuadratureSpec = DEFAULT_SPEC) -> complex:
    """L2 inner product ``int conj(a(E)) b(E) dE`` (antilinear in ``a``)."""
    if a.pole != b.pole:
        warnings.warn(
            f"overlap between different poles {a.pole} and {b.pole} has no reference value",
            UnanchoredOverlap,
            stacklevel=2,
        )
    ca, sa = a.features()
    cb, sb = b.features()
    if sb < sa:
        (ca, sa), (cb, sb) = (cb, sb), (ca, sa)

    def integrand(E):
        return np.conj(a(E)) * b(E)

    return integrate_real_line(integrand, spec, center=ca, scale=sa, points=feature_points(cb, sb)).value


def norm(g: GamowVector, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Numerical L2 norm; equals 1 up to quadrature error."""
    return math.sqrt(overlap(g, g, spec).real)


def time_evolution_factor(g: GamowVector, t: float) -> complex:
    """``exp(-i * eigenvalue * t)``, defined on the semigroup half of the time axis.

    Decaying vectors evolve forward (``t >= 0``), growing vectors backward
    (``t <= 0``).
    """
    if g.kind == "decaying" and t < 0:
        raise WrongTimeDomain(f"decaying Gamow vectors only evolve for t >= 0, got t={t}")
    if g.kind == "growing" and t > 0:
        raise WrongTimeDomain(f"growing Gamow vectors only evolve for t <= 0, got t={t}")
    return complex(np.exp(-1j * g.eigenvalue * t))
