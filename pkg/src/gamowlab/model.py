"""
s-wave delta-shell potential
============================

Radial equation (hbar = 1)::

    -u''/(2m) + (lam / 2m) * delta(r - a) * u = k^2/(2m) * u

so ``lam`` is an inverse length and ``lam > 0`` is repulsive.  With the
regular solution ``sin(kr)/k`` inside the shell, the Jost function is

    F(k) = 1 + lam * exp(i k a) * sin(k a) / k
         = 1 + lam * (exp(2 i k a) - 1) / (2 i k),

an entire function of ``k``.  The S-matrix is ``S(k) = F(-k) / F(k)``;
``|S| = 1`` on the real axis and ``F(-conj k) = conj F(k)``, so zeros come in
pairs ``(k, -conj k)``.  Zeros in the lower half plane with ``Re k > 0`` are
decaying resonances with ``z_R = k^2 / (2m)``.

For ``lam * a >> 1`` the zeros approach the hard-wall values ``n pi / a``:
``k_n ~ n pi/a - k/(lam a) - i k^2/(lam^2 a)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoPolesInWindow, NumericalError, PoleHit, ValidationError
from .gamow import ResonancePole
from .numerics import find_root_complex

JOST_TOL = 1e-10
DEDUP_DISTANCE = 1e-8
POLE_HIT_THRESHOLD = 1e-13


@dataclass(frozen=True)
class DeltaShellModel:
    strength: float
    radius: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.strength):
            raise ValidationError("strength must be finite")
        if not self.radius > 0:
            raise ValidationError(f"radius must be positive, got {self.radius}")
        if not self.mass > 0:
            raise ValidationError(f"mass must be positive, got {self.mass}")

    def energy(self, k):
        return k * k / (2.0 * self.mass)


@dataclass(frozen=True)
class Window:
    """Rectangle ``re_min < Re k < re_max``, ``im_min < Im k < im_max`` in the k-plane."""

    re_min: float = 0.0
    re_max: float = 10.0
    im_min: float = -2.0
    im_max: float = 0.0

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValidationError("window bounds must satisfy min < max")
        if self.im_max > 0:
            raise ValidationError("resonance window must lie in the lower half k-plane (im_max <= 0)")
        if not all(map(math.isfinite, (self.re_min, self.re_max, self.im_min, self.im_max))):
            raise ValidationError("window must be bounded")

    def contains(self, k: complex, slack: float = 0.0) -> bool:
        return (
            self.re_min - slack <= k.real <= self.re_max + slack
            and self.im_min - slack <= k.imag <= self.im_max + slack
        )


def _sinc_ka(k, a):
    # sin(k a)/k, regular at k = 0; np.sinc loses subnormal complex arguments
    x = np.asarray(k * a)
    with np.errstate(invalid="ignore", over="ignore"):
        out = a * np.sinc(x / np.pi)
    small = np.abs(x) < 1e-8
    return np.where(small, a * (1.0 - x * x / 6.0), out)


def jost_function(model: DeltaShellModel, k):
    k = np.asarray(k, dtype=complex)
    a = model.radius
    out = 1.0 + model.strength * np.exp(1j * k * a) * _sinc_ka(k, a)
    return out if out.ndim else complex(out)


def jost_derivative(model: DeltaShellModel, k):
    """``dF/dk = lam * exp(i k a) * (a exp(i k a) - sin(k a)/k) / k``."""
    k = complex(k)
    a = model.radius
    if abs(k) < 1e-6:
        # series: F = 1 + lam*(a + i a^2 k - (2/3) a^3 k^2 + ...)
        return model.strength * (1j * a * a - (4.0 / 3.0) * a**3 * k)
    e = np.exp(1j * k * a)
    return complex(model.strength * e * (a * e - np.sin(k * a) / k) / k)


def s_matrix(model: DeltaShellModel, k):
    """``S(k) = F(-k) / F(k)``, continued meromorphically to complex k."""
    k = np.asarray(k, dtype=complex)
    den = np.asarray(jost_function(model, k))
    if np.any(np.abs(den) < POLE_HIT_THRESHOLD):
        raise PoleHit(f"S-matrix evaluated at a zero of the Jost function (|F| = {np.abs(den).min():.3g})")
    out = np.asarray(jost_function(model, -k)) / den
    return out if out.ndim else complex(out)


def _seeds(model, window, grid):
    nre, nim = grid
    re = np.linspace(window.re_min, window.re_max, nre)
    im = np.linspace(window.im_min, window.im_max, nim)
    K = re[None, :] + 1j * im[:, None]
    mag = np.abs(jost_function(model, K))
    padded = np.pad(mag, 1, constant_values=np.inf)
    is_min = np.ones_like(mag, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == dj == 0:
                continue
            neigh = padded[1 + di : 1 + di + nim, 1 + dj : 1 + dj + nre]
            is_min &= mag <= neigh
    idx = np.argwhere(is_min)
    order = np.argsort(mag[is_min])
    return [complex(K[i, j]) for i, j in idx[order]]


def find_jost_zeros(model: DeltaShellModel, window: Window, grid: tuple[int, int] = (50, 25)) -> list[complex]:
    """Zeros of the Jost function in the window: grid minima polished by Newton."""
    if model.strength == 0:
        return []

    def F(k):
        return jost_function(model, k)

    def dF(k):
        return jost_derivative(model, k)

    cell = max((window.re_max - window.re_min) / grid[0], (window.im_max - window.im_min) / grid[1])
    zeros: list[complex] = []
    for seed in _seeds(model, window, grid):
        try:
            k = find_root_complex(F, seed, tol=1e-13, max_iter=60, derivative=dF)
        except NumericalError:
            continue
        # accept only zeros in the window (one grid cell of slack for edge poles)
        if not window.contains(k, slack=cell):
            continue
        if abs(F(k)) > JOST_TOL:
            continue
        if any(abs(k - z) < DEDUP_DISTANCE for z in zeros):
            continue
        zeros.append(k)
    return zeros


@dataclass(frozen=True)
class LocatedPole:
    k: complex
    pole: ResonancePole
    jost_residual: float


def find_resonances(
    model: DeltaShellModel,
    window: Window = Window(),
    max_count: int = 20,
    grid: tuple[int, int] = (50, 25),
) -> list[LocatedPole]:
    """Decaying resonances in the window, sorted by resonance energy.

    Each zero ``k`` maps to ``z = k^2/(2m)``; candidates with
    ``Gamma = -2 Im z <= 0`` or ``Re k <= 0`` are dropped.
    """
    found = []
    for k in find_jost_zeros(model, window, grid):
        if not (k.real > 0 and k.imag < 0):
            continue
        z = model.energy(k)
        width = -2.0 * z.imag
        if not width > 0:
            continue
        found.append(LocatedPole(k=k, pole=ResonancePole(z.real, width), jost_residual=abs(jost_function(model, k))))
    if not found:
        raise NoPolesInWindow(f"no resonances of {model} in {window}")
    found.sort(key=lambda p: (p.pole.energy, p.pole.width))
    return found[:max_count]


def pole_pair_symmetry_check(model: DeltaShellModel, k0: complex) -> float:
    """``|F(-conj k0)|`` for a located zero ``k0``; vanishes for the mirror partner."""
    k0 = complex(k0)
    if abs(jost_function(model, k0)) > JOST_TOL:
        raise ValidationError(f"{k0!r} is not a zero of the Jost function")
    return abs(jost_function(model, -k0.conjugate()))
