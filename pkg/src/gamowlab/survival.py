"""Non-decay amplitude ``A(t) = int rho(E) exp(-iEt) dE`` for model spectral densities.

Three densities are supported:

``bw_full_line``
    Breit-Wigner over the whole real line.  ``A(t)`` is exactly
    ``exp(-i z_R t)``: pure exponential decay at all times.
``bw_truncated``
    Breit-Wigner restricted to ``E >= 0`` and renormalized.  The lower
    spectral edge adds a contribution falling like ``1/t``, so ``P(t)``
    eventually decays as ``t**-2``, slower than the exponential.
``gaussian_truncated``
    Gaussian restricted to ``E >= 0``.  Finite energy variance, hence
    ``P(t) = 1 - var(H) t^2 + ...`` near ``t = 0``.

Note that ``dA/dt`` at 0 is ``-i <H>``, which does not vanish; what vanishes
for a finite-variance state is ``dP/dt`` at 0.  :func:`zeno_check` tests
the latter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import ndtr

from .errors import InfiniteMoment, ValidationError, WindowTooEarly, WrongTimeDomain
from .numerics import DEFAULT_SPEC, QuadratureSpec, integrate_interval, oscillatory_integral

DensityKind = Literal["bw_full_line", "bw_truncated", "gaussian_truncated"]
KINDS = ("bw_full_line", "bw_truncated", "gaussian_truncated")

# log-log fits with an rms residual above this are not in the power-law regime
POWERLAW_RMS_THRESHOLD = 0.05
# beyond this many widths from E_R a Lorentzian is left to the tail formula
_BW_WINDOW = 1.0e3
_GAUSS_WINDOW = 12.0


@dataclass(frozen=True)
class SpectralDensity:
    kind: DensityKind
    energy: float
    width: float
    norm: float = field(init=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown density kind {self.kind!r}; expected one of {KINDS}")
        if not self.width > 0:
            raise ValidationError(f"width must be positive, got {self.width}")
        if not math.isfinite(self.energy):
            raise ValidationError("energy must be finite")
        if self.kind == "bw_full_line":
            norm = 1.0
        elif self.kind == "bw_truncated":
            norm = 0.5 + math.atan(self.energy / self._gamma) / math.pi
        else:
            norm = float(ndtr(self.energy / self.width))
        if not norm > 0:
            raise ValidationError("density has no weight on its support")
        object.__setattr__(self, "norm", norm)

    @property
    def _gamma(self):
        # Lorentzian half-width
        return 0.5 * self.width

    @property
    def lower(self) -> float:
        return -np.inf if self.kind == "bw_full_line" else 0.0

    @property
    def upper(self) -> float:
        return np.inf

    @property
    def is_breit_wigner(self) -> bool:
        return self.kind != "gaussian_truncated"

    def pdf_complex(self, z):
        z = np.asarray(z, dtype=complex)
        if self.is_breit_wigner:
            g = self._gamma
            return (g / np.pi) / ((z - self.energy) ** 2 + g * g) / self.norm
        s = self.width
        return np.exp(-0.5 * ((z - self.energy) / s) ** 2) / (s * math.sqrt(2 * math.pi)) / self.norm

    def pdf(self, E):
        E = np.asarray(E, dtype=float)
        # far out the squares overflow; the density there is 0 either way
        with np.errstate(over="ignore", invalid="ignore"):
            out = self.pdf_complex(E).real
        if self.lower == 0.0:
            out = np.where(E >= 0.0, out, 0.0)
        return out

    def lower_poles(self):
        """Poles of the density in the lower half plane with their residues."""
        if not self.is_breit_wigner:
            return None
        z = complex(self.energy, -self._gamma)
        return [(z, 1j / (2 * np.pi) / self.norm)]

    def features(self):
        return [(self.energy, self._gamma if self.is_breit_wigner else self.width)]

    def window(self, cutoff: float = math.inf):
        reach = min(cutoff, (_BW_WINDOW * self._gamma) if self.is_breit_wigner else (_GAUSS_WINDOW * self.width))
        lo = self.energy - reach
        if self.lower == 0.0:
            lo = max(lo, 0.0)
        hi = self.energy + reach
        if not hi > lo:
            raise ValidationError("density window is empty")
        return lo, hi

    def decay_rate(self) -> Optional[float]:
        """``Gamma`` of the associated exponential law (Breit-Wigner only)."""
        return self.width if self.is_breit_wigner else None


def _check_time(t):
    if t < 0:
        raise WrongTimeDomain(f"non-decay amplitude is evaluated for t >= 0, got {t}")


def amplitude(d: SpectralDensity, t: float, spec: QuadratureSpec = DEFAULT_SPEC, method: str = "auto") -> complex:
    _check_time(t)
    if t == 0:
        return 1 + 0j
    return oscillatory_integral(d, t, spec, method)


def nondecay_probability(d: SpectralDensity, t: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    a = amplitude(d, t, spec)
    # quadrature noise can push |A|^2 a hair above 1 near t = 0
    return float(min(abs(a) ** 2, 1.0))


def reference_probability(d: SpectralDensity, t: float) -> Optional[float]:
    """Pure exponential law ``exp(-Gamma t)`` for Breit-Wigner densities."""
    rate = d.decay_rate()
    return None if rate is None else math.exp(-rate * t)


def background(d: SpectralDensity, t: float, spec: QuadratureSpec = DEFAULT_SPEC) -> Optional[float]:
    """Deviation of ``P(t)`` from the pure exponential."""
    ref = reference_probability(d, t)
    return None if ref is None else nondecay_probability(d, t, spec) - ref


@dataclass(frozen=True)
class PowerLawFit:
    slope: float
    intercept: float
    rms: float
    times: tuple[float, ...]
    probabilities: tuple[float, ...]


def fit_longtime(
    d: SpectralDensity, t_min: float, t_max: float, samples: int = 40, spec: QuadratureSpec = DEFAULT_SPEC
) -> PowerLawFit:
    if d.kind != "bw_truncated":
        raise ValidationError(f"long-time power law needs a truncated Breit-Wigner density, got {d.kind}")
    if not 0 < t_min < t_max:
        raise ValidationError("need 0 < t_min < t_max")
    if samples < 4:
        raise ValidationError("need at least 4 samples")
    times = np.geomspace(t_min, t_max, samples)
    probs = np.array([abs(amplitude(d, t, spec)) ** 2 for t in times])
    x, y = np.log(times), np.log(probs)
    slope, intercept = np.polyfit(x, y, 1)
    rms = float(np.sqrt(np.mean((y - slope * x - intercept) ** 2)))
    return PowerLawFit(float(slope), float(intercept), rms, tuple(times.tolist()), tuple(probs.tolist()))


def longtime_exponent(
    d: SpectralDensity, t_min: float, t_max: float, samples: int = 40, spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    """Least-squares slope of ``log P`` against ``log t`` over ``[t_min, t_max]``.

    Raises :class:`WindowTooEarly` if the points are not on a straight
    line in log-log scale, i.e. the exponential still dominates.
    """
    fit = fit_longtime(d, t_min, t_max, samples, spec)
    if fit.rms > POWERLAW_RMS_THRESHOLD:
        raise WindowTooEarly(
            f"log-log fit rms {fit.rms:.3g} over [{t_min}, {t_max}] exceeds {POWERLAW_RMS_THRESHOLD}; "
            "exponential decay still dominates"
        )
    return fit.slope


def crossover_time(d: SpectralDensity) -> float:
    """Time where the asymptotic power law overtakes the exponential.

    Intersects ``N^-2 exp(-Gamma t)`` (pole term) with ``(rho(0)/t)^2``
    (leading lower-edge term), past ``t = 2/Gamma``.
    """
    if d.kind != "bw_truncated":
        raise ValidationError("crossover is defined for truncated Breit-Wigner densities")
    rate = d.width
    rho0 = float(d.pdf(0.0))
    log_pole = -2.0 * math.log(d.norm)

    def h(t):
        return (log_pole - rate * t) - 2.0 * (math.log(rho0) - math.log(t))

    lo = 2.0 / rate
    if h(lo) <= 0:
        return lo
    hi = lo
    while h(hi) > 0:
        hi *= 2.0
    return brentq(h, lo, hi, xtol=1e-12, rtol=1e-12)


def powerlaw_onset(
    d: SpectralDensity, times: Sequence[float], min_points: int = 6, spec: QuadratureSpec = DEFAULT_SPEC
) -> Optional[float]:
    """First grid time from which a power law fits ``log P`` better than an exponential.

    Compares the AIC of straight-line fits of ``log P`` against ``log t``
    and against ``t`` on sliding windows of ``min_points`` samples; the onset
    is the start of the first window after which the power law keeps
    winning.
    """
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) <= 0) or times[0] <= 0:
        raise ValidationError("times must be positive and strictly increasing")
    logp = np.log([nondecay_probability(d, t, spec) for t in times])

    def aic(x, y):
        coef = np.polyfit(x, y, 1)
        rss = float(np.sum((y - np.polyval(coef, x)) ** 2))
        n = x.size
        return n * math.log(max(rss, 1e-300) / n) + 4.0

    starts = range(times.size - min_points + 1)
    wins = []
    for i in starts:
        t, y = times[i : i + min_points], logp[i : i + min_points]
        wins.append(aic(np.log(t), y) < aic(t, y))
    onset = None
    for i in reversed(starts):
        if not wins[i]:
            break
        onset = float(times[i])
    return onset


def _moment_integral(d, f, spec):
    lo, hi = d.window()
    return integrate_interval(lambda E: d.pdf(E) * f(E), lo, hi, spec, center=d.energy, scale=d.width).value.real


def zeno_check(d: SpectralDensity, h: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Forward-difference estimate of ``dP/dt`` at ``t = 0`` with step ``h``.

    ``1 - P(h)`` is assembled from ``u = int rho * 2 sin^2(x h/2)`` and
    ``v = int rho * sin(x h)`` (``x = E - <E>``) as ``2u - u^2 - v^2``, which
    avoids the cancellation in ``1 - |A|^2``.  Returns ``-(1 - P(h)) / h``,
    of order ``-var(H) * h``.
    """
    if d.is_breit_wigner:
        raise InfiniteMoment("a Lorentzian has no finite energy variance; the check does not apply")
    if not h > 0:
        raise ValidationError("step must be positive")
    mean = _moment_integral(d, lambda E: E, spec)
    u = _moment_integral(d, lambda E: 2.0 * np.sin(0.5 * (E - mean) * h) ** 2, spec)
    v = _moment_integral(d, lambda E: np.sin((E - mean) * h), spec)
    return -(2.0 * u - u * u - v * v) / h


def energy_variance(d: SpectralDensity, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    if d.is_breit_wigner:
        raise InfiniteMoment("a Lorentzian has no finite energy variance")
    mean = _moment_integral(d, lambda E: E, spec)
    return _moment_integral(d, lambda E: (E - mean) ** 2, spec)
