"""Competing definitions of the mean of an observable on a Gamow state.

For a pole ``z_R`` and a diagonal observable ``g(E)``:

nakanishi
    Always 0.  Follows formally from ``H|f0> = z_R|f0>`` and
    ``<f0|H = conj(z_R) <f0|`` but relies on the undefined bracket
    ``<f0|f0>``; reported as a convention only.
complex
    ``g(z_R)``, the pairing of the growing and decaying functionals with the
    convention ``<f~0|f0> = 1``.  This is a residue pairing, a different
    object from the L2 overlap of the normalized vectors (which is 0).
bohm
    ``<psi|g|psi>`` in L2 with the normalized Lorentzian wave function.  For
    ``g(E) = E`` the odd ``1/E`` tail is taken as a principal value about
    ``E_R``.  Observables growing faster than ``E`` have no finite mean.
berggren
    ``Re g(z_R)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Sequence

import numpy as np

from .errors import ContinuationUndefined, DegenerateFit, DivergentObservable, NegativeResonanceEnergy, NumericalError
from .gamow import GamowVector, ResonancePole, decaying
from .numerics import (
    DEFAULT_SPEC,
    QuadratureSpec,
    feature_points,
    integrate_half_line,
    integrate_interval,
    integrate_real_line,
    principal_value,
)

GrowthClass = Literal["bounded_decaying", "linear", "superlinear"]

NAKANISHI_CAVEAT = "zero by formal argument; <f0|f0> is undefined (convention, not a computation)"
COMPLEX_PAIRING = "<f~0|f0> = 1 (residue pairing, not the L2 overlap)"

# |bohm - berggren| below this (relative to max(1, |value|)) counts as zero
AGREEMENT_FLOOR = 1e-10


@dataclass(frozen=True)
class ObservableSpec:
    """A diagonal observable with its analytic continuation.

    ``features`` lists ``(center, scale)`` pairs where ``g`` varies
    sharply; they become quadrature breakpoints.
    """

    name: str
    g_real: Callable
    g_analytic: Callable
    growth_class: GrowthClass
    features: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.growth_class not in ("bounded_decaying", "linear", "superlinear"):
            raise ValueError(f"unknown growth class {self.growth_class!r}")
        samples = [-3.0, -1.0, 0.0, 0.5, 2.0, 7.0]
        for c, s in self.features:
            samples += [c - s, c, c + s]
        E = np.array(samples)
        real = np.asarray(self.g_real(E), dtype=float)
        cont = np.asarray(self.g_analytic(E + 0j), dtype=complex)
        if np.any(np.abs(cont - real) > 1e-10 * (1.0 + np.abs(real))):
            raise ValueError(f"analytic continuation of {self.name!r} does not match g on the real axis")


def energy() -> ObservableSpec:
    """The Hamiltonian in the energy representation, ``g(E) = E``."""
    return ObservableSpec("energy", lambda E: np.asarray(E, dtype=float), lambda z: z, "linear")


def constant(c: float = 1.0) -> ObservableSpec:
    return ObservableSpec(
        "constant" if c == 1.0 else f"constant({c!r})",
        lambda E: np.full(np.shape(E), float(c)),
        lambda z: np.full(np.shape(z), complex(c)),
        "bounded_decaying",
    )


def lorentzian_kernel(center: float, width: float) -> ObservableSpec:
    """``g(E) = 1 / ((E - center)^2 + width^2)``."""
    if not width > 0:
        raise ValueError("kernel width must be positive")

    def g(E):
        x = np.asarray(E) - center
        return 1.0 / (x * x + width * width)

    return ObservableSpec(
        f"lorentzian({center!r},{width!r})", g, g, "bounded_decaying", features=((center, width),)
    )


def energy_squared() -> ObservableSpec:
    return ObservableSpec("energy^2", lambda E: np.asarray(E, dtype=float) ** 2, lambda z: z * z, "superlinear")


def average_nakanishi(pole: ResonancePole) -> float:
    """Mean energy by Nakanishi's argument; identically zero (see ``NAKANISHI_CAVEAT``)."""
    return 0.0


def average_complex(pole: ResonancePole, obs: ObservableSpec) -> complex:
    """``g(z_R)``, the analytically continued observable at the pole."""
    try:
        with np.errstate(divide="raise", invalid="raise", over="raise"):
            value = complex(obs.g_analytic(pole.z))
    except (ZeroDivisionError, FloatingPointError) as exc:
        raise ContinuationUndefined(f"{obs.name} is singular at {pole.z!r}") from exc
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ContinuationUndefined(f"{obs.name} is singular at {pole.z!r}")
    return value


def average_berggren(pole: ResonancePole, obs: ObservableSpec) -> float:
    return average_complex(pole, obs).real


def _weighted(g: GamowVector, obs: ObservableSpec):
    def integrand(E):
        psi = g(E)
        return np.conj(psi) * obs.g_real(E) * psi

    return integrand


def average_bohm(g: GamowVector, obs: ObservableSpec, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """L2 expectation value ``<psi|g|psi>`` of the normalized Gamow vector."""
    if obs.growth_class == "superlinear":
        raise DivergentObservable(
            f"{obs.name} grows faster than E; the Lorentzian state has no finite mean for it"
        )
    center, scale = g.features()
    pts = [p for c, s in obs.features for p in feature_points(c, s)]
    integrand = _weighted(g, obs)
    if obs.growth_class == "linear":
        res = principal_value(integrand, center, spec, scale=scale, points=pts)
    else:
        res = integrate_real_line(integrand, spec, center=center, scale=scale, points=pts)
    value = res.value
    if abs(value.imag) > 1e-9 * max(1.0, abs(value.real)):
        raise NumericalError(f"expectation value has imaginary part {value.imag:.3g}")
    return value.real


def first_order_coefficient(obs: ObservableSpec, energy: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Slope ``d(bohm)/d(Gamma/2)`` at zero width for a bounded observable.

    For small half-width the Lorentzian average of ``g`` differs from
    ``g(E_R)`` by ``(Gamma/2) * c`` with
    ``c = (1/pi) * int_0^inf [g(E_R + x) + g(E_R - x) - 2 g(E_R)] / x^2 dx``,
    whereas ``Re g(z_R)`` has no linear term.  ``c`` is nonzero for a
    generic observable, and then the two means part at first order.
    """
    if obs.growth_class != "bounded_decaying":
        raise ValueError("first-order coefficient is defined for bounded observables")
    g0 = float(np.asarray(obs.g_real(np.array([energy])))[0])

    def folded(x):
        x = np.asarray(x, dtype=float)
        num = obs.g_real(energy + x) + obs.g_real(energy - x) - 2.0 * g0
        small = x < 1e-4
        out = np.empty_like(x)
        out[~small] = num[~small] / x[~small] ** 2
        if np.any(small):
            h = 1e-3
            second = (obs.g_real(energy + h) + obs.g_real(energy - h) - 2.0 * g0) / h**2
            out[small] = second
        return out

    pts = [abs(p - energy) for c, s in obs.features for p in feature_points(c, s)]
    return integrate_half_line(folded, spec, lower=0.0, center=0.0, scale=1.0, points=pts).value.real / math.pi


@dataclass(frozen=True)
class AverageReport:
    pole: ResonancePole
    observable: str
    nakanishi: float
    complex_avg: complex
    bohm: Optional[float]
    berggren: float
    bohm_minus_berggren: Optional[float]
    status: str = "ok"
    nakanishi_caveat: str = NAKANISHI_CAVEAT
    complex_pairing: str = COMPLEX_PAIRING


def average_report(
    pole: ResonancePole, obs: ObservableSpec, kind: str = "decaying", spec: QuadratureSpec = DEFAULT_SPEC
) -> AverageReport:
    """All four averages for one pole and observable.

    A divergent Bohm mean is recorded in ``status`` rather than raised.
    """
    cplx = average_complex(pole, obs)
    berg = average_berggren(pole, obs)
    try:
        bohm = average_bohm(GamowVector(pole, kind), obs, spec)
        status = "ok"
    except DivergentObservable:
        bohm = None
        status = "DivergentObservable"
    return AverageReport(
        pole=pole,
        observable=obs.name,
        nakanishi=average_nakanishi(pole),
        complex_avg=cplx,
        bohm=bohm,
        berggren=berg,
        bohm_minus_berggren=None if bohm is None else bohm - berg,
        status=status,
    )


def default_gamma_grid(gamma_min: float = 1e-4, decades: float = 3.0, per_decade: int = 8) -> np.ndarray:
    """Geometric grid of widths covering ``decades`` decades upward from ``gamma_min``."""
    n = int(round(decades * per_decade)) + 1
    return gamma_min * np.logspace(0.0, decades, n)


@dataclass(frozen=True)
class ScalingReport:
    observable: str
    energy: float
    gammas: tuple[float, ...]
    bohm: tuple[float, ...]
    berggren: tuple[float, ...]
    differences: tuple[float, ...]
    exact_agreement: bool
    slope: Optional[float] = None
    intercept: Optional[float] = None
    residuals: tuple[float, ...] = field(default_factory=tuple)


def gamma_scaling_experiment(
    obs: ObservableSpec,
    energy: float,
    gammas: Sequence[float],
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> ScalingReport:
    """Fit ``log|bohm - berggren|`` against ``log Gamma`` at fixed ``E_R``.

    When every difference sits below the numerical floor the report is
    flagged ``exact_agreement`` and carries no slope.
    """
    gammas = np.asarray(gammas, dtype=float)
    if gammas.size < 4:
        raise ValueError("the log-log fit needs at least 4 widths")
    if np.any(gammas <= 0) or np.any(np.diff(gammas) <= 0):
        raise ValueError("widths must be positive and strictly increasing")
    bohm, berg = [], []
    for w in gammas:
        pole = ResonancePole(energy, float(w))
        bohm.append(average_bohm(decaying(pole), obs, spec))
        berg.append(average_berggren(pole, obs))
    bohm = np.array(bohm)
    berg = np.array(berg)
    diff = np.abs(bohm - berg)
    floor = AGREEMENT_FLOOR * np.maximum(1.0, np.abs(berg))
    common = dict(
        observable=obs.name,
        energy=energy,
        gammas=tuple(gammas.tolist()),
        bohm=tuple(bohm.tolist()),
        berggren=tuple(berg.tolist()),
        differences=tuple(diff.tolist()),
    )
    above = diff > floor
    if not above.any():
        return ScalingReport(exact_agreement=True, **common)
    if above.sum() < 4:
        raise DegenerateFit(
            f"only {int(above.sum())} widths give a difference above the numerical floor"
        )
    x = np.log(gammas[above])
    y = np.log(diff[above])
    slope, intercept = np.polyfit(x, y, 1)
    return ScalingReport(
        exact_agreement=False,
        slope=float(slope),
        intercept=float(intercept),
        residuals=tuple((y - (slope * x + intercept)).tolist()),
        **common,
    )


@dataclass(frozen=True)
class MomentumCheck:
    """Diagonal-observable mean computed in momentum space, with references.

    ``residual`` compares against the same mean taken in energy space over
    the same half-line range (identical by ``E = k^2/2m``); ``tail_gap``
    compares against the full-line Bohm mean, the difference being the
    weight the half line misses below ``E = 0``.
    """

    k_space: float
    energy_half_line: float
    bohm_full_line: float
    residual: float
    tail_gap: float
    energy_cutoff: float


def berggren_momentum_check(
    pole: ResonancePole, mass: float, obs: ObservableSpec, spec: QuadratureSpec = DEFAULT_SPEC
) -> MomentumCheck:
    """Mean of a diagonal observable with the Gamow vector written over momenta.

    Uses ``psi(k) ~ sqrt(k/m) / (k^2/2m - z_R)`` on ``k in [0, inf)`` with the
    same normalization as the energy representation.  For ``g(E) = E`` the
    half-line integral diverges logarithmically, so both sides are cut
    symmetrically about ``E_R`` at ``E = 2 E_R``.
    """
    if not pole.energy > 0:
        raise NegativeResonanceEnergy(f"momentum representation needs E_R > 0, got {pole.energy}")
    if not mass > 0:
        raise ValueError("mass must be positive")
    if obs.growth_class == "superlinear":
        raise DivergentObservable(f"{obs.name} has no finite mean on a Lorentzian state")

    gam = pole.half_width
    e_r = pole.energy
    weight = gam / math.pi
    e_cut = 2.0 * e_r if obs.growth_class == "linear" else math.inf
    k_r = math.sqrt(2.0 * mass * e_r)
    k_scale = gam * mass / k_r
    e_pts = [p for c, s in obs.features for p in feature_points(c, s)]
    k_pts = [math.sqrt(2.0 * mass * p) for p in e_pts if p > 0]

    def in_k(k):
        E = k * k / (2.0 * mass)
        return weight * (k / mass) * obs.g_real(E) / ((E - e_r) ** 2 + gam * gam)

    def in_e(E):
        return weight * obs.g_real(E) / ((E - e_r) ** 2 + gam * gam)

    if math.isinf(e_cut):
        k_val = integrate_half_line(in_k, spec, lower=0.0, center=k_r, scale=k_scale, points=k_pts).value
        e_val = integrate_half_line(in_e, spec, lower=0.0, center=e_r, scale=gam, points=e_pts).value
    else:
        k_cut = math.sqrt(2.0 * mass * e_cut)
        k_val = integrate_interval(in_k, 0.0, k_cut, spec, center=k_r, scale=k_scale, points=k_pts).value
        e_val = integrate_interval(in_e, 0.0, e_cut, spec, center=e_r, scale=gam, points=e_pts).value
    bohm = average_bohm(decaying(pole), obs, spec)
    return MomentumCheck(
        k_space=k_val.real,
        energy_half_line=e_val.real,
        bohm_full_line=bohm,
        residual=abs(k_val.real - e_val.real),
        tail_gap=abs(k_val.real - bohm),
        energy_cutoff=e_cut,
    )
