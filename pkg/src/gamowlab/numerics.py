"""
Complex quadrature and root finding
===================================

Everything in the package that integrates or solves goes through this module.

Infinite and half-infinite ranges are mapped onto a finite angle interval
with ``E = center + scale * tan(theta)``.  Under this map a Lorentzian of
half-width ``scale`` centred at ``center`` becomes a constant, so the
resonance integrands met in this package turn into smooth bounded functions
that an adaptive Gauss-Kronrod rule handles to near machine precision.
Any integrand decaying like ``1/E**2`` or faster stays bounded after the
map; an integrand with a ``1/E`` tail does not, and is only accepted through
:func:`principal_value`, which folds it about a declared centre first.

All callables passed in must be vectorised: they receive a float ndarray
and return an array of the same shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Optional

import numpy as np

from .errors import DerivativeVanished, NonConvergence, NonFinite, OscillationLimit

# 15-point Kronrod nodes on [-1, 1] (positive half, descending) and weights,
# with the embedded 7-point Gauss weights on the odd-indexed nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[[13, 11, 9]] = _WG[:3]

_MAX_PANELS = 200_000
# error estimates below this multiple of eps * integral(|f|) are roundoff
_ROUNDOFF_FACTOR = 50.0 * np.finfo(float).eps
# oscillatory quadrature is refused when E-range times t exceeds this
MAX_PHASE = 1.0e4
# below this phase across the upper tail the asymptotic tail terms are not used
_MIN_TAIL_PHASE = 200.0
_MAX_REACH = 1.0e300


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances shared by the integrators.

    ``decay_cutoff`` only matters for the direct (panel) route of
    :func:`oscillatory_integral`: densities are integrated numerically up to
    this distance from their features and the remainder is handled by an
    asymptotic tail formula.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_refinements: int = 30
    decay_cutoff: float = math.inf

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if not self.abs_tol >= 0:
            raise ValueError(f"abs_tol must be non-negative, got {self.abs_tol}")
        if self.max_refinements < 1:
            raise ValueError(f"max_refinements must be >= 1, got {self.max_refinements}")
        if not self.decay_cutoff > 0:
            raise ValueError(f"decay_cutoff must be positive, got {self.decay_cutoff}")


DEFAULT_SPEC = QuadratureSpec()


class Integral(NamedTuple):
    value: complex
    error: float
    evaluations: int


def feature_points(center: float, scale: float) -> list[float]:
    """Breakpoints that bracket a peak of half-width ``scale`` at ``center``."""
    return [center + scale * m for m in (-16.0, -4.0, -1.0, 0.0, 1.0, 4.0, 16.0)]


def _evaluate(f, x):
    y = np.asarray(f(x), dtype=complex)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape).astype(complex)
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(y)].ravel()[0]
        raise NonFinite(f"integrand is not finite at {bad!r}")
    return y


def _gauss_kronrod(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    y = _evaluate(f, x)
    kron = half * (y @ KRONROD_WEIGHTS)
    gauss = half * (y @ GAUSS_WEIGHTS)
    l1 = np.abs(half) * (np.abs(y) @ KRONROD_WEIGHTS)
    return kron, np.abs(kron - gauss), l1


def adaptive_quad(f: Callable, breaks: Iterable[float], spec: QuadratureSpec = DEFAULT_SPEC) -> Integral:
    """Globally adaptive Gauss-Kronrod (7/15) over a finite partition.

    Each round bisects the smallest set of worst panels whose removal would
    bring the summed error under half the tolerance.  Fails with
    :class:`NonConvergence` once a panel would exceed ``max_refinements``
    bisections.
    """
    edges = np.unique(np.asarray(list(breaks), dtype=float))
    if edges.size < 2 or not np.all(np.isfinite(edges)):
        raise ValueError("need at least two finite breakpoints")
    a, b = edges[:-1], edges[1:]
    depth = np.zeros(a.size, dtype=int)
    est, err, l1 = _gauss_kronrod(f, a, b)
    nevals = 15 * a.size
    while True:
        total = est.sum()
        total_err = err.sum()
        tol = max(spec.rel_tol * abs(total), spec.abs_tol, _ROUNDOFF_FACTOR * l1.sum())
        if total_err <= tol:
            return Integral(complex(total), float(total_err), nevals)

        order = np.argsort(err)[::-1]
        # keep splitting the worst panels until what is left fits in tol/2
        remaining = total_err - np.cumsum(err[order])
        n_split = int(np.searchsorted(-remaining, -0.5 * tol)) + 1
        split = order[:n_split]
        if np.any(depth[split] >= spec.max_refinements):
            raise NonConvergence(
                f"refinement budget exhausted: error {total_err:.3g} > tolerance {tol:.3g}"
            )
        if a.size + split.size > _MAX_PANELS:
            raise NonConvergence(f"more than {_MAX_PANELS} panels needed")

        keep = np.ones(a.size, dtype=bool)
        keep[split] = False
        sa, sb = a[split], b[split]
        mid = 0.5 * (sa + sb)
        na = np.concatenate([sa, mid])
        nb = np.concatenate([mid, sb])
        nd = np.concatenate([depth[split], depth[split]]) + 1
        ne, nerr, nl1 = _gauss_kronrod(f, na, nb)
        nevals += 15 * na.size

        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        depth = np.concatenate([depth[keep], nd])
        est = np.concatenate([est[keep], ne])
        err = np.concatenate([err[keep], nerr])
        l1 = np.concatenate([l1[keep], nl1])


def _tan_mapped(f, lower, upper, center, scale, points, spec, initial_panels=16):
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")

    def g(theta):
        t = np.tan(theta)
        return _evaluate(f, center + scale * t) * (scale * (1.0 + t * t))

    th_lo = -0.5 * np.pi if lower == -np.inf else math.atan((lower - center) / scale)
    th_hi = 0.5 * np.pi if upper == np.inf else math.atan((upper - center) / scale)
    if not th_hi > th_lo:
        return Integral(0j, 0.0, 0)
    breaks = list(np.linspace(th_lo, th_hi, initial_panels + 1))
    for p in points:
        th = math.atan((p - center) / scale)
        if th_lo < th < th_hi:
            breaks.append(th)
    return adaptive_quad(g, breaks, spec)


def integrate_real_line(
    f: Callable,
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    center: float = 0.0,
    scale: float = 1.0,
    points: Iterable[float] = (),
) -> Integral:
    """Integrate ``f`` over the whole real line.

    ``center`` and ``scale`` should describe the sharpest feature of the
    integrand; further features go in ``points`` (see :func:`feature_points`).
    """
    return _tan_mapped(f, -np.inf, np.inf, center, scale, points, spec)


def integrate_half_line(
    f: Callable,
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    lower: float = 0.0,
    center: Optional[float] = None,
    scale: float = 1.0,
    points: Iterable[float] = (),
) -> Integral:
    """Integrate ``f`` over ``[lower, inf)``."""
    if center is None:
        center = lower
    return _tan_mapped(f, lower, np.inf, center, scale, points, spec)


def integrate_interval(
    f: Callable,
    lower: float,
    upper: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    center: Optional[float] = None,
    scale: float = 1.0,
    points: Iterable[float] = (),
) -> Integral:
    if center is None:
        center = 0.5 * (lower + upper)
    return _tan_mapped(f, lower, upper, center, scale, points, spec)


def principal_value(
    f: Callable,
    center: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    scale: float = 1.0,
    points: Iterable[float] = (),
) -> Integral:
    """Symmetric-limit integral ``lim_R int_{center-R}^{center+R} f``.

    The integrand is folded about ``center``; the odd part cancels pointwise
    and the even remainder is integrated over ``[0, inf)``.  If the folded
    function still has a non-integrable tail the symmetric partial sums do
    not settle and :class:`NonConvergence` is raised.
    """

    def folded(x):
        return _evaluate(f, center + x) + _evaluate(f, center - x)

    offsets = {abs(p - center) for p in points}
    return integrate_half_line(folded, spec, lower=0.0, center=0.0, scale=scale, points=offsets)


def complex_derivative(g: Callable, k: complex) -> complex:
    """Central difference along the real direction, step ``1e-6 * (1 + |k|)``."""
    h = 1e-6 * (1.0 + abs(k))
    return (g(k + h) - g(k - h)) / (2.0 * h)


def find_root_complex(
    g: Callable[[complex], complex],
    seed: complex,
    tol: float = 1e-12,
    max_iter: int = 100,
    derivative: Optional[Callable[[complex], complex]] = None,
) -> complex:
    """Damped Newton iteration for a zero of an analytic function.

    The returned point always satisfies ``|g(k)| <= tol``; anything else is
    an exception.
    """
    k = complex(seed)
    gk = complex(g(k))
    for _ in range(max_iter):
        if not np.isfinite(gk):
            raise NonFinite(f"function is not finite at {k!r}")
        if abs(gk) <= tol:
            return k
        dg = complex(derivative(k)) if derivative is not None else complex_derivative(g, k)
        if dg == 0 or not np.isfinite(dg):
            raise DerivativeVanished(f"derivative vanished at {k!r}")
        step = gk / dg
        # halve the step while it makes things worse
        for _ in range(30):
            k_new = k - step
            g_new = complex(g(k_new))
            if np.isfinite(g_new) and abs(g_new) < abs(gk):
                break
            step *= 0.5
        else:
            raise NonConvergence(f"Newton stalled at {k!r} with |g| = {abs(gk):.3g}")
        k, gk = k_new, g_new
    if abs(gk) <= tol:
        return k
    raise NonConvergence(f"no root within {max_iter} iterations; last |g| = {abs(gk):.3g}")


def oscillatory_integral(density, t: float, spec: QuadratureSpec = DEFAULT_SPEC, method: str = "auto") -> complex:
    """Fourier-type integral ``int density(E) exp(-i E t) dE`` over the support.

    Two routes are available:

    ``contour``
        For densities that expose their lower-half-plane poles, the contour
        is swung onto the negative imaginary axis.  The result is a sum of
        pole terms plus, for a support bounded below by 0, an exponentially
        damped integral along the imaginary axis.  Exact for any ``t > 0``.
    ``panels``
        Direct integration over a finite window with panels no wider than
        half an oscillation, plus a two-term asymptotic estimate for the
        tails.  Refused once ``t`` times the window width exceeds
        ``MAX_PHASE``.

    ``density`` must provide ``pdf``, ``lower``, ``upper``, ``features()``,
    ``lower_poles()`` (``None`` when not applicable), ``pdf_complex`` and
    ``window(cutoff)``.  Negative ``t`` uses ``A(-t) = conj(A(t))``.
    """
    if t == 0:
        return _total_weight(density, spec)
    if t < 0:
        return oscillatory_integral(density, -t, spec, method).conjugate()

    if method == "auto":
        poles = density.lower_poles()
        method = "contour" if poles is not None and density.lower in (0.0, -np.inf) else "panels"
    if method == "contour":
        return _contour_route(density, t, spec)
    if method == "panels":
        return _panel_route(density, t, spec)
    raise ValueError(f"unknown method {method!r}")


def _total_weight(density, spec):
    (center, scale), *rest = density.features()
    pts = [p for c, s in rest for p in feature_points(c, s)]
    if density.lower == -np.inf:
        res = integrate_real_line(density.pdf, spec, center=center, scale=scale, points=pts)
    else:
        res = integrate_half_line(density.pdf, spec, lower=density.lower, center=center, scale=scale, points=pts)
    return res.value


def _contour_route(density, t, spec):
    poles = density.lower_poles()
    if poles is None:
        raise ValueError("density does not expose its poles")
    total = 0j
    for pole, residue in poles:
        if density.lower == 0.0 and not pole.real > 0:
            # pole lies outside the fourth quadrant swept by the rotation
            continue
        total += -2j * np.pi * residue * np.exp(-1j * pole * t)
    if density.lower == 0.0:
        if any(p.real == 0 for p, _ in poles):
            raise ValueError("pole on the rotated contour; use method='panels'")

        def along_axis(y):
            return density.pdf_complex(-1j * y) * np.exp(-y * t)

        pts = [abs(p) for p, _ in poles]
        # the damping length 1/t only matters once it is shorter than the pole scale
        scale = min(1.0 / t, max(pts))
        if 1.0 / t < 1e300:
            pts.append(1.0 / t)
        total += -1j * integrate_half_line(along_axis, spec, lower=0.0, center=0.0, scale=scale, points=pts).value
    elif density.lower != -np.inf:
        raise ValueError("contour route needs a support starting at 0 or -inf")
    return complex(total)


def _panel_route(density, t, spec):
    lo, hi = density.window(spec.decay_cutoff)
    width = hi - lo
    if t * width > MAX_PHASE:
        t_max = MAX_PHASE / width
        raise OscillationLimit(
            f"E-range {width:.4g} at t={t:.4g} exceeds the oscillatory limit; largest supported t is {t_max:.6g}",
            t_max,
        )

    def integrand(E):
        return density.pdf(E) * np.exp(-1j * E * t)

    (center, scale), *_ = density.features()
    reach = _MIN_TAIL_PHASE / t
    short_upper = density.upper == np.inf and hi - center < reach
    short_lower = density.lower == -np.inf and center - lo < reach
    if short_upper or short_lower:
        # Few oscillations inside the window: widen it until the tail
        # expansion is accurate and integrate on the tan-mapped interval.
        if short_upper:
            hi = center + min(reach, _MAX_REACH)
        if short_lower:
            lo = center - min(reach, _MAX_REACH)
        pts = [p for c, s in density.features() for p in feature_points(c, s)]
        total = integrate_interval(integrand, lo, hi, spec, center=center, scale=scale, points=pts).value
        return complex(total + _tails(density, t, lo, hi))

    n = max(int(math.ceil(t * width / np.pi)), 1)
    breaks = list(np.linspace(lo, hi, n + 1))
    for c, s in density.features():
        breaks.extend(p for p in feature_points(c, s) if lo < p < hi)
    total = adaptive_quad(integrand, breaks, spec).value

    return complex(total + _tails(density, t, lo, hi))


def _tails(density, t, lo, hi):
    """Two-term integration-by-parts estimate of the parts beyond ``[lo, hi]``."""
    it = 1j * t
    total = 0j
    if density.upper == np.inf:
        rho, drho = _value_and_slope(density.pdf, hi)
        if rho or drho:
            total += np.exp(-1j * hi * t) * (rho / it + drho / it**2)
    if density.lower == -np.inf:
        rho, drho = _value_and_slope(density.pdf, lo)
        if rho or drho:
            total -= np.exp(-1j * lo * t) * (rho / it + drho / it**2)
    return total


def _value_and_slope(pdf, x):
    h = 1e-4 * (1.0 + abs(x))
    vals = np.asarray(pdf(np.array([x - h, x, x + h])), dtype=float)
    return vals[1], (vals[2] - vals[0]) / (2 * h)
