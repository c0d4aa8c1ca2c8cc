"""Acceptance criteria, one test per criterion at its stated tolerance.

Each test records its sub-checks through the ``criterion`` fixture; the run
ends with one PASS/FAIL line per criterion in the terminal summary.
"""

import math
import subprocess
import sys

import numpy as np
import pytest

from gamowlab.averages import (
    average_berggren,
    average_bohm,
    average_complex,
    default_gamma_grid,
    energy,
    gamma_scaling_experiment,
    lorentzian_kernel,
)
from gamowlab.cli import hardy_family
from gamowlab.gamow import ResonancePole, decaying, growing, normalization, norm, overlap
from gamowlab.hardy import cauchy_eval, opposite_halfplane_check
from gamowlab.model import DeltaShellModel, Window, find_resonances, jost_function, pole_pair_symmetry_check, s_matrix
from gamowlab.survival import SpectralDensity, amplitude, longtime_exponent, zeno_check

from helpers import EXAMPLE, GOLDEN, SUBCOMMANDS, tables_match


def random_poles(n=50, seed=20240601):
    """Poles with |E_R| log-uniform in [0.01, 100] and Gamma/|E_R| log-uniform in [1e-4, 1]."""
    rng = np.random.default_rng(seed)
    magnitude = 10 ** rng.uniform(-2, 2, n)
    sign = rng.choice([-1.0, 1.0], n)
    ratio = 10 ** rng.uniform(-4, 0, n)
    return [ResonancePole(float(s * m), float(m * r)) for s, m, r in zip(sign, magnitude, ratio)]


@pytest.mark.criterion("1 Bohm mean energy")
def test_criterion_1_bohm_mean_energy(criterion):
    worst = 0.0
    for pole in random_poles():
        v = average_bohm(decaying(pole), energy())
        worst = max(worst, abs(v - pole.energy) / abs(pole.energy))
    assert criterion(f"max relative error {worst:.2e} <= 1e-6", worst <= 1e-6)


@pytest.mark.criterion("2 normalization and orthogonality")
def test_criterion_2_normalization(criterion):
    norm_err = ortho = 0.0
    for pole in random_poles():
        d, g = decaying(pole), growing(pole)
        norm_err = max(norm_err, abs(norm(d) - 1), abs(norm(g) - 1))
        ortho = max(ortho, abs(overlap(g, d)))
    alpha = normalization(ResonancePole(0.0, 2.0))
    ok = [
        criterion(f"max |norm - 1| = {norm_err:.2e} <= 1e-8", norm_err <= 1e-8),
        criterion(f"max |<G|D>| = {ortho:.2e} < 1e-8", ortho < 1e-8),
        criterion("alpha(Gamma=2) = 1/sqrt(pi) within 1e-12", abs(alpha - 1 / math.sqrt(math.pi)) <= 1e-12),
    ]
    assert all(ok)


@pytest.mark.criterion("3 complex average")
def test_criterion_3_complex_average(criterion):
    ok = all(average_complex(p, energy()) == complex(p.energy, -p.width / 2) for p in random_poles())
    ok &= average_complex(ResonancePole(2.0, 0.4), energy()) == 2 - 0.2j
    assert criterion("average_complex(E) == E_R - i Gamma/2 exactly", ok)


@pytest.mark.criterion("4 Berggren equivalence")
def test_criterion_4_berggren_slope(criterion):
    # smooth bounded family g = 1/((E-c)^2 + b^2), c = E_R + 5, b = 2, Gamma over 3 decades
    e_r = 1.0
    report = gamma_scaling_experiment(lorentzian_kernel(e_r + 5.0, 2.0), e_r, default_gamma_grid(1e-4, 3, 8))
    slope = report.slope
    ok = slope is not None and 1.8 <= slope <= 2.2
    assert criterion(f"log-log slope {slope:.4f} in [1.8, 2.2]", ok)


@pytest.mark.criterion("4 Berggren equivalence")
def test_criterion_4_energy_exact(criterion):
    worst = 0.0
    for e_r in (-3.0, 0.5, 1.0, 40.0):
        for w in default_gamma_grid(1e-4, 3, 8):
            pole = ResonancePole(e_r, float(w))
            worst = max(worst, abs(average_bohm(decaying(pole), energy()) - average_berggren(pole, energy())))
    assert criterion(f"energy: max |bohm - berggren| = {worst:.2e} < 1e-9", worst < 1e-9)


def _targets():
    # 20 targets in the lower half plane; mirrored for the upper class
    rng = np.random.default_rng(7)
    re = rng.uniform(-10, 10, 20)
    im = -(10 ** rng.uniform(-2, 1, 20))
    return [complex(a, b) for a, b in zip(re, im)]


@pytest.mark.criterion("5 Titchmarsh evaluation")
def test_criterion_5_titchmarsh(criterion):
    reproduce = annihilate = 0.0
    for f in hardy_family().values():
        for z in _targets():
            inside = z if f.half_plane == "lower" else z.conjugate()
            reproduce = max(reproduce, abs(cauchy_eval(f, inside) - f.eval_analytic(inside)))
            annihilate = max(annihilate, abs(opposite_halfplane_check(f, inside.conjugate())))
    ok = [
        criterion(f"max reproduction error {reproduce:.2e} <= 1e-6", reproduce <= 1e-6),
        criterion(f"max opposite-half-plane value {annihilate:.2e} < 1e-6", annihilate < 1e-6),
    ]
    assert all(ok)


@pytest.mark.criterion("6 pole finder")
def test_criterion_6_pole_finder(criterion):
    model = DeltaShellModel(10.0, radius=1.0)
    poles = find_resonances(model, Window())
    jost = max(abs(jost_function(model, p.k)) for p in poles)
    widths = all(p.pole.width > 0 for p in poles)
    pair = max(pole_pair_symmetry_check(model, p.k) for p in poles)
    doubled = find_resonances(model, Window(), grid=(100, 50))
    stable = len(doubled) == len(poles) and all(abs(a.k - b.k) <= 1e-8 for a, b in zip(poles, doubled))
    offsets = []
    for lam in (10.0, 50.0, 250.0):
        located = find_resonances(DeltaShellModel(lam), Window())
        offsets.append([abs(p.k.real - n * math.pi) for n, p in enumerate(located[:3], start=1)])
    trend = bool(np.all(np.diff(np.array(offsets), axis=0) < 0))
    ok = [
        criterion(f"{len(poles)} poles, max |jost| = {jost:.1e} <= 1e-10", jost <= 1e-10),
        criterion("every Gamma > 0", widths),
        criterion(f"max pair residual {pair:.1e} <= 1e-8", pair <= 1e-8),
        criterion("pole set invariant under grid doubling", stable),
        criterion("|Re k_n - n pi| decreases over lambda 10, 50, 250", trend),
    ]
    assert all(ok)


@pytest.mark.criterion("7 S-matrix unitarity")
def test_criterion_7_unitarity(criterion):
    k = np.linspace(0.05, 25.0, 100)
    worst = max(float(np.max(np.abs(np.abs(s_matrix(DeltaShellModel(lam), k)) - 1))) for lam in (5.0, 10.0, 50.0))
    assert criterion(f"max ||S| - 1| = {worst:.1e} <= 1e-10", worst <= 1e-10)


@pytest.mark.criterion("8 survival behaviour")
def test_criterion_8_survival(criterion):
    e_r, width = 5.0, 1.0
    full = SpectralDensity("bw_full_line", e_r, width)
    rel = 0.0
    for t in np.linspace(0.0, 20.0 / width, 81):
        expected = math.exp(-width * t / 2)
        rel = max(rel, abs(abs(amplitude(full, float(t))) - expected) / expected)
    slope = longtime_exponent(SpectralDensity("bw_truncated", 5.0, 1.0), 60.0, 200.0)
    gauss = SpectralDensity("gaussian_truncated", 10.0, 1.0)
    est = [zeno_check(gauss, h) for h in (1e-2, 1e-3, 1e-4)]
    ratios = [a / b for a, b in zip(est, est[1:])]
    linear = all(abs(r - 10.0) < 0.5 for r in ratios) and abs(est[1]) < 1e-2
    ok = [
        criterion(f"full-line |A| relative error {rel:.1e} <= 1e-6 for Gamma t <= 20", rel <= 1e-6),
        criterion(f"truncated long-time slope {slope:.3f} = -2 +/- 0.2", abs(slope + 2) <= 0.2),
        criterion(f"zeno estimate linear in h (ratios {ratios[0]:.2f}, {ratios[1]:.2f})", linear),
    ]
    assert all(ok)


@pytest.mark.criterion("9 CLI determinism")
def test_criterion_9_cli_determinism(criterion, tmp_path):
    results = []
    for command in SUBCOMMANDS:
        outputs = []
        for run in (1, 2):
            out = tmp_path / f"{command}-{run}.csv"
            proc = subprocess.run(
                [sys.executable, "-m", "gamowlab", command, "--config", str(EXAMPLE), "--out", str(out)],
                capture_output=True,
                text=True,
            )
            outputs.append(out.read_bytes() if proc.returncode == 0 else None)
        golden = (GOLDEN / f"{command}.csv").read_text()
        same = outputs[0] is not None and outputs[0] == outputs[1]
        matches = same and tables_match(outputs[0].decode(), golden)
        results.append(criterion(f"{command}: byte-identical reruns and golden match", same and matches))
    assert all(results)
