"""Command line interface.

    gamowlab poles          --config run.ini [--out poles.csv] [--format csv|json]
    gamowlab average        ...
    gamowlab compare-gamma  ...
    gamowlab survival       ...
    gamowlab titchmarsh     ...

Any key can be overridden with ``--set section.key=value``.  With ``--out``
the table goes to that file and the resolved configuration to
``<out>.meta.json``; otherwise the table is printed.

Exit status: 0 success, 2 invalid input, 3 numerical failure, 4 empty result.
"""

from __future__ import annotations

import argparse
import enum
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import __version__
from .averages import (
    average_report,
    first_order_coefficient,
    gamma_scaling_experiment,
)
from .config import RunConfig, load_config
from .errors import GamowLabError, NoPolesInWindow, NumericalError, OscillationLimit, ValidationError
from .gamow import ResonancePole
from .hardy import HardyFunction, blaschke, cauchy_eval, opposite_halfplane_check, rational
from .model import find_resonances, pole_pair_symmetry_check
from .survival import amplitude, reference_probability
from .tables import Table, read_table, render

log = logging.getLogger("gamowlab")


class ExitCode(enum.IntEnum):
    OK = 0
    VALIDATION = 2
    NUMERICAL = 3
    EMPTY = 4


class EmptyResult(GamowLabError):
    def __init__(self, message, table):
        super().__init__(message)
        self.table = table


# ---------------------------------------------------------------- poles


def cmd_poles(config: RunConfig) -> Table:
    model = config.model()
    window, max_count, grid = config.pole_search()
    table = Table(
        "poles",
        [
            ("n", "-"),
            ("k_re", "1/length"),
            ("k_im", "1/length"),
            ("E_R", "energy"),
            ("Gamma", "energy"),
            ("jost_residual", "-"),
            ("pair_residual", "-"),
        ],
        notes={"model": f"delta shell strength={model.strength!r} radius={model.radius!r} mass={model.mass!r}"},
    )
    try:
        located = find_resonances(model, window, max_count, grid)
    except NoPolesInWindow as exc:
        raise EmptyResult(str(exc), table) from exc
    for n, p in enumerate(located, start=1):
        table.rows.append(
            [
                n,
                p.k.real,
                p.k.imag,
                p.pole.energy,
                p.pole.width,
                p.jost_residual,
                pole_pair_symmetry_check(model, p.k),
            ]
        )
    return table


# ---------------------------------------------------------------- average


def _parse_inline_poles(config: RunConfig) -> list[ResonancePole]:
    sec = config.section("average")
    poles = []
    for item in sec.items("poles"):
        e, sep, w = item.partition(":")
        try:
            if not sep:
                raise ValueError
            poles.append(ResonancePole(float(e), float(w)))
        except ValueError:
            sec.fail("poles", f"expected E_R:Gamma pairs with Gamma > 0, got {item!r}")
    return poles


def _poles_for_average(config: RunConfig) -> list[ResonancePole]:
    sec = config.section("average")
    path = sec.text("poles_file")
    if path:
        try:
            table = read_table(path)
            return [ResonancePole(float(e), float(w)) for e, w in zip(table.column("E_R"), table.column("Gamma"))]
        except (OSError, ValueError, KeyError) as exc:
            sec.fail("poles_file", f"cannot load poles from {path}: {exc}")
    text = sec.text("poles")
    if text == "model":
        window, max_count, grid = config.pole_search()
        return [p.pole for p in find_resonances(config.model(), window, max_count, grid)]
    poles = _parse_inline_poles(config)
    if not poles:
        sec.fail("poles", "no poles given")
    return poles


def cmd_average(config: RunConfig) -> Table:
    spec = config.quadrature()
    sec = config.section("average")
    kind = sec.choice("kind", ("decaying", "growing"))
    names = sec.items("observables")
    if not names:
        sec.fail("observables", "no observables selected")
    poles = _poles_for_average(config)
    table = Table(
        "average",
        [
            ("pole", "-"),
            ("E_R", "energy"),
            ("Gamma", "energy"),
            ("observable", "-"),
            ("nakanishi", "obs"),
            ("complex_re", "obs"),
            ("complex_im", "obs"),
            ("bohm", "obs"),
            ("berggren", "obs"),
            ("bohm_minus_berggren", "obs"),
            ("status", "-"),
        ],
        notes={
            "nakanishi": "formal zero; <f0|f0> undefined (convention)",
            "complex": "g(z_R) with <f~0|f0> = 1 (residue pairing)",
            "kind": kind,
        },
    )
    for i, pole in enumerate(poles):
        for name in names:
            obs = config.observable("average", name, pole.energy, "observables")
            rep = average_report(pole, obs, kind, spec)
            table.rows.append(
                [
                    i,
                    pole.energy,
                    pole.width,
                    obs.name,
                    rep.nakanishi,
                    rep.complex_avg.real,
                    rep.complex_avg.imag,
                    rep.bohm if rep.bohm is not None else "DivergentObservable",
                    rep.berggren,
                    rep.bohm_minus_berggren,
                    rep.status,
                ]
            )
    return table


# ---------------------------------------------------------------- compare-gamma


def cmd_compare_gamma(config: RunConfig) -> Table:
    spec = config.quadrature()
    sec = config.section("compare-gamma")
    energy = sec.number("energy")
    obs = config.observable("compare-gamma", sec.text("observable"), energy, "observable")
    if obs.growth_class == "superlinear":
        sec.fail("observable", f"{obs.name} has no finite Bohm mean")
    gammas = config.gamma_grid()
    report = gamma_scaling_experiment(obs, energy, gammas, spec)
    table = Table(
        "compare-gamma",
        [("Gamma", "energy"), ("bohm", "obs"), ("berggren", "obs"), ("difference", "obs")],
        notes={"observable": obs.name, "E_R": repr(energy)},
    )
    for row in zip(report.gammas, report.bohm, report.berggren, report.differences):
        table.rows.append(list(row))
    if report.exact_agreement:
        table.notes["fit"] = "exact agreement (difference below numerical floor at every Gamma)"
    else:
        table.notes["slope"] = repr(report.slope)
        table.notes["intercept"] = repr(report.intercept)
    if obs.growth_class == "bounded_decaying":
        c = first_order_coefficient(obs, energy, spec)
        table.notes["first_order_coefficient"] = repr(c)
    return table


# ---------------------------------------------------------------- survival


def cmd_survival(config: RunConfig) -> Table:
    spec = config.quadrature()
    density = config.density()
    times = config.time_grid()
    table = Table(
        "survival",
        [
            ("t", "1/energy"),
            ("A_re", "-"),
            ("A_im", "-"),
            ("P", "-"),
            ("reference", "-"),
            ("background", "-"),
        ],
        notes={"density": f"{density.kind} E_R={density.energy!r} width={density.width!r}"},
    )
    for t in times:
        a = amplitude(density, t, spec)
        p = min(abs(a) ** 2, 1.0)
        ref = reference_probability(density, t)
        table.rows.append([t, a.real, a.imag, p, ref, None if ref is None else p - ref])
    return table


# ---------------------------------------------------------------- titchmarsh


def hardy_family() -> dict[str, HardyFunction]:
    family = {}
    for half in ("lower", "upper"):
        for n in range(1, 5):
            family[f"{half}{n}"] = rational(n, half)
        for n in (1, 2):
            family[f"{half}B{n}"] = blaschke(n, half)
    return family


def _targets(config: RunConfig) -> list[complex]:
    sec = config.section("titchmarsh")
    items = sec.items("targets")
    if not items:
        sec.fail("targets", "no targets given")
    targets = []
    for item in items:
        if item == "poles":
            window, max_count, grid = config.pole_search()
            targets.extend(p.pole.z for p in find_resonances(config.model(), window, max_count, grid))
            continue
        try:
            z = complex(item)
        except ValueError:
            sec.fail("targets", f"not a complex number: {item!r}")
        if abs(z.imag) < 1e-12:
            sec.fail("targets", f"target {item} lies on the real axis")
        targets.append(z)
    if sec.flag("mirror"):
        targets = targets + [z.conjugate() for z in targets]
    return targets


def cmd_titchmarsh(config: RunConfig) -> Table:
    spec = config.quadrature()
    sec = config.section("titchmarsh")
    available = hardy_family()
    ids = sec.items("family")
    if ids == ["all"]:
        ids = list(available)
    if not ids:
        sec.fail("family", "empty test-function family")
    for fid in ids:
        if fid not in available:
            sec.fail("family", f"unknown test function {fid!r}; known: {', '.join(available)}")
    targets = _targets(config)
    table = Table(
        "titchmarsh",
        [
            ("function", "-"),
            ("half_plane", "-"),
            ("z_re", "energy"),
            ("z_im", "energy"),
            ("check", "-"),
            ("value_re", "-"),
            ("value_im", "-"),
            ("expected_re", "-"),
            ("expected_im", "-"),
            ("residual", "-"),
        ],
    )
    for fid in ids:
        f = available[fid]
        for z in targets:
            if f.contains(z):
                value = cauchy_eval(f, z, spec)
                expected = f.eval_analytic(z)
                check = "reproduce"
            else:
                value = opposite_halfplane_check(f, z, spec)
                expected = 0j
                check = "annihilate"
            table.rows.append(
                [fid, f.half_plane, z.real, z.imag, check, value.real, value.imag, expected.real, expected.imag, abs(value - expected)]
            )
    return table


COMMANDS: dict[str, Callable[[RunConfig], Table]] = {
    "poles": cmd_poles,
    "average": cmd_average,
    "compare-gamma": cmd_compare_gamma,
    "survival": cmd_survival,
    "titchmarsh": cmd_titchmarsh,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gamowlab", description="Gamow-state energy averages and resonance numerics")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="INI-style run configuration")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format (default from [output] format)")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="SECTION.KEY=VALUE")
    return parser


def _emit(table: Table, args, config: RunConfig, fmt: str, status: ExitCode) -> None:
    text = render(table, fmt)
    if args.out:
        Path(args.out).write_text(text)
        meta = {
            "command": args.command,
            "version": __version__,
            "format": fmt,
            "config_file": args.config,
            "config": config.resolved(),
            "rows": len(table.rows),
            "status": status.name.lower(),
        }
        Path(args.out + ".meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="gamowlab: %(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config, tuple(args.overrides))
        fmt = args.format or config.output_format()
        table = COMMANDS[args.command](config)
    except EmptyResult as exc:
        log.error("%s", exc)
        _emit(exc.table, args, config, fmt, ExitCode.EMPTY)
        return ExitCode.EMPTY
    except NoPolesInWindow as exc:
        log.error("%s", exc)
        return ExitCode.EMPTY
    except (ValidationError, ValueError) as exc:
        log.error("invalid input: %s", exc)
        return ExitCode.VALIDATION
    except OscillationLimit as exc:
        log.error("%s (cutoff t = %s)", exc, repr(exc.t_max))
        return ExitCode.NUMERICAL
    except NumericalError as exc:
        log.error("numerical failure: %s", exc)
        return ExitCode.NUMERICAL
    _emit(table, args, config, fmt, ExitCode.OK)
    return ExitCode.OK


if __name__ == "__main__":
    sys.exit(main())
