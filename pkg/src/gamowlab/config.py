"""Run configuration: INI-style ``key = value`` sections, one per subcommand.

Values from ``--set section.key=value`` override the file.  Validation
errors name the section, the key and (when the value came from a file) the
line it was read from.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ValidationError
from .numerics import QuadratureSpec

DEFAULTS: dict[str, dict[str, str]] = {
    "model": {"strength": "10", "radius": "1", "mass": "1"},
    "poles": {
        "re_min": "0",
        "re_max": "10",
        "im_min": "-2",
        "im_max": "0",
        "max_count": "20",
        "grid_re": "50",
        "grid_im": "25",
    },
    "average": {
        "poles": "model",
        "poles_file": "",
        "observables": "energy, constant",
        "kind": "decaying",
        "lorentzian_offset": "5",
        "lorentzian_width": "2",
    },
    "compare-gamma": {
        "observable": "lorentzian",
        "energy": "1",
        "gammas": "",
        "gamma_min": "1e-4",
        "decades": "3",
        "per_decade": "8",
        "lorentzian_offset": "5",
        "lorentzian_width": "2",
    },
    "survival": {
        "density": "bw_truncated",
        "energy": "5",
        "width": "1",
        "times": "",
        "t_min": "0",
        "t_max": "200",
        "samples": "41",
        "spacing": "linear",
    },
    "titchmarsh": {"family": "all", "targets": "poles", "mirror": "true"},
    "quadrature": {"rel_tol": "1e-9", "abs_tol": "1e-12", "max_refinements": "30", "decay_cutoff": "inf"},
    "output": {"format": "csv"},
}


class _Lookup:
    """Typed access to one section with diagnostics that point at the source."""

    def __init__(self, raw: configparser.ConfigParser, lines: dict, section: str):
        self.raw = raw
        self.lines = lines
        self.section = section

    def _where(self, key):
        line = self.lines.get((self.section, key))
        loc = f"[{self.section}] {key}"
        return f"{loc} (line {line})" if line else loc

    def fail(self, key, message):
        raise ValidationError(f"{self._where(key)}: {message}")

    def text(self, key) -> str:
        return self.raw.get(self.section, key, fallback=DEFAULTS.get(self.section, {}).get(key, "")).strip()

    def number(self, key, *, positive=False, nonnegative=False, integer=False):
        value = self.text(key)
        try:
            x = int(value) if integer else float(value)
        except ValueError:
            self.fail(key, f"expected {'an integer' if integer else 'a number'}, got {value!r}")
        if not integer and math.isnan(x):
            self.fail(key, "NaN is not allowed")
        if positive and not x > 0:
            self.fail(key, f"must be positive, got {value}")
        if nonnegative and not x >= 0:
            self.fail(key, f"must be non-negative, got {value}")
        return x

    def items(self, key) -> list[str]:
        value = self.text(key)
        return [v.strip() for v in re.split(r"[,\s]+", value) if v.strip()]

    def floats(self, key) -> list[float]:
        out = []
        for item in self.items(key):
            try:
                out.append(float(item))
            except ValueError:
                self.fail(key, f"not a number: {item!r}")
        return out

    def flag(self, key) -> bool:
        value = self.text(key).lower()
        if value in ("1", "true", "yes", "on"):
            return True
        if value in ("0", "false", "no", "off"):
            return False
        self.fail(key, f"expected true/false, got {value!r}")

    def choice(self, key, options):
        value = self.text(key)
        if value not in options:
            self.fail(key, f"expected one of {', '.join(options)}, got {value!r}")
        return value


def _strictly_increasing(values) -> bool:
    return len(values) > 0 and all(b > a for a, b in zip(values, values[1:]))


@dataclass
class RunConfig:
    raw: configparser.ConfigParser
    lines: dict = field(default_factory=dict)
    source: Optional[str] = None

    def section(self, name: str) -> _Lookup:
        return _Lookup(self.raw, self.lines, name)

    def resolved(self) -> dict[str, dict[str, str]]:
        """Every section with defaults filled in, for the run metadata."""
        out = {}
        for name, defaults in DEFAULTS.items():
            sec = self.section(name)
            out[name] = {k: sec.text(k) for k in sorted(set(defaults) | set(self.raw[name] if self.raw.has_section(name) else {}))}
        return out

    # typed views -------------------------------------------------------

    def quadrature(self) -> QuadratureSpec:
        s = self.section("quadrature")
        return QuadratureSpec(
            rel_tol=s.number("rel_tol", positive=True),
            abs_tol=s.number("abs_tol", nonnegative=True),
            max_refinements=s.number("max_refinements", positive=True, integer=True),
            decay_cutoff=s.number("decay_cutoff", positive=True),
        )

    def output_format(self) -> str:
        return self.section("output").choice("format", ("csv", "json"))

    def model(self):
        from .model import DeltaShellModel

        s = self.section("model")
        return DeltaShellModel(
            strength=s.number("strength"),
            radius=s.number("radius", positive=True),
            mass=s.number("mass", positive=True),
        )

    def pole_search(self):
        from .model import Window

        s = self.section("poles")
        re_min, re_max = s.number("re_min"), s.number("re_max")
        im_min, im_max = s.number("im_min"), s.number("im_max")
        if not re_min < re_max:
            s.fail("re_max", "must exceed re_min")
        if not im_min < im_max:
            s.fail("im_max", "must exceed im_min")
        if im_max > 0:
            s.fail("im_max", "window must lie in the lower half plane (im_max <= 0)")
        window = Window(re_min, re_max, im_min, im_max)
        grid = (s.number("grid_re", positive=True, integer=True), s.number("grid_im", positive=True, integer=True))
        return window, s.number("max_count", positive=True, integer=True), grid

    def lorentzian(self, section: str, energy: float):
        from .averages import lorentzian_kernel

        s = self.section(section)
        return lorentzian_kernel(energy + s.number("lorentzian_offset"), s.number("lorentzian_width", positive=True))

    def observable(self, section: str, name: str, energy: float, key: str):
        from . import averages

        simple = {
            "energy": averages.energy,
            "constant": averages.constant,
            "energy_squared": averages.energy_squared,
            "inverse_quadratic": lambda: averages.lorentzian_kernel(0.0, 1.0),
        }
        if name == "lorentzian":
            return self.lorentzian(section, energy)
        if name in simple:
            return simple[name]()
        self.section(section).fail(key, f"unknown observable {name!r}; expected one of {', '.join([*simple, 'lorentzian'])}")

    def gamma_grid(self) -> list[float]:
        from .averages import default_gamma_grid

        s = self.section("compare-gamma")
        if s.text("gammas"):
            gammas = s.floats("gammas")
            key = "gammas"
        else:
            gammas = default_gamma_grid(
                s.number("gamma_min", positive=True),
                s.number("decades", positive=True),
                s.number("per_decade", positive=True, integer=True),
            ).tolist()
            key = "decades"
        if len(gammas) < 4:
            s.fail(key, f"the log-log fit needs at least 4 widths, got {len(gammas)}")
        if any(g <= 0 for g in gammas) or not _strictly_increasing(gammas):
            s.fail(key, "widths must be positive and strictly increasing")
        return gammas

    def time_grid(self) -> list[float]:
        s = self.section("survival")
        if s.text("times"):
            times = s.floats("times")
            key = "times"
        else:
            t_min, t_max = s.number("t_min"), s.number("t_max")
            n = s.number("samples", positive=True, integer=True)
            spacing = s.choice("spacing", ("linear", "log"))
            key = "t_min"
            if t_min < 0:
                s.fail("t_min", f"times must be non-negative, got {t_min}")
            if not t_max > t_min:
                s.fail("t_max", "must exceed t_min")
            if spacing == "log":
                if not t_min > 0:
                    s.fail("t_min", "log spacing needs t_min > 0")
                times = np.geomspace(t_min, t_max, n).tolist()
            else:
                times = np.linspace(t_min, t_max, n).tolist()
        if any(t < 0 for t in times):
            s.fail(key, "times must be non-negative")
        if not _strictly_increasing(times):
            s.fail(key, "time grid must be nonempty and strictly increasing")
        return times

    def density(self):
        from .survival import KINDS, SpectralDensity

        s = self.section("survival")
        return SpectralDensity(
            kind=s.choice("density", KINDS),
            energy=s.number("energy"),
            width=s.number("width", positive=True),
        )


def _line_index(text: str) -> dict:
    lines = {}
    section = None
    for n, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped[0] in "#;":
            continue
        m = re.match(r"\[([^\]]+)\]", stripped)
        if m:
            section = m.group(1).strip()
            continue
        if section and ("=" in stripped or ":" in stripped):
            key = re.split(r"[=:]", stripped, maxsplit=1)[0].strip().lower()
            lines[(section, key)] = n
    return lines


def load_config(path: Optional[str] = None, overrides: tuple[str, ...] = ()) -> RunConfig:
    raw = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    lines: dict = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read config {path}: {exc.strerror}") from exc
        try:
            raw.read_string(text, source=str(path))
        except configparser.Error as exc:
            raise ValidationError(f"config parse error: {exc}") from exc
        for name in raw.sections():
            if name not in DEFAULTS:
                raise ValidationError(f"{path}: unknown section [{name}]")
        lines = _line_index(text)
    for item in overrides:
        key, sep, value = item.partition("=")
        section, dot, option = key.strip().rpartition(".")
        if not sep or not dot or not section or not option:
            raise ValidationError(f"--set expects section.key=value, got {item!r}")
        if section not in DEFAULTS:
            raise ValidationError(f"--set {item!r}: unknown section [{section}]")
        if not raw.has_section(section):
            raw.add_section(section)
        raw.set(section, option.strip(), value.strip())
        lines.pop((section, option.strip().lower()), None)
    for name in raw.sections():
        unknown = set(raw[name]) - set(DEFAULTS[name])
        if unknown:
            key = sorted(unknown)[0]
            where = lines.get((name, key))
            suffix = f" (line {where})" if where else ""
            raise ValidationError(f"[{name}] {key}{suffix}: unknown key")
    return RunConfig(raw=raw, lines=lines, source=path)
