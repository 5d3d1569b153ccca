"""Command-line front end: ``casimir-thermo sweep | validate | scenarios``.

Config files are line oriented::

    # comment
    [system]
    field = scalar1d          # scalar1d | scalar2d | scalar3d | em
    method = closed           # closed | oracle | both
    units = natural           # natural | SI-nm-K
    [geometry]
    a = 0
    b = 2
    ...
    temperature.t_min = 0.01  # dotted keys work anywhere

Exit codes: 0 ok, 1 configuration or usage error, 2 numerical
non-convergence (rows are still written, flagged in ``status``).
"""

import argparse
import dataclasses
import io
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import em3d, oracle, scalar1d, scalar2d, scalar3d
from .geometry import RibbonPair, SpherePair
from .scalar2d import Disk, PlanarBodyPair, Rectangle
from .scenarios import BUILTIN, Grid, get_scenario, temperature_of
from .thermo import ConvergenceError, NumericsPolicy, UnitSystem

SECTIONS = ("system", "geometry", "material", "temperature", "numerics", "output")
FIELDS = ("scalar1d", "scalar2d", "scalar3d", "em")
METHODS = ("closed", "oracle", "both")


class ConfigError(ValueError):
    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        where = f"line {line}: " if line is not None else ""
        what = f"{key}: " if key else ""
        super().__init__(f"{where}{what}{message}")


@dataclass
class RunConfig:
    field: str
    geometry: object
    grid: Grid
    method: str = "closed"
    units_mode: str = "natural"
    numerics: NumericsPolicy = field(default_factory=NumericsPolicy)
    mc_samples: int = 1_000_000
    output: str = None
    asymptotic: bool = False
    name: str = "custom"

    @property
    def units(self):
        return UnitSystem.from_mode(self.units_mode)


# ---------------------------------------------------------------------------
# Config parsing
# ---------------------------------------------------------------------------

def parse_config_text(text):
    """Return ``{(section, key): (value, line_no)}``."""
    entries = {}
    section = None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError("unterminated section header", no)
            section = line[1:-1].strip()
            if section not in SECTIONS:
                raise ConfigError(f"unknown section [{section}]", no)
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", no)
        key, value = (p.strip() for p in line.split("=", 1))
        if "." in key:
            sec, key = key.split(".", 1)
            if sec not in SECTIONS:
                raise ConfigError(f"unknown section {sec!r}", no, key)
        elif section is None:
            raise ConfigError("key outside any section", no, key)
        else:
            sec = section
        if not key or not value:
            raise ConfigError("empty key or value", no, key)
        if (sec, key) in entries:
            raise ConfigError("duplicate key", no, f"{sec}.{key}")
        entries[(sec, key)] = (value, no)
    return entries


class _Reader:
    def __init__(self, entries):
        self.entries = entries
        self.used = set()

    def has(self, sec, key):
        return (sec, key) in self.entries

    def get(self, sec, key, conv=str, default=None):
        if (sec, key) not in self.entries:
            return default
        self.used.add((sec, key))
        value, no = self.entries[(sec, key)]
        try:
            out = conv(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value {value!r} ({exc})", no, f"{sec}.{key}") from None
        if isinstance(out, float) and not math.isfinite(out):
            raise ConfigError("value must be finite", no, f"{sec}.{key}")
        return out

    def line(self, sec, key):
        return self.entries.get((sec, key), (None, None))[1]

    def unused(self):
        return [k for k in self.entries if k not in self.used]


def _body(spec):
    parts = spec.split()
    if parts and parts[0] == "disk" and len(parts) == 4:
        return Disk(*map(float, parts[1:]))
    if parts and parts[0] == "rectangle" and len(parts) == 5:
        return Rectangle(*map(float, parts[1:]))
    raise ValueError("expected 'disk cx cy r' or 'rectangle cx cy hx hy'")


_GEOMETRY_KEYS = {
    "scalar1d": {"a", "b", "c", "d", "left_width", "gap", "right_width"},
    "scalar2d": {"body1", "body2"},
    "scalar3d": {"radius_a", "radius_b", "R"},
    "em": {"radius_a", "radius_b", "R"},
}


def _geometry_from(r, field_name, base):
    keys = {k for (s, k) in r.entries if s == "geometry"}
    bad = keys - _GEOMETRY_KEYS[field_name]
    if bad:
        k = sorted(bad)[0]
        raise ConfigError(f"not a geometry key for field {field_name}",
                          r.line("geometry", k), f"geometry.{k}")
    chi1 = r.get("material", "chi1", float, getattr(base, "chi1", 1.0))
    chi2 = r.get("material", "chi2", float, getattr(base, "chi2", 1.0))
    if r.has("material", "chi_product"):
        chi1 = r.get("material", "chi_product", float)
        chi2 = 1.0
    try:
        if field_name == "scalar1d":
            if keys & {"left_width", "gap", "right_width"}:
                return RibbonPair.from_widths(r.get("geometry", "left_width", float),
                                              r.get("geometry", "gap", float),
                                              r.get("geometry", "right_width", float),
                                              chi1, chi2)
            b = base if isinstance(base, RibbonPair) else None
            vals = [r.get("geometry", k, float, getattr(b, k, None)) for k in "abcd"]
            if any(v is None for v in vals):
                raise ConfigError("ribbon geometry needs a, b, c, d or widths")
            return RibbonPair(*vals, chi1, chi2)
        if field_name == "scalar2d":
            b = base if isinstance(base, PlanarBodyPair) else None
            b1 = r.get("geometry", "body1", _body, getattr(b, "body1", None))
            b2 = r.get("geometry", "body2", _body, getattr(b, "body2", None))
            if b1 is None or b2 is None:
                raise ConfigError("planar geometry needs body1 and body2")
            return PlanarBodyPair(b1, b2, chi1, chi2)
        b = base if isinstance(base, SpherePair) else None
        vals = [r.get("geometry", k, float, getattr(b, k, None))
                for k in ("radius_a", "radius_b", "R")]
        if any(v is None for v in vals):
            raise ConfigError("sphere geometry needs radius_a, radius_b, R")
        return SpherePair(*vals, chi1, chi2)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc), key="geometry") from None


def build_config(entries=None, scenario=None, chi_product=None):
    """Merge a scenario (optional) with config entries into a RunConfig."""
    r = _Reader(entries or {})
    name = r.get("system", "scenario", str, scenario)
    base = None
    if name is not None:
        try:
            base = get_scenario(name, chi_product)
        except (KeyError, ValueError) as exc:
            raise ConfigError(str(exc.args[0]), r.line("system", "scenario"),
                              "system.scenario") from None
    field_name = r.get("system", "field", str, base.field if base else None)
    if field_name not in FIELDS:
        raise ConfigError(f"field must be one of {FIELDS}", r.line("system", "field"),
                          "system.field")
    if base is not None and field_name != base.field:
        raise ConfigError("field does not match the scenario", r.line("system", "field"),
                          "system.field")
    method = r.get("system", "method", str, "closed")
    if method not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}", r.line("system", "method"),
                          "system.method")
    units_mode = r.get("system", "units", str, "natural")
    if units_mode not in ("natural", "SI-nm-K"):
        raise ConfigError("units must be natural or SI-nm-K", r.line("system", "units"),
                          "system.units")
    base_geo = base.geometry if base else None
    touched = any(s in ("geometry", "material") for (s, _) in r.entries)
    geometry = _geometry_from(r, field_name, base_geo) if (touched or not base) else base_geo

    g0 = base.grid if base else None
    axis = "Z" if field_name == "em" and (g0 is None or g0.axis == "Z") else "T"
    lo_key, hi_key = ("z_min", "z_max") if axis == "Z" else ("t_min", "t_max")
    for wrong in ({"t_min", "t_max"} if axis == "Z" else {"z_min", "z_max"}):
        if r.has("temperature", wrong):
            raise ConfigError(f"use {lo_key}/{hi_key} for this field",
                              r.line("temperature", wrong), f"temperature.{wrong}")
    lo = r.get("temperature", lo_key, float, g0.lo if g0 else None)
    hi = r.get("temperature", hi_key, float, g0.hi if g0 else None)
    steps = r.get("temperature", "steps", int, g0.steps if g0 else 20)
    spacing = r.get("temperature", "spacing", str, g0.spacing if g0 else "log")
    if lo is None or hi is None:
        raise ConfigError(f"temperature grid needs {lo_key} and {hi_key}")
    try:
        grid = Grid(lo, hi, steps, spacing, axis)
    except ValueError as exc:
        raise ConfigError(str(exc), key="temperature") from None

    overrides = {}
    for f in dataclasses.fields(NumericsPolicy):
        if r.has("numerics", f.name):
            overrides[f.name] = r.get("numerics", f.name, f.type if f.type in (int, float)
                                      else type(f.default))
    numerics = NumericsPolicy(**overrides)
    mc = r.get("numerics", "mc_samples", int, 1_000_000)
    out = r.get("output", "path", str, None)
    asym = r.get("output", "asymptotic", lambda v: v.lower() in ("1", "true", "yes"), False)
    leftover = r.unused()
    if leftover:
        sec, key = leftover[0]
        raise ConfigError("unknown key", r.line(sec, key), f"{sec}.{key}")
    return RunConfig(field_name, geometry, grid, method, units_mode, numerics, mc,
                     out, asym, name or "custom")


def load_config(path, scenario=None, chi_product=None):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return build_config(parse_config_text(text), scenario, chi_product)


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

BASE_COLUMNS = ("E_self", "E_int", "E_total", "S", "U", "F")
ORACLE_COLUMNS = ("E_oracle", "S_oracle", "U_oracle", "F_oracle")


def header(cfg):
    cols = [cfg.grid.axis, *BASE_COLUMNS, "status"]
    if cfg.method == "both":
        cols += ORACLE_COLUMNS
    if cfg.field in ("scalar3d", "em"):
        cols.append("S_series")
    if cfg.field == "scalar2d" and cfg.asymptotic:
        cols.append("S_asymptotic")
    return cols


def _closed_row(cfg, T):
    geo, units, nm = cfg.geometry, cfg.units, cfg.numerics
    if cfg.field == "scalar1d":
        e_self, e_int = scalar1d.free_energy_1d(geo, T, units)
        return (e_self, e_int, scalar1d.entropy_1d(geo, T, units),
                scalar1d.internal_energy_1d(geo, T, units),
                scalar1d.force_1d(geo, T, units))
    if cfg.field == "scalar2d":
        return (0.0, scalar2d.free_energy_2d(geo, T, units, nm),
                scalar2d.entropy_2d(geo, T, units, nm),
                scalar2d.internal_energy_2d(geo, T, units, nm), None)
    o = nm.sphere_order
    if cfg.field == "scalar3d":
        return (0.0, scalar3d.free_energy_spheres_3d(geo, T, units, o),
                scalar3d.entropy_spheres_3d(geo, T, units, o),
                scalar3d.internal_energy_spheres_3d(geo, T, units, o),
                scalar3d.force_spheres_3d(geo, T, units, o))
    return (0.0, em3d.em_free_energy(geo, T, units, "closed", o),
            em3d.em_entropy(geo, T, units, "closed", o),
            em3d.em_internal_energy(geo, T, units, "closed", o),
            em3d.em_force(geo, T, units, o))


def _oracle_row(cfg, T):
    fc = oracle.FieldConfig(cfg.field, cfg.geometry, cfg.units, cfg.mc_samples)
    p = oracle.oracle_thermo(fc, T, cfg.numerics)
    return (p.E_self, p.E_interaction, p.S, p.U, p.F)


def _fmt(v):
    if v is None:
        return ""
    return repr(float(v))


def compute_row(cfg, x):
    """One CSV row (list of strings) and whether it converged."""
    T = temperature_of(cfg.grid, cfg.geometry, x)
    status = "ok"
    vals = [math.nan] * 5
    extra = []
    try:
        main = _oracle_row(cfg, T) if cfg.method == "oracle" else _closed_row(cfg, T)
        vals = list(main)
        if cfg.method == "both":
            o = _oracle_row(cfg, T)
            extra = [o[0] + o[1], o[2], o[3], o[4]]
    except ConvergenceError:
        status = "unconverged"
        if cfg.method == "both":
            extra = [math.nan] * 4
    e_self, e_int, S, U, F = vals
    row = [repr(float(x)), _fmt(e_self), _fmt(e_int), _fmt(e_self + e_int),
           _fmt(S), _fmt(U), _fmt(F), status] + [_fmt(v) for v in extra]
    if cfg.field == "scalar3d":
        row.append(_fmt(scalar3d.entropy_spheres_3d_series(cfg.geometry, T, cfg.units,
                                                           form="printed")))
    elif cfg.field == "em":
        row.append(_fmt(em3d.em_entropy(cfg.geometry, T, cfg.units, "series")))
    elif cfg.asymptotic:
        row.append(_fmt(scalar2d.entropy_2d_asymptotic(cfg.geometry, T, cfg.units,
                                                       cfg.numerics)))
    return row, status == "ok"


def run_sweep(cfg, out=None, workers=1):
    """Write the sweep CSV; returns True when every row converged."""
    xs = list(cfg.grid.values())
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda x: compute_row(cfg, x), xs))
    else:
        rows = [compute_row(cfg, x) for x in xs]
    buf = io.StringIO()
    buf.write(",".join(header(cfg)) + "\n")
    for row, _ in rows:
        buf.write(",".join(row) + "\n")
    text = buf.getvalue()
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    return all(ok for _, ok in rows)


def run_validation(out_path, workers=1, quick=False):
    """Run the shipped validation suite; returns the list of reports."""
    from .validation import default_cases
    parent = Path(out_path).resolve().parent
    if not parent.is_dir():
        raise FileNotFoundError(f"output directory {parent} does not exist")
    reports = oracle.validate_all(default_cases(quick=quick), workers)
    oracle.write_report(reports, out_path)
    return reports


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _parser():
    p = argparse.ArgumentParser(prog="casimir-thermo",
                                description="Casimir free energy, entropy and internal energy sweeps.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("sweep", help="temperature sweep to CSV")
    s.add_argument("--config", help="config file")
    s.add_argument("--scenario", help="built-in scenario name (see 'scenarios')")
    s.add_argument("--method", choices=METHODS)
    s.add_argument("--out", help="CSV path (default: stdout)")
    s.add_argument("--chi-product", type=float, help="chi1*chi2 for EM scenarios")
    s.add_argument("--units", choices=("natural", "SI-nm-K"))
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--asymptotic", action="store_true",
                   help="add the sign-corrected asymptotic 2+1D entropy column")
    v = sub.add_parser("validate", help="run the oracle validation suite")
    v.add_argument("--out", required=True, help="report path (tab separated)")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--quick", action="store_true", help="fewer Monte-Carlo samples")
    sub.add_parser("scenarios", help="list built-in scenarios")
    return p


def main(argv=None):
    args = _parser().parse_args(argv)
    if args.command == "scenarios":
        for name, sc in BUILTIN.items():
            print(f"{name:14s} {sc.field:9s} {sc.description}")
        print(f"{'fig4':14s} {'em':9s} EM spheres, chi product from --chi-product")
        return 0
    if args.command == "validate":
        try:
            reports = run_validation(args.out, args.workers, args.quick)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        counts = oracle.summarize(reports)
        print(" ".join(f"{k}={v}" for k, v in counts.items()))
        return 0 if counts[oracle.FAIL] == 0 else 2
    if args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return 1
    try:
        if args.config:
            cfg = load_config(args.config, args.scenario, args.chi_product)
        elif args.scenario:
            cfg = build_config({}, args.scenario, args.chi_product)
        else:
            raise ConfigError("need --config or --scenario")
        if args.method:
            cfg = dataclasses.replace(cfg, method=args.method)
        if args.units:
            cfg = dataclasses.replace(cfg, units_mode=args.units)
        if args.asymptotic:
            if cfg.field != "scalar2d":
                raise ConfigError("--asymptotic applies to scalar2d only")
            cfg = dataclasses.replace(cfg, asymptotic=True)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    out = args.out or cfg.output
    if out is not None and not Path(out).resolve().parent.is_dir():
        print(f"error: output directory for {out} does not exist", file=sys.stderr)
        return 1
    ok = run_sweep(cfg, out, args.workers)
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
