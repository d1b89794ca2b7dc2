"""Command-line interface: ``ionspin <command> [options]``.

Every command prints a table as CSV (default) or JSON. CSV output starts with
one ``# {json metadata}`` comment line followed by a header row whose column
names carry their units. JSON output is ``{"meta": {...}, "rows": [...]}``
and follows ``schemas/output.schema.json``.

Options may also come from a JSON config file (``--config``); command-line
flags override the file, which overrides the built-in Yb-171 defaults.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 failed
``table1 --check``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys

import numpy as np

from . import __version__
from .coupling import FieldConfig, reproduce_gate_table
from .crystal import crystal, normal_modes
from .dynamics import cnot_fidelity_curve
from .errors import IonSpinError, NumericalError, ValidationError
from .hyperfine import (BASIS, DOWN_DOWN, DOWN_UP, UP_DOWN, UP_UP, diagonalize,
                        exact_hamiltonian, highfield_hamiltonian, refit_effective_ratios)
from .magnets import HalbachGeometry, halbach_field
from .pseudopotential import RfTrapParams, cyclotron_frequency, shifted_mode_frequencies
from .spectrum import ChainConfig, active_spectrum, full_spectrum
from .units import SPECIES, TWO_PI, Frequency

EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_CHECK = 2, 3, 4

_UNITS = {
    "frequency": {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9},
    "length": {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6},
    "field": {"t": 1.0, "mt": 1e-3},
}
_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([a-zA-Zµ]*)\s*$")


def parse_quantity(text, kind: str) -> float:
    """'600kHz' -> 600000.0 (Hz); bare numbers are taken in SI base units."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return float(text)
    m = _QUANTITY.match(str(text))
    if not m:
        raise ValueError(f"cannot parse {kind} {text!r}")
    value, unit = float(m.group(1)), m.group(2).lower()
    if not unit:
        return value
    try:
        return value * _UNITS[kind][unit]
    except KeyError:
        raise ValueError(f"unknown {kind} unit {m.group(2)!r} in {text!r}") from None


def _arg_type(kind):
    def convert(text):
        try:
            return parse_quantity(text, kind)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    convert.__name__ = kind
    return convert


def _int_list(text):
    if isinstance(text, list):
        return [int(v) for v in text]
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _polarization(text):
    v = str(text).strip()
    table = {"+": 0.5, "up": 0.5, "+1/2": 0.5, "1/2": 0.5, "0.5": 0.5, "+0.5": 0.5,
             "-": -0.5, "down": -0.5, "-1/2": -0.5, "-0.5": -0.5}
    if v not in table:
        raise argparse.ArgumentTypeError(f"polarization must be +1/2 or -1/2, got {text!r}")
    return table[v]


# option name -> (config path, converter, default)
OPTIONS = {
    "species": (("species",), str, "yb171"),
    "nu_z": (("trap", "nu_z"), _arg_type("frequency"), 600e3),
    "drive": (("trap", "drive"), _arg_type("frequency"), 10e6),
    "a": (("trap", "a"), float, 0.0),
    "q": (("trap", "q"), float, 0.3),
    "B0": (("field", "B0"), _arg_type("field"), 1.0),
    "b": (("field", "b"), float, 500.0),
    "n": (("chain", "n"), int, 3),
    "active": (("chain", "active"), _int_list, [2, 3]),
    "passive": (("chain", "passive_polarization"), _polarization, 0.5),
    "model": (("model",), str, "effective"),
    "start": (("sweep", "start"), float, None),
    "stop": (("sweep", "stop"), float, None),
    "steps": (("sweep", "steps"), int, None),
    "br": (("magnet", "br"), _arg_type("field"), 1.23),
    "ri": (("magnet", "ri"), _arg_type("length"), 0.025),
    "ro": (("magnet", "ro"), _arg_type("length"), 0.25),
    "segments": (("magnet", "segments"), int, None),
    "z0": (("magnet", "z0"), _arg_type("length"), None),
    "sphere": (("magnet", "sphere"), bool, False),
    "sweep_param": (("sweep", "param"), str, None),
    "format": (("output", "format"), str, "csv"),
    "output": (("output", "path"), str, None),
}


def _config_schema():
    tree = {}
    for path, _, _ in OPTIONS.values():
        node = tree
        for key in path[:-1]:
            node = node.setdefault(key, {})
        node[path[-1]] = None
    return tree


def _check_keys(cfg, schema, prefix=""):
    if not isinstance(cfg, dict):
        raise ValidationError(f"config section {prefix or '<root>'} must be an object")
    for key, value in cfg.items():
        if key not in schema:
            raise ValidationError(f"unknown config key {prefix + key!r}")
        if isinstance(schema[key], dict):
            _check_keys(value, schema[key], prefix + key + ".")


def load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from None
    _check_keys(cfg, _config_schema())
    return cfg


def resolve(args, cfg, name):
    """Flag value, else config value, else default."""
    value = getattr(args, name, None)
    if value is not None:
        return value
    path, convert, default = OPTIONS[name]
    node = cfg
    for key in path:
        if not isinstance(node, dict) or key not in node:
            return default
        node = node[key]
    try:
        return convert(node)
    except (ValueError, TypeError, argparse.ArgumentTypeError) as exc:
        raise ValidationError(f"bad config value for {'.'.join(path)}: {exc}") from None


def _species(name):
    try:
        return SPECIES[name.lower()]()
    except KeyError:
        raise ValidationError(f"unknown species {name!r}; known: {sorted(SPECIES)}") from None


def _sweep(opts, default):
    start, stop, steps = (opts[k] if opts[k] is not None else d
                          for k, d in zip(("start", "stop", "steps"), default))
    if steps < 1:
        raise ValidationError("sweep needs at least one step")
    return np.linspace(start, stop, steps)


def _r(x, digits=12):
    """Round for stable, readable output."""
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.{digits}g}") if math.isfinite(x) else None
    if isinstance(x, np.integer):
        return int(x)
    return x


def _clean(x, eps=1e-12):
    return 0.0 if abs(x) < eps else x


# --------------------------------------------------------------------------
# commands; each returns (inputs, extra results, rows)

def cmd_crystal(o):
    sp = _species(o["species"])
    nu = Frequency.from_hz(o["nu_z"])
    cfg = crystal(sp, nu, o["n"])
    modes = normal_modes(cfg)
    pos = cfg.positions * 1e6
    rows = []
    for i in range(o["n"]):
        for l in range(o["n"]):
            rows.append({"ion": i + 1, "position_um": _r(pos[i]), "mode": l + 1,
                         "mu": _r(modes.eigenvalues_mu[l]),
                         "nu_mode_kHz": _r(modes.nu_modes[l].khz),
                         "D": _r(_clean(modes.mode_matrix_D[i, l]))})
    extra = {"dz_min_um": _r(np.min(np.diff(pos)))}
    return {"species": sp.name, "n": o["n"], "nu_z_kHz": _r(nu.khz)}, extra, rows


def cmd_table1(o):
    sp = _species(o["species"])
    rows = []
    for ref, got in reproduce_gate_table(sp):
        dev = {k: abs(getattr(got, k) / getattr(ref, k) - 1) for k in ("dz_min_um", "J_khz", "T_ms")}
        rows.append({
            "nu_z_kHz": _r(ref.nu_z_khz), "N": ref.n_ions, "b_T_per_m": _r(ref.b),
            "dz_min_um": _r(got.dz_min_um, 6), "dz_min_um_ref": ref.dz_min_um,
            "J_kHz": _r(got.J_khz, 6), "J_kHz_ref": ref.J_khz,
            "J_spin_kHz": _r(4 * got.J_khz, 6),
            "T_ms": _r(got.T_ms, 6), "T_ms_ref": ref.T_ms,
            "max_rel_dev": _r(max(dev.values()), 6),
        })
    return {"species": sp.name, "B0_T": 1.0, "tolerance": o["tolerance"]}, {}, rows


def cmd_levels(o):
    sp = _species(o["species"])
    B = o["B0"]
    models = ["exact", "natural", "effective"] if o["model"] == "all" else [o["model"]]
    rows, extra = [], {}
    for model in models:
        h = exact_hamiltonian(sp, B) if model == "exact" else highfield_hamiltonian(sp, B, model)
        spec = diagonalize(h)
        for s in BASIS:
            rows.append({"model": model, "quantity": "level", "label": str(s),
                         "frequency_GHz": _r(spec.energy(s) / TWO_PI * 1e-9)})
        for a, b in ((UP_UP, UP_DOWN), (DOWN_UP, DOWN_DOWN), (UP_UP, DOWN_UP), (UP_DOWN, DOWN_DOWN)):
            rows.append({"model": model, "quantity": "transition", "label": f"{a}-{b}",
                         "frequency_GHz": _r(spec.transition(a, b) / TWO_PI * 1e-9)})
        if model == "exact":
            extra = {"cos_theta": _r(math.cos(spec.mixing_angle_theta)),
                     "sin_theta": _r(math.sin(spec.mixing_angle_theta)),
                     "leakage_probability": _r(spec.leakage_probability)}
    return {"species": sp.name, "B_T": B, "models": models}, extra, rows


def cmd_fidelity(o):
    sp = _species(o["species"])
    grid = _sweep(o, (0.9, 4.9, 9))
    pts = cnot_fidelity_curve(sp, grid, o["model"])
    rows = [{"B_T": _r(p.B), "B_over_A_T_per_GHz": _r(p.B_over_A), "C": _r(p.C),
             "leakage": _r(p.leakage), "error": p.error or ""} for p in pts]
    if all(p.error for p in pts):
        raise NumericalError("every fidelity point failed: " + pts[0].error)
    return {"species": sp.name, "model": o["model"], "B_T": [_r(b) for b in grid]}, {}, rows


def cmd_spectrum(o):
    sp = _species(o["species"])
    model = o["model"] if o["model"] in ("effective", "natural") else "effective"
    cfg = ChainConfig(sp, o["n"], FieldConfig(o["B0"], o["b"]), Frequency.from_hz(o["nu_z"]),
                      frozenset(o["active"]), o["passive"], ratios=model)
    rows = []
    for name, lines in (("full", full_spectrum(cfg)), ("active", active_spectrum(cfg))):
        for ln in lines:
            rows.append({"set": name, "ion": ln.ion_index, "frequency_Hz": _r(ln.frequency_hz, 15),
                         "weight": ln.weight,
                         "conditioning_bitmask": "|".join(str(m) for m in ln.bitmasks)})
    inputs = {"species": sp.name, "n": o["n"], "B0_T": o["B0"], "b_T_per_m": o["b"],
              "nu_z_kHz": _r(o["nu_z"] / 1e3), "active": sorted(o["active"]),
              "passive_polarization": o["passive"], "ratios": model}
    return inputs, {}, rows


_HALBACH_SWEEP = {"ro": "r_outer", "ri": "r_inner", "z0": "length_z0",
                  "segments": "n_segments", "br": "remanence_Br"}


def cmd_halbach(o):
    base = dict(remanence_Br=o["br"], r_inner=o["ri"], r_outer=o["ro"],
                n_segments=o["segments"], length_z0=o["z0"],
                shape="sphere" if o["sphere"] else "cylinder")
    param = o["sweep_param"]
    if param is None:
        values = [None]
    elif param in _HALBACH_SWEEP:
        values = _sweep(o, (None, None, None)) if o["start"] is not None else None
        if values is None:
            raise ValidationError("--param needs --start, --stop and --steps")
    else:
        raise ValidationError(f"unknown sweep parameter {param!r}")
    rows = []
    for v in values:
        g = dict(base)
        if v is not None:
            g[_HALBACH_SWEEP[param]] = int(round(v)) if param == "segments" else float(v)
        field = halbach_field(HalbachGeometry(**g))
        row = {"parameter": param or "", "value": _r(v) if v is not None else ""}
        row["B_T"] = _r(field)
        rows.append(row)
    inputs = {k: _r(v) for k, v in base.items()}
    inputs["sweep"] = param
    return inputs, {}, rows


def cmd_pseudo(o):
    sp = _species(o["species"])
    p = RfTrapParams(TWO_PI * o["drive"], o["a"], o["q"], sp)
    grid = _sweep(o, (o["B0"], o["B0"], 1))
    rows = []
    for B in grid:
        m = shifted_mode_frequencies(p, B)
        w_c = cyclotron_frequency(sp, B)
        rows.append({"B_T": _r(B),
                     "omega_r_over_2pi_kHz": _r((m.omega_plus + m.omega_minus) / 2 / TWO_PI / 1e3),
                     "omega_c_over_2pi_kHz": _r(w_c / TWO_PI / 1e3),
                     "omega_plus_over_2pi_kHz": _r(m.omega_plus / TWO_PI / 1e3),
                     "omega_minus_over_2pi_kHz": _r(m.omega_minus / TWO_PI / 1e3),
                     "confined": bool(m.confined)})
    return {"species": sp.name, "drive_MHz": _r(o["drive"] / 1e6), "a": o["a"], "q": o["q"]}, {}, rows


def cmd_ratios_refit(o):
    sp = _species(o["species"])
    grid = _sweep(o, (1.0, 5.0, 9))
    fit = refit_effective_ratios(sp, grid)
    from .hyperfine import effective_ratios, matched_larmor_frequencies
    rows = []
    for B in fit.grid:
        ws, wi = matched_larmor_frequencies(sp, B)
        r, pub = fit.ratios(B), effective_ratios(B, valid_range=(0, math.inf))
        rows.append({"B_T": _r(B),
                     "gamma_S_matched_GHz_per_T": _r(ws / B / TWO_PI * 1e-9),
                     "gamma_S_refit_GHz_per_T": _r(r.gamma_S_eff_ghz),
                     "gamma_S_published_GHz_per_T": _r(pub.gamma_S_eff_ghz),
                     "gamma_I_matched_GHz_per_T": _r(wi / B / TWO_PI * 1e-9),
                     "gamma_I_refit_GHz_per_T": _r(r.gamma_I_eff_ghz),
                     "gamma_I_published_GHz_per_T": _r(pub.gamma_I_eff_ghz)})
    extra = {"coeffs_S_GHz_per_T": [_r(c) for c in fit.coeffs_S_ghz],
             "coeffs_I_GHz_per_T": [_r(c) for c in fit.coeffs_I_ghz],
             "max_residual_S_GHz_per_T": _r(fit.max_residual_S / TWO_PI * 1e-9),
             "max_residual_I_GHz_per_T": _r(fit.max_residual_I / TWO_PI * 1e-9),
             "published_residual_S_GHz_per_T": _r(fit.published_residual_S / TWO_PI * 1e-9),
             "published_residual_I_GHz_per_T": _r(fit.published_residual_I / TWO_PI * 1e-9)}
    return {"species": sp.name, "B_T": [_r(b) for b in fit.grid]}, extra, rows


COMMANDS = {
    "crystal": (cmd_crystal, "equilibrium positions and axial modes",
                ["species", "n", "nu_z"]),
    "table1": (cmd_table1, "reproduce the gate-time table", ["species"]),
    "levels": (cmd_levels, "single-ion levels and transitions", ["species", "B0", "model"]),
    "fidelity": (cmd_fidelity, "CNOT_SI fidelity versus field",
                 ["species", "model", "start", "stop", "steps"]),
    "spectrum": (cmd_spectrum, "chain electron-spin spectrum",
                 ["species", "n", "nu_z", "B0", "b", "active", "passive", "model"]),
    "halbach": (cmd_halbach, "Halbach magnet field and design sweeps",
                ["br", "ri", "ro", "segments", "z0", "sphere", "sweep_param", "start", "stop", "steps"]),
    "pseudo": (cmd_pseudo, "radial modes in an rf trap with magnetic field",
               ["species", "drive", "a", "q", "B0", "start", "stop", "steps"]),
    "ratios-refit": (cmd_ratios_refit, "refit the effective gyromagnetic ratios",
                     ["species", "start", "stop", "steps"]),
}

_FLAGS = {
    "species": ["--species"], "n": ["--n"], "nu_z": ["--nu-z"], "drive": ["--drive"],
    "a": ["--a"], "q": ["--q"], "B0": ["--B", "--B0"], "b": ["--b"], "active": ["--active"],
    "passive": ["--passive"], "model": ["--model"], "start": ["--start"], "stop": ["--stop"],
    "steps": ["--steps"], "br": ["--br"], "ri": ["--ri"], "ro": ["--ro"],
    "segments": ["--segments"], "z0": ["--z0"], "sweep_param": ["--param"],
}

_HELP = {
    "nu_z": "axial trap frequency, e.g. 600kHz (bare numbers in Hz)",
    "drive": "rf drive frequency, e.g. 10MHz",
    "B0": "offset field in T",
    "b": "field gradient in T/m",
    "active": "comma-separated active ion numbers (1-based)",
    "passive": "passive electron polarization, +1/2 or -1/2",
    "model": "exact | natural | effective (| all for levels)",
    "ri": "inner radius, e.g. 2.5cm", "ro": "outer radius, e.g. 25cm",
    "z0": "half-length of a finite cylinder", "sweep_param": "sweep one of ro, ri, z0, segments, br",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sys.stderr.write(json.dumps({"error": "ValidationError", "message": message}) + "\n")
        sys.exit(EXIT_VALIDATION)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ionspin", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text, opts) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        for opt in opts:
            if opt == "sphere":
                p.add_argument("--sphere", action="store_true", default=None,
                               help="Halbach sphere instead of cylinder")
                continue
            convert = OPTIONS[opt][1]
            p.add_argument(*_FLAGS[opt], dest=opt, type=convert, default=None,
                           help=_HELP.get(opt))
        if name == "table1":
            p.add_argument("--check", action="store_true",
                           help="exit with status 4 if any deviation exceeds --tolerance")
            p.add_argument("--tolerance", type=float, default=0.01)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--output", "-o", default=None, help="write to file instead of stdout")
    return parser


def render(command, inputs, extra, rows, fmt) -> str:
    meta = {"command": command, "version": __version__, "inputs": inputs}
    if extra:
        meta["results"] = extra
    if fmt == "json":
        return json.dumps({"meta": meta, "rows": rows}, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    buf.write("# " + json.dumps(meta, sort_keys=False) + "\n")
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    func = COMMANDS[args.command][0]
    try:
        cfg = load_config(args.config)
        opts = {name: resolve(args, cfg, name) for name in OPTIONS}
        opts["tolerance"] = getattr(args, "tolerance", None)
        inputs, extra, rows = func(opts)
        text = render(args.command, inputs, extra, rows, opts["format"])
    except ValidationError as exc:
        _fail(exc)
        return EXIT_VALIDATION
    except (NumericalError, IonSpinError, np.linalg.LinAlgError) as exc:
        _fail(exc)
        return EXIT_NUMERICAL
    if opts["output"]:
        with open(opts["output"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "table1" and args.check:
        worst = max(r["max_rel_dev"] for r in rows)
        if worst > args.tolerance:
            _fail(ValidationError(f"max deviation {worst:.4g} exceeds {args.tolerance}"))
            return EXIT_CHECK
    return 0


def _fail(exc):
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")


if __name__ == "__main__":
    sys.exit(main())
