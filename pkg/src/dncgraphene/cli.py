"""Batch front-end: ``dncgraphene <subcommand> [--config FILE] [flags]``.

Configuration is a flat YAML mapping (see ``SCHEMA``).  Precedence, lowest
first: built-in defaults, the config file, ``--set KEY=VALUE`` pairs, then the
dedicated flags (--ncut, --units, --constants, --out, --format).

Exit codes: 0 success, 2 configuration error, 3 numerical-contract violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Callable

import numpy as np
import yaml

from . import __version__
from .algebra import ContractError, build_dnc_coordinates, build_phase_space, build_tau_products
from .algebra import verify_canonical_algebra, verify_dnc_algebra
from .fock import build_basis
from .hamiltonian import VALLEYS, PhysParams, build_terms
from .phenomenology import BoundInput, constants, eos, ordering_table, tau_upper_bound
from .spectral import (DegeneracyError, LevelSelector, NonHermitianError, TrackingError, convergence_study,
                       exact_diagonalize, fit_tau_response, landau_index, perturbation_report,
                       perturbative_coefficients)

SPEED_OF_LIGHT = 299792458.0
PERTURBATIVE_WINDOW = 0.05
# coefficients below this are round-off, not signal
SIGNIFICANCE = 1e-10
EXIT_CONFIG, EXIT_CONTRACT = 2, 3


class ConfigError(ValueError):
    pass


def _choice(*opts: str) -> Callable[[Any], str]:
    def check(v: Any) -> str:
        if v not in opts:
            raise ConfigError(f"expected one of {opts}, got {v!r}")
        return v
    return check


def _num(kind: type, lo: float | None = None, hi: float | None = None, optional: bool = False):
    def check(v: Any):
        if v is None and optional:
            return None
        if isinstance(v, str):
            # PyYAML reads 5e-4 (no dot) as a string
            try:
                v = float(v)
            except ValueError:
                raise ConfigError(f"expected a number, got {v!r}") from None
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"expected a number, got {v!r}")
        if kind is int and int(v) != v:
            raise ConfigError(f"expected an integer, got {v!r}")
        v = kind(v)
        if not math.isfinite(v) or (lo is not None and v < lo) or (hi is not None and v > hi):
            raise ConfigError(f"value {v!r} outside [{lo}, {hi}]")
        return v
    return check


def _list(item: Callable[[Any], Any], min_len: int = 1):
    def check(v: Any) -> list:
        if not isinstance(v, list) or len(v) < min_len:
            raise ConfigError(f"expected a list of at least {min_len} entries, got {v!r}")
        return [item(x) for x in v]
    return check


def _text(v: Any) -> str:
    if not isinstance(v, str) or not v:
        raise ConfigError(f"expected a non-empty string, got {v!r}")
    return v


# key -> (validator, default, help)
SCHEMA: dict[str, tuple[Callable[[Any], Any], Any, str]] = {
    "ncut": (_num(int, 1), 40, "per-mode Fock cutoff N_cut"),
    "units": (_choice("natural", "physical"), "natural", "natural (hbar = v_F = l_B = 1) or physical (SI lengths, eV)"),
    "constants": (_choice("paper", "codata"), "codata", "physical constants set"),
    "out": (_text, ".", "output directory"),
    "format": (_choice("csv", "json", "both"), "both", "report formats"),
    "valley": (_choice(*VALLEYS), "K", "Dirac valley"),
    "theta": (_num(float), 0.0, "Theta (l_B^2, or m^2 in physical units)"),
    "tau": (_num(float), 0.0, "tau (l_B^-2, or m^-2 in physical units)"),
    "b_field": (_num(float, 1e-12), 1.0, "magnetic field in tesla (physical units)"),
    "l_b": (_num(float, 0, optional=True), None, "magnetic length override in m (physical units)"),
    "v_f": (_num(float, 0, optional=True), None, "Fermi velocity override in m/s"),
    "spectrum_max_n": (_num(int, 0), 20, "highest Landau index compared in spectrum"),
    "max_level": (_num(int, 0), 3, "highest Landau index reported by perturb"),
    "group_tol": (_num(float, 1e-15), 1e-6, "degenerate-level grouping tolerance (natural units)"),
    "tau_samples": (_list(_num(float), 4), [1e-4, 2e-4, 3e-4, 5e-4, 7e-4, 1e-3], "tau grid for fit-tau"),
    "fit_level": (_num(int, 0), 0, "Landau index tracked by fit-tau"),
    "fit_branch": (_choice(1, -1), 1, "branch sign tracked by fit-tau"),
    "fit_rank": (_num(int, 0), 0, "rank within the level tracked by fit-tau"),
    "algebra_ncut": (_num(int, 7), 20, "cutoff for validate-algebra"),
    "algebra_theta": (_num(float), 0.01, "Theta for the DNC algebra check (natural units)"),
    "algebra_tau": (_num(float), 0.01, "tau for the DNC algebra check (natural units)"),
    "delta_e": (_num(float, 1e-300), 1e-3, "energy-measurement accuracy in eV for bound"),
    "p_f": (_list(_num(float, 0)), [0.0, 0.5, 1.0, 2.0], "Fermi momenta for thermo"),
    "g": (_num(float, 1), 2.0, "spin degeneracy g (4 includes the valley factor)"),
    "e_f": (_num(float, 0), 1.0, "commutative Fermi energy for the ordering table"),
    "shift": (_num(float, hi=0.0), -1e-3, "DNC Fermi-energy shift (<= 0) for the ordering table"),
    "cutoffs": (_list(_num(int, 1)), [10, 20, 30, 40], "ascending cutoffs for basis-check"),
}


def load_config(path: str | None, overrides: dict[str, Any]) -> dict[str, Any]:
    raw: dict[str, Any] = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"config {path} is not valid YAML: {exc}") from None
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError("config must be a flat key: value mapping")
        raw.update(data)
    raw.update(overrides)
    unknown = sorted(set(raw) - set(SCHEMA))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(map(str, unknown))}")
    cfg = {}
    for key, (check, default, _) in SCHEMA.items():
        try:
            cfg[key] = check(raw[key]) if key in raw else default
        except ConfigError as exc:
            raise ConfigError(f"{key}: {exc}") from None
    if cfg["cutoffs"] != sorted(set(cfg["cutoffs"])):
        raise ConfigError("cutoffs: must be strictly ascending")
    return cfg


def _parse_set(items: list[str]) -> dict[str, Any]:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        out[key.strip()] = yaml.safe_load(value)
    return out


# -- serialization ------------------------------------------------------------------

def _plain(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    return obj


def _cell(v: Any) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if v is None:
        return ""
    return str(v)


@dataclass
class Report:
    command: str
    meta: dict
    payload: dict
    columns: tuple[str, ...]
    rows: list[tuple]

    def to_json(self) -> str:
        return json.dumps(_plain({"meta": self.meta, **self.payload}), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# " + json.dumps(_plain(self.meta), sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_cell(v) for v in row])
        return buf.getvalue()

    def write(self, out: str, fmt: str) -> list[Path]:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        paths = []
        if fmt in ("json", "both"):
            paths.append(d / f"{self.command}.json")
            paths[-1].write_text(self.to_json(), encoding="utf-8")
        if fmt in ("csv", "both"):
            paths.append(d / f"{self.command}.csv")
            paths[-1].write_text(self.to_csv(), encoding="utf-8")
        return paths


def _meta(command: str, cfg: dict) -> dict:
    return {"command": command, "version": __version__, "units": cfg["units"],
            "constants": cfg["constants"], "config": cfg}


def physical_params(cfg: dict) -> PhysParams:
    """PhysParams in the configured unit system."""
    if cfg["units"] == "natural":
        return PhysParams(theta=cfg["theta"], tau=cfg["tau"], valley=cfg["valley"], n_cut=cfg["ncut"])
    cs = constants(cfg["constants"])
    l_b = cfg["l_b"] if cfg["l_b"] is not None else cs.l_b_1t / math.sqrt(cfg["b_field"])
    v_f = cfg["v_f"] if cfg["v_f"] is not None else cs.v_f
    return PhysParams(l_b=l_b, v_f=v_f, hbar=cs.hbar_evs, theta=cfg["theta"], tau=cfg["tau"],
                      valley=cfg["valley"], n_cut=cfg["ncut"])


def _window_warning(nat: PhysParams) -> None:
    if abs(nat.tau) > PERTURBATIVE_WINDOW:
        warnings.warn(f"tau * l_B^2 = {nat.tau!r} exceeds the perturbative window {PERTURBATIVE_WINDOW}",
                      RuntimeWarning, stacklevel=2)


# -- subcommands --------------------------------------------------------------------

def cmd_spectrum(cfg: dict) -> Report:
    params = physical_params(cfg)
    nat = params.natural()
    unit = params.energy_unit
    sol = exact_diagonalize(build_terms(nat).total())
    rows = []
    for k, (e, w, ok) in enumerate(zip(sol.eigenvalues, sol.edge_weight, sol.reliable)):
        n = landau_index(e)
        if n > cfg["spectrum_max_n"]:
            continue
        ref = math.copysign(math.sqrt(2.0 * n), e) if n else 0.0
        err = abs(e - ref)
        rows.append((k, e * unit, bool(ok), w, n, ref * unit, err * unit, err / max(abs(ref), 1.0)))
    rel = [r[-1] for r in rows if r[2]]
    summary = {"energy_unit": unit, "reliable_count": int(sol.reliable.sum()), "size": sol.size,
               "max_rel_error_reliable": max(rel) if rel else None,
               "lowest_positive": sorted({round(r[1], 12) for r in rows if r[2] and r[1] > 0})[:3]}
    cols = ("index", "energy", "reliable", "edge_weight", "landau_index", "closed_form", "abs_error", "rel_error")
    return Report("spectrum", _meta("spectrum", cfg), {"summary": summary,
                  "levels": [dict(zip(cols, r)) for r in rows]}, cols, rows)


def cmd_perturb(cfg: dict) -> Report:
    params = physical_params(cfg)
    nat = params.natural()
    _window_warning(nat)
    terms = build_terms(nat)
    sol = exact_diagonalize(terms.H0)
    rep = perturbation_report(sol, terms.HTheta + terms.HTau, cfg["max_level"], group_tol=cfg["group_tol"])
    unit = params.energy_unit
    rows = [(lv.landau_index, lv.energy * unit, lv.degeneracy, j, f1 * unit, f2 * unit)
            for lv in rep.levels for j, (f1, f2) in enumerate(zip(lv.first_order, lv.second_order))]
    payload = {"energy_unit": unit, "levels": [asdict(lv) for lv in rep.levels]}
    return Report("perturb", _meta("perturb", cfg), payload, rep.CSV_COLUMNS, rows)


def cmd_fit_tau(cfg: dict) -> Report:
    params = physical_params(cfg)
    scale = params.l_b**2
    samples = [t * scale for t in cfg["tau_samples"]]
    nat = PhysParams(valley=params.valley, n_cut=params.n_cut)
    sel = LevelSelector(cfg["fit_level"], cfg["fit_branch"], cfg["fit_rank"])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        fit = fit_tau_response(sel, samples, nat)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    terms = build_terms(PhysParams(valley=params.valley, n_cut=params.n_cut, tau=1.0))
    pt1, pt2 = perturbative_coefficients(sel, terms.HTau, exact_diagonalize(terms.H0), cfg["group_tol"],
                                         slope=fit.c1)
    max_tau = max(abs(t) for t in samples)
    comparison = {
        "first_order_pt": pt1, "second_order_pt": pt2,
        "c1_over_c2_tau": abs(fit.c1) / (abs(fit.c2) * max_tau) if fit.c2 else math.inf,
        "c2_relative_to_pt": abs(fit.c2 - pt2) / abs(pt2) if abs(pt2) > SIGNIFICANCE else None,
    }
    payload = {"fit": fit.to_dict(), "comparison": comparison, "natural_tau_samples": samples}
    rows = [(t, e, fit.c0 + fit.c1 * t + fit.c2 * t * t) for t, e in zip(fit.tau_samples, fit.energies)]
    return Report("fit-tau", _meta("fit-tau", cfg), payload, ("tau", "energy", "fit"), rows)


def cmd_validate_algebra(cfg: dict) -> Report:
    ops = build_phase_space(build_basis(cfg["algebra_ncut"]))
    canon = verify_canonical_algebra(ops)
    products = build_tau_products(ops)
    dnc = verify_dnc_algebra(build_dnc_coordinates(ops, cfg["algebra_theta"], cfg["algebra_tau"]))
    rows = [(rep.label, c.name, c.max_deviation, c.tolerance, c.scaling_ratio, c.passed, c.note)
            for rep in (canon, dnc) for c in rep.checks]
    rows.append(("tau-products", "sym_pyy identity", products.identity_defect, 1e-10, None,
                 products.identity_defect <= 1e-10, ""))
    passed = all(r[5] for r in rows)
    payload = {"passed": passed, "canonical": canon.to_dict(), "dnc": dnc.to_dict(),
               "tau_identity_defect": products.identity_defect}
    cols = ("group", "relation", "max_deviation", "tolerance", "halving_ratio", "passed", "note")
    return Report("validate-algebra", _meta("validate-algebra", cfg), payload, cols, rows)


def cmd_bound(cfg: dict) -> Report:
    cs = constants(cfg["constants"])
    l_b = cfg["l_b"] if cfg["l_b"] is not None else cs.l_b_1t / math.sqrt(cfg["b_field"])
    v_f = cfg["v_f"] if cfg["v_f"] is not None else cs.v_f
    res = tau_upper_bound(BoundInput(cfg["delta_e"], l_b, v_f, cs.hbar_evs), cs.hbar_c_evm)
    d = res.to_dict()
    rows = [(k, v) for k, v in d.items() if k != "inputs"] + [(f"input.{k}", v) for k, v in d["inputs"].items()]
    return Report("bound", _meta("bound", cfg), {"bound": d}, ("quantity", "value"), rows)


def cmd_thermo(cfg: dict) -> Report:
    if cfg["units"] == "physical":
        hbar, c = constants(cfg["constants"]).hbar_evs, SPEED_OF_LIGHT
    else:
        hbar, c = 1.0, 1.0
    states = [eos(p / 1.0, cfg["g"], hbar, c) for p in cfg["p_f"]]
    table = ordering_table(cfg["e_f"], cfg["shift"], cfg["g"], hbar, c)
    rows = [(r.quantity, r.commutative, r.dnc, r.computed, r.claimed, r.consistent, r.note) for r in table]
    payload = {"eos": [asdict(s) for s in states], "ordering": [asdict(r) for r in table], "hbar": hbar, "c": c}
    cols = ("quantity", "commutative", "dnc", "computed", "claimed", "consistent", "note")
    return Report("thermo", _meta("thermo", cfg), payload, cols, rows)


def cmd_basis_check(cfg: dict) -> Report:
    params = physical_params(cfg).natural()
    conv = convergence_study(cfg["cutoffs"], params)
    canon = {}
    for nc in cfg["cutoffs"]:
        rep = verify_canonical_algebra(build_phase_space(build_basis(nc)))
        canon[nc] = max(c.max_deviation for c in rep.checks)
    rows = [(r.n_cut, (r.n_cut + 1) ** 2, r.landau_index, r.energy, r.closed_form, r.error, r.cauchy,
             canon[r.n_cut]) for r in conv]
    cols = ("n_cut", "fock_dim", "landau_index", "energy", "closed_form", "error", "cauchy", "canonical_residual")
    return Report("basis-check", _meta("basis-check", cfg), {"rows": [dict(zip(cols, r)) for r in rows]}, cols, rows)


COMMANDS: dict[str, Callable[[dict], Report]] = {
    "spectrum": cmd_spectrum,
    "perturb": cmd_perturb,
    "fit-tau": cmd_fit_tau,
    "validate-algebra": cmd_validate_algebra,
    "bound": cmd_bound,
    "thermo": cmd_thermo,
    "basis-check": cmd_basis_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dncgraphene", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="flat YAML config file")
        s.add_argument("--out", help="output directory")
        s.add_argument("--units", choices=("natural", "physical"))
        s.add_argument("--constants", choices=("paper", "codata"))
        s.add_argument("--ncut", type=int)
        s.add_argument("--format", choices=("csv", "json", "both"))
        s.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override any config key")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = _parse_set(args.set)
        for key in ("out", "units", "constants", "ncut", "format"):
            if getattr(args, key) is not None:
                overrides[key] = getattr(args, key)
        cfg = load_config(args.config, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            report = COMMANDS[args.command](cfg)
    except (NonHermitianError, ContractError, DegeneracyError, TrackingError) as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for path in report.write(cfg["out"], cfg["format"]):
        print(path)
    if args.command == "validate-algebra" and not report.payload["passed"]:
        print("algebra check failed", file=sys.stderr)
        return EXIT_CONTRACT
    return 0


if __name__ == "__main__":
    sys.exit(main())
