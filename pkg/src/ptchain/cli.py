"""Command-line front end.

Usage::

    ptchain spectrum --n 2 --omega 1,1 --g 0.6 --kmax 1
    ptchain fock --n 2 --omega 1,1 --g 0.3 --cutoff 16 --levels 6 --tol 1e-6
    ptchain symmetry --n 3
    ptchain perturb --n 2 --omega 1,1.41421356 --level 0,0 --order 4
    ptchain scan --n 2 --omega 1,1 --axis1 g:0:1:21 --axis2 omega_2:1:2:21
    ptchain verify --seed 7

Options may also come from a JSON file (``--config``); flags given on the
command line win. A JSON report written by any command can be fed back as a
config file. Exit codes: 0 success, 1 usage error, 2 computational error,
3 tolerance failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Any

from . import focksolver, normalmodes, perturbation, phasescan, symmetry, verify
from .errors import ComputationError, UnsupportedError, ValidationError
from .hamiltonian import OscillatorChain, build_chain, format_multi_index, parse_multi_index

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_TOLERANCE = 0, 1, 2, 3
COMMANDS = ("spectrum", "fock", "symmetry", "perturb", "scan", "verify")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    omega: list[float] | None = None
    g: float = 0.0
    kmax: int | None = None
    cutoff: int | None = None
    levels: int = 6
    tol: float | None = None
    level: str | None = None
    order: int = 4
    axis1: str = "g:0:1:21"
    axis2: str = "omega_2:1:2:21"
    refine: int = 0
    workers: int = 1
    output: str = "-"
    format: str | None = None
    seed: int = 0

    def chain(self) -> OscillatorChain:
        omega = self.omega
        n = self.n if self.n is not None else (len(omega) if omega else 2)
        if omega is None:
            omega = [1.0] * n
        return build_chain(n, omega, self.g)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_FIELD_NAMES = {f.name for f in dataclasses.fields(RunConfig)}


def _parse_omega(value) -> list[float]:
    if isinstance(value, str):
        try:
            return [float(v) for v in value.split(",") if v.strip()]
        except ValueError:
            raise UsageError(f"bad frequency list {value!r}; use decimal literals like 1,1.4142") from None
    return [float(v) for v in value]


def load_config_file(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if isinstance(data, dict) and isinstance(data.get("config"), dict):
        data = data["config"]
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    unknown = set(data) - _FIELD_NAMES
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return data


def make_config(command: str, file_values: dict, flag_values: dict) -> RunConfig:
    merged: dict[str, Any] = {}
    merged.update(file_values)
    merged.update(flag_values)
    merged["command"] = command
    if merged.get("omega") is not None:
        merged["omega"] = _parse_omega(merged["omega"])
    try:
        return RunConfig(**merged)
    except TypeError as exc:
        raise UsageError(str(exc)) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    s = argparse.SUPPRESS
    common = argparse.ArgumentParser(add_help=False, argument_default=s)
    common.add_argument("--config", help="JSON config file (flags override it)")
    common.add_argument("--n", type=int, help="number of oscillators")
    common.add_argument("--omega", help="comma-separated frequencies, e.g. 1,1.4142")
    common.add_argument("--g", type=float, help="coupling magnitude (lambda = i g)")
    common.add_argument("-o", "--output", help="output path, '-' for stdout")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--seed", type=int)

    parser = _Parser(prog="ptchain", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", parents=[common], argument_default=s, help="exact normal-mode lattice")
    p.add_argument("--kmax", type=int)

    p = sub.add_parser("fock", parents=[common], argument_default=s, help="truncated-basis spectrum vs exact lattice")
    p.add_argument("--cutoff", type=int)
    p.add_argument("--levels", type=int)
    p.add_argument("--tol", type=float)

    sub.add_parser("symmetry", parents=[common], argument_default=s, help="symmetry generators and groups")

    p = sub.add_parser("perturb", parents=[common], argument_default=s, help="perturbation series of one level")
    p.add_argument("--level")
    p.add_argument("--order", type=int)
    p.add_argument("--cutoff", type=int)
    p.add_argument("--tol", type=float)

    p = sub.add_parser("scan", parents=[common], argument_default=s, help="real/complex phase diagram")
    p.add_argument("--axis1", help="NAME:LO:HI:COUNT, NAME is g or omega_j")
    p.add_argument("--axis2", help="NAME:LO:HI:COUNT")
    p.add_argument("--kmax", type=int)
    p.add_argument("--refine", type=int, help="bisection steps per frontier crossing (0 = off)")
    p.add_argument("--workers", type=int)

    sub.add_parser("verify", parents=[common], argument_default=s, help="run the randomised invariant suite")
    return parser


def _num(x: float) -> str:
    return format(float(x), ".17g")


def _csv(rows, header, command, extra="") -> str:
    buf = io.StringIO()
    buf.write(f"# ptchain schema_version={SCHEMA_VERSION} command={command}{extra}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(payload: dict, cfg: RunConfig) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "command": cfg.command, "config": cfg.to_dict()}
    doc.update(payload)
    return json.dumps(doc, indent=2) + "\n"


def _parse_axis(text: str):
    try:
        name, lo, hi, count = text.split(":")
        return name, phasescan.grid(float(lo), float(hi), int(count))
    except ValueError:
        raise UsageError(f"bad axis spec {text!r}; expected NAME:LO:HI:COUNT") from None


def run_spectrum(cfg: RunConfig) -> tuple[str, int]:
    chain = cfg.chain()
    kmax = 4 if cfg.kmax is None else cfg.kmax
    spec = normalmodes.mode_frequencies(chain)
    if spec.unstable:
        raise normalmodes.UnstableSpectrumError(
            f"mode eigenvalues {spec.mu.tolist()} include an inverted oscillator"
        )
    levels = normalmodes.spectrum_lattice(spec, kmax)
    rows = [
        (
            format_multi_index(lv.idx),
            _num(lv.energy.real),
            _num(lv.energy.imag),
            str(lv.reality),
            format_multi_index(lv.partner) if lv.partner else "",
        )
        for lv in levels
    ]
    if cfg.format == "json":
        modes = [
            {
                "mu": [float(m.real), float(m.imag)],
                "omega": [float(o.real), float(o.imag)],
                "partner": int(spec.pairing[k]),
            }
            for k, (m, o) in enumerate(zip(spec.mu, spec.omega_modes))
        ]
        levels_json = [
            {"index": r[0], "re_E": float(r[1]), "im_E": float(r[2]), "reality": r[3], "partner": r[4] or None}
            for r in rows
        ]
        return _json({"modes": modes, "levels": levels_json}, cfg), EXIT_OK
    return _csv(rows, ["index_string", "re_E", "im_E", "reality", "partner"], "spectrum"), EXIT_OK


def run_fock(cfg: RunConfig) -> tuple[str, int]:
    chain = cfg.chain()
    cutoff = 16 if cfg.cutoff is None else cfg.cutoff
    tol = 1e-6 if cfg.tol is None else cfg.tol
    fock = focksolver.fock_spectrum(chain, cutoff)
    spec = normalmodes.mode_frequencies(chain)
    if spec.unstable:
        raise normalmodes.UnstableSpectrumError("inverted mode; exact lattice undefined")
    exact = normalmodes.lowest_levels(spec, cfg.levels)
    report = focksolver.match_spectra(fock, exact, cfg.levels, tol)
    code = EXIT_OK if report.passed else EXIT_TOLERANCE
    rows = [
        (format_multi_index(idx), _num(e.real), _num(e.imag), _num(f.real), _num(f.imag), _num(d))
        for idx, e, f, d in report.pairs
    ]
    if cfg.format == "json":
        pairs = [
            {"index": r[0], "exact": [float(r[1]), float(r[2])], "fock": [float(r[3]), float(r[4])], "distance": float(r[5])}
            for r in rows
        ]
        payload = {
            "dimension": len(fock.values),
            "pairs": pairs,
            "max_distance": report.max_distance,
            "unmatched": report.unmatched,
            "tol": tol,
            "passed": report.passed,
        }
        return _json(payload, cfg), code
    extra = f" max_distance={_num(report.max_distance)} passed={report.passed}"
    header = ["index_string", "exact_re", "exact_im", "fock_re", "fock_im", "distance"]
    return _csv(rows, header, "fock", extra), code


def run_symmetry(cfg: RunConfig) -> tuple[str, int]:
    if cfg.format == "csv":
        raise UsageError("symmetry output is JSON only")
    return _json(symmetry.symmetry_report(cfg.chain()), cfg), EXIT_OK


def run_perturb(cfg: RunConfig) -> tuple[str, int]:
    chain = cfg.chain()
    level = parse_multi_index(cfg.level) if cfg.level else (0,) * chain.n_osc
    cutoff = max(level) + cfg.order if cfg.cutoff is None else cfg.cutoff
    tol = 1e-10 if cfg.tol is None else cfg.tol
    series = perturbation.rs_coefficients(chain, level, cfg.order, cutoff)
    odd_ok = perturbation.odd_order_check(series, tol)
    code = EXIT_OK if odd_ok else EXIT_TOLERANCE
    if cfg.format == "json":
        payload = {
            "level": format_multi_index(level),
            "cutoff": cutoff,
            "coefficients": list(series.coeffs),
            "odd_order_check": odd_ok,
        }
        try:
            pred = perturbation.reality_predictor(chain, level)
            payload["prediction"] = str(pred.verdict)
        except UnsupportedError:
            payload["prediction"] = None
        if chain.g:
            val = series.partial_sum(1j * chain.g)
            payload["series_at_ig"] = [val.real, val.imag]
        return _json(payload, cfg), code
    rows = [(j, _num(c)) for j, c in enumerate(series.coeffs)]
    extra = f" level={format_multi_index(level)} odd_order_check={odd_ok}"
    return _csv(rows, ["power", "coefficient"], "perturb", extra), code


def run_scan(cfg: RunConfig) -> tuple[str, int]:
    chain = cfg.chain()
    kmax = phasescan.DEFAULT_K_MAX if cfg.kmax is None else cfg.kmax
    ax1, ax2 = _parse_axis(cfg.axis1), _parse_axis(cfg.axis2)
    diagram = phasescan.scan(chain, ax1, ax2, kmax, workers=cfg.workers)
    if cfg.refine:
        diagram = phasescan.boundaries_from_diagram(chain, diagram, cfg.refine)
    if cfg.format == "json":
        payload = {
            "axes": [{"name": n, "values": list(v)} for n, v in diagram.axes],
            "k_max": diagram.k_max,
            "cells": [[str(c) for c in row] for row in diagram.cells],
            "boundary_points": [
                {
                    "axis": b.axis,
                    "lo": b.lo,
                    "hi": b.hi,
                    "value": b.value,
                    "lo_label": str(b.lo_label),
                    "hi_label": str(b.hi_label),
                    "fixed": b.fixed,
                }
                for b in diagram.boundary_points
            ],
        }
        return _json(payload, cfg), EXIT_OK
    rows = [(_num(a), _num(b), str(lab)) for a, b, lab in diagram.rows()]
    header = [diagram.axes[0][0], diagram.axes[1][0], "label"]
    return _csv(rows, header, "scan", f" k_max={kmax}"), EXIT_OK


def run_verify(cfg: RunConfig) -> tuple[str, int]:
    results = verify.run_all(cfg.seed)
    passed = all(r.passed for r in results)
    code = EXIT_OK if passed else EXIT_TOLERANCE
    if cfg.format == "csv":
        rows = [(r.name, r.passed, r.detail) for r in results]
        return _csv(rows, ["check", "passed", "detail"], "verify", f" seed={cfg.seed}"), code
    payload = {"checks": [dataclasses.asdict(r) for r in results], "passed": passed}
    return _json(payload, cfg), code


RUNNERS = {
    "spectrum": run_spectrum,
    "fock": run_fock,
    "symmetry": run_symmetry,
    "perturb": run_perturb,
    "scan": run_scan,
    "verify": run_verify,
}
DEFAULT_FORMAT = {"symmetry": "json", "verify": "json"}


def main(argv=None) -> int:
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    command = args.pop("command")
    try:
        file_values = load_config_file(args.pop("config")) if "config" in args else {}
        cfg = make_config(command, file_values, args)
        if cfg.format is None:
            cfg.format = DEFAULT_FORMAT.get(command, "csv")
        text, code = RUNNERS[command](cfg)
    except UsageError as exc:
        print(f"ptchain: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ComputationError as exc:
        print(f"ptchain: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (ValidationError, UnsupportedError, ValueError) as exc:
        print(f"ptchain: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.output in ("-", None):
        sys.stdout.write(text)
    else:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    if code == EXIT_TOLERANCE:
        print(f"ptchain: {command}: tolerance check failed", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
