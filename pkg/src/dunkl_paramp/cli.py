"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a tolerance fails (the failing
check is named on stderr), 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import algebra, amplifier, stats, transforms
from .errors import ConvergenceError, ParameterError, ParityError, TruncationError
from .fock import DEFAULT_DIM, ModelParams, build_annihilation
from .linalg import max_abs

SUBCOMMANDS = ("verify", "spectrum", "tilt", "bogoliubov", "stats", "sweep")
FORMATS = ("csv", "json", "table")
SOURCES = ("closed_form", "oracle", "both")

ALGEBRA_TOL = 1e-10
SPECTRUM_TOL = 1e-8
TILT_TOL = 1e-8
DOUBLING_TOL = 1e-10
UNITARY_TOL = 1e-12
COEFF_TOL = 1e-12
STATS_TOL = 1e-6

CHECK_FIELDS = ("check", "mu", "dim", "interior", "value", "tolerance", "status")
SPECTRUM_FIELDS = ("n", "parity", "eigenvalue", "closed_form", "rel_error", "ladder_eigenvalue")
STAT_FIELDS = stats.StatRecord.FIELDS

# keys accepted in a config file, with their converters
_CONFIG_KEYS = {
    "mu": float,
    "omega": float,
    "f_mag": float,
    "f_phase": float,
    "dim": int,
    "n": int,
    "r": float,
    "count": int,
    "format": str,
    "out": str,
    "source": str,
    "mu_list": str,
    "r_list": str,
    "n_list": str,
}


class UsageError(ParameterError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    params: ModelParams
    output_format: str = "table"
    output_path: Optional[str] = None
    n: int = 0
    r: Optional[float] = None
    count: Optional[int] = None
    source: str = "both"
    mu_list: list = field(default_factory=list)
    r_list: list = field(default_factory=list)
    n_list: list = field(default_factory=list)

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        if self.output_format not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}, got {self.output_format!r}")
        if self.source not in SOURCES:
            raise UsageError(f"source must be one of {SOURCES}, got {self.source!r}")
        if self.subcommand == "sweep":
            for name in ("mu_list", "r_list", "n_list"):
                if not getattr(self, name):
                    raise UsageError(f"sweep needs a non-empty --{name.replace('_', '-')}")
            bad = [m for m in self.mu_list if not m > -0.5]
            if bad:
                raise UsageError(f"mu values must be > -1/2, got {bad}")


# ---------------------------------------------------------------------------
# output

def format_number(x) -> Optional[str]:
    """17 significant digits; ``None`` for undefined values."""
    if x is None:
        return None
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return format(x, ".17g")


class RecordWriter:
    """Streams records as csv or json; buffers them for the aligned table."""

    def __init__(self, fields, fmt, stream):
        self.fields = tuple(fields)
        self.fmt = fmt
        self.stream = stream
        self.count = 0
        self._rows = []
        if fmt == "csv":
            stream.write(",".join(self.fields) + "\n")
        elif fmt == "json":
            stream.write("[")

    def _cell(self, value, csv):
        if isinstance(value, str):
            return value if csv else json.dumps(value)
        text = format_number(value)
        if text is None:
            return "NaN" if csv else "null"
        if not csv and text in ("inf", "-inf"):
            return json.dumps(text)
        return text

    def write(self, row: dict):
        if self.fmt == "csv":
            self.stream.write(",".join(self._cell(row[k], True) for k in self.fields) + "\n")
        elif self.fmt == "json":
            body = ", ".join(f"{json.dumps(k)}: {self._cell(row[k], False)}" for k in self.fields)
            self.stream.write(("\n  " if self.count == 0 else ",\n  ") + "{" + body + "}")
        else:
            self._rows.append([self._cell(row[k], True) for k in self.fields])
        self.count += 1
        self.stream.flush()

    def close(self):
        if self.fmt == "json":
            self.stream.write("\n]\n" if self.count else "]\n")
        elif self.fmt == "table":
            rows = [list(self.fields)] + self._rows
            widths = [max(len(r[i]) for r in rows) for i in range(len(self.fields))]
            for r in rows:
                self.stream.write("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n")
        self.stream.flush()


def _check_row(name, params, interior, value, tol):
    ok = value <= tol
    return {
        "check": name,
        "mu": params.mu,
        "dim": params.dim,
        "interior": interior,
        "value": value,
        "tolerance": tol,
        "status": "pass" if ok else "fail",
    }


# ---------------------------------------------------------------------------
# subcommands; each yields rows and returns through the writer

def _verify_rows(cfg):
    p = cfg.params
    d = p.dim
    yield _check_row("deformed_heisenberg", p, d - algebra.HEISENBERG_MARGIN,
                     algebra.check_deformed_heisenberg(p), ALGEBRA_TOL)
    yield _check_row("su11", p, d - algebra.SU11_MARGIN, algebra.check_su11(p), ALGEBRA_TOL)
    yield _check_row("casimir_spectrum", p, d - algebra.SU11_MARGIN,
                     algebra.check_casimir_spectrum(p), ALGEBRA_TOL)
    yield _check_row("casimir_commutes_rel", p, d - algebra.SU11_MARGIN,
                     algebra.check_casimir_commutes(p), ALGEBRA_TOL)
    yield _check_row("anticommutator", p, d - algebra.SU11_MARGIN,
                     algebra.check_anticommutator(p), ALGEBRA_TOL)
    yield _check_row("number_nonconservation", p, d - algebra.SU11_MARGIN,
                     amplifier.check_number_nonconservation(p), ALGEBRA_TOL)
    yield _check_row("parity_conservation", p, d,
                     amplifier.check_parity_conservation(p), ALGEBRA_TOL)


def _spectrum_rows(cfg):
    p = cfg.params
    res = amplifier.numerical_spectrum(p, cfg.count)
    levels = res.level_matched()
    ladder = levels - p.omega * (0.5 + p.mu * np.where(np.arange(p.dim) % 2, -1.0, 1.0))
    for n in range(res.trusted_count):
        yield {
            "n": n,
            "parity": 1 if n % 2 == 0 else -1,
            "eigenvalue": levels[n],
            "closed_form": res.closed_form[n],
            "rel_error": abs(levels[n] - res.closed_form[n]) / abs(res.closed_form[n]),
            "ladder_eigenvalue": ladder[n],
        }
    failures = []
    if not res.max_rel_error < SPECTRUM_TOL:
        failures.append(f"spectrum: max relative error {res.max_rel_error:.3g} >= {SPECTRUM_TOL:g}")
    if not res.interleaves():
        failures.append("spectrum: even/odd sector levels do not interleave")
    return failures


def _tilt_rows(cfg):
    p = cfg.params
    res = transforms.tilt_hamiltonian(p)
    d = transforms.displacement_operator(transforms.solve_squeeze(p), p)
    unitarity = max_abs(d.conj().T @ d - np.eye(p.dim))
    k = res.interior
    yield _check_row("tilt_offdiagonal", p, k, res.offdiag_residual, TILT_TOL)
    yield _check_row("tilt_diagonal_rel", p, k, res.diagonal_residual, TILT_TOL)
    yield _check_row("tilt_doubling_change", p, k, res.doubling_change, DOUBLING_TOL)
    yield _check_row("displacement_unitarity", p, p.dim, unitarity, UNITARY_TOL)


def _bogoliubov_rows(cfg):
    p = cfg.params
    res = transforms.bogoliubov_diagonal_form(p)
    quasi = transforms.bogoliubov_spectrum(p)
    sq = transforms.solve_squeeze(p)
    b, bd = transforms.bogoliubov_operators(sq, p)
    inverse = max_abs(transforms.inverse_bogoliubov(b, bd, sq) - build_annihilation(p))
    k = res.interior
    yield _check_row("coefficient_B", p, p.dim, res.coefficient_residual, COEFF_TOL)
    yield _check_row("quasi_vs_hamiltonian", p, k, res.residual, TILT_TOL)
    yield _check_row("quasi_spectrum_rel", p, k, quasi.rel_error, TILT_TOL)
    yield _check_row("quasi_ladder", p, k, quasi.ladder_residual, TILT_TOL)
    yield _check_row("inverse_relation", p, p.dim, inverse, COEFF_TOL)


def _stat_records(n, mu, r, cfg):
    """Closed-form and/or oracle records for one grid point, plus failures."""
    out = []
    closed = oracle = None
    if cfg.source in ("closed_form", "both"):
        closed = stats.closed_form_statistics(n, mu, r)
        out.append(closed)
    if cfg.source in ("oracle", "both"):
        p = ModelParams(mu, cfg.params.omega, cfg.params.f_mag, cfg.params.f_phase, cfg.params.dim)
        oracle = stats.oracle_statistics(n, p, r=r)
        out.append(oracle)
    failures = []
    if closed is not None and oracle is not None:
        for name in ("mean_n", "variance", "mandel_q", "g2"):
            x, y = getattr(closed, name), getattr(oracle, name)
            if (x is None) != (y is None) or (x is not None and not abs(x - y) < STATS_TOL):
                failures.append(f"stats n={n} mu={mu} r={r}: {name} closed={x} oracle={y}")
    return out, failures


def _resolve_r(cfg):
    if cfg.r is not None:
        return cfg.r
    return transforms.solve_squeeze(cfg.params).r


def _run_checks(rows, writer):
    failures = []
    for row in rows:
        writer.write(row)
        if row["status"] != "pass":
            failures.append(f"{row['check']}: value {row['value']!r} exceeds {row['tolerance']!r}")
    return failures


def _dispatch(cfg, stream):
    sub = cfg.subcommand
    if sub in ("spectrum", "tilt", "bogoliubov"):
        cfg.params.require_stable()
    if sub == "verify":
        writer = RecordWriter(CHECK_FIELDS, cfg.output_format, stream)
        failures = _run_checks(_verify_rows(cfg), writer)
    elif sub == "tilt":
        writer = RecordWriter(CHECK_FIELDS, cfg.output_format, stream)
        failures = _run_checks(_tilt_rows(cfg), writer)
    elif sub == "bogoliubov":
        writer = RecordWriter(CHECK_FIELDS, cfg.output_format, stream)
        failures = _run_checks(_bogoliubov_rows(cfg), writer)
    elif sub == "spectrum":
        writer = RecordWriter(SPECTRUM_FIELDS, cfg.output_format, stream)
        gen = _spectrum_rows(cfg)
        while True:
            try:
                writer.write(next(gen))
            except StopIteration as stop:
                failures = stop.value or []
                break
    elif sub == "stats":
        r = _resolve_r(cfg)
        records, failures = _stat_records(cfg.n, cfg.params.mu, r, cfg)
        writer = RecordWriter(STAT_FIELDS, cfg.output_format, stream)
        for rec in records:
            writer.write(rec.as_dict())
    else:
        writer = RecordWriter(STAT_FIELDS, cfg.output_format, stream)
        failures = []
        for mu in cfg.mu_list:
            for r in cfg.r_list:
                for n in cfg.n_list:
                    records, fails = _stat_records(n, mu, r, cfg)
                    failures += fails
                    for rec in records:
                        writer.write(rec.as_dict())
    writer.close()
    return failures


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Execute one subcommand; returns the process exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        if cfg.output_path:
            with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
                failures = _dispatch(cfg, fh)
        else:
            failures = _dispatch(cfg, stdout)
    except (ParameterError, TruncationError, ParityError) as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except ConvergenceError as exc:
        stderr.write(f"numerical failure: {exc}\n")
        return 1
    for msg in failures:
        stderr.write(f"FAIL {msg}\n")
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# argument handling

def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return out


def _parse_list(text, conv, name):
    try:
        return [conv(item) for item in str(text).split(",") if item.strip()]
    except ValueError as exc:
        raise UsageError(f"--{name}: cannot parse {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--mu", type=float, help="Dunkl deformation (> -1/2)")
    common.add_argument("--omega", type=float, help="field frequency (> 0)")
    common.add_argument("--f-mag", dest="f_mag", type=float, help="pump magnitude |f|")
    common.add_argument("--f-phase", dest="f_phase", type=float, help="pump phase theta")
    common.add_argument("--dim", type=int, help=f"Fock truncation (even, default {DEFAULT_DIM})")
    common.add_argument("--format", choices=FORMATS, help="output format (default table)")
    common.add_argument("--out", help="write data to this file instead of stdout")
    common.add_argument("--config", help="key = value config file; flags override it")

    parser = argparse.ArgumentParser(
        prog="dunkl-paramp",
        description="Dunkl parametric amplifier on a truncated Fock space.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("verify", parents=[common], help="operator-algebra residuals")
    p = sub.add_parser("spectrum", parents=[common], help="numerical vs closed-form spectrum")
    p.add_argument("--count", type=int, help="levels to compare (default dim/4)")
    sub.add_parser("tilt", parents=[common], help="tilting-transformation residuals")
    sub.add_parser("bogoliubov", parents=[common], help="Bogoliubov-transformation residuals")
    for name, text in (("stats", "photon statistics at one point"),
                       ("sweep", "photon statistics over a grid")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--source", choices=SOURCES,
                       help="closed_form, oracle or both (default: both for stats, closed_form for sweep)")
        if name == "stats":
            p.add_argument("--n", type=int, help="Fock label of the pre-squeeze state")
            p.add_argument("--r", type=float, help="squeezing rapidity (default: solved from omega, |f|)")
        else:
            p.add_argument("--mu-list", dest="mu_list", help="comma-separated mu values")
            p.add_argument("--r-list", dest="r_list", help="comma-separated r values")
            p.add_argument("--n-list", dest="n_list", help="comma-separated n values")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    values = {}
    if getattr(ns, "config", None):
        values.update(read_config_file(ns.config))
    values.update(
        {k: v for k, v in vars(ns).items() if k not in ("config", "subcommand") and v is not None}
    )

    params = ModelParams(
        mu=values.get("mu", 0.0),
        omega=values.get("omega", 1.0),
        f_mag=values.get("f_mag", 0.0),
        f_phase=values.get("f_phase", 0.0),
        dim=values.get("dim", DEFAULT_DIM),
    )
    default_source = "closed_form" if ns.subcommand == "sweep" else "both"
    return RunConfig(
        subcommand=ns.subcommand,
        params=params,
        output_format=values.get("format", "table"),
        output_path=values.get("out"),
        n=values.get("n", 0),
        r=values.get("r"),
        count=values.get("count"),
        source=values.get("source", default_source),
        mu_list=_parse_list(values.get("mu_list", ""), float, "mu-list"),
        r_list=_parse_list(values.get("r_list", ""), float, "r-list"),
        n_list=_parse_list(values.get("n_list", ""), int, "n-list"),
    )


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except (ParameterError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
