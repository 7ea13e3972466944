"""Command-line front end: deterministic (L, tau) scans to CSV or JSON.

Subcommands map one observable to one plot-ready file:

  coeffs      Lanczos coefficients a_n, b_n
  evolve      Krylov complexity K, K_norm and (where exact) chi
  wavepacket  Krylov wavepacket psi_n at explicit tau values
  renyi2      Renyi-2 correlator chi
  moments     survival moments mu_n from the tridiagonal representation
  verify      run the verification suite (quick | full)

Output is bitwise deterministic across runs and thread counts: scan
points are pure functions of precomputed per-L eigendecompositions, the
worker pool preserves submission order, and floats are written with 17
significant digits (binary64 round-trip exact).  Exit codes: 0 success,
1 verification failure, 2 invalid arguments or config.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import checks, lintri
from .errors import ArgumentError
from .evolve import moments_from_tridiag, renyi2_dense, renyi2_tridiag, scan_point
from .models import ModelKind, ModelSpec, analytic_lanczos

# Figure-scale default grids.
DEFAULT_LENGTHS = {ModelKind.NN: (20, 100), ModelKind.IR: (100, 200, 500)}
DEFAULT_TAU_GRID = {ModelKind.NN: (0.0, 3.0, 301), ModelKind.IR: (0.0, 2.0, 401)}
# Extra points past the crossover where the IR complexity plateaus at L/4.
IR_PLATEAU_TAUS = (5.0, 10.0)
# Dense-method default lengths for the Renyi-2 crossing plots.
RENYI2_DEFAULT_LENGTHS = (8, 10, 12, 14)
DEFAULT_NMAX = 10

_CONFIG_KEYS = frozenset(
    {"model", "lengths", "tau", "tau_list", "out", "format", "threads", "nmax"}
)


@dataclass(frozen=True)
class RunConfig:
    """Resolved scan parameters for the data-producing subcommands."""

    model: ModelKind
    lengths: tuple
    taus: tuple
    explicit_taus: bool
    out: Optional[str]
    format: str
    threads: int
    nmax: int

    def __post_init__(self):
        if not self.lengths:
            raise ArgumentError("lengths: need at least one length")
        for length in self.lengths:
            ModelSpec(kind=self.model, length=length)  # validates length parity
        for tau in self.taus:
            if not (np.isfinite(tau) and tau >= 0):
                raise ArgumentError(f"tau: values must be finite and >= 0, got {tau!r}")
        if self.format not in ("csv", "json"):
            raise ArgumentError(f"format: expected csv or json, got {self.format!r}")
        if self.threads < 1:
            raise ArgumentError(f"threads: must be >= 1, got {self.threads!r}")
        if self.nmax < 0:
            raise ArgumentError(f"nmax: must be >= 0, got {self.nmax!r}")


def parse_lengths(value):
    """Parse "100,200,500" (or a JSON list) into a tuple of ints."""
    if isinstance(value, str):
        tokens = [tok.strip() for tok in value.split(",") if tok.strip()]
    elif isinstance(value, (list, tuple)):
        tokens = value
    else:
        raise ArgumentError(f"lengths: expected a comma list, got {value!r}")
    if not tokens:
        raise ArgumentError("lengths: need at least one length")
    out = []
    for tok in tokens:
        try:
            length = int(tok)
        except (TypeError, ValueError):
            raise ArgumentError(f"lengths: {tok!r} is not an integer") from None
        if length < 2:
            raise ArgumentError(f"lengths: must be >= 2, got {length}")
        out.append(length)
    return tuple(out)


def parse_tau_grid(value):
    """Parse "start:stop:count" (or a JSON triple) into a grid tuple."""
    if isinstance(value, str):
        parts = value.split(":")
        if len(parts) != 3:
            raise ArgumentError(f"tau: expected start:stop:count, got {value!r}")
    elif isinstance(value, (list, tuple)) and len(value) == 3:
        parts = value
    else:
        raise ArgumentError(f"tau: expected start:stop:count, got {value!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except (TypeError, ValueError):
        raise ArgumentError(f"tau: could not parse {value!r}") from None
    if start < 0:
        raise ArgumentError(f"tau: start must be >= 0, got {start}")
    if stop < start:
        raise ArgumentError(f"tau: stop must be >= start, got {stop} < {start}")
    if count < 1:
        raise ArgumentError(f"tau: count must be >= 1, got {count}")
    return start, stop, count


def parse_tau_list(value):
    """Parse "0.1,0.5,2" (or a JSON list) into a tuple of floats."""
    if isinstance(value, str):
        tokens = [tok.strip() for tok in value.split(",") if tok.strip()]
    elif isinstance(value, (list, tuple)):
        tokens = value
    else:
        raise ArgumentError(f"tau_list: expected a comma list, got {value!r}")
    if not tokens:
        raise ArgumentError("tau_list: need at least one value")
    try:
        taus = tuple(float(tok) for tok in tokens)
    except (TypeError, ValueError):
        raise ArgumentError(f"tau_list: could not parse {value!r}") from None
    return taus


def grid_taus(grid):
    start, stop, count = grid
    if count == 1:
        return (start,)
    return tuple(float(t) for t in np.linspace(start, stop, count))


def _load_config_file(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as err:
        raise ArgumentError(f"config: cannot read {path!r}: {err}") from None
    except json.JSONDecodeError as err:
        raise ArgumentError(f"config: {path!r} is not valid JSON: {err}") from None
    if not isinstance(raw, dict):
        raise ArgumentError("config: expected a flat JSON object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ArgumentError(f"config: unknown keys {sorted(unknown)}")
    return raw


def resolve_config(args, command):
    """Merge config file and flags (flags win) into a RunConfig."""
    options = _load_config_file(args.config) if args.config else {}

    def pick(key):
        flag = getattr(args, key, None)
        return flag if flag is not None else options.get(key)

    model_name = pick("model")
    if model_name is None:
        raise ArgumentError("model: required (--model nn|ir)")
    try:
        model = ModelKind(model_name)
    except ValueError:
        raise ArgumentError(f"model: expected nn or ir, got {model_name!r}") from None

    raw_lengths = pick("lengths")
    if raw_lengths is not None:
        lengths = parse_lengths(raw_lengths)
    elif command == "renyi2":
        lengths = RENYI2_DEFAULT_LENGTHS
    else:
        lengths = DEFAULT_LENGTHS[model]

    raw_list = pick("tau_list")
    raw_grid = pick("tau")
    if raw_list is not None:
        taus = parse_tau_list(raw_list)
        explicit = True
    elif raw_grid is not None:
        taus = grid_taus(parse_tau_grid(raw_grid))
        explicit = True
    else:
        taus = grid_taus(DEFAULT_TAU_GRID[model])
        if model is ModelKind.IR and command == "evolve":
            taus = taus + IR_PLATEAU_TAUS
        explicit = False

    threads = pick("threads")
    if threads is None:
        threads = os.cpu_count() or 1
    nmax = pick("nmax")
    return RunConfig(
        model=model,
        lengths=lengths,
        taus=taus,
        explicit_taus=explicit,
        out=pick("out"),
        format=pick("format") or "csv",
        threads=int(threads),
        nmax=DEFAULT_NMAX if nmax is None else int(nmax),
    )


def _format_float(value):
    return f"{value:.17g}"


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return _format_float(float(value))


def write_rows(out, fmt, header, rows):
    """Write rows as CSV (17-digit floats, \\n endings) or JSON objects."""
    if fmt == "csv":
        lines = [",".join(header)]
        lines.extend(",".join(_csv_cell(value) for value in row) for row in rows)
        text = "\n".join(lines) + "\n"
    else:
        payload = [dict(zip(header, row)) for row in rows]
        text = json.dumps(payload, indent=1, allow_nan=False) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "wb") as handle:
            handle.write(text.encode("utf-8"))


def _parallel_map(fn, items, threads):
    """Map preserving input order; a thread pool only sizes the execution."""
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _decompositions(config):
    """Per-length Krylov spec and eigendecomposition, built sequentially."""
    table = {}
    for length in sorted(set(config.lengths)):
        spec = analytic_lanczos(ModelSpec(kind=config.model, length=length))
        table[length] = (spec, lintri.eig_tridiag(spec.tridiag))
    return table


def cmd_coeffs(config):
    """Lanczos coefficients; b_0 is written as an empty field."""
    rows = []
    for length in sorted(set(config.lengths)):
        spec = analytic_lanczos(ModelSpec(kind=config.model, length=length))
        diag, offdiag = spec.tridiag.diag, spec.tridiag.offdiag
        for n in range(spec.krylov_dim):
            rows.append(
                (
                    config.model.value,
                    length,
                    n,
                    float(diag[n]),
                    None if n == 0 else float(offdiag[n - 1]),
                )
            )
    write_rows(config.out, config.format, ("model", "L", "n", "a_n", "b_n"), rows)
    return 0


def cmd_evolve(config):
    """K, K_norm and chi over the (L, tau) grid, sorted by (L, tau)."""
    table = _decompositions(config)
    taus = sorted(set(config.taus))
    items = [(length, tau) for length in sorted(table) for tau in taus]

    def worker(item):
        length, tau = item
        spec, dec = table[length]
        return scan_point(spec, dec, tau)

    rows = [
        (config.model.value, row.length, row.tau, row.k, row.k_norm, row.chi)
        for row in _parallel_map(worker, items, config.threads)
    ]
    write_rows(
        config.out, config.format, ("model", "L", "tau", "K", "K_norm", "chi"), rows
    )
    return 0


def cmd_wavepacket(config):
    """psi_n at explicit tau values, one row per Krylov index."""
    if not config.explicit_taus:
        raise ArgumentError(
            "tau: wavepacket requires an explicit tau list (--tau-list or --tau)"
        )
    table = _decompositions(config)
    taus = sorted(set(config.taus))
    items = [(length, tau) for length in sorted(table) for tau in taus]

    def worker(item):
        length, tau = item
        _, dec = table[length]
        return lintri.expm_from_eig(dec, tau)

    rows = []
    for (length, tau), state in zip(
        items, _parallel_map(worker, items, config.threads)
    ):
        for n, amp in enumerate(state.psi):
            rows.append(
                (config.model.value, length, tau, n, float(amp), float(amp * amp))
            )
    write_rows(
        config.out, config.format, ("model", "L", "tau", "n", "psi", "psi2"), rows
    )
    return 0


def cmd_renyi2(config):
    """chi over the (L, tau) grid: dense for NN (L <= 14), tridiagonal for IR."""
    taus = sorted(set(config.taus))
    lengths = sorted(set(config.lengths))
    if config.model is ModelKind.IR:
        table = _decompositions(config)

        def worker(item):
            length, tau = item
            spec, dec = table[length]
            return renyi2_tridiag(spec, lintri.expm_from_eig(dec, tau))

    else:

        def worker(item):
            length, tau = item
            return renyi2_dense(ModelSpec(kind=config.model, length=length), tau)

    items = [(length, tau) for length in lengths for tau in taus]
    values = _parallel_map(worker, items, config.threads)
    rows = [
        (config.model.value, length, tau, chi)
        for (length, tau), chi in zip(items, values)
    ]
    write_rows(config.out, config.format, ("model", "L", "tau", "chi"), rows)
    return 0


def cmd_moments(config):
    """Survival moments mu_n from the analytic tridiagonal representation."""
    rows = []
    for length in sorted(set(config.lengths)):
        spec = analytic_lanczos(ModelSpec(kind=config.model, length=length))
        mu = moments_from_tridiag(spec.tridiag, config.nmax)
        for n, value in enumerate(mu):
            rows.append((config.model.value, length, n, float(value)))
    write_rows(config.out, config.format, ("model", "L", "n", "mu_n"), rows)
    return 0


def cmd_verify(level):
    """Run the verification suite; exit 0 iff every check passes."""
    results = checks.run_checks(level)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(
            f"{status}  [{result.number:2d}] {result.name}: {result.detail} "
            f"({result.elapsed:.2f}s)"
        )
    failed = [r for r in results if not r.passed]
    print(
        f"{len(results) - len(failed)}/{len(results)} checks passed "
        f"({level} level)"
    )
    return 0 if not failed else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dekrylov",
        description=(
            "Krylov complexity and Renyi-2 scans for symmetric dephasing "
            "channels mapped to imaginary-time evolution"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scan_flags(p, with_tau=True):
        p.add_argument("--model", choices=("nn", "ir"), help="model kind")
        p.add_argument("--lengths", help="comma list of chain lengths, e.g. 100,200")
        if with_tau:
            p.add_argument("--tau", help="grid start:stop:count, e.g. 0:2:401")
            p.add_argument("--tau-list", dest="tau_list", help="comma list of tau values")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format")
        p.add_argument("--threads", type=int, help="worker threads (default: all cores)")
        p.add_argument("--config", help="flat JSON config file; flags override it")

    add_scan_flags(
        sub.add_parser("coeffs", help="Lanczos coefficients a_n, b_n"), with_tau=False
    )
    add_scan_flags(sub.add_parser("evolve", help="K, K_norm, chi over (L, tau)"))
    add_scan_flags(
        sub.add_parser("wavepacket", help="psi_n at explicit tau values")
    )
    add_scan_flags(sub.add_parser("renyi2", help="Renyi-2 correlator chi"))
    moments = sub.add_parser(
        "moments", help="survival moments mu_n = <rho_init|H^n|rho_init>"
    )
    add_scan_flags(moments, with_tau=False)
    moments.add_argument("--nmax", type=int, help=f"highest moment (default {DEFAULT_NMAX})")
    verify = sub.add_parser("verify", help="run the verification suite")
    verify.add_argument(
        "level",
        choices=("quick", "full"),
        nargs="?",
        default="quick",
        help="quick: seconds-scale reduced grids; full: everything",
    )
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args.level)
        config = resolve_config(args, args.command)
        handler = {
            "coeffs": cmd_coeffs,
            "evolve": cmd_evolve,
            "wavepacket": cmd_wavepacket,
            "renyi2": cmd_renyi2,
            "moments": cmd_moments,
        }[args.command]
        return handler(config)
    except ArgumentError as err:  # DomainError included
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
