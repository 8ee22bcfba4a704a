"""Command line front end: ``spinpair {sweep,scan,boundary,critical,verify}``.

Options can come from a flat ``key = value`` config file (``--config``);
command-line flags override it. Exit codes: 0 success, 1 failed
verification, 2 configuration error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import logging
import math
import re
import sys
from dataclasses import asdict

import numpy as np

from .model import SpinPairParams
from .phase import (NonBracketingError, boundary_curve, critical_points,
                    critical_temperature, stripe_width)
from .sweep import (QUANTITIES, ConfigError, GridSpec, SweepConfig,
                    emit_table, run_scan, run_sweep, table_csv, ScanTable)

log = logging.getLogger("spinpair")

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4

# option name -> (type, help); shared by the config file and the flags
_PHYSICS = {
    "two_s": (int, "twice the spin (1 for s=1/2)"),
    "J": (float, "XY exchange coupling"),
    "jz": (float, "Z exchange coupling"),
    "D": (float, "Dzyaloshinskii-Moriya coupling along z"),
    "kt": (float, "temperature kT (0 for the ground state)"),
    "h1": (str, "field on spin 1 (scan) or h1 axis a:b:n (sweep)"),
    "h2": (str, "field on spin 2 (scan) or h2 axis a:b:n (sweep)"),
}


def parse_range(text: str, name: str) -> tuple[float, float, int]:
    try:
        a, b, n = text.split(":")
        return float(a), float(b), int(n)
    except ValueError:
        raise ConfigError(name, f"expected start:stop:count, got {text!r}") from None


def load_config(path: str) -> dict:
    parser = configparser.ConfigParser()
    parser.optionxform = str
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror}") from exc
    if not text.lstrip().startswith("["):
        text = "[spinpair]\n" + text
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("config", str(exc)) from None
    out = {}
    for section in parser.sections():
        for key, value in parser[section].items():
            out[key.replace("-", "_")] = value
    return out


def _merge(args: argparse.Namespace, keys) -> dict:
    """Config-file values overridden by explicitly given flags."""
    merged = load_config(args.config) if getattr(args, "config", None) else {}
    lowered = {k.lower(): v for k, v in merged.items()}
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            lowered[key.lower()] = value
    return lowered


def _get(opts: dict, key: str, kind, default=None, required=False):
    if key.lower() not in opts or opts[key.lower()] in (None, ""):
        if required:
            raise ConfigError(key, "is required")
        return default
    raw = opts[key.lower()]
    try:
        if kind is bool:
            return raw if isinstance(raw, bool) else str(raw).lower() in ("1", "true", "yes", "on")
        return kind(raw)
    except (TypeError, ValueError):
        raise ConfigError(key, f"invalid value {raw!r}") from None


def _physics(opts: dict) -> tuple[int, float, float, float, float, float]:
    """(two_s, J, Jz, D, kT, unit) with 'units of J' already applied."""
    two_s = _get(opts, "two_s", int, required=True)
    J = _get(opts, "J", float, 1.0)
    unit = J if _get(opts, "units_of_j", bool, False) else 1.0
    Jz = _get(opts, "jz", float, required=True) * unit
    D = _get(opts, "D", float, 0.0) * unit
    kT = _get(opts, "kt", float, 0.0) * unit
    for name, v in (("J", J), ("jz", Jz), ("D", D), ("kt", kT)):
        if not math.isfinite(v):
            raise ConfigError(name, "must be finite")
    return two_s, J, Jz, D, kT, unit


def _add_physics(p: argparse.ArgumentParser, fields=True):
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--two-s", dest="two_s", type=int, help=_PHYSICS["two_s"][1])
    p.add_argument("--J", "--j", dest="J", type=float, help=_PHYSICS["J"][1])
    p.add_argument("--jz", type=float, help=_PHYSICS["jz"][1])
    p.add_argument("--D", "--d", dest="D", type=float, help=_PHYSICS["D"][1])
    p.add_argument("--kt", "--T", dest="kt", type=float, help=_PHYSICS["kt"][1])
    p.add_argument("--units-of-j", dest="units_of_j", action="store_const", const=True,
                   help="read Jz, D, kT and fields as multiples of J")
    if fields:
        p.add_argument("--h1", help=_PHYSICS["h1"][1])
        p.add_argument("--h2", help=_PHYSICS["h2"][1])
    p.add_argument("--output", "-o", help="output path (default: stdout where possible)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinpair", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="observables on an (h1, h2) grid")
    _add_physics(sw)
    sw.add_argument("--grid", help="both field axes as start:stop:count")
    sw.add_argument("--quantities", help=f"comma list from {','.join(QUANTITIES)}")
    sw.add_argument("--workers", type=int)
    sw.add_argument("--format", choices=("csv", "json", "pgm"))

    sc = sub.add_parser("scan", help="observables along T or h1 - h2")
    _add_physics(sc)
    sc.add_argument("--kind", choices=("temperature", "field-difference"))
    sc.add_argument("--range", dest="range_", help="start:stop:count of the scanned variable")
    sc.add_argument("--h-avg", dest="h_avg", type=float,
                    help="average field for field-difference scans")

    bd = sub.add_parser("boundary", help="tabulate the T = 0 entanglement boundary")
    _add_physics(bd, fields=False)
    bd.add_argument("--range", dest="range_", help="h1 - h2 values as start:stop:count")

    cr = sub.add_parser("critical", help="critical temperature, stripe width, critical points")
    _add_physics(cr, fields=False)

    ve = sub.add_parser("verify", help="run the self-check suite")
    ve.add_argument("--draws", type=int, default=100)
    ve.add_argument("--seed", type=int, default=0)
    return parser


# ------------------------------------------------------------------ commands

def _axis(opts, key, fallback):
    text = opts.get(key.lower())
    return parse_range(text, key) if text else fallback


def cmd_sweep(args) -> int:
    opts = _merge(args, ["two_s", "J", "jz", "D", "kt", "h1", "h2", "grid",
                         "quantities", "workers", "output", "format", "units_of_j"])
    two_s, J, Jz, D, kT, unit = _physics(opts)
    default = GridSpec.default(two_s, math.hypot(J, D), Jz)
    both = _axis(opts, "grid", None)
    r1 = _axis(opts, "h1", both or (default.h1_min, default.h1_max, default.n1))
    r2 = _axis(opts, "h2", both or (default.h2_min, default.h2_max, default.n2))
    if _get(opts, "units_of_j", bool, False):
        r1 = (r1[0] * unit, r1[1] * unit, r1[2])
        r2 = (r2[0] * unit, r2[1] * unit, r2[2])
    grid = GridSpec(r1[0], r1[1], r2[0], r2[1], r1[2], r2[2])
    quantities = tuple(q.strip() for q in str(opts.get("quantities") or "negativity").split(",")
                       if q.strip())
    fmt = _get(opts, "format", str, "csv")
    output = _get(opts, "output", str)
    cfg = SweepConfig(two_s, J, Jz, grid, T=kT, D=D, quantities=quantities,
                      workers=_get(opts, "workers", int, 1), output=output, format=fmt)
    cfg.validate()
    if output is None and fmt == "pgm":
        raise ConfigError("output", "pgm output needs a path")
    result = run_sweep(cfg)
    log.info("sweep finished in %.2f s", result.metadata["wall_time_s"])
    if output is None:
        from .sweep import grid_csv, grid_json
        sys.stdout.write(grid_json(result) if fmt == "json" else grid_csv(result))
    return EXIT_OK


def cmd_scan(args) -> int:
    opts = _merge(args, ["two_s", "J", "jz", "D", "kt", "h1", "h2", "kind",
                         "range_", "h_avg", "output", "units_of_j"])
    two_s, J, Jz, D, kT, unit = _physics(opts)
    kind = _get(opts, "kind", str, required=True)
    start, stop, n = parse_range(_get(opts, "range_", str, required=True), "range")
    start, stop = start * unit, stop * unit
    h1 = _get(opts, "h1", float, 0.0) * unit
    h2 = _get(opts, "h2", float, 0.0) * unit
    if kind == "field-difference":
        avg = _get(opts, "h_avg", float, 0.0) * unit
        h1, h2 = avg, avg
    p = SpinPairParams(two_s, J, Jz, h1, h2, D=D)
    table = run_scan(kind, p, start, stop, n, T=kT)
    out = _get(opts, "output", str)
    if out:
        emit_table(table, out)
    else:
        sys.stdout.write(table_csv(table))
    return EXIT_OK


def cmd_boundary(args) -> int:
    opts = _merge(args, ["two_s", "J", "jz", "D", "range_", "output", "units_of_j"])
    two_s, J, Jz, D, _, unit = _physics(opts)
    J = math.hypot(J, D)
    half = 3 * (two_s / 2) * max(J, abs(Jz))
    start, stop, n = parse_range(_get(opts, "range_", str, f"{-2 * half}:{2 * half}:201"), "range")
    rows = boundary_curve(two_s, J, Jz, np.linspace(start * unit, stop * unit, n))
    table = ScanTable(["dh", "sum_limit", "h1_upper", "h2_upper", "h1_lower", "h2_lower"], rows,
                      {"two_s": two_s, "J": J, "Jz": Jz})
    out = _get(opts, "output", str)
    if out:
        emit_table(table, out)
    else:
        sys.stdout.write(table_csv(table))
    return EXIT_OK


def cmd_critical(args) -> int:
    opts = _merge(args, ["two_s", "J", "jz", "D", "kt", "output", "units_of_j"])
    two_s, J, Jz, D, kT, _ = _physics(opts)
    J = math.hypot(J, D)
    report = {"two_s": two_s, "J": J, "Jz": Jz,
              "critical_temperature": critical_temperature(two_s, J, Jz)}
    if kT > 0:
        res = stripe_width(two_s, J, Jz, kT)
        report["stripe"] = {"T": kT, "h_c": res.h_c, "method": res.method,
                            "bracket": list(res.bracket)}
    if Jz < -J:
        info = critical_points(two_s, J, Jz)
        report["critical_points"] = {k: v for k, v in asdict(info).items()}
    text = json.dumps(report, indent=2, default=list) + "\n"
    out = _get(opts, "output", str)
    if out:
        from .sweep import _atomic_write
        _atomic_write(out, text.encode())
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_certificates
    results = run_certificates(args.draws, args.seed)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


COMMANDS = {"sweep": cmd_sweep, "scan": cmd_scan, "boundary": cmd_boundary,
            "critical": cmd_critical, "verify": cmd_verify}


_RANGE_FLAGS = {"--grid", "--h1", "--h2", "--range"}
_NEGATIVE = re.compile(r"^-[\d.]")


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--grid -2:2:5`` into ``--grid=-2:2:5`` so argparse keeps the value."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _RANGE_FLAGS and i + 1 < len(argv) and _NEGATIVE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_negative_values(argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NonBracketingError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
