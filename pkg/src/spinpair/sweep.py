"""Field-plane sweeps, one-dimensional scans and their file formats."""

from __future__ import annotations

import json
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .measures import (concurrence_wootters, eof_from_concurrence, negativity,
                       rel_entropy_coherence)
from .model import SpinPairParams, build_hamiltonian
from .thermal import DEFAULT_TOL_DEG, ground_magnetization, thermal_state

QUANTITIES = ("negativity", "concurrence", "eof", "coherence",
              "gs_magnetization", "gs_energy", "gap")
FORMATS = ("csv", "json", "pgm")
_TWO_QUBIT_ONLY = {"concurrence", "eof"}
_THERMAL = {"negativity", "concurrence", "eof", "coherence"}


class ConfigError(ValueError):
    """Invalid sweep or scan configuration; ``field`` names the culprit."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class GridSpec:
    h1_min: float
    h1_max: float
    h2_min: float
    h2_max: float
    n1: int
    n2: int

    @classmethod
    def default(cls, two_s: int, J: float, Jz: float, n: int = 201) -> GridSpec:
        half = 3 * (two_s / 2) * max(abs(J), abs(Jz))
        return cls(-half, half, -half, half, n, n)

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (np.linspace(self.h1_min, self.h1_max, self.n1),
                np.linspace(self.h2_min, self.h2_max, self.n2))


@dataclass(frozen=True)
class SweepConfig:
    two_s: int
    J: float
    Jz: float
    grid: GridSpec
    T: float = 0.0
    D: float = 0.0
    quantities: tuple = ("negativity",)
    workers: int = 1
    output: str | None = None
    format: str = "csv"

    def validate(self) -> None:
        if int(self.two_s) != self.two_s or self.two_s < 1:
            raise ConfigError("two_s", "must be a positive integer")
        if self.J == 0 and self.D == 0:
            raise ConfigError("J", "J and D cannot both be zero")
        if not (math.isfinite(self.T) and self.T >= 0):
            raise ConfigError("T", "temperature must be finite and >= 0")
        g = self.grid
        if g.n1 < 2 or g.n2 < 2:
            raise ConfigError("grid", "each axis needs at least 2 points")
        if not all(math.isfinite(v) for v in (g.h1_min, g.h1_max, g.h2_min, g.h2_max)):
            raise ConfigError("grid", "bounds must be finite")
        if not self.quantities:
            raise ConfigError("quantities", "at least one quantity is required")
        for q in self.quantities:
            if q not in QUANTITIES:
                raise ConfigError("quantities", f"unknown quantity {q!r}")
            if q in _TWO_QUBIT_ONLY and self.two_s != 1:
                raise ConfigError("quantities", f"{q} is only defined for s = 1/2")
        if self.workers < 1:
            raise ConfigError("workers", "must be >= 1")
        if self.format not in FORMATS:
            raise ConfigError("format", f"must be one of {', '.join(FORMATS)}")

    def params(self) -> SpinPairParams:
        return SpinPairParams(self.two_s, self.J, self.Jz, D=self.D).reduced()

    def echo(self) -> dict:
        """Resolved physics configuration; execution settings are left out."""
        out = asdict(self)
        for key in ("workers", "output"):
            out.pop(key)
        out["quantities"] = list(self.quantities)
        return out


@dataclass
class PhaseGrid:
    h1: np.ndarray
    h2: np.ndarray
    values: dict
    metadata: dict = field(default_factory=dict)


def node_values(p: SpinPairParams, T: float, quantities) -> list[float]:
    """All requested observables at one field point, computed from scratch."""
    H = build_hamiltonian(p)
    out = {}
    if _THERMAL.intersection(quantities):
        rho = thermal_state(H, T)
        if "negativity" in quantities:
            out["negativity"] = negativity(rho, p.two_s)
        if {"concurrence", "eof"}.intersection(quantities):
            c = concurrence_wootters(rho)
            out["concurrence"] = c
            out["eof"] = eof_from_concurrence(c)
        if "coherence" in quantities:
            out["coherence"] = rel_entropy_coherence(rho)
    if "gs_magnetization" in quantities:
        out["gs_magnetization"] = float(ground_magnetization(H, DEFAULT_TOL_DEG)[0])
    if {"gs_energy", "gap"}.intersection(quantities):
        ev = H.eigenvalues()
        out["gs_energy"] = float(ev[0])
        out["gap"] = float(ev[1] - ev[0])
    return [out[q] for q in quantities]


def _rows(args):
    base, T, quantities, h1_values, h2_axis = args
    return [[node_values(base.with_fields(a, b), T, quantities) for b in h2_axis]
            for a in h1_values]


def resolve_workers(requested: int) -> int:
    env = os.environ.get("SPINPAIR_WORKERS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError("SPINPAIR_WORKERS", f"not an integer: {env!r}") from None
        if n < 1:
            raise ConfigError("SPINPAIR_WORKERS", "must be >= 1")
        return n
    return requested


def run_sweep(cfg: SweepConfig) -> PhaseGrid:
    """Evaluate the requested quantities on the (h1, h2) grid.

    Rows (fixed h1) are split into contiguous chunks, one per worker; every
    node is computed independently so the result does not depend on the
    number of workers.
    """
    cfg.validate()
    start = time.perf_counter()
    h1, h2 = cfg.grid.axes()
    base = cfg.params()
    quantities = tuple(cfg.quantities)
    workers = min(resolve_workers(cfg.workers), h1.size)
    chunks = [c for c in np.array_split(h1, workers) if c.size]
    jobs = [(base, cfg.T, quantities, c, h2) for c in chunks]
    if workers == 1:
        parts = [_rows(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_rows, jobs))
    cube = np.array([row for part in parts for row in part], dtype=float)
    values = {q: np.ascontiguousarray(cube[:, :, k]) for k, q in enumerate(quantities)}
    for q, v in values.items():
        if not np.all(np.isfinite(v)):
            raise FloatingPointError(f"non-finite values in {q}")
    grid = PhaseGrid(h1, h2, values, {
        "config": cfg.echo(),
        "engine": f"spinpair {__version__}",
        "wall_time_s": time.perf_counter() - start,
    })
    if cfg.output:
        emit(grid, cfg.output, cfg.format)
    return grid


# --------------------------------------------------------------------- scans

@dataclass
class ScanTable:
    columns: list
    rows: np.ndarray
    metadata: dict = field(default_factory=dict)


def run_scan(kind: str, p: SpinPairParams, start: float, stop: float, n: int,
             T: float = 0.0) -> ScanTable:
    """Observables along a temperature or field-difference line.

    ``kind="temperature"`` keeps the fields of ``p`` and varies T.
    ``kind="field-difference"`` keeps T and the average field of ``p`` and
    varies dh = h1 - h2.
    """
    if kind not in ("temperature", "field-difference"):
        raise ConfigError("kind", f"unknown scan {kind!r}")
    if n < 1:
        raise ConfigError("range", "needs at least one point")
    values = np.array([start]) if start == stop else np.linspace(start, stop, n)
    if kind == "temperature" and np.any(values < 0):
        raise ConfigError("range", "temperatures must be >= 0")
    if kind == "field-difference" and T < 0:
        raise ConfigError("T", "temperature must be >= 0")
    p = p.reduced()
    half_spin = p.two_s == 1
    cols = (["concurrence", "eof"] if half_spin else ["negativity"]) + ["coherence"]
    quantities = ("concurrence", "eof", "coherence") if half_spin else ("negativity", "coherence")
    avg = 0.5 * (p.h1 + p.h2)
    rows = []
    for x in values:
        if kind == "temperature":
            rows.append([x, *node_values(p, float(x), quantities)])
        else:
            q = p.with_fields(avg + x / 2, avg - x / 2)
            rows.append([x, *node_values(q, T, quantities)])
    var = "T" if kind == "temperature" else "dh"
    meta = {"kind": kind, "params": asdict(p), "engine": f"spinpair {__version__}"}
    if kind == "field-difference":
        meta["T"] = T
    return ScanTable([var, *cols], np.array(rows, dtype=float), meta)


# --------------------------------------------------------------------- files

def _atomic_write(path: Path, data: bytes) -> None:
    path = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _comment_block(meta: dict) -> str:
    return "".join(f"# {k}={json.dumps(v, sort_keys=True)}\n"
                   for k, v in sorted(meta.items()) if k != "wall_time_s")


def grid_csv(grid: PhaseGrid) -> str:
    names = list(grid.values)
    lines = [_comment_block(grid.metadata), ",".join(["h1", "h2", *names]) + "\n"]
    for i, a in enumerate(grid.h1):
        for j, b in enumerate(grid.h2):
            cells = [_fmt(a), _fmt(b)] + [_fmt(grid.values[q][i, j]) for q in names]
            lines.append(",".join(cells) + "\n")
    return "".join(lines)


def table_csv(table: ScanTable) -> str:
    lines = [_comment_block(table.metadata), ",".join(table.columns) + "\n"]
    lines += [",".join(_fmt(x) for x in row) + "\n" for row in table.rows]
    return "".join(lines)


def grid_json(grid: PhaseGrid) -> str:
    meta = {k: v for k, v in grid.metadata.items() if k != "wall_time_s"}
    doc = {
        "config": meta.get("config", {}),
        "engine": meta.get("engine"),
        "axes": {"h1": grid.h1.tolist(), "h2": grid.h2.tolist()},
        "values": {q: v.tolist() for q, v in grid.values.items()},
    }
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def to_pgm(values: np.ndarray, comment: str = "") -> tuple[bytes, float, float]:
    """8-bit binary PGM: columns follow h1, rows follow h2 from high to low.

    Values are min-max normalised; a constant map is all zeros.
    """
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi > lo:
        scaled = np.rint(255.0 * (values - lo) / (hi - lo))
    else:
        scaled = np.zeros_like(values)
    img = scaled.astype(np.uint8).T[::-1]
    header = "P5\n"
    if comment:
        header += f"# {comment}\n"
    header += f"{img.shape[1]} {img.shape[0]}\n255\n"
    return header.encode("ascii") + img.tobytes(), lo, hi


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    tokens, pos = [], 0
    while len(tokens) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        end = pos
        while not data[end:end + 1].isspace():
            end += 1
        tokens.append(data[pos:end].decode("ascii"))
        pos = end
    w, h = int(tokens[1]), int(tokens[2])
    return np.frombuffer(data[pos + 1:pos + 1 + w * h], dtype=np.uint8).reshape(h, w)


def emit(grid: PhaseGrid, output, fmt: str = "csv") -> list[Path]:
    """Write ``grid`` and return the paths produced.

    csv: one file, header ``h1,h2,<quantities>``, 17 significant digits,
    h1 outer loop, preceded by ``#`` lines echoing the configuration.
    json: one document with config, axes and values.
    pgm: ``<stem>_<quantity>.pgm`` per quantity plus ``<stem>_pgm.txt``
    holding the normalisation bounds.
    """
    if fmt not in FORMATS:
        raise ConfigError("format", f"must be one of {', '.join(FORMATS)}")
    output = Path(output)
    if fmt == "csv":
        _atomic_write(output, grid_csv(grid).encode())
        return [output]
    if fmt == "json":
        _atomic_write(output, grid_json(grid).encode())
        return [output]
    stem = output.with_suffix("") if output.suffix == ".pgm" else output
    config = json.dumps(grid.metadata.get("config", {}), sort_keys=True)
    written, lines = [], [f"# {config}\n", "quantity,file,min,max,rule\n"]
    for q, v in grid.values.items():
        path = stem.parent / f"{stem.name}_{q}.pgm"
        data, lo, hi = to_pgm(v, config)
        _atomic_write(path, data)
        rule = "linear" if hi > lo else "constant->0"
        lines.append(f"{q},{path.name},{_fmt(lo)},{_fmt(hi)},{rule}\n")
        written.append(path)
    side = stem.parent / f"{stem.name}_pgm.txt"
    _atomic_write(side, "".join(lines).encode())
    return written + [side]


def emit_table(table: ScanTable, output) -> Path:
    output = Path(output)
    _atomic_write(output, table_csv(table).encode())
    return output


def read_csv(path) -> tuple[list, np.ndarray]:
    """Column names and values of a file written by :func:`emit` or :func:`emit_table`."""
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    names = lines[0].strip().split(",")
    rows = [[float(x) for x in ln.strip().split(",")] for ln in lines[1:] if ln.strip()]
    return names, np.array(rows, dtype=float).reshape(-1, len(names))
