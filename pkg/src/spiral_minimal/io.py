"""Run configuration, deterministic reports, and CSV/OBJ export."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .errors import InvalidArgument
from .grid import GridFunction
from .operators import q_operator
from .solver import SolverConfig

FORMATS = ("obj", "csv", "json-report")
CSV_COLUMNS = ("s", "u", "du", "ddu", "Q")


def fmt(x) -> str:
    """17 significant digits, enough to round-trip any float64."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class RunConfig:
    """Solver parameters plus the mesh window and output settings.

    Field names double as JSON keys; the command-line flags are the same names
    with dashes (``grid_n`` -> ``--grid-n``).
    """

    delta: float = 0.05
    epsilon: float = 0.5
    zeta: float = 10.0
    grid_n: int = 2001
    alpha: float = 0.5
    tol: float = 1e-10
    tol_step: float = 1e-12
    max_iters: int = 50
    theta_min: float = 0.0
    theta_max: float = 4 * math.pi
    mesh_n_s: int = 50
    mesh_n_theta: int = 200
    output: str = ""
    format: str = "json-report"

    def __post_init__(self):
        if self.format not in FORMATS:
            raise InvalidArgument(f"format must be one of {FORMATS}, got {self.format!r}", key="format")
        for name in ("mesh_n_s", "mesh_n_theta"):
            if getattr(self, name) < 2:
                raise InvalidArgument(f"{name} must be >= 2", key=name)
        for name in ("theta_min", "theta_max"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidArgument(f"{name} must be finite", key=name)
        if not self.theta_max > self.theta_min:
            raise InvalidArgument("theta_max must exceed theta_min", key="theta_max")
        try:
            self.solver_config()
        except InvalidArgument as exc:
            key = {"n": "grid_n", "tol_residual": "tol"}.get(exc.key, exc.key)
            raise InvalidArgument(str(exc).replace(f"{exc.key} ", f"{key} ", 1), key=key) from None

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            delta=self.delta,
            epsilon=self.epsilon,
            zeta=self.zeta,
            n=self.grid_n,
            alpha=self.alpha,
            tol_residual=self.tol,
            tol_step=self.tol_step,
            max_iters=self.max_iters,
        )

    def as_dict(self) -> dict:
        return asdict(self)


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key, value):
    kind = _TYPES[key]
    if kind == "str":
        if not isinstance(value, str):
            raise InvalidArgument(f"{key} must be a string", key=key)
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidArgument(f"{key} must be a number, got {value!r}", key=key)
    if kind == "int":
        if float(value) != int(value):
            raise InvalidArgument(f"{key} must be an integer, got {value!r}", key=key)
        return int(value)
    return float(value)


def load_config(path=None, overrides=None) -> RunConfig:
    """Read a flat JSON object (optional) and apply ``overrides`` on top.

    An empty file means all defaults.  Unknown keys, wrong types and
    out-of-range values raise :class:`InvalidArgument` with ``key`` set.
    """
    values = {}
    if path is not None:
        text = Path(path).read_text()
        if text.strip():
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise InvalidArgument(f"malformed config {path}: {exc}") from None
            if not isinstance(data, dict):
                raise InvalidArgument("config must be a JSON object")
            values.update(data)
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    unknown = sorted(set(values) - set(_TYPES))
    if unknown:
        raise InvalidArgument(f"unknown config key {unknown[0]!r}", key=unknown[0])
    return RunConfig(**{k: _coerce(k, v) for k, v in values.items()})


# -- reports --------------------------------------------------------------------------


@dataclass
class Report:
    """Named checks plus free-form sections, serialized in insertion order."""

    command: str
    config: dict
    checks: list = field(default_factory=list)
    sections: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_obj(self) -> dict:
        return {
            "command": self.command,
            "passed": self.passed,
            "config": self.config,
            "checks": [
                {
                    "name": c.name,
                    "value": c.value,
                    "tolerance": c.tolerance,
                    "passed": c.passed,
                    "provenance": c.provenance,
                    "note": c.note,
                }
                for c in self.checks
            ],
            "sections": self.sections,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return dumps(self.to_obj())

    def summary_lines(self):
        for c in self.checks:
            yield f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {fmt(c.value)} (tol {fmt(c.tolerance)}, {c.provenance})"
        for note in self.notes:
            yield f"NOTE  {note}"


def _encode(x):
    if isinstance(x, dict):
        return {str(k): _encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_encode(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_encode(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        # JSON has no literal for these
        return x if math.isfinite(x) else fmt(x)
    return x


def dumps(obj) -> str:
    """Deterministic JSON text: insertion key order, round-trip float repr, non-finite floats as strings."""
    return json.dumps(_encode(obj), indent=2, ensure_ascii=True, allow_nan=False) + "\n"


def loads_report(text: str) -> dict:
    return json.loads(text)


# -- CSV ------------------------------------------------------------------------------


def profile_rows(u: GridFunction, delta):
    q = q_operator(u, delta)
    return np.column_stack([u.s, u.values, u.d1(), u.d2(), q.values])


def write_profile_csv(path, u: GridFunction, delta) -> None:
    rows = profile_rows(u, delta)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in rows:
            w.writerow([fmt(x) for x in row])


def read_profile_csv(path) -> GridFunction:
    """Rebuild the grid function from the ``s`` and ``u`` columns of a profile CSV."""
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"s", "u"} <= set(reader.fieldnames):
                raise InvalidArgument(f"{path}: expected columns s,u")
            data = np.array([[float(r["s"]), float(r["u"])] for r in reader])
    except FileNotFoundError:
        raise InvalidArgument(f"profile file not found: {path}", key="u_file") from None
    if data.ndim != 2 or data.shape[0] < 5:
        raise InvalidArgument(f"{path}: too few rows")
    s, u = data[:, 0], data[:, 1]
    half = float(s[-1])
    if not np.allclose(s, np.linspace(-half, half, s.size), rtol=0, atol=1e-12 * max(half, 1.0)):
        raise InvalidArgument(f"{path}: s column is not a symmetric uniform grid")
    return GridFunction(half, u)


# -- OBJ ------------------------------------------------------------------------------


def grid_mesh(surface, s, theta):
    """Vertices ``surface(s_i, theta_j)`` (row-major in s) and 1-based triangle indices.

    Each quad gives triangles (p00, p01, p10) and (p11, p10, p01); with the
    ordering used here their normals point along ``nu``.
    """
    s = np.asarray(s, dtype=float)
    theta = np.asarray(theta, dtype=float)
    ss, tt = np.meshgrid(s, theta, indexing="ij")
    verts = np.asarray(surface(ss, tt)).reshape(-1, 3)
    ns, nt = s.size, theta.size
    idx = np.arange(ns * nt).reshape(ns, nt) + 1
    p00, p01 = idx[:-1, :-1], idx[:-1, 1:]
    p10, p11 = idx[1:, :-1], idx[1:, 1:]
    lower = np.stack([p00, p01, p10], -1).reshape(-1, 3)
    upper = np.stack([p11, p10, p01], -1).reshape(-1, 3)
    faces = np.stack([lower, upper], 1).reshape(-1, 3)
    return verts, faces


def write_obj(path, verts, faces) -> None:
    with open(path, "w") as fh:
        for x, y, z in verts:
            fh.write(f"v {fmt(x)} {fmt(y)} {fmt(z)}\n")
        for i, j, k in faces:
            fh.write(f"f {i} {j} {k}\n")


def read_obj(path):
    verts, faces = [], []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(x) for x in parts[1:4]])
    return np.array(verts), np.array(faces, dtype=int)
