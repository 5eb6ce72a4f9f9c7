"""Command-line entry point.

Exit status: 0 all checks pass, 1 a check failed, 2 usage or configuration
error, 3 the solver did not converge.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import io, verification
from .errors import Diverged, InvalidArgument, SolverDomainError
from .grid import GridFunction
from .solver import GraphSurface, SolveResult, picard_solve

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_DIVERGED = 0, 1, 2, 3

SIGN_NOTE = (
    "H-sign-convention: trace(+) vs Corollary(-); H is reported as the trace of A "
    "against nu, i.e. +delta e^{-delta theta} tanh(s) sech^2(s)"
)
BLOWUP_PRODUCTS = (0.01, 0.02, 0.05, 0.1, 0.2, 0.5)
HELICOID_DELTAS = (0.04, 0.02, 0.01)
PROBE_DELTAS = (0.01, 0.05, 0.1)
SURFACE_TOL = 1e-6

log = logging.getLogger("spiral_minimal")

# flag name -> (RunConfig key, type)
FLAGS = {
    "--delta": ("delta", float),
    "--epsilon": ("epsilon", float),
    "--zeta": ("zeta", float),
    "--grid-n": ("grid_n", int),
    "--alpha": ("alpha", float),
    "--tol": ("tol", float),
    "--tol-step": ("tol_step", float),
    "--max-iters": ("max_iters", int),
    "--theta-min": ("theta_min", float),
    "--theta-max": ("theta_max", float),
    "--mesh-n-s": ("mesh_n_s", int),
    "--mesh-n-theta": ("mesh_n_theta", int),
    "--output": ("output", str),
    "--format": ("format", str),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="flat JSON config file; flags override it")
    for flag, (key, kind) in FLAGS.items():
        common.add_argument(flag, dest=key, type=kind, default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="spiral-minimal", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("geometry-check", parents=[common], help="closed-form geometry against oracles")
    sub.add_parser("solve", parents=[common], help="solve Q(u) = 0, write profile CSV and report")
    v = sub.add_parser("verify", parents=[common], help="blow-up law, helicoid limit, embeddedness, constants")
    v.add_argument("--u-file", help="profile CSV from `solve` (otherwise solves first)")
    m = sub.add_parser("export-mesh", parents=[common], help="OBJ mesh of the graph over G")
    src = m.add_mutually_exclusive_group(required=True)
    src.add_argument("--u-file", help="profile CSV from `solve`")
    src.add_argument("--raw", action="store_true", help="mesh G itself (u = 0)")
    r = sub.add_parser("report", help="print the pass/fail lines of a JSON report")
    r.add_argument("path")
    return p


def _require_format(cfg: io.RunConfig, command: str, allowed) -> None:
    if cfg.format not in allowed:
        raise InvalidArgument(f"{command} writes {' or '.join(allowed)}, not {cfg.format}", key="format")


def _emit(report: io.Report, cfg: io.RunConfig) -> int:
    for line in report.summary_lines():
        print(line)
    if cfg.output:
        Path(cfg.output).write_text(report.to_json())
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_geometry_check(cfg: io.RunConfig) -> io.Report:
    rep = io.Report("geometry-check", cfg.as_dict())
    rep.checks += verification.geometry_checks(deltas=(cfg.delta,))
    rep.checks += verification.functional_checks()
    rep.notes.append(SIGN_NOTE)
    return rep


def solve_checks(result: SolveResult, cfg: io.RunConfig):
    c = verification._check
    sc = result.config
    u, delta = result.u, sc.delta
    checks = [
        c("converged", 0.0 if result.converged else 1.0, 0.0, note=result.diagnostics["stop_reason"]),
        c("sup|Q(u)| interior", result.residual, sc.tol_residual),
        c("||u||_X2 / (zeta delta)", result.norm_X2 / sc.ball_radius, 1.0, verification.PAPER),
        c("max |u| / (zeta delta max(s^2, h^2))", result.pointwise_margin, 1.0, verification.PAPER),
        c("|u'(0)|", abs(result.diagnostics["slope_at_origin"]), 1e-8),
    ]
    try:
        res = verification.surface_residual(u, delta)
    except (InvalidArgument, SolverDomainError, ValueError) as exc:
        res, note = math.inf, str(exc)
    else:
        note = ""
    checks.append(c("finite-difference H of reconstructed graph", res, SURFACE_TOL, note=note))
    emb = verification.embeddedness_check(u, delta, (cfg.theta_min, max(cfg.theta_max, cfg.theta_min + 2 * math.pi)),
                                          epsilon=sc.epsilon)
    checks.append(c("sheet-gap margin", emb.margin, 1.0, verification.PAPER, upper=False))
    checks.append(c("sup|u| / (epsilon delta^(1/2) / 4)", emb.sup_u / emb.envelope, 1.0, verification.PAPER))
    return checks


def _solve_sections(result: SolveResult) -> dict:
    d = result.diagnostics
    return {
        "iterations": result.iterations,
        "stop_reason": d["stop_reason"],
        "residual_history": result.residual_history,
        "damping": d["damping"],
        "norm_X2": result.norm_X2,
        "ball_radius": result.config.ball_radius,
        "pointwise_margin": result.pointwise_margin,
        "u_at_origin": d["u_at_origin"],
        "slope_at_origin": d["slope_at_origin"],
        "sup_u": d["sup_u"],
        "boundary_residual": d["boundary_residual"],
        "half_width": result.config.half_width,
        "h": result.config.h,
    }


def cmd_solve(cfg: io.RunConfig):
    """Returns (report, result); ``result`` is None if the iteration diverged."""
    sc = cfg.solver_config()
    rep = io.Report("solve", cfg.as_dict())
    try:
        result = picard_solve(sc, strict=True)
    except (Diverged, SolverDomainError) as exc:
        history = getattr(exc, "residual_history", [])
        rep.sections["residual_history"] = np.asarray(history, dtype=float)
        rep.sections["error"] = str(exc)
        rep.checks.append(verification._check("converged", 1.0, 0.0, note=str(exc)))
        return rep, None
    rep.checks += solve_checks(result, cfg)
    rep.sections.update(_solve_sections(result))
    return rep, result


def _report_path(cfg: io.RunConfig) -> Path | None:
    if not cfg.output:
        return None
    p = Path(cfg.output)
    return p if cfg.format == "json-report" else p.with_suffix(".json")


def run_solve(cfg: io.RunConfig) -> int:
    _require_format(cfg, "solve", ("csv", "json-report"))
    rep, result = cmd_solve(cfg)
    for line in rep.summary_lines():
        print(line)
    path = _report_path(cfg)
    if path is not None:
        path.write_text(rep.to_json())
        if cfg.format == "csv" and result is not None:
            io.write_profile_csv(cfg.output, result.u, cfg.delta)
    if result is None:
        return EXIT_DIVERGED
    return EXIT_OK if rep.passed else EXIT_CHECK


def _load_profile(path, cfg: io.RunConfig) -> GridFunction:
    u = io.read_profile_csv(path)
    expect = cfg.solver_config().half_width
    if not math.isclose(u.half_width, expect, rel_tol=1e-9):
        raise InvalidArgument(f"{path}: half width {u.half_width:.6g} does not match config ({expect:.6g})", key="u_file")
    return u


def cmd_verify(cfg: io.RunConfig, u: GridFunction | None = None) -> io.Report:
    if cfg.theta_max - cfg.theta_min < 2 * math.pi - 1e-12:
        raise InvalidArgument("theta_max - theta_min must be at least 2 pi", key="theta_max")
    rep = io.Report("verify", cfg.as_dict())
    c = verification._check
    if u is None:
        rep_solve, result = cmd_solve(cfg)
        rep.checks += rep_solve.checks
        if result is None:
            rep.sections["solve"] = rep_solve.sections
            return rep
        u = result.u
    delta = cfg.delta
    scaling = verification.scaling_report(delta, [p / delta for p in BLOWUP_PRODUCTS])
    rep.sections["blowup"] = {
        "delta_h0": list(BLOWUP_PRODUCTS),
        "h0": scaling.h0_list,
        "sup_A2": scaling.sup_A2,
        "ratios": scaling.ratios,
    }
    rep.checks.append(c("max |sup|A|^2 delta^2 h0^2 - 2|", np.max(np.abs(scaling.ratios - 2.0)), 1e-3))
    rep.checks.append(c("grid vs analytic sup|A|^2 (relative)",
                        np.max(np.abs(scaling.sup_A2 / scaling.sup_analytic - 1.0)), 1e-6))
    table = verification.helicoid_limit(HELICOID_DELTAS)
    orders = verification.observed_orders(table)
    rep.sections["helicoid"] = {"delta": [d for d, _ in table], "max_error": [e for _, e in table], "orders": orders}
    rep.checks.append(c("helicoid order - 1", max(abs(o - 1.0) for o in orders), 0.1, verification.PAPER))
    emb = verification.embeddedness_check(u, delta, (cfg.theta_min, cfg.theta_max), epsilon=cfg.epsilon)
    rep.sections["embeddedness"] = {
        "max_displacement": emb.max_displacement,
        "min_sheet_gap": emb.min_sheet_gap,
        "margin": emb.margin,
        "sup_u": emb.sup_u,
        "envelope": emb.envelope,
    }
    rep.checks.append(c("embeddedness margin", emb.margin, 1.0, verification.PAPER, upper=False))
    probe = verification.constants_probe(PROBE_DELTAS, epsilon=cfg.epsilon, zeta=cfg.zeta, alpha=cfg.alpha)
    rep.sections["constants"] = {str(k): v for k, v in probe.items()}
    for key in ("C1", "C2", "C3"):
        rep.checks.append(c(f"{key} variation across delta", verification.stability(probe, key), 2.0))
    lo, hi = probe[min(probe)]["C1"], probe[max(probe)]["C1"]
    rep.checks.append(c("C1 at smallest delta / C1 at largest delta", lo / hi, 1.0,
                        note="ratio must not grow as delta decreases"))
    rep.checks.append(c("max observed contraction of Psi", max(r["contraction"] for r in probe.values()), 1.0))
    return rep


def cmd_export_mesh(cfg: io.RunConfig, u: GridFunction):
    surface = GraphSurface(u, cfg.delta)
    s = np.linspace(-u.half_width, u.half_width, cfg.mesh_n_s)
    theta = np.linspace(cfg.theta_min, cfg.theta_max, cfg.mesh_n_theta)
    return io.grid_mesh(surface, s, theta)


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING)
    try:
        if args.command == "report":
            return run_report(args.path)
        overrides = {key: getattr(args, key) for key, _ in FLAGS.values()}
        cfg = io.load_config(args.config, overrides)
        if args.command == "geometry-check":
            _require_format(cfg, "geometry-check", ("json-report",))
            return _emit(cmd_geometry_check(cfg), cfg)
        if args.command == "solve":
            return run_solve(cfg)
        if args.command == "verify":
            _require_format(cfg, "verify", ("json-report",))
            u = _load_profile(args.u_file, cfg) if args.u_file else None
            return _emit(cmd_verify(cfg, u), cfg)
        if args.command == "export-mesh":
            _require_format(cfg, "export-mesh", ("obj",))
            if not cfg.output:
                raise InvalidArgument("export-mesh needs --output", key="output")
            if args.raw:
                u = GridFunction.zeros(cfg.solver_config().half_width, cfg.grid_n)
            else:
                u = _load_profile(args.u_file, cfg)
            verts, faces = cmd_export_mesh(cfg, u)
            io.write_obj(cfg.output, verts, faces)
            print(f"wrote {len(verts)} vertices, {len(faces)} faces to {cfg.output}")
            return EXIT_OK
    except InvalidArgument as exc:
        key = f" [{exc.key}]" if exc.key else ""
        print(f"config error{key}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_CONFIG


def run_report(path) -> int:
    try:
        data = io.loads_report(Path(path).read_text())
    except (OSError, ValueError) as exc:
        print(f"config error: cannot read report {path}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for ch in data.get("checks", []):
        tag = "PASS" if ch["passed"] else "FAIL"
        print(f"{tag}  {ch['name']}: {ch['value']} (tol {ch['tolerance']}, {ch['provenance']})")
    for note in data.get("notes", []):
        print(f"NOTE  {note}")
    return EXIT_OK if data.get("passed", False) else EXIT_CHECK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
