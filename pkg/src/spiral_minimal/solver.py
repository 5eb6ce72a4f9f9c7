"""Fixed-point solve of Q_delta(u) = 0 and evaluation of the resulting minimal graph."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import Diverged, InvalidArgument, OutOfDomain, SolverDomainError
from .geometry import DELTA_MAX, immersion_point, normal_jet
from .grid import GridFunction, weighted_norm
from .operators import l0_inverse, q_operator

log = logging.getLogger(__name__)

MAX_HALVINGS = 8


@dataclass(frozen=True)
class SolverConfig:
    delta: float = 0.05
    epsilon: float = 0.5
    zeta: float = 10.0
    n: int = 2001
    alpha: float = 0.5
    tol_residual: float = 1e-10
    tol_step: float = 1e-12
    max_iters: int = 50

    def __post_init__(self):
        checks = [
            ("delta", 0.0 < self.delta <= DELTA_MAX, f"in (0, {DELTA_MAX}]"),
            ("epsilon", 0.0 < self.epsilon <= 1.0, "in (0, 1]"),
            ("zeta", self.zeta > 1.0, "> 1"),
            ("n", int(self.n) == self.n and self.n >= 5 and self.n % 2 == 1, "an odd integer >= 5"),
            ("alpha", 0.0 < self.alpha < 1.0, "in (0, 1)"),
            ("tol_residual", self.tol_residual > 0.0, "> 0"),
            ("tol_step", self.tol_step > 0.0, "> 0"),
            ("max_iters", int(self.max_iters) == self.max_iters and self.max_iters >= 1, "an integer >= 1"),
        ]
        for name, ok, what in checks:
            value = getattr(self, name)
            if not (np.isfinite(value) and ok):
                raise InvalidArgument(f"{name} must be {what}, got {value!r}", key=name)
        if self.h > 0.01:
            raise InvalidArgument(f"n too small: grid step {self.h:.4g} exceeds 0.01", key="n")

    @property
    def half_width(self) -> float:
        return self.epsilon * self.delta ** -0.25

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / (self.n - 1)

    @property
    def ball_radius(self) -> float:
        return self.zeta * self.delta


@dataclass
class SolveResult:
    converged: bool
    u: GridFunction
    residual_history: np.ndarray
    norm_X2: float
    pointwise_margin: float
    iterations: int
    config: SolverConfig
    diagnostics: dict = field(default_factory=dict)

    @property
    def residual(self) -> float:
        return float(self.residual_history[-1])

    @property
    def in_ball(self) -> bool:
        return self.norm_X2 <= self.config.ball_radius

    @property
    def pointwise_ok(self) -> bool:
        return self.pointwise_margin <= 1.0


def interior_residual(q: GridFunction) -> float:
    return q.sup(interior=True)


def _extrapolate_ends(values):
    r = values.copy()
    r[0] = 3.0 * r[1] - 3.0 * r[2] + r[3]
    r[-1] = 3.0 * r[-2] - 3.0 * r[-3] + r[-4]
    return r


def psi(u: GridFunction, delta, q: GridFunction | None = None) -> GridFunction:
    """``u - L0^{-1} Q(u)``.

    The two boundary residuals come from one-sided stencils and are not part of
    the discrete equation; they are replaced by cubic extrapolation of the
    interior before inversion.
    """
    if q is None:
        q = q_operator(u, delta)
    return u - l0_inverse(q.with_values(_extrapolate_ends(q.values)))


def pointwise_margin(u: GridFunction, zeta: float, delta: float) -> float:
    s2 = np.maximum(u.s**2, u.h**2)
    return float(np.max(np.abs(u.values) / (zeta * delta * s2)))


def picard_solve(config: SolverConfig, strict: bool = True) -> SolveResult:
    """Iterate ``u <- Psi(u)`` from ``u = 0`` until ``sup|Q(u)| <= tol_residual``.

    If a full step fails to reduce the residual, the step is halved (up to
    ``MAX_HALVINGS`` times) before being taken.

    Raises
    ------
    Diverged
        If ``strict`` and the tolerance is not met within ``max_iters``.
    SolverDomainError
        If Q cannot be evaluated even at u = 0.
    """
    delta = config.delta
    u = GridFunction.zeros(config.half_width, config.n)
    q = q_operator(u, delta)
    history = [interior_residual(q)]
    damping = []
    reason = "max_iters"
    iterations = 0
    while history[-1] > config.tol_residual:
        if iterations >= config.max_iters:
            break
        step = u - psi(u, delta, q)
        lam, best = 1.0, None
        for _ in range(MAX_HALVINGS + 1):
            trial = u - step * lam
            try:
                q_trial = q_operator(trial, delta)
            except SolverDomainError:
                lam *= 0.5
                continue
            res = interior_residual(q_trial)
            if best is None or res < best[0]:
                best = (res, lam, trial, q_trial)
            if res < history[-1]:
                break
            lam *= 0.5
        if best is None:
            raise Diverged("no admissible damped step", history)
        res, lam, trial, q_trial = best
        u, q = trial, q_trial
        iterations += 1
        history.append(res)
        damping.append(lam)
        log.debug("iter %d residual %.3e lambda %.3g", iterations, res, lam)
        if lam * step.sup() <= config.tol_step and res > config.tol_residual:
            reason = "stagnated"
            break
    converged = history[-1] <= config.tol_residual
    if converged:
        reason = "residual"
    history = np.asarray(history)
    if strict and not converged:
        raise Diverged(
            f"residual {history[-1]:.3e} > {config.tol_residual:.1e} after {iterations} iterations ({reason})",
            history,
        )
    return SolveResult(
        converged=converged,
        u=u,
        residual_history=history,
        norm_X2=weighted_norm(u, 2, config.alpha),
        pointwise_margin=pointwise_margin(u, config.zeta, delta),
        iterations=iterations,
        config=config,
        diagnostics={
            "stop_reason": reason,
            "damping": damping,
            "boundary_residual": q.sup(),
            "u_at_origin": float(u.values[u.center]),
            "slope_at_origin": u.slope_at_origin(),
            "sup_u": u.sup(),
        },
    )


class GraphSurface:
    """Parametrization ``(s, theta) -> G + e^{delta theta} u(s) nu`` of the normal graph.

    ``u`` is interpolated between grid nodes by a not-a-knot cubic spline.
    """

    def __init__(self, u: GridFunction, delta: float):
        self.u = u
        self.delta = float(delta)
        self._spline = CubicSpline(u.s, u.values)

    def profile(self, s, nu: int = 0):
        s = np.asarray(s, dtype=float)
        S = self.u.half_width
        if np.any(np.abs(s) > S * (1.0 + 1e-12)):
            raise OutOfDomain(f"s outside [-{S:.6g}, {S:.6g}]")
        return self._spline(s, nu)

    def __call__(self, s, theta):
        s, theta = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(theta, dtype=float))
        w = np.exp(self.delta * theta) * self.profile(s)
        nu, _ = normal_jet(s, theta)
        return immersion_point(s, theta, self.delta) + w[..., None] * nu


def graph_point(s, theta, delta, u: GridFunction):
    return GraphSurface(u, delta)(s, theta)


def displacement_bound(s, theta, delta, zeta):
    """``e^{delta theta} zeta delta s^2``, the pointwise envelope for ``|w|``."""
    return np.exp(delta * np.asarray(theta)) * zeta * delta * np.asarray(s) ** 2


__all__ = [
    "SolverConfig",
    "SolveResult",
    "picard_solve",
    "psi",
    "GraphSurface",
    "graph_point",
    "pointwise_margin",
    "interior_residual",
    "displacement_bound",
]
