"""Mean curvature as a function on jet space.

``mean_curvature_of_jet`` is homogeneous of degree -1 and invariant under
rotations.  The unit normal is the normalized cross product
``grad_s x grad_t`` (right-handed), so on jets of the spiral immersion it
returns ``-GeometryRecord.H``; see :mod:`spiral_minimal.geometry`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateImmersion, InvalidArgument, PreconditionViolation
from .geometry import Jet

# det(g) must exceed this multiple of |grad|^4
DEGENERACY_TOL = 1e-24
DEFECT_LIMIT = 0.25
FIRST_STEP = 1e-5
SECOND_STEP = 1e-3


def _dot(a, b):
    return (a * b).sum(-1)


def metric(jet: Jet):
    a, b = jet.grad_s, jet.grad_t
    g_ss, g_tt, g_st = _dot(a, a), _dot(b, b), _dot(a, b)
    return g_ss, g_tt, g_st, g_ss * g_tt - g_st**2


def mean_curvature_of_jet(jet: Jet) -> np.ndarray:
    """Trace of the second fundamental form, ``g^{ij} (hess_ij . n)``.

    Raises
    ------
    DegenerateImmersion
        If ``det(grad^T grad) <= 1e-24 |grad|^4`` at any batch entry.
    """
    g_ss, g_tt, g_st, det = metric(jet)
    scale = (g_ss + g_tt) ** 2
    bad = ~(det > DEGENERACY_TOL * scale)
    if np.any(bad):
        idx = np.argwhere(np.atleast_1d(bad))[0].tolist()
        raise DegenerateImmersion(f"degenerate jet (det g <= tol) at index {idx}")
    n = np.cross(jet.grad_s, jet.grad_t) / np.sqrt(det)[..., None]
    A_ss = _dot(jet.hess_ss, n)
    A_tt = _dot(jet.hess_tt, n)
    A_st = _dot(jet.hess_st, n)
    return (g_tt * A_ss - 2.0 * g_st * A_st + g_ss * A_tt) / det


def scale_jet(c, jet: Jet) -> Jet:
    c = float(c)
    if c == 0.0 or not np.isfinite(c):
        raise InvalidArgument("scale factor must be finite and nonzero")
    return jet * c


def rotate_jet(R, jet: Jet, tol: float = 1e-12) -> Jet:
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3):
        raise InvalidArgument("rotation must be 3x3")
    if np.abs(R.T @ R - np.eye(3)).max() > tol or abs(np.linalg.det(R) - 1.0) > tol:
        raise InvalidArgument("matrix is not a rotation (orthogonal with det +1)")
    return jet.transform(R)


@dataclass(frozen=True)
class ConformalDefect:
    dot: np.ndarray
    ratio_minus_one: np.ndarray

    @property
    def magnitude(self) -> np.ndarray:
        return np.hypot(self.dot, self.ratio_minus_one)


def conformal_defect(jet: Jet) -> ConformalDefect:
    """Deviation of ``(grad_s, grad_t)`` from an orthogonal, equal-length pair."""
    ns = np.sqrt(_dot(jet.grad_s, jet.grad_s))
    nt = np.sqrt(_dot(jet.grad_t, jet.grad_t))
    if np.any(ns == 0.0) or np.any(nt == 0.0):
        raise DegenerateImmersion("a gradient column vanishes")
    return ConformalDefect(
        dot=_dot(jet.grad_s, jet.grad_t) / (ns * nt),
        ratio_minus_one=ns / nt - 1.0,
    )


def dH(jet: Jet, direction: Jet, order: int = 1) -> np.ndarray:
    """Directional derivative of ``mean_curvature_of_jet`` along ``direction``.

    Central differences with a step proportional to ``|grad|`` (the functional is
    homogeneous, so an absolute step would be ill-conditioned), improved by one
    level of Richardson extrapolation.

    Parameters
    ----------
    jet, direction : Jet
        Base point and tangent direction in jet space (same batch shape).
    order : {1, 2}
        First or second directional derivative.
    """
    if order not in (1, 2):
        raise InvalidArgument("order must be 1 or 2")
    if np.any(conformal_defect(jet).magnitude >= DEFECT_LIMIT):
        raise PreconditionViolation("conformal defect |a| must be below 1/4")
    dnorm = direction.norm()
    if np.any(dnorm == 0.0):
        return np.zeros(np.shape(dnorm))
    rel = FIRST_STEP if order == 1 else SECOND_STEP
    h = rel * jet.grad_norm() / dnorm

    def H_at(t):
        return mean_curvature_of_jet(jet + direction * t)

    def diff(step):
        if order == 1:
            return (H_at(step) - H_at(-step)) / (2.0 * step)
        return (H_at(step) - 2.0 * H_at(0.0 * step) + H_at(-step)) / step**2

    return (4.0 * diff(h / 2.0) - diff(h)) / 3.0
