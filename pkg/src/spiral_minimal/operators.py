"""The theta-free operator Q_delta and the linear operators around it.

Jets here are expressed in the pulled-back basis: a vector ``a e_r + b e_r' + c e_z``
is stored as ``(a, b, c)``.  That is what ``e^{-delta theta} R_theta^{-1}`` does to
jets of ``G`` and of the normal displacement ``e^{delta theta} u nu``, and it makes
everything independent of theta.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateImmersion, InvalidArgument, SolverDomainError
from .functional import DEFECT_LIMIT, conformal_defect, mean_curvature_of_jet
from .geometry import Jet, check_delta, frame, geometry_at, immersion_jet
from .grid import GridFunction

MODES = ("delta", "zero")


def rotation_R(theta) -> np.ndarray:
    """Matrix with columns ``e_r, e_r', e_z`` (sends e_x -> e_r, e_y -> e_r').

    Its determinant is -1: the frame is left-handed.
    """
    fr = frame(float(theta))
    return np.column_stack([fr.e_r, fr.e_r_prime, fr.e_z])


def _vec(x, y, z):
    x, y, z = np.broadcast_arrays(x, y, z)
    return np.stack([x, y, z], axis=-1).astype(float)


def base_jet(s, delta) -> Jet:
    """``e^{-delta theta} R_theta^{-1}`` applied to the jet of G (theta-free)."""
    delta = check_delta(delta)
    s = np.asarray(s, dtype=float)
    ch, sh = np.cosh(s), np.sinh(s)
    zero, one = np.zeros_like(s), np.ones_like(s)
    return Jet(
        grad_s=_vec(ch, zero, zero),
        grad_t=_vec(delta * sh, sh, one),
        hess_ss=_vec(sh, zero, zero),
        hess_tt=_vec((delta**2 - 1.0) * sh, 2.0 * delta * sh, delta * one),
        hess_st=_vec(delta * ch, ch, zero),
    )


def base_jet_via_frame(s, theta, delta) -> Jet:
    """Same as :func:`base_jet`, computed by pulling back the world-frame jet at theta."""
    _, jet = immersion_jet(s, theta, delta)
    R = rotation_R(theta)
    return jet.transform(R.T) * np.exp(-delta * theta)


def _normal_pullback(s):
    c = 1.0 / np.cosh(s)
    t = np.tanh(s)
    z = np.zeros_like(s)
    nu = _vec(z, -c, t)
    nu_s = _vec(z, c * t, c * c)
    nu_t = _vec(c, z, z)
    nu_ss = _vec(z, c * (c * c - t * t), -2.0 * c * c * t)
    nu_st = _vec(-c * t, z, z)
    nu_tt = _vec(z, c, z)
    return nu, nu_s, nu_t, nu_ss, nu_st, nu_tt


def displacement_jet(s, u0, u1, u2, delta, mode: str = "delta") -> Jet:
    """Pulled-back jet of the normal displacement ``e^{delta theta} u(s) nu``.

    ``u0, u1, u2`` are u, u', u'' at ``s``.  With ``mode="zero"`` the delta coming
    from the factor ``e^{delta theta}`` is set to zero; the frame dependence of
    ``nu`` is kept.
    """
    if mode not in MODES:
        raise InvalidArgument(f"mode must be one of {MODES}")
    d = check_delta(delta) if mode == "delta" else 0.0
    s = np.asarray(s, dtype=float)
    nu, nu_s, nu_t, nu_ss, nu_st, nu_tt = _normal_pullback(s)
    U0, U1, U2 = (np.asarray(x, dtype=float)[..., None] for x in (u0, u1, u2))
    return Jet(
        grad_s=U1 * nu + U0 * nu_s,
        grad_t=d * U0 * nu + U0 * nu_t,
        hess_ss=U2 * nu + 2.0 * U1 * nu_s + U0 * nu_ss,
        hess_tt=d * d * U0 * nu + 2.0 * d * U0 * nu_t + U0 * nu_tt,
        hess_st=d * U1 * nu + d * U0 * nu_s + U1 * nu_t + U0 * nu_st,
    )


def graph_jet(s, theta, delta, u0, u1, u2):
    """World-frame point and jet of ``G + e^{delta theta} u nu`` at ``(s, theta)``.

    Built from :func:`geometry_at` (product rule on the closed-form normal
    derivatives), independently of the pulled-back construction.
    """
    rec = geometry_at(s, theta, delta)
    theta = np.asarray(theta, dtype=float)
    w = np.exp(delta * theta) * np.asarray(u0, dtype=float)
    w_s = np.exp(delta * theta) * np.asarray(u1, dtype=float)
    w_ss = np.exp(delta * theta) * np.asarray(u2, dtype=float)
    w_t, w_tt, w_st = delta * w, delta**2 * w, delta * w_s
    nu = rec.normal
    nu_s, nu_t, nu_ss, nu_st, nu_tt = rec.normal_derivs
    W = lambda x: np.asarray(x)[..., None]  # noqa: E731
    disp = Jet(
        grad_s=W(w_s) * nu + W(w) * nu_s,
        grad_t=W(w_t) * nu + W(w) * nu_t,
        hess_ss=W(w_ss) * nu + 2.0 * W(w_s) * nu_s + W(w) * nu_ss,
        hess_tt=W(w_tt) * nu + 2.0 * W(w_t) * nu_t + W(w) * nu_tt,
        hess_st=W(w_st) * nu + W(w_s) * nu_t + W(w_t) * nu_s + W(w) * nu_st,
    )
    return rec.point + W(w) * nu, rec.jet + disp


def _combined_jet(u: GridFunction, delta, mode) -> Jet:
    s = u.s
    return base_jet(s, delta) + displacement_jet(s, u.values, u.d1(), u.d2(), delta, mode)


def q_operator(u: GridFunction, delta, mode: str = "delta") -> GridFunction:
    """Node-wise ``Q(u)(s) = cosh^2(s) H(base_jet + displacement_jet)``.

    Raises
    ------
    SolverDomainError
        At the first node whose jet is degenerate or has conformal defect >= 1/4.
    """
    jet = _combined_jet(u, delta, mode)
    s = u.s
    try:
        defect = conformal_defect(jet).magnitude
    except DegenerateImmersion as exc:
        raise SolverDomainError(str(exc)) from exc
    bad = np.flatnonzero(~(defect < DEFECT_LIMIT))
    if bad.size:
        i = int(bad[0])
        raise SolverDomainError(
            f"conformal defect {defect[i]:.3g} >= 1/4 at node {i} (s={s[i]:.6g})", node=i, s=s[i]
        )
    try:
        H = mean_curvature_of_jet(jet)
    except DegenerateImmersion as exc:
        raise SolverDomainError(f"degenerate jet: {exc}") from exc
    return u.with_values(np.cosh(s) ** 2 * H)


def l0_apply(u: GridFunction) -> GridFunction:
    """``u'' + 2 sech^2(s) u`` with the grid's difference stencils."""
    return u.with_values(u.d2() + 2.0 * u.values / np.cosh(u.s) ** 2)


def _l_delta(u: GridFunction, delta, a2_coeff: float) -> GridFunction:
    d = float(delta)
    if not np.isfinite(d) or d < 0:
        raise InvalidArgument("delta must be finite and non-negative")
    s = u.s
    t = np.tanh(s)
    c2 = 1.0 / np.cosh(s) ** 2
    v, v1, v2 = u.values, u.d1(), u.d2()
    d2 = d * d
    out = (
        (1.0 + d2 * t * t) * v2
        + d2 * v
        - 2.0 * d2 * t * v1
        + 2.0 * d2 * t * c2 * v1
        - d2 * c2 * v
        + 2.0 * c2 * v
        + a2_coeff * d2 * t * t * c2 * v
    )
    return u.with_values(out)


def l_delta_apply(u: GridFunction, delta) -> GridFunction:
    """Linearization of Q at u = 0: ``e^{delta theta} cosh^2 (Laplacian + |A|^2) e^{delta theta} u``.

    Reduces to :func:`l0_apply` at delta = 0.  The potential term carries
    ``delta^2 tanh^2 sech^2 u`` (from ``|A|^2 = e^{-2 delta theta} sech^4 (2 + delta^2 tanh^2)``).
    """
    return _l_delta(u, delta, 1.0)


def l_delta_displayed(u: GridFunction, delta) -> GridFunction:
    """Variant with ``2 delta^2 tanh^2 sech^2 u``; differs from the true linearization at O(delta^2)."""
    return _l_delta(u, delta, 2.0)


def cumulative_from_origin(g, h: float, center: int) -> np.ndarray:
    """``int_0^{s_i} g`` at every node, by a fourth-order interval rule.

    Interior intervals use ``h/24 (-g_{i-1} + 13 g_i + 13 g_{i+1} - g_{i+2})``; the
    two end intervals use the one-sided ``h/24 (9, 19, -5, 1)`` rule.
    """
    g = np.asarray(g, dtype=float)
    n = g.size
    seg = np.empty(n - 1)
    i = np.arange(1, n - 2)
    seg[1 : n - 2] = h / 24.0 * (-g[i - 1] + 13.0 * g[i] + 13.0 * g[i + 1] - g[i + 2])
    seg[0] = h / 24.0 * (9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3])
    seg[n - 2] = h / 24.0 * (9.0 * g[n - 1] + 19.0 * g[n - 2] - 5.0 * g[n - 3] + g[n - 4])
    # accumulate outward from the centre so the origin value is exactly 0
    out = np.empty(n)
    out[center:] = np.concatenate([[0.0], np.cumsum(seg[center:])])
    out[: center + 1] = -np.concatenate([[0.0], np.cumsum(seg[:center][::-1])])[::-1]
    return out


def l0_inverse(f: GridFunction) -> GridFunction:
    """``tanh(s) int_0^s coth^2(s') int_0^{s'} tanh(s'') f(s'') ds'' ds'``.

    The outer integrand has a removable singularity at ``s' = 0`` whose limit is
    ``f(0)/2``.  The result vanishes to second order at the origin.
    """
    s, h, c = f.s, f.h, f.center
    t = np.tanh(s)
    inner = cumulative_from_origin(t * f.values, h, c)
    integrand = np.empty_like(inner)
    mask = np.arange(f.n) != c
    integrand[mask] = inner[mask] / t[mask] ** 2
    integrand[c] = 0.5 * f.values[c]
    return f.with_values(t * cumulative_from_origin(integrand, h, c))
