"""Independent oracles and the quantitative claims about the construction.

The finite-difference oracles here never call the closed-form jet code: the
spiral immersion is re-implemented pointwise in extended precision (mpmath),
and graph surfaces are differenced in float64 through :class:`GraphSurface`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .errors import InvalidArgument
from .functional import (
    conformal_defect,
    dH,
    mean_curvature_of_jet,
    metric,
)
from .geometry import Jet, check_delta, displayed_A_norm_sq, geometry_at, immersion_jet, immersion_point
from .grid import GridFunction, local_holder, weighted_norm
from .operators import l0_inverse, l_delta_apply, q_operator
from .solver import GraphSurface, psi

PAPER = "paper-claim"
DERIVED = "derived-constant"


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    provenance: str = DERIVED
    note: str = ""


def _check(name, value, tol, provenance=DERIVED, note="", upper=True):
    value = float(value)
    ok = bool(value <= tol) if upper else bool(value >= tol)
    return Check(name, value, float(tol), ok, provenance, note)


# -- finite-difference jets ------------------------------------------------------


def fd_jet(surface, s, theta, h_step: float) -> Jet:
    """Central O(h^2) differences of ``surface(s, theta) -> (..., 3)``.

    ``surface`` must accept broadcastable arrays; out-of-domain stencils are
    reported by the surface itself.
    """
    s = np.asarray(s, dtype=float)[..., None]
    theta = np.asarray(theta, dtype=float)[..., None]
    h = float(h_step)
    ds = np.array([-1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, -1.0, -1.0]) * h
    dt = np.array([0.0, 0.0, 0.0, -1.0, 1.0, 1.0, -1.0, 1.0, -1.0]) * h
    P = surface(s + ds, theta + dt)
    m, c, p, tm, tp, pp, pm, mp_, mm = (P[..., k, :] for k in range(9))
    return Jet(
        grad_s=(p - m) / (2 * h),
        grad_t=(tp - tm) / (2 * h),
        hess_ss=(p - 2 * c + m) / h**2,
        hess_tt=(tp - 2 * c + tm) / h**2,
        hess_st=(pp - pm - mp_ + mm) / (4 * h * h),
    )


def immersion_point_mp(s, theta, delta):
    e = mpmath.exp(delta * theta)
    sh = mpmath.sinh(s)
    return (e * sh * mpmath.sin(theta), e * sh * mpmath.cos(theta), e / delta)


def fd_jet_mp(s, theta, delta, h_step, dps: int = 40) -> Jet:
    """Finite-difference jet of the spiral immersion in ``dps``-digit arithmetic.

    Removes the cancellation that the ``1/delta`` height offset causes in float64
    second differences.
    """
    with mpmath.workdps(dps):
        s0, t0 = mpmath.mpf(float(s)), mpmath.mpf(float(theta))
        d, h = mpmath.mpf(float(delta)), mpmath.mpf(float(h_step))

        def P(i, j):
            return [x for x in immersion_point_mp(s0 + i * h, t0 + j * h, d)]

        c = P(0, 0)
        sp, sm, tp, tm = P(1, 0), P(-1, 0), P(0, 1), P(0, -1)
        pp, pm, mp_, mm = P(1, 1), P(1, -1), P(-1, 1), P(-1, -1)
        vecs = [
            [(a - b) / (2 * h) for a, b in zip(sp, sm)],
            [(a - b) / (2 * h) for a, b in zip(tp, tm)],
            [(a - 2 * x + b) / h**2 for a, x, b in zip(sp, c, sm)],
            [(a - 2 * x + b) / h**2 for a, x, b in zip(tp, c, tm)],
            [(a - b - e + f) / (4 * h * h) for a, b, e, f in zip(pp, pm, mp_, mm)],
        ]
        return Jet(*(np.array([float(x) for x in v]) for v in vecs))


def second_form_from_jet(jet: Jet):
    """Normal (right-handed), metric, dual metric, A_ij and |A|^2 straight from a jet."""
    g_ss, g_tt, g_st, det = metric(jet)
    n = np.cross(jet.grad_s, jet.grad_t) / np.sqrt(det)[..., None]
    A = np.stack(
        [
            np.stack([(jet.hess_ss * n).sum(-1), (jet.hess_st * n).sum(-1)], -1),
            np.stack([(jet.hess_st * n).sum(-1), (jet.hess_tt * n).sum(-1)], -1),
        ],
        -2,
    )
    g = np.stack([np.stack([g_ss, g_st], -1), np.stack([g_st, g_tt], -1)], -2)
    ginv = np.linalg.inv(g)
    A_up = ginv @ A @ ginv
    norm_sq = (A_up * A).sum((-1, -2))
    return n, g, ginv, A, norm_sq


# -- geometry checks --------------------------------------------------------------


def _sample_grid(n_s=13, n_theta=9, s_max=3.0, theta_max=4 * np.pi):
    s, t = np.meshgrid(np.linspace(-s_max, s_max, n_s), np.linspace(0.0, theta_max, n_theta))
    return s.ravel(), t.ravel()


def _rel(a, b, scale):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)) / scale))


def geometry_checks(deltas=(0.01, 0.1), h_step=1e-4, n_s=13, n_theta=9):
    """Closed-form geometry against identities and extended-precision FD oracles."""
    checks = []
    for delta in deltas:
        s, t = _sample_grid(n_s, n_theta)
        rec = geometry_at(s, t, delta)
        jet = rec.jet
        tag = f"[delta={delta:g}]"
        nu = rec.normal
        ortho = max(
            np.abs(np.linalg.norm(nu, axis=-1) - 1).max(),
            np.abs((nu * jet.grad_s).sum(-1)).max(),
            np.abs((nu * jet.grad_t).sum(-1)).max(),
        )
        checks.append(_check(f"normal unit and orthogonal {tag}", ortho, 1e-12, PAPER))
        n_cross, g, ginv, A, norm_sq = second_form_from_jet(jet)
        checks.append(
            _check(
                f"normal = -(G_s x G_t)/|G_s x G_t| {tag}",
                np.abs(n_cross + nu).max(),
                1e-12,
                DERIVED,
                "frame (e_r, e_r', e_z) is left-handed",
            )
        )
        det_closed = np.exp(4 * delta * t) * np.cosh(s) ** 4
        checks.append(
            _check(f"det g = e^(4 delta theta) cosh^4 s {tag}", _rel(rec.det_g, det_closed, det_closed), 1e-10, PAPER)
        )
        checks.append(
            _check(
                f"det of jet metric = e^(4 delta theta) cosh^4 s {tag}",
                _rel(np.linalg.det(g), det_closed, det_closed),
                1e-10,
                PAPER,
            )
        )
        gscale = np.exp(2 * delta * t) * np.cosh(s) ** 2
        g_closed = np.stack(
            [np.stack([rec.g_ss, rec.g_st], -1), np.stack([rec.g_st, rec.g_tt], -1)], -2
        )
        checks.append(_check(f"metric from jet = closed form {tag}", _rel(g, g_closed, gscale[..., None, None]), 1e-12, PAPER))
        dual = np.stack(
            [np.stack([rec.dual_ss, rec.dual_st], -1), np.stack([rec.dual_st, rec.dual_tt], -1)], -2
        )
        checks.append(
            _check(f"dual metric * metric = I {tag}", np.abs(dual @ g_closed - np.eye(2)).max(), 1e-12, PAPER)
        )
        A_closed = np.stack(
            [np.stack([rec.A_ss, rec.A_st], -1), np.stack([rec.A_st, rec.A_tt], -1)], -2
        )
        A_nu = -A  # closed forms are taken against nu = -n_cross
        ascale = np.exp(delta * t)[..., None, None]
        checks.append(_check(f"hess . nu = second fundamental form {tag}", _rel(A_nu, A_closed, ascale), 1e-12, PAPER))
        checks.append(
            _check(f"|A|^2 full contraction = closed form {tag}", _rel(norm_sq, rec.A_norm_sq, rec.A_norm_sq), 1e-10,
                   DERIVED, "bracket 2 + delta^2 tanh^2")
        )
        H_trace = (ginv * A_nu).sum((-1, -2))
        # principal curvatures: |A|^2 = H^2 - 2K with K = det A / det g
        K = np.linalg.det(A_nu) / np.linalg.det(g)
        checks.append(
            _check(f"|A|^2 = H^2 - 2K {tag}", _rel(H_trace**2 - 2 * K, rec.A_norm_sq, rec.A_norm_sq), 1e-10, DERIVED)
        )
        excess = delta**2 * np.exp(-2 * delta * t) * np.tanh(s) ** 2 / np.cosh(s) ** 4
        overshoot = displayed_A_norm_sq(s, t, delta) - rec.A_norm_sq
        checks.append(
            _check(f"bracket 2 + 2 delta^2 tanh^2 overshoots by exactly delta^2 tanh^2 {tag}",
                   _rel(overshoot, excess, rec.A_norm_sq), 1e-12,
                   DERIVED, "the coefficient-2 variant is not the contraction of A")
        )
        hscale = delta * np.exp(-delta * t)
        checks.append(
            _check(f"H = g^ij A_ij (nu orientation) = +delta e^(-delta theta) tanh sech^2 {tag}",
                   _rel(H_trace, rec.H, hscale), 1e-10, DERIVED,
                   "opposite sign to the jet functional; see H-sign-convention")
        )
        H_jet = mean_curvature_of_jet(jet)
        checks.append(
            _check(f"mean_curvature_of_jet(G) = -H (right-handed normal) {tag}",
                   _rel(H_jet, -rec.H, hscale), 1e-10, DERIVED)
        )
        lap = rec.laplacian(jet.hess_ss, jet.hess_tt, jet.hess_st, jet.grad_s, jet.grad_t)
        lscale = np.maximum(np.abs(rec.H), hscale)[..., None]
        checks.append(
            _check(f"Laplace operator on coordinates = H nu {tag}",
                   _rel(lap, rec.H[..., None] * nu, lscale), 1e-8, PAPER)
        )
        # extended-precision finite differences
        errs = {hh: [] for hh in (h_step, h_step / 2)}
        fd_quant = []
        for si, ti in zip(s, t):
            _, cj = immersion_jet(si, ti, delta)
            for hh in errs:
                fj = fd_jet_mp(si, ti, delta, hh)
                scale = cj.norm()
                errs[hh].append(max(np.abs(a - b).max() for a, b in zip(fj.vectors(), cj.vectors())) / scale)
                if hh == h_step:
                    fd_quant.append(fj)
        e1, e2 = max(errs[h_step]), max(errs[h_step / 2])
        checks.append(_check(f"FD jet vs closed form, h={h_step:g} {tag}", e1, 1e-8, PAPER))
        checks.append(
            _check(f"FD jet error ratio under step halving {tag}", abs(e1 / e2 - 4.0), 0.5, DERIVED,
                   f"ratio {e1 / e2:.4f} (expect 4)")
        )
        fjet = Jet.from_array(np.stack([j.as_array() for j in fd_quant]))
        n_fd, g_fd, ginv_fd, A_fd, nsq_fd = second_form_from_jet(fjet)
        checks.append(_check(f"FD normal vs closed form {tag}", np.abs(-n_fd - nu).max(), 1e-8, PAPER))
        checks.append(_check(f"FD metric vs closed form {tag}", _rel(g_fd, g_closed, gscale[..., None, None]), 1e-8, PAPER))
        checks.append(_check(f"FD second form vs closed form {tag}", _rel(-A_fd, A_closed, ascale), 1e-8, PAPER))
        checks.append(_check(f"FD |A|^2 vs closed form {tag}", _rel(nsq_fd, rec.A_norm_sq, rec.A_norm_sq), 1e-8, PAPER))
        H_fd = (ginv_fd * -A_fd).sum((-1, -2))
        checks.append(_check(f"FD H vs closed form {tag}", _rel(H_fd, rec.H, hscale), 1e-8, PAPER))
        defect = conformal_defect(jet)
        checks.append(
            _check(f"conformal defect |a(G)| / delta {tag}", np.max(defect.magnitude) / delta, 2.0, PAPER,
                   "empirical constant for |a| < C delta")
        )
    return checks


def functional_checks(n_samples=1000, seed=0):
    """Homogeneity, rotation invariance and the cylinder oracle for the jet functional."""
    rng = np.random.default_rng(seed)
    jets = random_immersed_jets(rng, n_samples)
    n_samples = jets.grad_s.shape[0]
    H = mean_curvature_of_jet(jets)
    c = rng.uniform(0.1, 10.0, n_samples)
    Hc = mean_curvature_of_jet(jets * c)
    homog = np.max(np.abs(c * Hc - H) / (np.abs(H) + 1e-14))
    Rs = random_rotations(rng, n_samples)
    rotated = Jet(*(np.einsum("nij,nj->ni", Rs, v) for v in jets.vectors()))
    rot = np.max(np.abs(mean_curvature_of_jet(rotated) - H))
    cyl = Jet(
        grad_s=np.array([0.0, 2.0, 0.0]),
        grad_t=np.array([0.0, 0.0, 1.0]),
        hess_ss=np.array([-2.0, 0.0, 0.0]),
        hess_tt=np.zeros(3),
        hess_st=np.zeros(3),
    )
    return [
        _check(f"homogeneity c H(c j) = H(j) over {n_samples} jets", homog, 1e-10, PAPER),
        _check(f"rotation invariance over {n_samples} jets", rot, 1e-10, PAPER),
        _check("cylinder radius 2: |H| = 1/2", abs(abs(float(mean_curvature_of_jet(cyl))) - 0.5), 1e-14, DERIVED),
    ]


def random_immersed_jets(rng, n, defect_max=None) -> Jet:
    """Random jets with well-conditioned first derivatives."""
    arr = rng.normal(size=(n, 5, 3))
    jets = Jet.from_array(arr)
    if defect_max is not None:
        # near-conformal: orthonormal columns perturbed slightly, random scale
        Q = random_rotations(rng, n)
        scale = np.exp(rng.uniform(-1, 1, n))[:, None]
        pert = rng.uniform(-1, 1, (n, 2, 3)) * defect_max / 4
        gs = scale * (Q[:, :, 0] + pert[:, 0])
        gt = scale * (Q[:, :, 1] + pert[:, 1])
        jets = Jet(gs, gt, arr[:, 2], arr[:, 3], arr[:, 4])
    _, _, _, det = metric(jets)
    gn = jets.grad_norm()
    keep = det > 1e-3 * gn**4
    return Jet.from_array(jets.as_array()[keep])


def random_rotations(rng, n) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(n, 3, 3)))
    q = q * np.sign(np.diagonal(r, axis1=1, axis2=2))[:, None, :]
    flip = np.linalg.det(q) < 0
    q[flip, :, 0] *= -1
    return q


def derivative_bound_probe(n_samples=200, seed=1):
    """Max of ``|D^j H| |grad|^{1+j} / (1 + |hess|/|grad|)`` over unit directions."""
    rng = np.random.default_rng(seed)
    jets = random_immersed_jets(rng, n_samples, defect_max=0.2)
    dirs = Jet.from_array(rng.normal(size=jets.as_array().shape))
    dirs = dirs * (1.0 / dirs.norm())
    g, hn = jets.grad_norm(), jets.hess_norm()
    out = {}
    for order in (1, 2):
        d = np.abs(dH(jets, dirs, order))
        out[order] = float(np.max(d * g ** (1 + order) / (1 + hn / g)))
    return out


# -- surfaces ---------------------------------------------------------------------


def surface_residual(u: GridFunction, delta, theta_samples=(0.0, 1.0, 2 * np.pi), n_s=41, h_step=1e-3):
    """``sup |H|`` of the reconstructed graph, by finite differences of its points."""
    surf = GraphSurface(u, delta)
    S = u.half_width
    s = np.linspace(-S + 2 * h_step, S - 2 * h_step, n_s)
    ss, tt = np.meshgrid(s, np.asarray(theta_samples, dtype=float))
    jet = fd_jet(surf, ss.ravel(), tt.ravel(), h_step)
    return float(np.max(np.abs(mean_curvature_of_jet(jet))))


def helicoid_point(s, theta):
    s, theta = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(theta, dtype=float))
    return np.stack([np.sinh(s) * np.sin(theta), np.sinh(s) * np.cos(theta), theta], -1)


def helicoid_residual(theta_samples=(0.0, 1.0, 2.0), n_s=21, s_max=2.0, h_step=1e-3):
    s = np.linspace(-s_max, s_max, n_s)
    ss, tt = np.meshgrid(s, np.asarray(theta_samples, dtype=float))
    return float(np.max(np.abs(mean_curvature_of_jet(fd_jet(helicoid_point, ss.ravel(), tt.ravel(), h_step)))))


# -- curvature blow-up ---------------------------------------------------------------


@dataclass
class ScalingRow:
    delta: float
    h0: float
    sup_analytic: float
    sup_grid: float
    ratio: float


@dataclass
class ScalingReport:
    delta: float
    h0_list: np.ndarray
    sup_A2: np.ndarray
    ratios: np.ndarray
    sup_analytic: np.ndarray = field(default=None)


def blowup_scaling(delta, h0, n_s=601, n_theta=401, theta_span=20.0) -> ScalingRow:
    """``sup |A|^2`` over the part of G above height ``h0``, against ``2 (delta h0)^-2``.

    The grid search evaluates ``|A|^2`` by full tensor contraction of the closed
    form jet; the analytic value uses that |A|^2 peaks at s = 0 and decreases in
    theta, with height ``h = e^{delta theta}/delta``.
    """
    delta = check_delta(delta)
    h0 = float(h0)
    # theta ranges over R, so any h0 > 0 cuts off a non-empty region; for
    # h0 <= 0 the region is all of G and |A|^2 is unbounded as theta -> -inf
    if not (h0 > 0 and np.isfinite(h0)):
        raise InvalidArgument("need finite h0 > 0")
    theta0 = math.log(delta * h0) / delta
    s = np.linspace(-3.0, 3.0, n_s)
    theta = theta0 + np.linspace(0.0, theta_span, n_theta)
    ss, tt = np.meshgrid(s, theta)
    _, jet = immersion_jet(ss.ravel(), tt.ravel(), delta)
    height = np.exp(delta * tt.ravel()) / delta
    _, _, _, _, norm_sq = second_form_from_jet(jet)
    # the region is h > h0; its closure is used for the supremum
    sup_grid = float(np.max(norm_sq[height >= h0 * (1 - 1e-14)]))
    sup_analytic = 2.0 / (delta * h0) ** 2
    return ScalingRow(delta, h0, sup_analytic, sup_grid, sup_grid * delta**2 * h0**2)


def scaling_report(delta, h0_list) -> ScalingReport:
    rows = [blowup_scaling(delta, h0) for h0 in h0_list]
    return ScalingReport(
        delta=delta,
        h0_list=np.array([r.h0 for r in rows]),
        sup_A2=np.array([r.sup_grid for r in rows]),
        ratios=np.array([r.ratio for r in rows]),
        sup_analytic=np.array([r.sup_analytic for r in rows]),
    )


# -- helicoid limit -------------------------------------------------------------------


def helicoid_limit(delta_list, s_max=1.0, theta_max=2 * np.pi, n_s=41, n_theta=81):
    """Max deviation of ``G - (0, 0, 1/delta)`` from the helicoid on a compact set."""
    s = np.linspace(-s_max, s_max, n_s)
    theta = np.linspace(0.0, theta_max, n_theta)
    ss, tt = np.meshgrid(s, theta)
    out = []
    for delta in delta_list:
        delta = check_delta(delta)
        e = np.exp(delta * tt)
        G = np.stack([e * np.sinh(ss) * np.sin(tt), e * np.sinh(ss) * np.cos(tt), np.expm1(delta * tt) / delta], -1)
        err = np.linalg.norm(G - helicoid_point(ss, tt), axis=-1).max()
        out.append((delta, float(err)))
    return out


def observed_orders(table):
    return [math.log(e0 / e1) / math.log(d0 / d1) for (d0, e0), (d1, e1) in zip(table, table[1:])]


# -- embeddedness ---------------------------------------------------------------------


@dataclass
class EmbeddednessReport:
    max_displacement: float
    min_sheet_gap: float
    margin: float
    trivial: bool
    sup_u: float
    envelope: float | None = None

    @property
    def embedded(self) -> bool:
        return self.margin > 1.0

    @property
    def within_envelope(self) -> bool | None:
        if self.envelope is None:
            return None
        return self.sup_u <= self.envelope


def embeddedness_check(u: GridFunction, delta, theta_range=(0.0, 4 * np.pi), n_theta=65, epsilon=None):
    """Separation of consecutive sheets (theta vs theta + 2 pi) against the normal displacement.

    For each base angle the sheet gap ``min_s |G(s, theta + 2 pi) - G(s, theta)|`` is
    compared with twice the larger displacement ``e^{delta (theta + 2 pi)} sup|u|``.
    """
    delta = check_delta(delta)
    t0, t1 = map(float, theta_range)
    if t1 - t0 < 2 * np.pi - 1e-12:
        raise InvalidArgument("theta_range must span at least 2 pi")
    base = np.linspace(t0, t1 - 2 * np.pi, n_theta)
    s = u.s
    ss, tt = np.meshgrid(s, base)
    gap = np.linalg.norm(immersion_point(ss, tt + 2 * np.pi, delta) - immersion_point(ss, tt, delta), axis=-1)
    gap_theta = gap.min(axis=1)
    sup_u = u.sup()
    max_disp = float(np.exp(delta * t1) * sup_u)
    envelope = None if epsilon is None else float(epsilon) * delta**0.5 / 4
    if sup_u == 0.0:
        return EmbeddednessReport(0.0, float(gap.min()), math.inf, True, 0.0, envelope)
    disp_theta = np.exp(delta * (base + 2 * np.pi)) * sup_u
    margin = float(np.min(gap_theta / (2 * disp_theta)))
    return EmbeddednessReport(max_disp, float(gap.min()), margin, False, sup_u, envelope)


# -- lemma constants ------------------------------------------------------------------


def random_profile(rng, S, n, vanish_order=0):
    """Smooth random function on the grid: a few random Fourier modes, times s^k."""
    s = np.linspace(-S, S, n)
    k = np.arange(1, 5)
    a = rng.normal(size=4) / k
    b = rng.normal(size=4) / k
    v = (a[:, None] * np.sin(k[:, None] * s / S) + b[:, None] * np.cos(k[:, None] * s / S)).sum(0)
    v = v * s**vanish_order
    return GridFunction(S, v)


def _scaled_to_envelope(f: GridFunction, eps: float, alpha: float, fraction: float) -> GridFunction:
    ratio = np.max(local_holder(f, 2, alpha) / np.cosh(f.s))
    return f * (fraction * eps / ratio)


def perturbation_ratio(u: GridFunction, delta, alpha=0.5) -> float:
    """``max_s ||Q_delta(u) - Q_0(u)||_{0,alpha}(s) / (delta ||u||_{2,alpha}(s))``."""
    diff = q_operator(u, delta) - q_operator(u, delta, mode="zero")
    return float(np.max(local_holder(diff, 0, alpha) / (delta * local_holder(u, 2, alpha))))


def quadratic_remainder_ratio(base: GridFunction, v: GridFunction, delta, alpha=0.5) -> float:
    """``max_s cosh(s) ||Q(v) - Q(base) - L_delta(v - base)||_{0,alpha} / ||v - base||_{2,alpha}^2``.

    ``L_delta`` is the linearization at 0, so the ratio is bounded as ``v -> base``
    only for ``base = 0``; otherwise it grows like ``|base| / |v - base|``.
    """
    w = v - base
    rem = q_operator(v, delta) - q_operator(base, delta) - l_delta_apply(w, delta)
    return float(np.max(np.cosh(w.s) * local_holder(rem, 0, alpha) / local_holder(w, 2, alpha) ** 2))


def constants_probe(delta_list=(0.01, 0.05, 0.1), sample_count=16, seed=0, epsilon=0.5,
                    probe_epsilon=0.1, zeta=10.0, alpha=0.5, n=801):
    """Empirical constants for the perturbation, quadratic-remainder and inversion bounds.

    Random profiles are scaled into ``||u||_{2,alpha}(s) < probe_epsilon cosh(s)``.
    Returns a dict keyed by delta with the maximal observed ratios ``C1``, ``C2``
    (remainder about 0), ``C3`` and the largest contraction ratio of Psi on random
    pairs in the ball ``||u||_X2 <= zeta delta``.
    """
    table = {}
    for delta in delta_list:
        delta = check_delta(delta)
        rng = np.random.default_rng(seed)
        S = epsilon * delta ** -0.25
        c1 = c2 = c3 = contraction = 0.0
        zero = GridFunction.zeros(S, n)
        for _ in range(sample_count):
            u = _scaled_to_envelope(random_profile(rng, S, n), probe_epsilon, alpha, rng.uniform(0.2, 0.9))
            v = _scaled_to_envelope(random_profile(rng, S, n), probe_epsilon, alpha, rng.uniform(0.2, 0.9))
            c1 = max(c1, perturbation_ratio(u, delta, alpha))
            c2 = max(c2, quadratic_remainder_ratio(zero, v, delta, alpha))
            f = random_profile(rng, S, n)
            c3 = max(c3, weighted_norm(l0_inverse(f), 2, alpha) / weighted_norm(f, 0, alpha))
            radius = zeta * delta
            a = random_profile(rng, S, n, vanish_order=2)
            b = random_profile(rng, S, n, vanish_order=2)
            a = a * (rng.uniform(0.1, 1.0) * radius / weighted_norm(a, 2, alpha))
            b = b * (rng.uniform(0.1, 1.0) * radius / weighted_norm(b, 2, alpha))
            num = weighted_norm(psi(b, delta) - psi(a, delta), 2, alpha)
            contraction = max(contraction, num / weighted_norm(b - a, 2, alpha))
        table[delta] = {"C1": float(c1), "C2": float(c2), "C3": float(c3), "contraction": float(contraction)}
    return table


def stability(table, key):
    vals = [row[key] for row in table.values()]
    return max(vals) / min(vals)
