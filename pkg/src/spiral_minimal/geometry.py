"""Closed-form geometry of the spiral immersion

    G(s, theta) = e^{delta theta} (sinh s sin theta, sinh s cos theta, 1/delta).

Everything here is evaluated from explicit formulas (no differencing), and all
functions broadcast over array-valued ``s`` and ``theta``.

The length of the second fundamental form is
``e^{-2 delta theta} sech^4(s) (2 + delta^2 tanh^2 s)``, which is what the full
tensor contraction (equivalently ``H^2 - 2K``) gives.  :func:`displayed_A_norm_sq`
keeps the variant with coefficient 2 on the ``delta^2`` term for comparison.

Orientation note: the moving frame (e_r, e_r', e_z) is left-handed, so the
normal ``nu = -sech(s) e_r' + tanh(s) e_z`` used throughout this module is
*minus* the normalized cross product ``G_s x G_theta``.  The second fundamental
form and ``H`` in :class:`GeometryRecord` are taken with respect to ``nu``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument

DELTA_MAX = 0.2


def _stack(x, y, z):
    x, y, z = np.broadcast_arrays(x, y, z)
    return np.stack([x, y, z], axis=-1).astype(float)


def check_delta(delta) -> float:
    delta = float(delta)
    if not np.isfinite(delta) or not (0.0 < delta <= DELTA_MAX):
        raise InvalidArgument(f"delta must lie in (0, {DELTA_MAX}], got {delta!r}")
    return delta


def _check_finite(**kw):
    for name, value in kw.items():
        if not np.all(np.isfinite(value)):
            raise InvalidArgument(f"{name} must be finite")


@dataclass(frozen=True)
class Jet:
    """First and second partial derivatives of a map R^2 -> R^3 at one point.

    Each field is an array of shape ``(..., 3)``; leading axes index a batch of
    parameter points.
    """

    grad_s: np.ndarray
    grad_t: np.ndarray
    hess_ss: np.ndarray
    hess_tt: np.ndarray
    hess_st: np.ndarray

    FIELDS = ("grad_s", "grad_t", "hess_ss", "hess_tt", "hess_st")

    def vectors(self):
        return tuple(getattr(self, f) for f in self.FIELDS)

    @classmethod
    def from_array(cls, arr) -> "Jet":
        """Inverse of :meth:`as_array`; ``arr`` has shape ``(..., 5, 3)``."""
        arr = np.asarray(arr, dtype=float)
        return cls(*(arr[..., i, :] for i in range(5)))

    def as_array(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(*self.vectors()), axis=-2)

    @classmethod
    def zeros(cls, shape=()) -> "Jet":
        return cls.from_array(np.zeros(tuple(shape) + (5, 3)))

    def __add__(self, other: "Jet") -> "Jet":
        return Jet(*(a + b for a, b in zip(self.vectors(), other.vectors())))

    def __sub__(self, other: "Jet") -> "Jet":
        return Jet(*(a - b for a, b in zip(self.vectors(), other.vectors())))

    def __mul__(self, c) -> "Jet":
        c = np.asarray(c, dtype=float)
        if c.ndim:
            c = c[..., None]
        return Jet(*(c * v for v in self.vectors()))

    __rmul__ = __mul__

    def __neg__(self) -> "Jet":
        return self * -1.0

    def transform(self, M) -> "Jet":
        """Apply the linear map ``M`` (3x3) to every vector of the jet."""
        M = np.asarray(M, dtype=float)
        return Jet(*(v @ M.T for v in self.vectors()))

    def grad_norm(self) -> np.ndarray:
        return np.sqrt((self.grad_s**2).sum(-1) + (self.grad_t**2).sum(-1))

    def hess_norm(self) -> np.ndarray:
        return np.sqrt(
            (self.hess_ss**2).sum(-1) + (self.hess_tt**2).sum(-1) + (self.hess_st**2).sum(-1)
        )

    def norm(self) -> np.ndarray:
        return np.hypot(self.grad_norm(), self.hess_norm())

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(v)) for v in self.vectors())


@dataclass(frozen=True)
class Frame:
    e_r: np.ndarray
    e_r_prime: np.ndarray
    e_z: np.ndarray


def frame(theta) -> Frame:
    """Moving frame ``e_r = (sin, cos, 0)``, ``e_r' = d e_r / d theta``, ``e_z``."""
    theta = np.asarray(theta, dtype=float)
    _check_finite(theta=theta)
    sin, cos = np.sin(theta), np.cos(theta)
    zero = np.zeros_like(theta)
    return Frame(
        e_r=_stack(sin, cos, zero),
        e_r_prime=_stack(cos, -sin, zero),
        e_z=_stack(zero, zero, zero + 1.0),
    )


def immersion_point(s, theta, delta):
    delta = check_delta(delta)
    s = np.asarray(s, dtype=float)
    theta = np.asarray(theta, dtype=float)
    _check_finite(s=s, theta=theta)
    e = np.exp(delta * theta)
    sh = np.sinh(s)
    return _stack(e * sh * np.sin(theta), e * sh * np.cos(theta), e / delta + 0.0 * s)


def immersion_jet(s, theta, delta):
    """Point ``G(s, theta)`` and its closed-form jet.

    Returns
    -------
    point : ndarray, shape (..., 3)
    jet : Jet
    """
    point = immersion_point(s, theta, delta)
    s = np.asarray(s, dtype=float)
    theta = np.asarray(theta, dtype=float)
    fr = frame(theta)
    er, erp, ez = fr.e_r, fr.e_r_prime, fr.e_z
    e = np.exp(delta * theta)[..., None]
    sh = np.sinh(s)[..., None]
    ch = np.cosh(s)[..., None]
    jet = Jet(
        grad_s=e * ch * er,
        grad_t=e * (delta * sh * er + sh * erp + ez),
        hess_ss=e * sh * er,
        hess_tt=e * ((delta**2 - 1.0) * sh * er + 2.0 * delta * sh * erp + delta * ez),
        hess_st=e * ch * (delta * er + erp),
    )
    return point, jet


@dataclass(frozen=True)
class GeometryRecord:
    frame: Frame
    point: np.ndarray
    jet: Jet
    normal: np.ndarray
    # nu_s, nu_t, nu_ss, nu_st, nu_tt
    normal_derivs: tuple
    g_ss: np.ndarray
    g_tt: np.ndarray
    g_st: np.ndarray
    det_g: np.ndarray
    dual_ss: np.ndarray
    dual_tt: np.ndarray
    dual_st: np.ndarray
    A_ss: np.ndarray
    A_tt: np.ndarray
    A_st: np.ndarray
    A_norm_sq: np.ndarray
    H: np.ndarray
    # coefficients of d_ss, d_tt, d_st, d_s, d_t and the prefactor
    # e^{2 delta theta} cosh^2(s) dividing them
    laplace_coeffs: tuple

    def laplacian(self, f_ss, f_tt, f_st, f_s, f_t):
        """Laplace-Beltrami operator applied to a function given by its derivatives.

        Arguments may carry a trailing vector axis (e.g. the coordinate
        functions of a map into R^3).
        """
        c_ss, c_tt, c_st, c_s, c_t, pref = self.laplace_coeffs
        terms = [(c_ss, f_ss), (c_tt, f_tt), (c_st, f_st), (c_s, f_s), (c_t, f_t)]
        vec = np.ndim(f_ss) > np.ndim(pref)
        total = 0.0
        for c, f in terms:
            total = total + (c[..., None] if vec else c) * f
        return total / (pref[..., None] if vec else pref)


def displayed_A_norm_sq(s, theta, delta):
    """``e^{-2 delta theta} sech^4(s) (2 + 2 delta^2 tanh^2 s)``; off by ``delta^2 tanh^2`` in the bracket."""
    s = np.asarray(s, dtype=float)
    return np.exp(-2.0 * delta * np.asarray(theta)) * (2.0 + 2.0 * delta**2 * np.tanh(s) ** 2) / np.cosh(s) ** 4


def normal_jet(s, theta):
    """The unit normal ``nu`` and its first and second derivatives."""
    s = np.asarray(s, dtype=float)
    fr = frame(theta)
    er, erp, ez = fr.e_r, fr.e_r_prime, fr.e_z
    c = (1.0 / np.cosh(s))[..., None]
    t = np.tanh(s)[..., None]
    nu = -c * erp + t * ez
    nu_s = c * t * erp + c**2 * ez
    nu_t = c * er
    nu_ss = c * (c**2 - t**2) * erp - 2.0 * c**2 * t * ez
    nu_st = -c * t * er
    nu_tt = c * erp
    return nu, (nu_s, nu_t, nu_ss, nu_st, nu_tt)


def geometry_at(s, theta, delta) -> GeometryRecord:
    """All closed-form geometric data of G at ``(s, theta)``."""
    point, jet = immersion_jet(s, theta, delta)
    s, theta = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(theta, dtype=float))
    fr = frame(theta)
    nu, nderivs = normal_jet(s, theta)

    e2 = np.exp(2.0 * delta * theta)
    ch, sh, th = np.cosh(s), np.sinh(s), np.tanh(s)
    sech2 = 1.0 / ch**2

    g_ss = e2 * ch**2
    g_tt = e2 * (ch**2 + delta**2 * sh**2)
    g_st = delta * e2 * sh * ch
    det_g = e2**2 * ch**4

    dual_ss = sech2 * (1.0 + delta**2 * th**2) / e2
    dual_tt = sech2 / e2
    dual_st = -delta * th * sech2 / e2

    e1 = np.exp(delta * theta)
    A_ss = np.zeros_like(s)
    A_tt = -delta * e1 * th
    A_st = -e1 + 0.0 * s
    A_norm_sq = sech2**2 * (2.0 + delta**2 * th**2) / e2
    H = delta * th * sech2 / e1

    laplace = (
        1.0 + delta**2 * th**2,
        np.ones_like(s),
        -2.0 * delta * th,
        2.0 * delta**2 * th * sech2,
        -delta * sech2,
        e2 * ch**2,
    )
    return GeometryRecord(
        frame=fr,
        point=point,
        jet=jet,
        normal=nu,
        normal_derivs=nderivs,
        g_ss=g_ss,
        g_tt=g_tt,
        g_st=g_st,
        det_g=det_g,
        dual_ss=dual_ss,
        dual_tt=dual_tt,
        dual_st=dual_st,
        A_ss=A_ss,
        A_tt=A_tt,
        A_st=A_st,
        A_norm_sq=A_norm_sq,
        H=H,
        laplace_coeffs=laplace,
    )
