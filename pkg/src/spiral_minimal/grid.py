"""Functions sampled on a symmetric uniform s-grid, and discrete Hölder norms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import maximum_filter1d

from .errors import InvalidArgument


@dataclass(frozen=True)
class GridFunction:
    """Samples ``values[i] = f(s_i)`` with ``s_i = -S + i h`` and ``h = 2S/(n-1)``.

    ``n`` is odd so that ``s = 0`` is the middle node.
    """

    half_width: float
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 5 or v.size % 2 == 0:
            raise InvalidArgument("grid needs an odd number (>= 5) of nodes")
        if not self.half_width > 0:
            raise InvalidArgument("half_width must be positive")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, fn, half_width: float, n: int) -> "GridFunction":
        s = np.linspace(-half_width, half_width, n)
        return cls(half_width, np.asarray(fn(s), dtype=float) + 0.0 * s)

    @classmethod
    def zeros(cls, half_width: float, n: int) -> "GridFunction":
        return cls(half_width, np.zeros(n))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def center(self) -> int:
        return self.n // 2

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / (self.n - 1)

    @property
    def s(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.n)

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.half_width, values)

    def d1(self) -> np.ndarray:
        u, h = self.values, self.h
        out = np.empty_like(u)
        out[1:-1] = (u[2:] - u[:-2]) / (2.0 * h)
        out[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h)
        out[-1] = (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * h)
        return out

    def d2(self) -> np.ndarray:
        u, h = self.values, self.h
        out = np.empty_like(u)
        out[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / h**2
        out[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / h**2
        out[-1] = (2.0 * u[-1] - 5.0 * u[-2] + 4.0 * u[-3] - u[-4]) / h**2
        return out

    def derivative(self, j: int) -> np.ndarray:
        if j == 0:
            return self.values
        return self.d1() if j == 1 else self.d2()

    def slope_at_origin(self) -> float:
        """Fourth-order central estimate of f'(0)."""
        u, c = self.values, self.center
        return float((-u[c + 2] + 8.0 * u[c + 1] - 8.0 * u[c - 1] + u[c - 2]) / (12.0 * self.h))

    def sup(self, interior: bool = False) -> float:
        v = self.values[1:-1] if interior else self.values
        return float(np.abs(v).max())

    def __add__(self, other):
        return self.with_values(self.values + _vals(other))

    def __sub__(self, other):
        return self.with_values(self.values - _vals(other))

    def __mul__(self, c):
        return self.with_values(self.values * float(c))

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_values(-self.values)


def _vals(x):
    return x.values if isinstance(x, GridFunction) else np.asarray(x, dtype=float)


def window_radius(h: float, radius: float = 1.0) -> int:
    return int(np.floor(radius / h + 1e-9))


def holder_seminorm_windows(g, h: float, alpha: float, radius: float = 1.0) -> np.ndarray:
    """For every node i, ``max |g_j - g_l| / |s_j - s_l|^alpha`` over node pairs
    inside the window ``|s - s_i| <= radius`` (clipped to the grid).
    """
    g = np.asarray(g, dtype=float)
    n = g.size
    m = min(window_radius(h, radius), n - 1)
    out = np.zeros(n)
    pad = np.full(m, -np.inf)
    for d in range(1, 2 * m + 1):
        if d > n - 1:
            break
        q = np.abs(g[d:] - g[:-d]) / (d * h) ** alpha
        w = 2 * m - d + 1
        padded = np.concatenate([pad, q, pad])
        best = maximum_filter1d(padded, size=w, mode="constant", cval=-np.inf)
        np.maximum(out, best[w // 2 : w // 2 + n], out=out)
    return out


def local_holder(f: GridFunction, k: int, alpha: float) -> np.ndarray:
    """Discrete local C^{k,alpha} function: at each node, the sum of the derivative
    magnitudes up to order k plus the Hölder quotient of the k-th derivative on the
    unit window around it.
    """
    if k not in (0, 1, 2):
        raise InvalidArgument("k must be 0, 1 or 2")
    if not 0.0 < alpha < 1.0:
        raise InvalidArgument("alpha must lie in (0, 1)")
    derivs = [f.derivative(j) for j in range(k + 1)]
    total = sum(np.abs(d) for d in derivs)
    return total + holder_seminorm_windows(derivs[k], f.h, alpha)


def weighted_norm(f: GridFunction, k: int, alpha: float = 0.5) -> float:
    """Computable stand-in for the X_k norm: ``sup local_holder / max(|s|, 1)^k``."""
    if k not in (0, 2):
        raise InvalidArgument("weighted norm is defined for k in {0, 2}")
    weight = np.maximum(np.abs(f.s), 1.0) ** k
    return float(np.max(local_holder(f, k, alpha) / weight))
