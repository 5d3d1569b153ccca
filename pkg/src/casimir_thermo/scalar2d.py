"""Two planar bodies in the (2+1)-dimensional massless scalar field.

    E = -(T / 4 pi^2) sum_{l>=1} int d^2x int d^2x' chi1 chi2 K0^2(gamma l T s)

with s = |x - x'|. Differentiating term by term (K0' = -K1) gives

    S = (1 / 4 pi^2) sum_l int int chi1 chi2 [K0^2(x) - 2 x K0(x) K1(x)]
    U = -(T / 4 pi^2) sum_l int int chi1 chi2  2 x K0(x) K1(x)

with x = gamma l T s. The l = 0 term is excluded because K0(0) diverges.
Area integrals use fixed tensor Gauss-Legendre rules over each body.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .geometry import gauss_legendre
from .specfun import bessel_k01, polylog_exp
from .thermo import DEFAULT_NUMERICS, NATURAL_UNITS, ConvergenceError, ThermoPoint

_PREF = 1.0 / (4.0 * math.pi ** 2)


@dataclass(frozen=True)
class Disk:
    cx: float
    cy: float
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")

    @property
    def area(self):
        return math.pi * self.radius ** 2

    def nodes(self, order, facing=0.0):
        """Polar tensor rule: Gauss-Legendre in r (weight r) and in theta.

        The angular interval starts at ``facing`` so that the Gauss nodes,
        which cluster at the interval ends, crowd the part of the rim where
        a rapidly decaying kernel is largest.
        """
        r, wr = gauss_legendre(order, 0.0, self.radius)
        th, wt = gauss_legendre(2 * order, facing, facing + 2.0 * math.pi)
        rr, tt = np.meshgrid(r, th, indexing="ij")
        w = np.outer(wr * r, wt)
        x = self.cx + rr * np.cos(tt)
        y = self.cy + rr * np.sin(tt)
        return np.column_stack([x.ravel(), y.ravel()]), w.ravel()


@dataclass(frozen=True)
class Rectangle:
    cx: float
    cy: float
    half_x: float
    half_y: float

    def __post_init__(self):
        if not (self.half_x > 0 and self.half_y > 0):
            raise ValueError("rectangle half-widths must be positive")

    @property
    def area(self):
        return 4.0 * self.half_x * self.half_y

    def nodes(self, order, facing=0.0):
        x, wx = gauss_legendre(order, self.cx - self.half_x, self.cx + self.half_x)
        y, wy = gauss_legendre(order, self.cy - self.half_y, self.cy + self.half_y)
        xx, yy = np.meshgrid(x, y, indexing="ij")
        return (np.column_stack([xx.ravel(), yy.ravel()]),
                np.outer(wx, wy).ravel())


Shape = Union[Disk, Rectangle]


def _rect_point_distance(rect, px, py):
    dx = max(abs(px - rect.cx) - rect.half_x, 0.0)
    dy = max(abs(py - rect.cy) - rect.half_y, 0.0)
    return math.hypot(dx, dy)


def min_distance(b1, b2):
    """Smallest distance between the two bodies (negative when they overlap
    for disk pairs, zero for any other contact)."""
    if isinstance(b1, Disk) and isinstance(b2, Disk):
        return math.hypot(b1.cx - b2.cx, b1.cy - b2.cy) - b1.radius - b2.radius
    if isinstance(b1, Rectangle) and isinstance(b2, Disk):
        b1, b2 = b2, b1
    if isinstance(b1, Disk):
        return _rect_point_distance(b2, b1.cx, b1.cy) - b1.radius
    dx = max(abs(b1.cx - b2.cx) - b1.half_x - b2.half_x, 0.0)
    dy = max(abs(b1.cy - b2.cy) - b1.half_y - b2.half_y, 0.0)
    return math.hypot(dx, dy)


@dataclass(frozen=True)
class PlanarBodyPair:
    body1: Shape
    body2: Shape
    chi1: float = 1.0
    chi2: float = 1.0

    def __post_init__(self):
        if not self.gap > 0.0:
            raise ValueError("bodies must be disjoint with a positive gap")

    @property
    def gap(self):
        return min_distance(self.body1, self.body2)

    @classmethod
    def disks(cls, radius1=1.0, radius2=1.0, gap=1.0, chi1=1.0, chi2=1.0):
        """Two disks on the x axis separated by ``gap``."""
        return cls(Disk(0.0, 0.0, radius1),
                   Disk(radius1 + gap + radius2, 0.0, radius2), chi1, chi2)


@lru_cache(maxsize=16)
def _pair_distances(pair, order):
    dx = pair.body2.cx - pair.body1.cx
    dy = pair.body2.cy - pair.body1.cy
    facing = math.atan2(dy, dx)
    p1, w1 = pair.body1.nodes(order, facing)
    p2, w2 = pair.body2.nodes(order, facing + math.pi)
    s = np.hypot(p1[:, None, 0] - p2[None, :, 0], p1[:, None, 1] - p2[None, :, 1])
    return s.ravel(), np.outer(w1, w2).ravel()


@lru_cache(maxsize=256)
def _matsubara_moments(pair, T, gamma, order, l_max, tol):
    """Return (sum_l int int K0^2, sum_l int int 2x K0 K1, terms, tail).

    Pairs whose remaining contribution is negligible are dropped from the
    active set as l grows; the tail bound uses the slowest geometric decay
    exp(-2 gamma T s) of the still-active pairs.
    """
    s, w = _pair_distances(pair, order)
    idx = np.arange(s.size)
    acc_k = []
    acc_x = []
    tail = math.inf
    for l in range(1, l_max + 1):
        x = gamma * l * T * s[idx]
        with np.errstate(under="ignore"):
            k0, k1 = bessel_k01(x)
            tk = w[idx] * k0 * k0
            tx = w[idx] * 2.0 * x * k0 * k1
        # numpy's pairwise sum is deterministic for a fixed array layout
        acc_k.append(float(np.sum(tk)))
        acc_x.append(float(np.sum(tx)))
        ratio = math.exp(-2.0 * gamma * T * s[idx].min())
        tail = (abs(acc_k[-1]) + abs(acc_x[-1])) * ratio / (1.0 - ratio)
        scale = abs(math.fsum(acc_k)) + abs(math.fsum(acc_x))
        if tail <= tol * scale:
            break
        # drop pairs already below the tolerance for good
        keep = (tk + tx) > tol * 1e-3 * scale / max(idx.size, 1)
        idx = idx[keep]
        if idx.size == 0:
            tail = 0.0
            break
    else:
        raise ConvergenceError(
            f"2+1D Matsubara sum not converged at l_max={l_max} (tail {tail:.3g})")
    return math.fsum(acc_k), math.fsum(acc_x), len(acc_k), tail


def _moments(pair, T, units, numerics):
    if not T > 0.0:
        raise ValueError("temperature must be positive")
    numerics = DEFAULT_NUMERICS if numerics is None else numerics
    return _matsubara_moments(pair, float(T), units.gamma, numerics.planar_order,
                              numerics.l_max, numerics.matsubara_tol)


def free_energy_2d(pair, T, units=NATURAL_UNITS, numerics=None):
    cc = pair.chi1 * pair.chi2
    if cc == 0.0:
        return 0.0
    kk, _, _, _ = _moments(pair, T, units, numerics)
    return -cc * T * _PREF * kk


def entropy_2d(pair, T, units=NATURAL_UNITS, numerics=None):
    """Exact l-sum of -dE/dT; positive overall prefactor (see module doc)."""
    cc = pair.chi1 * pair.chi2
    if cc == 0.0:
        return 0.0
    kk, xk, _, _ = _moments(pair, T, units, numerics)
    return cc * _PREF * (kk - xk)


def entropy_2d_printed(pair, T, units=NATURAL_UNITS, numerics=None):
    """The printed exact-sum entropy, whose overall sign is reversed."""
    return -entropy_2d(pair, T, units, numerics)


def internal_energy_2d(pair, T, units=NATURAL_UNITS, numerics=None):
    cc = pair.chi1 * pair.chi2
    if cc == 0.0:
        return 0.0
    _, xk, _, _ = _moments(pair, T, units, numerics)
    return -cc * T * _PREF * xk


def entropy_2d_asymptotic(pair, T, units=NATURAL_UNITS, numerics=None):
    """The printed asymptotic entropy with its exponents negated.

    As printed the arguments exp(+2 gamma T s) make Log and Li_s complex;
    with y = 2 gamma T s the bracket used here is

        -1/(e^y - 1) - Log(1 - e^-y)/(2y) + Li2(e^-y)/(16 y^2)
        - Li3(e^-y)/(8 y^3).
    """
    cc = pair.chi1 * pair.chi2
    if cc == 0.0:
        return 0.0
    numerics = DEFAULT_NUMERICS if numerics is None else numerics
    s, w = _pair_distances(pair, numerics.planar_order)
    y = 2.0 * units.gamma * T * s
    with np.errstate(under="ignore"):
        bracket = (-1.0 / np.expm1(y)
                   + polylog_exp(1, y) / (2.0 * y)
                   + polylog_exp(2, y) / (16.0 * y * y)
                   - polylog_exp(3, y) / (8.0 * y ** 3))
    return -cc * _PREF * math.fsum(w * bracket)


def kernel_derivative_check(l=1, s=2.0, T=1.0, units=NATURAL_UNITS, h=1e-5):
    """|d/dT K0^2(gamma l T s) + 2 gamma l s K0 K1| by central differences."""
    g = units.gamma

    def f(t):
        return bessel_k01(g * l * t * s)[0] ** 2

    fd = (f(T + h) - f(T - h)) / (2 * h)
    k0, k1 = bessel_k01(g * l * T * s)
    return abs(fd + 2 * g * l * s * k0 * k1)


def thermo_2d(pair, T, units=NATURAL_UNITS, numerics=None):
    kk_meta = _moments(pair, T, units, numerics)
    point = ThermoPoint(T, 0.0, free_energy_2d(pair, T, units, numerics),
                        entropy_2d(pair, T, units, numerics),
                        internal_energy_2d(pair, T, units, numerics), None,
                        {"terms_used": kk_meta[2], "tail_bound": kk_meta[3]})
    return point
