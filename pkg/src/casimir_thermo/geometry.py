"""Two-body geometries and the two-sphere angular moments P_p."""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

P_MIN = -7
P_MAX = 9


@dataclass(frozen=True)
class RibbonPair:
    """Two homogeneous intervals [a, b] and [c, d] on a line.

    ``chi1`` fills [a, b], ``chi2`` fills [c, d].
    """

    a: float
    b: float
    c: float
    d: float
    chi1: float = 1.0
    chi2: float = 1.0

    def __post_init__(self):
        if not (self.a <= self.b < self.c <= self.d):
            raise ValueError("ribbons must satisfy a <= b < c <= d")
        if self.chi1 < 0 or self.chi2 < 0:
            raise ValueError("susceptibilities must be non-negative")

    @classmethod
    def from_widths(cls, left_width, gap, right_width, chi1=1.0, chi2=1.0,
                    origin=0.0):
        a = origin
        b = a + left_width
        c = b + gap
        return cls(a, b, c, c + right_width, chi1, chi2)

    @property
    def r1(self):
        return 0.5 * (self.a + self.b)

    @property
    def r2(self):
        return 0.5 * (self.c + self.d)

    @property
    def half_width_left(self):
        """r'' = (b - a) / 2."""
        return 0.5 * (self.b - self.a)

    @property
    def half_width_right(self):
        """r' = (d - c) / 2."""
        return 0.5 * (self.d - self.c)

    @property
    def r(self):
        return self.r2 - self.r1

    @property
    def gap(self):
        return self.c - self.b

    def shifted(self, dr):
        """Move the right ribbon by dr, keeping both widths."""
        return RibbonPair(self.a, self.b, self.c + dr, self.d + dr,
                          self.chi1, self.chi2)

    def separations(self):
        """Edge-to-edge separations with the sign they carry in the
        interaction integral: +(c-b), -(d-b), -(c-a), +(d-a)."""
        a, b, c, d = self.a, self.b, self.c, self.d
        return ((c - b, 1.0), (d - b, -1.0), (c - a, -1.0), (d - a, 1.0))


@dataclass(frozen=True)
class SpherePair:
    """Two spherical shells with radii a and b, centres a distance R apart."""

    radius_a: float
    radius_b: float
    R: float
    chi1: float = 1.0
    chi2: float = 1.0

    def __post_init__(self):
        if not (self.radius_a > 0 and self.radius_b > 0):
            raise ValueError("radii must be positive")
        if not self.R > self.radius_a + self.radius_b:
            raise ValueError("spheres overlap: need R > a + b")

    @property
    def a_hat(self):
        return self.radius_a / self.R

    @property
    def b_hat(self):
        return self.radius_b / self.R

    @property
    def gap(self):
        return self.R - self.radius_a - self.radius_b

    def with_R(self, R):
        return SpherePair(self.radius_a, self.radius_b, R, self.chi1, self.chi2)


def sphere_point_distance(pair, theta, phi, theta_p, phi_p):
    """Distance between a point on sphere 1 and a point on sphere 2.

    Both spheres use spherical angles about their own centre with the
    polar axis along the line of centres (sphere 2 sits at +R on it).
    """
    a, b, R = pair.radius_a, pair.radius_b, pair.R
    cos_g = (np.cos(theta) * np.cos(theta_p)
             + np.sin(theta) * np.sin(theta_p) * np.cos(phi - phi_p))
    d2 = R * R + a * a + b * b - 2 * a * b * cos_g \
        - 2 * R * (a * np.cos(theta) - b * np.cos(theta_p))
    return np.sqrt(np.maximum(d2, 0.0))


def _check_hats(a_hat, b_hat):
    if not (0 < a_hat < 1 and 0 < b_hat < 1):
        raise ValueError("reduced radii must lie in (0, 1)")
    if not a_hat + b_hat < 1:
        raise ValueError("need a_hat + b_hat < 1")


def _log_ratio(num, den):
    return math.log(num / den)


def p_factor_hat(p, a_hat, b_hat):
    """P_p for reduced radii; see :func:`p_factor`."""
    if int(p) != p or not P_MIN <= p <= P_MAX:
        raise ValueError(f"p must be an integer in [{P_MIN}, {P_MAX}]")
    p = int(p)
    _check_hats(a_hat, b_hat)
    x, y = a_hat, b_hat
    if p == -1:
        return 1.0
    if p == -3:
        return -_log_ratio(1 - (x + y) ** 2, 1 - (x - y) ** 2) / (4 * x * y)
    if p == -2:
        return (_log_ratio(1 - (x + y) ** 2, 1 - (x - y) ** 2)
                + x * _log_ratio((y + 1) ** 2 - x * x, (y - 1) ** 2 - x * x)
                + y * _log_ratio((x + 1) ** 2 - y * y, (x - 1) ** 2 - y * y)
                ) / (4 * x * y)
    n = p + 3
    bracket = ((1 + x + y) ** n + (1 - x - y) ** n
               - (1 - x + y) ** n - (1 + x - y) ** n)
    return bracket / (4 * x * y * (p + 2) * (p + 3))


def p_factor(p, pair):
    """Two-sphere angular moment P_p(a/R, b/R).

    Defined by ``int dOmega int dOmega' |x - x'|^p = (4 pi)^2 R^p P_p``,
    i.e. P_p is the surface-averaged p-th power of the point separation in
    units of R. P_{-1} is exactly 1. P_{-2} and P_{-3} have logarithmic
    forms; every other order uses the polynomial form, which is the same
    exact average continued to negative p.
    """
    return p_factor_hat(p, pair.a_hat, pair.b_hat)


def p_factor_recursion_check(p, pair, h=None):
    """Residual of P_{p-1} = R^-p/(1+p) d/dR [R^(p+1) P_p] at fixed radii.

    The R-derivative is a Richardson-extrapolated central difference.
    """
    if p == -1:
        raise ValueError("recursion is singular at p = -1")
    R = pair.R
    h = R * 1e-3 if h is None else h
    a, b = pair.radius_a, pair.radius_b

    def g(rr):
        return rr ** (p + 1) * p_factor_hat(p, a / rr, b / rr)

    d1 = (g(R + h) - g(R - h)) / (2 * h)
    d2 = (g(R + h / 2) - g(R - h / 2)) / h
    deriv = (4 * d2 - d1) / 3
    rhs = R ** (-p) / (1 + p) * deriv
    return abs(p_factor(p - 1, pair) - rhs)


@lru_cache(maxsize=32)
def _gauss_legendre(n):
    return np.polynomial.legendre.leggauss(n)


def gauss_legendre(n, lo, hi):
    """Gauss-Legendre nodes and weights on [lo, hi]."""
    x, w = _gauss_legendre(n)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def sphere_distance_density(pair, order=48):
    """Nodes s and weights w with ``sum w f(s)`` = surface average of f(|x-x'|).

    Averaging over sphere a at fixed distance t from its centre gives
    (1/2at) int_{t-a}^{t+a} s f(s) ds, and t is distributed on sphere b with
    density t/(2bR). The result is a one-dimensional integral with a
    piecewise-linear weight, integrated panel by panel with Gauss-Legendre.
    """
    a, b, R = pair.radius_a, pair.radius_b, pair.R
    lo_t, hi_t = R - b, R + b
    kinks = sorted({R - a - b, R - abs(a - b), R + abs(a - b), R + a + b})
    nodes, weights = [], []
    for lo, hi in zip(kinks[:-1], kinks[1:]):
        if hi <= lo:
            continue
        s, w = gauss_legendre(order, lo, hi)
        # length of {t in [R-b, R+b] : |s - t| <= a}
        length = np.minimum(s + a, hi_t) - np.maximum(s - a, lo_t)
        nodes.append(s)
        weights.append(w * s * np.maximum(length, 0.0) / (4 * a * b * R))
    return np.concatenate(nodes), np.concatenate(weights)


def surface_weight(pair):
    """chi1 chi2 a^2 b^2 (4 pi)^2: converts a surface average into the
    double volume integral for shell susceptibilities chi delta(r - a)."""
    return (pair.chi1 * pair.chi2 * pair.radius_a ** 2 * pair.radius_b ** 2
            * (4 * math.pi) ** 2)
