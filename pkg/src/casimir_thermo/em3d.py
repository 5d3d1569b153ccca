"""Electromagnetic field: dyadic kernel, closed-form sums and two spheres.

With k = nu/c the trace G0_ij(r) G0_ji(-r) of the free dyadic Green
function at imaginary frequency is

    h(nu, s) = exp(-2 k s) / (8 pi^2) [k^4/s^2 + 2k^3/s^3 + 5k^2/s^4
                                        + 6k/s^5 + 3/s^6],

and the second-order free energy is E = -T sum_{l>=0} int int chi chi h.
Writing x = l u with u = gamma T s, every l-sum is a combination of
sum_l l^n exp(-2 l u) = Li_{-n}(exp(-2u)), which is rational in exp(-2u).
"""

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .geometry import p_factor, sphere_distance_density, surface_weight
from .specfun import bernoulli, polylog_negative_exp
from .thermo import NATURAL_UNITS, ThermoPoint

_PREF = 1.0 / (8.0 * math.pi ** 2)

# polynomials in x = l u multiplying exp(-2x); index = power of x
_E_POLY = (3, 6, 5, 2, 1)
_S_POLY = (3, 6, 3, -2, 1, -2)
_U_POLY = (0, 0, -2, -4, 0, -2)


def em_kernel_h(nu, s, units=NATURAL_UNITS):
    """Trace of the product of two free dyadic Green functions.

    ``nu`` is the imaginary frequency in units where c = 1 (a wavenumber);
    at nu = 0 only the static 3/s^6 term survives. The delta-function
    contact term never contributes between disjoint bodies.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0.0):
        raise ValueError("separation must be positive")
    k = np.asarray(nu, dtype=float)
    if np.any(k < 0.0):
        raise ValueError("frequency must be non-negative")
    ks = k * s
    poly = (((ks + 2.0) * ks + 5.0) * ks + 6.0) * ks + 3.0
    return _PREF * np.exp(-2.0 * ks) * poly / s ** 6


def _poly_sum(coeffs, u):
    """sum_{l>=0} exp(-2 l u) sum_n c_n (l u)^n, in closed form."""
    x = 2.0 * u
    total = coeffs[0] / -np.expm1(-x)
    for n, c in enumerate(coeffs[1:], start=1):
        if c:
            total = total + c * u ** n * polylog_negative_exp(n, x)
    return total


def _check(s, T):
    if np.any(np.asarray(s) <= 0.0):
        raise ValueError("separation must be positive")
    if not T > 0.0:
        raise ValueError("temperature must be positive")


def em_free_energy_kernel(s, T, units=NATURAL_UNITS):
    """-T sum_{l>=0} h(gamma l T, s) for one pair of points."""
    _check(s, T)
    s = np.asarray(s, dtype=float)
    u = units.gamma * T * s
    return -T * _PREF / s ** 6 * _poly_sum(_E_POLY, u)


def em_entropy_kernel(s, T, units=NATURAL_UNITS):
    _check(s, T)
    s = np.asarray(s, dtype=float)
    u = units.gamma * T * s
    return _PREF / s ** 6 * _poly_sum(_S_POLY, u)


def em_internal_energy_kernel(s, T, units=NATURAL_UNITS):
    _check(s, T)
    s = np.asarray(s, dtype=float)
    u = units.gamma * T * s
    return T * _PREF / s ** 6 * _poly_sum(_U_POLY, u)


# ---------------------------------------------------------------------------
# Low-temperature series
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def em_free_energy_series_coefficients(n_terms=4):
    """Coefficients e_k of sum_{l>=0} g(l u) ~ sum_k e_k u^k as u -> 0.

    g(x) = exp(-2x) (x^4 + 2x^3 + 5x^2 + 6x + 3); Euler-Maclaurin gives
    e_{-1} = int_0^inf g, e_0 = g(0)/2 and
    e_{2j-1} = -B_{2j}/(2j)! g^{(2j-1)}(0). Returned as ``(k, Fraction)``
    pairs with zero coefficients skipped. The free energy of a point pair
    is then ``-T/(8 pi^2) sum_k e_k (gamma T)^k s^(k-6)``.
    """
    poly = [Fraction(c) for c in _E_POLY]

    def deriv_at_zero(m):
        # g^{(m)}(0) = sum_j C(m, j) P^{(j)}(0) (-2)^(m-j)
        total = Fraction(0)
        for j, c in enumerate(poly):
            if j <= m:
                total += (math.comb(m, j) * c * math.factorial(j)
                          * Fraction(-2) ** (m - j))
        return total

    integral = sum(c * Fraction(math.factorial(j), 2 ** (j + 1))
                   for j, c in enumerate(poly))
    out = [(-1, integral), (0, poly[0] / 2)]
    j = 1
    while len(out) < n_terms:
        c = -bernoulli(2 * j) / math.factorial(2 * j) * deriv_at_zero(2 * j - 1)
        if c != 0:
            out.append((2 * j - 1, c))
        j += 1
    return tuple(out[:n_terms])


# Printed series, each as {power k of gamma T: coefficient} of the bracket
# multiplying s^(k - 6); E and S carry an overall -T and -1, U carries +1
# with the power of T one higher than the power of gamma.
PRINTED_E_SERIES = {-1: Fraction(55), 0: Fraction(3, 2), 1: Fraction(-1, 4),
                    3: Fraction(-1, 240), 5: Fraction(73, 30240),
                    7: Fraction(-197, 352800)}
PRINTED_S_SERIES = {0: Fraction(3, 2), 1: Fraction(-1, 2),
                    3: Fraction(-1, 60), 5: Fraction(73, 5040),
                    7: Fraction(-197, 50400)}
PRINTED_U_SERIES = {-1: Fraction(55), 1: Fraction(1, 4), 3: Fraction(1, 80),
                    5: Fraction(-73, 6048)}


def exact_series_coefficients(quantity, n_terms=5):
    """Exact counterparts of the printed series, in the same normalisation.

    ``E = -T sum c_k (gamma T)^k s^(k-6)``, ``S = -sum c_k ...`` and
    ``U = sum c_k gamma^k T^(k+1) s^(k-6)``; 1/(8 pi^2) is folded in, so
    the values are floats.
    """
    e = em_free_energy_series_coefficients(n_terms)
    out = {}
    for k, c in e:
        if quantity == "E":
            out[k] = float(c) * _PREF
        elif quantity == "S":
            if k + 1 != 0:
                out[k] = -float(c) * (k + 1) * _PREF
        elif quantity == "U":
            if k != 0:
                out[k] = float(c) * k * _PREF
        else:
            raise ValueError(f"unknown quantity {quantity!r}")
    return out


def _series_point(coeffs, quantity, s, T, g):
    total = 0.0
    for k, c in coeffs.items():
        total += float(c) * g ** k * T ** k * s ** (k - 6)
    if quantity == "E":
        return -T * total
    if quantity == "S":
        return -total
    return T * total


def em_kernel_series(s, T, units=NATURAL_UNITS, quantity="S", form="exact",
                     n_terms=5):
    """Point-pair series for E, S or U, either exact or as printed."""
    coeffs = _series_coeffs(quantity, form, n_terms)
    s = np.asarray(s, dtype=float)
    return _series_point(coeffs, quantity, s, T, units.gamma)


def _series_coeffs(quantity, form, n_terms):
    if form == "exact":
        return exact_series_coefficients(quantity, n_terms)
    if form == "printed":
        return {"E": PRINTED_E_SERIES, "S": PRINTED_S_SERIES,
                "U": PRINTED_U_SERIES}[quantity]
    raise ValueError(f"unknown form {form!r}")


def _sphere_series(pair, T, g, quantity, form, n_terms):
    coeffs = _series_coeffs(quantity, form, n_terms)
    total = 0.0
    for k, c in coeffs.items():
        p = k - 6
        total += float(c) * (g * T) ** k * pair.R ** p * p_factor(p, pair)
    total *= surface_weight(pair)
    if quantity == "E":
        return -T * total
    if quantity == "S":
        return -total
    return T * total


def em_entropy_two_sphere_printed(pair, T, units=NATURAL_UNITS):
    """The printed natural-unit two-sphere entropy series (no a^2 b^2)."""
    pi_ = units.gamma / 2.0
    R = pair.R
    bracket = (1.5 * R ** -6 * p_factor(-6, pair)
               - pi_ * R ** -5 * p_factor(-5, pair) * T
               - 2.0 / 15.0 * pi_ ** 3 * R ** -3 * p_factor(-3, pair) * T ** 3
               + 2.0 / 315.0 * pi_ ** 5 * R ** -1 * p_factor(-1, pair) * T ** 5
               - 0.5 * pi_ ** 7 * R * p_factor(1, pair) * T ** 7)
    return -pair.chi1 * pair.chi2 * (4 * math.pi) ** 2 * bracket


# ---------------------------------------------------------------------------
# Two spheres
# ---------------------------------------------------------------------------

METHODS = ("closed", "oracle", "series", "exact-series")


def _closed(kernel, pair, T, units, order):
    s, w = sphere_distance_density(pair, order)
    return surface_weight(pair) * float(np.dot(w, kernel(s, T, units)))


def em_free_energy(pair, T, units=NATURAL_UNITS, method="closed", order=48,
                   numerics=None):
    """Free energy of two spherical shells.

    ``closed``: resummed kernel averaged over both surfaces;
    ``oracle``: direct Matsubara sum of the dyadic contraction over an
    angular quadrature; ``series``: printed low-T series;
    ``exact-series``: Euler-Maclaurin series.
    """
    if method == "closed":
        return _closed(em_free_energy_kernel, pair, T, units, order)
    if method == "oracle":
        from . import oracle
        return oracle.oracle_em_free_energy(pair, T, units, numerics).value
    if method == "series":
        return _sphere_series(pair, T, units.gamma, "E", "printed", 0)
    if method == "exact-series":
        return _sphere_series(pair, T, units.gamma, "E", "exact", 5)
    raise ValueError(f"unknown method {method!r}")


def em_entropy(pair, T, units=NATURAL_UNITS, method="closed", order=48,
               numerics=None):
    """Entropy of two spherical shells; ``series`` is the printed
    two-sphere formula, ``oracle`` differentiates the oracle free energy."""
    if method == "closed":
        return _closed(em_entropy_kernel, pair, T, units, order)
    if method == "oracle":
        from . import oracle
        return oracle.oracle_em_thermo(pair, T, units, numerics).S
    if method == "series":
        return em_entropy_two_sphere_printed(pair, T, units)
    if method == "exact-series":
        return _sphere_series(pair, T, units.gamma, "S", "exact", 5)
    raise ValueError(f"unknown method {method!r}")


def em_internal_energy(pair, T, units=NATURAL_UNITS, method="closed",
                       order=48, numerics=None):
    if method == "closed":
        return _closed(em_internal_energy_kernel, pair, T, units, order)
    if method == "oracle":
        from . import oracle
        return oracle.oracle_em_thermo(pair, T, units, numerics).U
    if method == "series":
        return _sphere_series(pair, T, units.gamma, "U", "printed", 0)
    if method == "exact-series":
        return _sphere_series(pair, T, units.gamma, "U", "exact", 5)
    raise ValueError(f"unknown method {method!r}")


def em_force(pair, T, units=NATURAL_UNITS, order=48, h=None):
    """dE/dR of the closed-form free energy, by central differences."""
    h = 1e-4 * pair.gap if h is None else h

    def e(R):
        return em_free_energy(pair.with_R(R), T, units, "closed", order)

    R = pair.R
    d1 = (e(R + h) - e(R - h)) / (2 * h)
    d2 = (e(R + h / 2) - e(R - h / 2)) / h
    return (4 * d2 - d1) / 3


def em_thermo(pair, T, units=NATURAL_UNITS, order=48):
    return ThermoPoint(T, 0.0, em_free_energy(pair, T, units, "closed", order),
                       em_entropy(pair, T, units, "closed", order),
                       em_internal_energy(pair, T, units, "closed", order),
                       em_force(pair, T, units, order))


def z_to_temperature(Z, pair):
    """Fig. 4 axis: Z = 4 pi R T."""
    return Z / (4.0 * math.pi * pair.R)
