"""(3+1)-dimensional scalar field: point-pair kernels and two spheres.

For frequency-independent susceptibilities the l-sum of the free energy is
geometric, so for a pair of points a distance s apart (y = 2 gamma T s)

    E(s) = -(T / 16 pi s^2) / (1 - exp(-y))
    S(s) =  (1 / 16 pi s^2) [1/(1 - e^-y) - y e^-y / (1 - e^-y)^2]
    U(s) = -(gamma T^2 / 8 pi s) e^-y / (1 - e^-y)^2

and S = -dE/dT, U = E + T S hold exactly. The entropy bracket equals
d/dy [y / (1 - e^-y)], whose Taylor coefficients are n B_n / n!.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .geometry import p_factor, sphere_distance_density, surface_weight
from .specfun import bernoulli
from .thermo import NATURAL_UNITS, ThermoPoint

_PREF = 1.0 / (16.0 * math.pi)


def _check(s, T):
    if np.any(np.asarray(s) <= 0.0):
        raise ValueError("separation must be positive")
    if not T > 0.0:
        raise ValueError("temperature must be positive")


def free_energy_3d_kernel(s, T, units=NATURAL_UNITS):
    _check(s, T)
    s = np.asarray(s, dtype=float)
    y = 2.0 * units.gamma * T * s
    return -_PREF * T / (s * s) / -np.expm1(-y)


def entropy_3d_kernel(s, T, units=NATURAL_UNITS):
    _check(s, T)
    s = np.asarray(s, dtype=float)
    y = 2.0 * units.gamma * T * s
    om = -np.expm1(-y)
    with np.errstate(under="ignore"):
        second = y * np.exp(-y) / (om * om)
    return _PREF / (s * s) * (1.0 / om - second)


def internal_energy_3d_kernel(s, T, units=NATURAL_UNITS):
    _check(s, T)
    s = np.asarray(s, dtype=float)
    y = 2.0 * units.gamma * T * s
    om = -np.expm1(-y)
    with np.errstate(under="ignore"):
        return -units.gamma * T * T / (8.0 * math.pi * s) * np.exp(-y) / (om * om)


def entropy_3d_kernel_printed(s, T, units=NATURAL_UNITS):
    """Entropy kernel with the sign of its second term as printed; it is
    not the temperature derivative of the free-energy kernel."""
    _check(s, T)
    s = np.asarray(s, dtype=float)
    y = 2.0 * units.gamma * T * s
    om = -np.expm1(-y)
    return -_PREF / (s * s) * (1.0 / om + y * np.exp(-y) / (om * om))


def internal_energy_3d_kernel_printed(s, T, units=NATURAL_UNITS):
    return -internal_energy_3d_kernel(s, T, units)


def lowT_series_terms(n_terms, form="exact"):
    """Leading coefficients of the entropy bracket in powers of w = gamma T s.

    Returns a list of ``(power, Fraction)``; the bracket is
    ``sum c w^power`` and the entropy kernel is that times 1/(16 pi s^2).
    ``form="printed"`` expands the printed kernel instead (leading 1/w).
    """
    out = []
    n = 0 if form == "printed" else 1
    while len(out) < n_terms:
        b = bernoulli(n)
        if n == 1:
            b = -b  # B_1^+ = +1/2
        if form == "printed":
            c = (2 - n) * b / math.factorial(n)
        elif form == "exact":
            c = n * b / math.factorial(n)
        else:
            raise ValueError(f"unknown form {form!r}")
        if c != 0:
            # y^(n-1) with y = 2w
            out.append((n - 1, c * Fraction(2) ** (n - 1)))
        n += 1
    return out


def entropy_3d_lowT_expansion(s, T, units=NATURAL_UNITS, n_terms=4,
                              form="exact"):
    """Partial sum of the low-temperature series of the entropy kernel.

    The series converges for 2 gamma T s < 2 pi; the caller is responsible
    for staying in the small-w regime where a few terms suffice.
    """
    _check(s, T)
    s = np.asarray(s, dtype=float)
    w = units.gamma * T * s
    total = np.zeros_like(w)
    for power, c in lowT_series_terms(n_terms, form):
        total = total + float(c) * w ** power
    return _PREF / (s * s) * total


# ---------------------------------------------------------------------------
# Two spheres
# ---------------------------------------------------------------------------

def _sphere_integral(kernel, pair, T, units, order):
    s, w = sphere_distance_density(pair, order)
    return surface_weight(pair) * float(np.dot(w, kernel(s, T, units)))


def free_energy_spheres_3d(pair, T, units=NATURAL_UNITS, order=48):
    return _sphere_integral(free_energy_3d_kernel, pair, T, units, order)


def entropy_spheres_3d(pair, T, units=NATURAL_UNITS, order=48):
    return _sphere_integral(entropy_3d_kernel, pair, T, units, order)


def internal_energy_spheres_3d(pair, T, units=NATURAL_UNITS, order=48):
    return _sphere_integral(internal_energy_3d_kernel, pair, T, units, order)


def force_spheres_3d(pair, T, units=NATURAL_UNITS, order=48, h=None):
    """dE/dR by a Richardson-extrapolated central difference in R."""
    h = 1e-4 * pair.gap if h is None else h

    def e(R):
        return free_energy_spheres_3d(pair.with_R(R), T, units, order)

    R = pair.R
    d1 = (e(R + h) - e(R - h)) / (2 * h)
    d2 = (e(R + h / 2) - e(R - h / 2)) / h
    return (4 * d2 - d1) / 3


def entropy_spheres_3d_series(pair, T, units=NATURAL_UNITS, n_terms=4,
                              form="exact"):
    """Low-temperature series for the two-sphere entropy via P_p moments.

    Each term c w^k / s^2 integrates to c (gamma T)^k R^(k-2) P_(k-2).
    ``form="printed"`` reproduces the printed series, which carries no
    a^2 b^2 surface Jacobian.
    """
    g = units.gamma
    total = 0.0
    for power, c in lowT_series_terms(n_terms, form):
        p = power - 2
        total += float(c) * (g * T) ** power * pair.R ** p * p_factor(p, pair)
    if form == "printed":
        weight = pair.chi1 * pair.chi2 * (4 * math.pi) ** 2
        return -_PREF * weight * total
    return _PREF * surface_weight(pair) * total


@dataclass(frozen=True)
class Scalar3DSphereResult:
    point: ThermoPoint
    S_series: float
    series_error: float
    expansion_terms: list = field(default_factory=list)


def two_sphere_entropy_3d(pair, T, units=NATURAL_UNITS, n_terms=4, order=48):
    """Quadrature-exact thermodynamics plus the low-T entropy series.

    ``series_error`` is the size of the first omitted series term.
    """
    E = free_energy_spheres_3d(pair, T, units, order)
    S = entropy_spheres_3d(pair, T, units, order)
    U = internal_energy_spheres_3d(pair, T, units, order)
    series = entropy_spheres_3d_series(pair, T, units, n_terms)
    next_term = (entropy_spheres_3d_series(pair, T, units, n_terms + 1)
                 - series)
    point = ThermoPoint(T, 0.0, E, S, U, force_spheres_3d(pair, T, units, order))
    return Scalar3DSphereResult(point, series, abs(next_term),
                                lowT_series_terms(n_terms))
