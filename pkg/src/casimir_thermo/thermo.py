"""Unit conventions, Matsubara summation and finite-difference thermodynamics."""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import constants

NATURAL = "natural"
SI_NM_K = "SI-nm-K"


class ConvergenceError(ArithmeticError):
    """A Matsubara sum or quadrature did not reach its tolerance."""


@dataclass(frozen=True)
class UnitSystem:
    """Unit convention; every formula depends on the units only through gamma.

    ``gamma = 2 pi k_B / (hbar c)`` is the thermal wavenumber per unit
    temperature. In natural units (hbar = c = k_B = 1) it is exactly 2 pi.
    In ``SI-nm-K`` mode lengths are in nm, temperatures in K and energies in
    units of k_B * K.
    """

    gamma: float
    mode: str = NATURAL

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise ValueError("gamma must be positive")
        if self.mode not in (NATURAL, SI_NM_K):
            raise ValueError(f"unknown unit mode {self.mode!r}")

    @classmethod
    def natural(cls):
        return cls(2.0 * math.pi, NATURAL)

    @classmethod
    def si_nm_k(cls):
        per_metre = 2.0 * math.pi * constants.k / (constants.hbar * constants.c)
        return cls(per_metre * 1e-9, SI_NM_K)

    @classmethod
    def from_mode(cls, mode):
        if mode == NATURAL:
            return cls.natural()
        if mode == SI_NM_K:
            return cls.si_nm_k()
        raise ValueError(f"unknown unit mode {mode!r}")


NATURAL_UNITS = UnitSystem.natural()


@dataclass(frozen=True)
class NumericsPolicy:
    """Truncation, quadrature and finite-difference settings."""

    l_max: int = 100_000
    matsubara_tol: float = 1e-15
    planar_order: int = 14
    sphere_order: int = 48
    angular_order: int = 20
    fd_rel_step: float = 1e-4
    rel_tol: float = 1e-4
    abs_floor: float = 1e-9


DEFAULT_NUMERICS = NumericsPolicy()


@dataclass(frozen=True)
class MatsubaraGrid:
    """Matsubara index range at temperature T; alpha_l = gamma * l * T."""

    T: float
    l_start: int = 1
    l_max: int = 100_000
    units: UnitSystem = NATURAL_UNITS

    def __post_init__(self):
        if self.l_start not in (0, 1):
            raise ValueError("l_start must be 0 or 1")
        if self.l_max < max(self.l_start, 1):
            raise ValueError("l_max must be >= 1 and >= l_start")
        if not self.T >= 0.0:
            raise ValueError("temperature must be non-negative")

    def alpha(self, l):
        return self.units.gamma * l * self.T


@dataclass
class SumResult:
    value: float
    tail_bound: float
    terms_used: int
    converged: bool = True


def matsubara_sum(summand, grid, tol=1e-15, rel=True):
    """Sum ``summand(l, alpha_l)`` over the Matsubara grid.

    Terms are accumulated in index order and reduced with ``math.fsum``
    (exactly rounded), so the result is independent of evaluation order.
    Summation stops once a geometric bound on the remaining tail is below
    ``tol`` (relative to the running sum if ``rel``), or at ``l_max``.

    The summand must eventually decrease monotonically in magnitude.

    Returns
    -------
    SumResult
        ``converged`` is False when ``l_max`` was reached first.
    """
    terms = []
    prev = None
    tail = math.inf
    for l in range(grid.l_start, grid.l_max + 1):
        t = float(summand(l, grid.alpha(l)))
        if not math.isfinite(t):
            raise ConvergenceError(f"non-finite Matsubara term at l={l}")
        terms.append(t)
        if t == 0.0:
            # magnitudes decrease monotonically, so the rest is zero too
            tail = 0.0
            break
        if prev is not None and prev != 0.0:
            ratio = abs(t / prev)
            if ratio < 1.0:
                tail = abs(t) * ratio / (1.0 - ratio)
                scale = abs(math.fsum(terms)) if rel else 1.0
                if tail <= tol * max(scale, np.finfo(float).tiny):
                    break
        prev = t
    else:
        return SumResult(math.fsum(terms), tail, len(terms), converged=False)
    return SumResult(math.fsum(terms), tail, len(terms), converged=True)


@dataclass
class Derivative:
    value: float
    error: float


def _check_step(T, h):
    if not h > 0.0:
        raise ValueError("finite-difference step must be positive")
    if h < 64.0 * np.finfo(float).eps * abs(T):
        raise ValueError("finite-difference step underflow")
    if T - h <= 0.0:
        raise ValueError("stencil reaches T <= 0")


def richardson_derivative(f, x, h):
    """Central difference at steps h and h/2, Richardson-extrapolated.

    Returns the extrapolated derivative and the magnitude of the
    extrapolation correction as an error estimate.
    """
    vals = [f(x + h), f(x - h), f(x + h / 2), f(x - h / 2)]
    if not all(math.isfinite(v) for v in vals):
        raise ArithmeticError("non-finite value in finite-difference stencil")
    d1 = (vals[0] - vals[1]) / (2.0 * h)
    d2 = (vals[2] - vals[3]) / h
    best = (4.0 * d2 - d1) / 3.0
    return Derivative(best, abs(best - d2))


def default_step(T, rel=1e-4):
    return abs(T) * rel


def entropy_from_free_energy(E, T, h=None):
    """S = -dE/dT by Richardson-extrapolated central differences."""
    h = default_step(T) if h is None else h
    _check_step(T, h)
    d = richardson_derivative(E, T, h)
    return Derivative(-d.value, d.error)


def internal_energy_from_free_energy(E, T, h=None):
    """U = -T^2 d/dT (E/T) by Richardson-extrapolated central differences."""
    h = default_step(T) if h is None else h
    _check_step(T, h)
    d = richardson_derivative(lambda t: E(t) / t, T, h)
    return Derivative(-T * T * d.value, T * T * d.error)


@dataclass(frozen=True)
class ThermoPoint:
    """Thermodynamic state at one temperature (k_B = 1).

    ``F`` is the derivative of the free energy with respect to the body
    separation, when the geometry has one.
    """

    T: float
    E_self: float
    E_interaction: float
    S: float
    U: float
    F: Optional[float] = None
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def E_total(self):
        return self.E_self + self.E_interaction

    def consistency_residual(self):
        """|U - (E + T S)|, which vanishes for an exact thermodynamic triple."""
        return abs(self.U - (self.E_total + self.T * self.S))


def close(a, b, rel, abs_floor=0.0):
    return abs(a - b) <= max(rel * max(abs(a), abs(b)), abs_floor)


def log_grid(lo, hi, n):
    return np.geomspace(lo, hi, n)

