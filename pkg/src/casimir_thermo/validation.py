"""The shipped validation suite: closed forms and printed expressions
against the brute-force oracles.

Each entry is a :class:`~casimir_thermo.oracle.ValidationCase`. Printed
expressions that disagree with the defining sums are registered with
``expected_deviation=True`` so they show up as documented deviations
rather than failures.
"""

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.polynomial import Chebyshev

from . import em3d, geometry, oracle, scalar1d, scalar2d, scalar3d
from .oracle import FieldConfig, OracleValue, ValidationCase
from .scenarios import BUILTIN, fig4
from .thermo import NATURAL_UNITS, NumericsPolicy

RNG_SEED = 12345


def _c(scenario, quantity, closed, orc, **kw):
    return ValidationCase(scenario, quantity, closed, orc, **kw)


@lru_cache(maxsize=None)
def _thermo(field, geo, T):
    return oracle.oracle_thermo(FieldConfig(field, geo), T)


@lru_cache(maxsize=None)
def _ribbon_oracle(geo, T):
    return oracle.oracle_ribbon_free_energy(geo, T)


def ribbon_cases():
    out = []
    for name in ("fig1-blue", "fig2-orange", "fig2-green"):
        geo = BUILTIN[name].geometry
        for T in (0.01, 0.1, 1.0, 10.0):
            tag = f"{name}@T={T:g}"
            out.append(_c(tag, "E_self", lambda g=geo, t=T: scalar1d.free_energy_1d(g, t)[0],
                          lambda g=geo, t=T: _ribbon_oracle(g, t)[0]))
            out.append(_c(tag, "E_int", lambda g=geo, t=T: scalar1d.free_energy_1d(g, t)[1],
                          lambda g=geo, t=T: _ribbon_oracle(g, t)[1], abs_floor=1e-300))
        for T in (0.1, 1.0):
            tag = f"{name}@T={T:g}"
            th = lambda g=geo, t=T: _thermo("scalar1d", g, t)
            out += [
                _c(tag, "S", lambda g=geo, t=T: scalar1d.entropy_1d(g, t),
                   lambda th=th: th().S, rel_tol=1e-4, abs_floor=1e-9),
                _c(tag, "U", lambda g=geo, t=T: scalar1d.internal_energy_1d(g, t),
                   lambda th=th: th().U, rel_tol=1e-4, abs_floor=1e-9),
                _c(tag, "F", lambda g=geo, t=T: scalar1d.force_1d(g, t),
                   lambda th=th: th().F, rel_tol=1e-4, abs_floor=1e-9),
                _c(tag, "S_printed", lambda g=geo, t=T: scalar1d.entropy_1d_printed(g, t),
                   lambda th=th: th().S, rel_tol=1e-4, expected_deviation=True,
                   note="printed entropy: Li orders one too low and no edge terms"),
                _c(tag, "F_printed", lambda g=geo, t=T: scalar1d.force_1d_printed(g, t),
                   lambda th=th: th().F, rel_tol=1e-4, expected_deviation=True,
                   note="printed force: Log in place of Li_3"),
                _c(tag, "U_printed", lambda g=geo, t=T: scalar1d.internal_energy_1d_printed(g, t),
                   lambda th=th: th().U, rel_tol=1e-4, expected_deviation=True,
                   note="printed internal energy: sign and bulk-term errors"),
            ]
    return out


def scalar3d_cases():
    out = []
    rng = np.random.default_rng(RNG_SEED)
    for i in range(10):
        s = float(rng.uniform(0.2, 5.0))
        T = float(10 ** rng.uniform(-2, 1))
        out.append(_c(f"point3d#{i}", "E_kernel",
                      lambda s=s, T=T: scalar3d.free_energy_3d_kernel(s, T),
                      lambda s=s, T=T: oracle.oracle_point_pair_3d(s, T), rel_tol=1e-10))
    for name in ("fig3-blue", "fig3-red"):
        geo = BUILTIN[name].geometry
        for T in (0.001, 0.1, 1.0):
            out.append(_c(f"{name}@T={T:g}", "E",
                          lambda g=geo, t=T: scalar3d.free_energy_spheres_3d(g, t),
                          lambda g=geo, t=T: oracle.oracle_sphere_free_energy_3d(g, t)))
        T = 0.1
        th = lambda g=geo: _thermo("scalar3d", g, 0.1)
        tag = f"{name}@T={T:g}"
        out += [
            _c(tag, "S", lambda g=geo: scalar3d.entropy_spheres_3d(g, 0.1),
               lambda th=th: th().S, rel_tol=1e-4, abs_floor=1e-9),
            _c(tag, "U", lambda g=geo: scalar3d.internal_energy_spheres_3d(g, 0.1),
               lambda th=th: th().U, rel_tol=1e-4, abs_floor=1e-9),
            _c(tag, "F", lambda g=geo: scalar3d.force_spheres_3d(g, 0.1),
               lambda th=th: th().F, rel_tol=1e-4, abs_floor=1e-9),
            _c(tag, "S_series_printed",
               lambda g=geo: scalar3d.entropy_spheres_3d_series(g, 0.1, form="printed"),
               lambda th=th: th().S, rel_tol=1e-3, expected_deviation=True,
               note="printed two-sphere series: opposite sign, leading 1/(gamma T) term, no a^2 b^2"),
        ]
        # exact low-T series inside its regime gamma T gap <= 0.3
        t_ok = 0.3 / (2 * math.pi * geo.gap)
        out.append(_c(f"{name}@T={t_ok:.4g}", "S_series",
                      lambda g=geo, t=t_ok: scalar3d.entropy_spheres_3d_series(g, t, n_terms=4),
                      lambda g=geo, t=t_ok: scalar3d.entropy_spheres_3d(g, t), rel_tol=1e-3))
    s, T = 2.0, 0.5
    th_kernel = lambda: -_fd(lambda t: oracle.oracle_point_pair_3d(s, t).value, T)
    out += [
        _c("point3d@s=2,T=0.5", "S_kernel", lambda: scalar3d.entropy_3d_kernel(s, T),
           th_kernel, rel_tol=1e-4),
        _c("point3d@s=2,T=0.5", "S_kernel_printed",
           lambda: scalar3d.entropy_3d_kernel_printed(s, T), th_kernel, rel_tol=1e-4,
           expected_deviation=True, note="printed kernel: second term has the wrong sign"),
    ]
    w = 0.1
    T_w = w / (2 * math.pi * s)
    out.append(_c(f"point3d@gamma*T*s={w}", "S_lowT_printed",
                  lambda: scalar3d.entropy_3d_lowT_expansion(s, T_w, form="printed"),
                  lambda: scalar3d.entropy_3d_kernel(s, T_w), rel_tol=1e-6,
                  expected_deviation=True, note="printed expansion series of the printed kernel"))
    out.append(_c(f"point3d@gamma*T*s={w}", "S_lowT",
                  lambda: scalar3d.entropy_3d_lowT_expansion(s, T_w),
                  lambda: scalar3d.entropy_3d_kernel(s, T_w), rel_tol=1e-6))
    return out


def _fd(f, T, rel=1e-4):
    h = rel * T
    d1 = (f(T + h) - f(T - h)) / (2 * h)
    d2 = (f(T + h / 2) - f(T - h / 2)) / h
    return (4 * d2 - d1) / 3


@lru_cache(maxsize=None)
def fitted_em_coefficients(n_nodes=60, degree=16, u_max=1.0):
    """Low-T series coefficients of the EM point-pair free energy, fitted
    to the oracle.

    With s = 1 and u = gamma T, ``u * (-E/T) = sum_k c_k u^(k+1)``; a
    Chebyshev least-squares fit on [0.02, u_max] is converted to monomials.
    The spread between degree and degree - 2 fits is the uncertainty.
    """
    g = NATURAL_UNITS.gamma
    k = np.arange(n_nodes)
    u = 0.02 + 0.5 * (u_max - 0.02) * (1 - np.cos(np.pi * (k + 0.5) / n_nodes))
    y = np.array([-v * oracle.oracle_point_pair_em(1.0, v / g).value / (v / g) for v in u])

    def fit(deg):
        return Chebyshev.fit(u, y, deg).convert(kind=np.polynomial.Polynomial,
                                                domain=[-1, 1], window=[-1, 1]).coef

    hi, lo = fit(degree), fit(degree - 2)
    return {p - 1: (float(hi[p]), float(abs(hi[p] - lo[p]))) for p in range(9)}


def em_cases(quick=False):
    out = []
    rng = np.random.default_rng(RNG_SEED + 1)
    for i in range(20):
        nu = float(rng.uniform(0.0, 3.0))
        r = rng.normal(size=3)
        r *= rng.uniform(0.3, 4.0) / np.linalg.norm(r)
        out.append(_c(f"dyadic#{i}", "h", lambda nu=nu, r=r: em3d.em_kernel_h(nu, float(np.linalg.norm(r))),
                      lambda nu=nu, r=r: float(oracle.dyadic_trace(nu, r)), rel_tol=1e-12))
    for i in range(5):
        s = float(rng.uniform(0.5, 5.0))
        T = float(10 ** rng.uniform(-2, 0.5))
        out.append(_c(f"point-em#{i}", "E_kernel",
                      lambda s=s, T=T: em3d.em_free_energy_kernel(s, T),
                      lambda s=s, T=T: oracle.oracle_point_pair_em(s, T)))
    geo = fig4(1.0).geometry
    for Z in (0.1, 0.5, 5.0):
        T = em3d.z_to_temperature(Z, geo)
        out.append(_c(f"fig4@Z={Z:g}", "E", lambda t=T: em3d.em_free_energy(geo, t),
                      lambda t=T: oracle.oracle_em_free_energy(geo, t)))
    Z = 0.5
    T = em3d.z_to_temperature(Z, geo)
    th = lambda: _thermo("em", geo, T)
    tag = f"fig4@Z={Z:g}"
    out += [
        _c(tag, "S", lambda: em3d.em_entropy(geo, T), lambda: th().S, rel_tol=1e-4, abs_floor=1e-9),
        _c(tag, "U", lambda: em3d.em_internal_energy(geo, T), lambda: th().U, rel_tol=1e-4,
           abs_floor=1e-9),
        _c(tag, "F", lambda: em3d.em_force(geo, T), lambda: th().F, rel_tol=1e-4, abs_floor=1e-12),
        _c(tag, "E_series_printed", lambda: em3d.em_free_energy(geo, T, method="series"),
           lambda: oracle.oracle_em_free_energy(geo, T), rel_tol=1e-3, expected_deviation=True,
           note="printed series: 55/(gamma T s^7) term and no 1/(8 pi^2)"),
        _c(tag, "S_series_printed", lambda: em3d.em_entropy(geo, T, method="series"),
           lambda: th().S, rel_tol=1e-3, expected_deviation=True,
           note="printed two-sphere series: overall sign, no 1/(8 pi^2), no a^2 b^2"),
        _c(tag, "U_series_printed", lambda: em3d.em_internal_energy(geo, T, method="series"),
           lambda: th().U, rel_tol=1e-3, expected_deviation=True,
           note="printed series: overall sign and 55 term"),
        _c(tag, "S_series_exact", lambda: em3d.em_entropy(geo, T, method="exact-series"),
           lambda: th().S, rel_tol=1e-4, abs_floor=1e-12),
    ]
    # every printed E coefficient against the oracle fit
    exact = em3d.exact_series_coefficients("E", 6)
    for k, printed in em3d.PRINTED_E_SERIES.items():
        def orc(k=k):
            v, unc = fitted_em_coefficients()[k]
            return OracleValue(v, 0.0, 0, stderr=max(unc, 1e-12))
        pv = float(printed)
        ev = exact.get(k, 0.0)
        note = (f"printed {printed}; exact {ev:.6g} = "
                f"{Fraction(ev * 8 * math.pi ** 2).limit_denominator(100000)}/(8 pi^2)")
        out.append(_c("em-series", f"E_coeff_k={k}", lambda pv=pv: pv, orc, sigma=3.0,
                      expected_deviation=True, note=note))
    # printed S and U against term-by-term derivatives of the printed E
    for k, c in em3d.PRINTED_S_SERIES.items():
        derived = (k + 1) * em3d.PRINTED_E_SERIES.get(k, 0)
        out.append(_c("em-series", f"S_coeff_k={k}", lambda c=c: float(c),
                      lambda d=derived: -float(d), rel_tol=1e-12, expected_deviation=True,
                      note="printed S vs -dE/dT of printed E, term by term"))
    for k, c in em3d.PRINTED_U_SERIES.items():
        derived = k * em3d.PRINTED_E_SERIES.get(k, 0)
        out.append(_c("em-series", f"U_coeff_k={k}", lambda c=c: float(c),
                      lambda d=derived: float(d), rel_tol=1e-12, expected_deviation=True,
                      note="printed U vs -T^2 d(E/T)/dT of printed E, term by term"))
    return out


def planar_cases(quick=False):
    geo = BUILTIN["disk2d"].geometry
    samples = 1_000_000 if quick else 10_000_000
    out = [
        _c("disk2d@T=1", "E", lambda: scalar2d.free_energy_2d(geo, 1.0),
           lambda: oracle.oracle_planar_free_energy(geo, 1.0, samples=samples), sigma=3.0,
           note=f"Monte-Carlo, {samples} samples"),
    ]
    for T in (0.2, 0.5):
        fd = lambda t=T: -_fd(lambda x: scalar2d.free_energy_2d(geo, x), t)
        out += [
            _c(f"disk2d@T={T:g}", "S", lambda t=T: scalar2d.entropy_2d(geo, t), fd,
               rel_tol=1e-4, abs_floor=1e-9),
            _c(f"disk2d@T={T:g}", "S_printed", lambda t=T: scalar2d.entropy_2d_printed(geo, t),
               fd, rel_tol=1e-4, expected_deviation=True, note="printed overall sign reversed"),
            _c(f"disk2d@T={T:g}", "S_asymptotic",
               lambda t=T: scalar2d.entropy_2d_asymptotic(geo, t), fd, rel_tol=1e-2,
               expected_deviation=True,
               note="printed asymptotic form, exponents negated to make it real"),
        ]
    return out


def p_factor_cases():
    out = []
    rng = np.random.default_rng(RNG_SEED + 2)
    ps = (-7, -6, -5, -4, -3, -2, 0, 1, 2, 3)
    for i in range(10):
        ah = float(rng.uniform(0.02, 0.45))
        bh = float(rng.uniform(0.02, 0.9 - ah))
        pair = geometry.SpherePair(ah, bh, 1.0)
        p = ps[i]
        out.append(_c(f"P_p#{i}(a={ah:.3f},b={bh:.3f})", f"P_{p}",
                      lambda p=p, pr=pair: geometry.p_factor(p, pr),
                      lambda p=p, pr=pair: oracle.oracle_p_factor(p, pr, 64)))
    for p, ah, bh in ((0, 0.1, 0.15), (2, 0.05, 0.05), (-2, 0.1, 0.2), (1, 0.1, 0.2),
                      (3, 0.1, 0.2)):
        pair = geometry.SpherePair(ah, bh, 1.0)
        out.append(_c(f"recursion(a={ah},b={bh})", f"P_{p - 1} from P_{p}",
                      lambda p=p, pr=pair: geometry.p_factor_recursion_check(p, pr),
                      lambda: 0.0, abs_floor=1e-6))
    return out


def default_cases(quick=False):
    return (ribbon_cases() + scalar3d_cases() + em_cases(quick)
            + planar_cases(quick) + p_factor_cases())
