"""Brute-force reference values for every closed form in the package.

Everything here evaluates the defining sums literally: Matsubara terms are
accumulated one frequency at a time, spatial integrals are done by
quadrature in the original coordinates, and thermodynamic derivatives by
finite differences. The only shared arithmetic with the closed-form modules
is the Bessel function from :mod:`specfun`; geometry and unit objects are
used purely as parameter containers.

The second half of the module holds the validation plumbing: a case
registry, a batch runner and the tab-separated report writer.
"""

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.special import zeta as hurwitz_zeta

from .geometry import RibbonPair, SpherePair
from .specfun import bessel_k01
from .thermo import (DEFAULT_NUMERICS, NATURAL_UNITS, ConvergenceError,
                     NumericsPolicy, ThermoPoint)

_TINY = 1e-17


@dataclass
class OracleValue:
    value: float
    tail_bound: float
    terms_used: int
    converged: bool = True
    stderr: float = 0.0
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class FieldConfig:
    """What to evaluate: ``field`` is scalar1d, scalar2d, scalar3d or em."""

    field: str
    geometry: object
    units: object = NATURAL_UNITS
    mc_samples: int = 10_000_000
    seed: int = 20240611

    def __post_init__(self):
        if self.field not in ("scalar1d", "scalar2d", "scalar3d", "em"):
            raise ValueError(f"unknown field {self.field!r}")


# ---------------------------------------------------------------------------
# 1+1 dimensions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=16)
def _gl(n):
    return np.polynomial.legendre.leggauss(n)


def _interval_pair_integral(alpha, i1, i2, order=16):
    """int_{i1} dx int_{i2} dx' exp(-2 alpha |x - x'|).

    Rewritten in the difference variable u = x' - x with the overlap
    length as weight, then integrated by Gauss-Legendre on panels that
    follow both the weight's kinks and the exponential decay scale.
    """
    lo1, hi1 = i1
    lo2, hi2 = i2
    u_lo, u_hi = lo2 - hi1, hi2 - lo1
    kinks = {u_lo, u_hi, lo2 - lo1, hi2 - hi1}
    if u_lo < 0.0 < u_hi:
        kinks.add(0.0)
    kinks = sorted(k for k in kinks if u_lo <= k <= u_hi)
    scale = 1.0 / (2.0 * alpha)
    x, w = _gl(order)
    starts, halves, nears, dirs = [], [], [], []
    for p, q in zip(kinks[:-1], kinks[1:]):
        if q <= p:
            continue
        # grade from the end nearest u = 0, where the exponential peaks
        near, far = (p, q) if abs(p) <= abs(q) else (q, p)
        length = abs(far - near)
        direction = 1.0 if far > near else -1.0
        cuts = [0.0]
        step = 1.0
        while cuts[-1] < length and cuts[-1] < 48.0 * scale:
            nxt = min(cuts[-1] + step * scale, length)
            cuts.append(nxt)
            step = min(2.0 * step, 4.0)
        for c0, c1 in zip(cuts[:-1], cuts[1:]):
            starts.append(c0)
            halves.append(0.5 * (c1 - c0))
            nears.append(near)
            dirs.append(direction)
    if not starts:
        return 0.0
    half = np.array(halves)[:, None]
    d = np.array(starts)[:, None] + half * (x + 1.0)
    u = np.array(nears)[:, None] + np.array(dirs)[:, None] * d
    weight = np.maximum(np.minimum(hi1, hi2 - u) - np.maximum(lo1, lo2 - u), 0.0)
    with np.errstate(under="ignore"):
        panel = (half * w * weight * np.exp(-2.0 * alpha * np.abs(u))).sum(axis=1)
    return math.fsum(panel.tolist())


def _ribbon_summand(pair, alpha):
    """(self, cross) integrands of the l-th term, before the -T factor."""
    i1, i2 = (pair.a, pair.b), (pair.c, pair.d)
    norm = 1.0 / (2.0 * alpha) ** 2
    self_part = 0.0
    if pair.chi1 and pair.b > pair.a:
        self_part += pair.chi1 ** 2 * _interval_pair_integral(alpha, i1, i1)
    if pair.chi2 and pair.d > pair.c:
        self_part += pair.chi2 ** 2 * _interval_pair_integral(alpha, i2, i2)
    cross = 0.0
    if pair.chi1 * pair.chi2:
        cross = 2.0 * pair.chi1 * pair.chi2 * _interval_pair_integral(alpha, i1, i2)
    return self_part * norm, cross * norm


def oracle_ribbon_free_energy(pair, T, units=NATURAL_UNITS, numerics=None):
    """Self and interaction free energy of two ribbons by direct l-summation.

    Once every exponential factor is below 1e-18 the self summand is a
    polynomial in 1/l; its tail is then summed from a three-point fit in
    powers l^-3, l^-4, l^-5 using Hurwitz zeta values.

    Returns
    -------
    tuple of OracleValue
        ``(self, interaction)``.
    """
    numerics = DEFAULT_NUMERICS if numerics is None else numerics
    g = units.gamma
    lengths = [v for v in (pair.b - pair.a, pair.d - pair.c, pair.c - pair.b) if v > 0]
    l_exp = math.ceil(21.0 / (g * T * min(lengths)))
    n = max(64, 2 * l_exp)
    if n > _raised_l_max(numerics.l_max, g * T, pair.c - pair.b):
        raise ConvergenceError(
            f"1+1D oracle needs l = {n} > l_max = {numerics.l_max}")
    selfs, cross = [], []
    for l in range(1, n + 1):
        s, c = _ribbon_summand(pair, g * l * T)
        selfs.append(-T * s)
        cross.append(-T * c)
    # power-law tail of the self part from l = n/2, 3n/4, n
    tail = 0.0
    if any(selfs):
        ls = np.array([n // 2, (3 * n) // 4, n], dtype=float)
        vals = np.array([selfs[int(v) - 1] for v in ls])
        A = np.column_stack([ls ** -3, ls ** -4, ls ** -5])
        c3, c4, c5 = np.linalg.solve(A, vals)
        tail = (c3 * hurwitz_zeta(3, n + 1) + c4 * hurwitz_zeta(4, n + 1)
                + c5 * hurwitz_zeta(5, n + 1))
    fit_err = abs(c5 * hurwitz_zeta(5, n + 1)) if any(selfs) else 0.0
    e_self = OracleValue(math.fsum(selfs) + tail, fit_err, n,
                         meta={"tail": tail})
    e_cross = OracleValue(math.fsum(cross), abs(cross[-1]), n)
    return e_self, e_cross


# ---------------------------------------------------------------------------
# Sphere surfaces: angular quadrature in the original coordinates
# ---------------------------------------------------------------------------

def sphere_angular_nodes(pair, order):
    """Separations and weights for int dOmega int dOmega' f(|x - x'|).

    Nodes are Gauss-Legendre in cos(theta), cos(theta') and in the relative
    azimuth on [0, pi] (the integrand is even in it). Sphere 1 sits at the
    origin and sphere 2 at (0, 0, R). Weights sum to (4 pi)^2.
    """
    x, w = _gl(order)
    mu1, mu2 = x, x
    phi = 0.5 * math.pi * (x + 1.0)
    wphi = 0.5 * math.pi * w
    M1, M2, P = np.meshgrid(mu1, mu2, phi, indexing="ij")
    W = np.einsum("i,j,k->ijk", w, w, wphi) * 2.0 * 2.0 * math.pi
    a, b, R = pair.radius_a, pair.radius_b, pair.R
    s1 = np.sqrt(1.0 - M1 ** 2)
    s2 = np.sqrt(1.0 - M2 ** 2)
    p1 = np.stack([a * s1, np.zeros_like(s1), a * M1], axis=-1)
    p2 = np.stack([b * s2 * np.cos(P), b * s2 * np.sin(P), R + b * M2], axis=-1)
    d = p2 - p1
    s = np.sqrt(np.sum(d * d, axis=-1))
    return s.ravel(), W.ravel(), (d / s[..., None]).reshape(-1, 3)


def oracle_p_factor(p, pair, order=64):
    """P_p by direct angular quadrature of |x - x'|^p."""
    s, w, _ = sphere_angular_nodes(pair, order)
    return float(np.dot(w, s ** p)) / ((4.0 * math.pi) ** 2 * pair.R ** p)


def _raised_l_max(l_max, gT, gap):
    """Raise the cutoff when the decay per Matsubara step is slow."""
    if gT * gap < 0.05:
        return max(l_max, math.ceil(40.0 / (gT * gap)) + 1)
    return l_max


def _geometric_l_sum(term, s_min, gT, l_start=0, l_max=100_000, tol=_TINY):
    """Accumulate ``term(l)`` arrays until the geometric tail is negligible.

    ``term`` returns per-node contributions; the ratio bound
    exp(-2 gamma T s_min) holds for every kernel summed here.
    """
    l_max = _raised_l_max(l_max, gT, s_min)
    q = math.exp(-2.0 * gT * s_min)
    parts = []
    acc = 0.0
    prev = None
    for l in range(l_start, l_max + 1):
        t = float(term(l))
        parts.append(t)
        acc += t
        if l > l_start and t == 0.0:
            return OracleValue(math.fsum(parts), 0.0, len(parts))
        if prev:
            # polynomial prefactors make the observed ratio exceed q
            r = max(abs(t / prev), q)
            if r < 1.0:
                tail = abs(t) * r / (1.0 - r)
                if tail <= tol * abs(acc):
                    return OracleValue(math.fsum(parts), tail, len(parts))
        prev = t
    raise ConvergenceError(f"Matsubara sum not converged at l_max={l_max}")


def oracle_sphere_free_energy_3d(pair, T, units=NATURAL_UNITS, numerics=None):
    numerics = DEFAULT_NUMERICS if numerics is None else numerics
    s, w, _ = sphere_angular_nodes(pair, numerics.angular_order)
    ww = w * pair.chi1 * pair.chi2 * pair.radius_a ** 2 * pair.radius_b ** 2
    g = units.gamma
    base = ww / (16.0 * math.pi * s * s)

    def term(l):
        return -T * np.dot(base, np.exp(-2.0 * g * l * T * s))

    return _geometric_l_sum(term, s.min(), g * T, 0, numerics.l_max)


def oracle_point_pair_3d(s, T, units=NATURAL_UNITS, l_max=100_000):
    """-T sum_{l>=0} exp(-2 gamma l T s) / (16 pi s^2), term by term."""
    g = units.gamma

    def term(l):
        return -T * math.exp(-2.0 * g * l * T * s) / (16.0 * math.pi * s * s)

    return _geometric_l_sum(term, s, g * T, 0, l_max)


# ---------------------------------------------------------------------------
# Electromagnetic field
# ---------------------------------------------------------------------------

def _dyadic_parts(r_vec):
    r_vec = np.asarray(r_vec, dtype=float)
    r = np.linalg.norm(r_vec, axis=-1)
    n = r_vec / r[..., None]
    return r, n[..., :, None] * n[..., None, :]


def _dyadic_from_parts(k, r, nn):
    kr = k * r
    A = kr * kr + kr + 1.0
    B = -(kr * kr + 3.0 * kr + 3.0)
    pref = np.exp(-kr) / (4.0 * math.pi * r ** 3)
    return pref[..., None, None] * (A[..., None, None] * np.eye(3)
                                    + B[..., None, None] * nn)


def dyadic_green(k, r_vec):
    """Free dyadic Green tensor at imaginary wavenumber k, shape (..., 3, 3).

    G_ij = e^{-k r} / (4 pi r^3) [(k^2 r^2 + k r + 1) delta_ij
                                  - (k^2 r^2 + 3 k r + 3) n_i n_j],
    the transverse part of (grad grad - k^2) e^{-k r} / (4 pi r) away from
    the origin; at k = 0 it is the static dipole field.
    """
    return _dyadic_from_parts(k, *_dyadic_parts(r_vec))


def dyadic_trace(k, r_vec):
    """G_ij(r) G_ji(-r) summed component by component."""
    G = dyadic_green(k, r_vec)
    Gm = dyadic_green(k, -np.asarray(r_vec, dtype=float))
    return np.einsum("...ij,...ji->...", G, Gm)


def oracle_point_pair_em(s, T, units=NATURAL_UNITS, l_max=100_000):
    """-T sum_{l>=0} tr[G G] at separation s along the z axis."""
    g = units.gamma
    r_vec = np.array([0.0, 0.0, s])

    def term(l):
        return -T * float(dyadic_trace(g * l * T, r_vec))

    return _geometric_l_sum(term, s, g * T, 0, l_max)


def oracle_em_free_energy(pair, T, units=NATURAL_UNITS, numerics=None):
    numerics = DEFAULT_NUMERICS if numerics is None else numerics
    s, w, n = sphere_angular_nodes(pair, numerics.angular_order)
    ww = w * pair.chi1 * pair.chi2 * pair.radius_a ** 2 * pair.radius_b ** 2
    g = units.gamma
    r_vec = n * s[:, None]
    plus = _dyadic_parts(r_vec)
    minus = _dyadic_parts(-r_vec)

    def term(l):
        k = g * l * T
        G = _dyadic_from_parts(k, *plus)
        Gm = _dyadic_from_parts(k, *minus)
        return -T * np.dot(ww, np.einsum("nij,nji->n", G, Gm))

    return _geometric_l_sum(term, s.min(), g * T, 0, numerics.l_max)


# ---------------------------------------------------------------------------
# 2+1 dimensions: Monte-Carlo over the two areas
# ---------------------------------------------------------------------------

def _sample_body(body, n, rng):
    if hasattr(body, "radius"):
        r = body.radius * np.sqrt(rng.random(n))
        t = 2.0 * math.pi * rng.random(n)
        return body.cx + r * np.cos(t), body.cy + r * np.sin(t), math.pi * body.radius ** 2
    x = body.cx + body.half_x * (2.0 * rng.random(n) - 1.0)
    y = body.cy + body.half_y * (2.0 * rng.random(n) - 1.0)
    return x, y, 4.0 * body.half_x * body.half_y


def _k0_squared_l_sum(s, gT):
    total = np.zeros_like(s)
    idx = np.arange(s.size)
    l = 1
    while idx.size:
        x = gT * l * s[idx]
        with np.errstate(under="ignore"):
            k0 = bessel_k01(x)[0]
        t = k0 * k0
        total[idx] += t
        q = np.exp(-2.0 * gT * s[idx])
        idx = idx[t * q / (1.0 - q) > _TINY * total[idx]]
        l += 1
    return total


def oracle_planar_free_energy(pair, T, units=NATURAL_UNITS, samples=10_000_000,
                              seed=20240611, chunk=1_000_000):
    """Monte-Carlo estimate of the 2+1D free energy with its standard error.

    Uniform samples in each body; with a fixed seed the estimate is a smooth
    function of T (common random numbers), so it can be differentiated.
    """
    rng = np.random.default_rng(seed)
    sums = []
    sq = []
    done = 0
    area = 1.0
    while done < samples:
        m = min(chunk, samples - done)
        x1, y1, a1 = _sample_body(pair.body1, m, rng)
        x2, y2, a2 = _sample_body(pair.body2, m, rng)
        area = a1 * a2
        f = _k0_squared_l_sum(np.hypot(x1 - x2, y1 - y2), units.gamma * T)
        sums.append(float(np.sum(f)))
        sq.append(float(np.sum(f * f)))
        done += m
    mean = math.fsum(sums) / samples
    var = max(math.fsum(sq) / samples - mean * mean, 0.0)
    pref = -T * pair.chi1 * pair.chi2 * area / (4.0 * math.pi ** 2)
    return OracleValue(pref * mean, 0.0, samples,
                       stderr=abs(pref) * math.sqrt(var / samples))


# ---------------------------------------------------------------------------
# Generic entry points
# ---------------------------------------------------------------------------

def oracle_free_energy(config, T, numerics=None):
    """Oracle free energy for a :class:`FieldConfig`.

    For ribbons the value is self plus interaction; the parts are in
    ``meta``. For planar bodies it is a Monte-Carlo estimate with
    ``stderr`` set.
    """
    geo, units = config.geometry, config.units
    if not T > 0.0:
        raise ValueError("temperature must be positive")
    if config.field == "scalar1d":
        e_self, e_int = oracle_ribbon_free_energy(geo, T, units, numerics)
        return OracleValue(e_self.value + e_int.value,
                           e_self.tail_bound + e_int.tail_bound,
                           e_self.terms_used,
                           meta={"E_self": e_self.value, "E_int": e_int.value})
    if config.field == "scalar2d":
        return oracle_planar_free_energy(geo, T, units, config.mc_samples,
                                         config.seed)
    if config.field == "scalar3d":
        return oracle_sphere_free_energy_3d(geo, T, units, numerics)
    return oracle_em_free_energy(geo, T, units, numerics)


def _richardson(f, x, h):
    d1 = (f(x + h) - f(x - h)) / (2.0 * h)
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    return (4.0 * d2 - d1) / 3.0


def _moved(geo, delta):
    if isinstance(geo, RibbonPair):
        return geo.shifted(delta)
    if isinstance(geo, SpherePair):
        return geo.with_R(geo.R + delta)
    raise TypeError("geometry has no scalar separation")


def oracle_thermo(config, T, numerics=None):
    """E from the oracle; S, U and F from finite differences of it."""
    numerics = DEFAULT_NUMERICS if numerics is None else numerics
    h = numerics.fd_rel_step * T
    if T - h <= 0.0:
        raise ValueError("stencil reaches T <= 0")

    def E(t):
        return oracle_free_energy(config, t, numerics).value

    centre = oracle_free_energy(config, T, numerics)
    S = -_richardson(E, T, h)
    U = -T * T * _richardson(lambda t: E(t) / t, T, h)
    F = None
    if config.field != "scalar2d":
        geo = config.geometry
        gap = geo.gap
        hr = numerics.fd_rel_step * gap

        def E_of(delta):
            moved = replace(config, geometry=_moved(geo, delta))
            return oracle_free_energy(moved, T, numerics).value

        F = _richardson(E_of, 0.0, hr)
    e_self = centre.meta.get("E_self", 0.0)
    return ThermoPoint(T, e_self, centre.value - e_self, S, U, F,
                       {"terms_used": centre.terms_used,
                        "tail_bound": centre.tail_bound,
                        "fd_step": h, "stderr": centre.stderr})


def oracle_em_thermo(pair, T, units=NATURAL_UNITS, numerics=None):
    return oracle_thermo(FieldConfig("em", pair, units), T, numerics)


# ---------------------------------------------------------------------------
# Validation plumbing
# ---------------------------------------------------------------------------

PASS = "pass"
FAIL = "fail"
DEVIATION = "documented-deviation"


@dataclass
class OracleReport:
    scenario: str
    quantity: str
    closed_form_value: float
    oracle_value: float
    relative_deviation: float
    status: str
    note: str = ""
    convergence: dict = field(default_factory=dict)


@dataclass
class ValidationCase:
    """One comparison.

    ``closed`` and ``oracle`` are zero-argument callables; ``oracle`` may
    return a float or an :class:`OracleValue`. With ``expected_deviation``
    a disagreement is recorded as documented-deviation instead of fail.
    ``sigma`` switches the criterion to ``|diff| <= sigma * stderr``.
    """

    scenario: str
    quantity: str
    closed: Callable[[], float]
    oracle: Callable[[], object]
    rel_tol: float = 1e-8
    abs_floor: float = 0.0
    expected_deviation: bool = False
    sigma: Optional[float] = None
    note: str = ""


def _rel_dev(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0.0 else abs(a - b) / scale


def run_case(case):
    try:
        closed = float(case.closed())
        ov = case.oracle()
        if not isinstance(ov, OracleValue):
            ov = OracleValue(float(ov), 0.0, 0)
    except Exception as exc:  # a broken case must not abort the batch
        return OracleReport(case.scenario, case.quantity, math.nan, math.nan,
                            math.nan, FAIL, f"{type(exc).__name__}: {exc}")
    dev = _rel_dev(closed, ov.value)
    conv = {"terms_used": ov.terms_used, "tail_bound": ov.tail_bound,
            "stderr": ov.stderr}
    if case.sigma is not None:
        ok = abs(closed - ov.value) <= case.sigma * ov.stderr
    else:
        ok = abs(closed - ov.value) <= max(case.rel_tol * max(abs(closed), abs(ov.value)),
                                           case.abs_floor)
    ok = ok and ov.converged
    if ok:
        status = PASS
    elif case.expected_deviation:
        status = DEVIATION
    else:
        status = FAIL
    return OracleReport(case.scenario, case.quantity, closed, ov.value, dev,
                        status, case.note, conv)


def validate_all(cases, workers=1):
    """Run every case; failures are recorded, never raised.

    Results come back in the order of ``cases`` for any worker count.
    """
    cases = list(cases)
    if not cases:
        raise ValueError("no validation cases given")
    if workers <= 1:
        return [run_case(c) for c in cases]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_case, cases))


REPORT_FIELDS = ("scenario", "quantity", "closed", "oracle", "rel_dev",
                 "status", "note")


def write_report(reports, path):
    """Tab-separated, one record per line, floats in round-trip repr."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(REPORT_FIELDS)
        for r in reports:
            w.writerow([r.scenario, r.quantity, repr(r.closed_form_value),
                        repr(r.oracle_value), repr(r.relative_deviation),
                        r.status, r.note])


def summarize(reports):
    out = {PASS: 0, FAIL: 0, DEVIATION: 0}
    for r in reports:
        out[r.status] = out.get(r.status, 0) + 1
    return out
