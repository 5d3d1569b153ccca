"""Special functions used by the closed-form thermodynamics.

Integer-order polylogarithms on [0, 1], the modified Bessel functions
K_0 and K_1, Riemann zeta at integer arguments and the Bernoulli numbers
they are built from. Everything accepts scalars or numpy arrays and is
pure.
"""

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

EULER_GAMMA = 0.57721566490153286061

POLYLOG_MIN_ORDER = 1
POLYLOG_MAX_ORDER = 6

# direct series below z = exp(-1), log-series above
_LOG_SERIES_SWITCH = -1.0
_DIRECT_TERMS = 44
_LOG_TERMS = 34


@lru_cache(maxsize=None)
def bernoulli(n):
    """Bernoulli number B_n as a Fraction, with the B_1 = -1/2 convention."""
    if n < 0:
        raise ValueError("Bernoulli index must be non-negative")
    b = [Fraction(1)]
    for m in range(1, n + 1):
        acc = sum(math.comb(m + 1, k) * b[k] for k in range(m))
        b.append(-acc / (m + 1))
    return b[n]


@lru_cache(maxsize=None)
def _zeta_int(s):
    if s % 2 == 0:
        b = bernoulli(s)
        return float((-1) ** (s // 2 + 1) * b * (2 * Fraction(math.pi)) ** s
                     / (2 * math.factorial(s)))
    # Euler-Maclaurin with cutoff N; remainder is far below 1e-17 for N=12
    n_cut = 12
    terms = [k ** -float(s) for k in range(1, n_cut)]
    terms.append(n_cut ** (1.0 - s) / (s - 1))
    terms.append(0.5 * n_cut ** -float(s))
    rising = float(s)
    for j in range(1, 10):
        b2j = float(bernoulli(2 * j))
        terms.append(b2j / math.factorial(2 * j) * rising
                     * n_cut ** (-float(s) - 2 * j + 1))
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return math.fsum(terms)


def zeta(s):
    """Riemann zeta function at an integer ``s >= 2``."""
    if int(s) != s or s < 2:
        raise ValueError(f"zeta requires an integer s >= 2, got {s!r}")
    return _zeta_int(int(s))


@lru_cache(maxsize=None)
def _zeta_any(n):
    # zeta at any integer except 1, for the log-series coefficients
    if n >= 2:
        return _zeta_int(n)
    if n == 1:
        raise ValueError("zeta has a pole at 1")
    m = -n
    return float((-1) ** m * bernoulli(m + 1) / (m + 1))


@lru_cache(maxsize=None)
def _log_series_coeffs(s):
    coeffs = []
    for k in range(_LOG_TERMS):
        if k == s - 1:
            coeffs.append(0.0)
        else:
            coeffs.append(_zeta_any(s - k) / math.factorial(k))
    return np.array(coeffs)


def _check_order(s):
    if int(s) != s or not POLYLOG_MIN_ORDER <= s <= POLYLOG_MAX_ORDER:
        raise ValueError(
            f"polylog order must be an integer in "
            f"[{POLYLOG_MIN_ORDER}, {POLYLOG_MAX_ORDER}], got {s!r}")
    return int(s)


def _direct_series(s, z):
    # compensated summation of sum_k z^k / k^s, fixed term count
    total = np.zeros_like(z)
    comp = np.zeros_like(z)
    power = np.array(z, copy=True)
    for k in range(1, _DIRECT_TERMS + 1):
        y = power / float(k) ** s - comp
        t = total + y
        comp = (t - total) - y
        total = t
        power = power * z
    return total


def _log_series(s, mu):
    # Li_s(e^mu) = mu^(s-1)/(s-1)! (H_{s-1} - ln(-mu)) + sum_k zeta(s-k) mu^k/k!
    coeffs = _log_series_coeffs(s)
    acc = np.zeros_like(mu)
    for c in coeffs[::-1]:
        acc = acc * mu + c
    harmonic = math.fsum(1.0 / j for j in range(1, s))
    with np.errstate(divide="ignore", invalid="ignore"):
        sing = mu ** (s - 1) / math.factorial(s - 1) * (harmonic - np.log(-mu))
    sing = np.where(mu == 0.0, 0.0, sing)
    return acc + sing


def _polylog_core(s, mu):
    """Li_s(e^mu) for mu <= 0 (array)."""
    if s == 1:
        with np.errstate(divide="ignore"):
            return -np.log(-np.expm1(mu))
    out = np.empty_like(mu)
    far = mu <= _LOG_SERIES_SWITCH
    if np.any(far):
        out[far] = _direct_series(s, np.exp(mu[far]))
    near = ~far
    if np.any(near):
        out[near] = _log_series(s, mu[near])
    return out


def _wrap(value, scalar):
    return float(value[()]) if scalar else value


def polylog(s, z):
    """Polylogarithm Li_s(z) = sum_{k>=1} z^k / k^s for real 0 <= z <= 1.

    Parameters
    ----------
    s : int
        Order, 1 <= s <= 6.
    z : float or array_like
        Argument in [0, 1). ``z = 1`` is accepted for ``s >= 2`` and
        returns zeta(s).

    Returns
    -------
    float or ndarray
    """
    s = _check_order(s)
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=float)
    if np.any(~np.isfinite(z)) or np.any(z < 0.0) or np.any(z > 1.0):
        raise ValueError("polylog argument must lie in [0, 1]")
    if s == 1 and np.any(z == 1.0):
        raise ValueError("Li_1 diverges at z = 1")
    z1 = np.atleast_1d(z)
    if s == 1:
        return _wrap((-np.log1p(-z1)).reshape(z.shape), scalar)
    out = np.zeros_like(z1)
    pos = z1 > 0.0
    if np.any(pos):
        out[pos] = _polylog_core(s, np.log(z1[pos]))
    return _wrap(out.reshape(z.shape), scalar)


def polylog_exp(s, x):
    """Li_s(exp(-x)) for x >= 0, without forming exp(-x) near 1.

    This is the form every closed-form Matsubara resummation needs:
    ``sum_l exp(-l x) / l^s``.
    """
    s = _check_order(s)
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)) or np.any(x < 0.0):
        raise ValueError("polylog_exp requires x >= 0")
    if s == 1 and np.any(x == 0.0):
        raise ValueError("Li_1 diverges at z = 1")
    x1 = np.atleast_1d(x)
    out = np.zeros_like(x1)
    finite = np.isfinite(x1)
    if np.any(finite):
        out[finite] = _polylog_core(s, -x1[finite])
    return _wrap(out.reshape(x.shape), scalar)


def polylog_negative_exp(k, x):
    """Li_{-k}(exp(-x)) = sum_{l>=1} l^k exp(-l x) for integer k >= 0, x > 0.

    Closed rational form in q = exp(-x) through the Eulerian numbers:
    Li_{-k}(q) = q A_k(q) / (1 - q)^(k+1).
    """
    if int(k) != k or k < 0:
        raise ValueError("k must be a non-negative integer")
    k = int(k)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise ValueError("x must be positive")
    q = np.exp(-x)
    one_minus_q = -np.expm1(-x)
    poly = np.zeros_like(q)
    for coeff in _eulerian_row(k)[::-1]:
        poly = poly * q + coeff
    if k == 0:
        poly = np.ones_like(q)
    return q * poly / one_minus_q ** (k + 1)


@lru_cache(maxsize=None)
def _eulerian_row(k):
    # A(k, m) for m = 0..k-1; empty row for k = 0
    if k == 0:
        return ()
    row = [1]
    for n in range(2, k + 1):
        new = []
        for m in range(n):
            left = (m + 1) * row[m] if m < len(row) else 0
            right = (n - m) * row[m - 1] if m >= 1 else 0
            new.append(left + right)
        row = new
    return tuple(float(v) for v in row)


# ---------------------------------------------------------------------------
# Modified Bessel functions of the second kind, orders 0 and 1
# ---------------------------------------------------------------------------

_SERIES_TERMS = 22
_SWITCH = 2.0
_CHEB_DEGREE = 44
_CHEB_KEEP = 26  # higher coefficients are at the rounding floor


def _k01_series(x):
    """Ascending series for 0 < x <= 2."""
    q = 0.25 * x * x
    log_half = np.log(0.5 * x)
    i0 = np.zeros_like(x)
    i1 = np.zeros_like(x)
    sum0 = np.zeros_like(x)
    sum1 = np.zeros_like(x)
    term = np.ones_like(x)  # (x^2/4)^k / (k!)^2
    psi_k1 = -EULER_GAMMA   # psi(k + 1)
    for k in range(_SERIES_TERMS):
        psi_k2 = psi_k1 + 1.0 / (k + 1)
        term1 = term / (k + 1)  # (x^2/4)^k / (k! (k+1)!)
        i0 += term
        i1 += term1
        sum0 += psi_k1 * term
        sum1 += (psi_k1 + psi_k2) * term1
        term = term * q / ((k + 1) * (k + 1))
        psi_k1 = psi_k2
    i1 *= 0.5 * x
    k0 = -log_half * i0 + sum0
    k1 = 1.0 / x + log_half * i1 - 0.25 * x * sum1
    return k0, k1


def _k01_steed(x, eps=1e-16, max_iter=10000):
    """Steed's continued fraction (CF2) for K_0, K_1; accurate for x >= 2."""
    x = np.asarray(x, dtype=float)
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(x)
    q2 = np.ones_like(x)
    a1 = 0.25
    q = np.full_like(x, a1)
    c = np.full_like(x, a1)
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, max_iter):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h = h + delh
        dels = q * delh
        s = s + dels
        if np.all(np.abs(dels / s) < eps):
            break
    else:
        raise ArithmeticError("Bessel continued fraction did not converge")
    h = a1 * h
    # scaled values e^x K_nu(x)
    k0s = np.sqrt(np.pi / (2.0 * x)) / s
    k1s = k0s * (x + 0.5 - h) / x
    return k0s, k1s


def _build_chebyshev():
    # e^x sqrt(x) K_nu(x) as a Chebyshev series in t = 4/x - 1, x in [2, inf)
    def scaled(order):
        def f(t):
            x = 4.0 / (t + 1.0)
            k0s, k1s = _k01_steed(x)
            return (k0s if order == 0 else k1s) * np.sqrt(x)
        return f
    c0 = np.polynomial.chebyshev.chebinterpolate(scaled(0), _CHEB_DEGREE)
    c1 = np.polynomial.chebyshev.chebinterpolate(scaled(1), _CHEB_DEGREE)
    return c0[:_CHEB_KEEP], c1[:_CHEB_KEEP]


_CHEB_K0, _CHEB_K1 = _build_chebyshev()


def _k01_large(x):
    t = 4.0 / x - 1.0
    env = np.exp(-x) / np.sqrt(x)
    k0 = env * np.polynomial.chebyshev.chebval(t, _CHEB_K0)
    k1 = env * np.polynomial.chebyshev.chebval(t, _CHEB_K1)
    return k0, k1


def bessel_k01(x):
    """Return ``(K_0(x), K_1(x))`` for x > 0.

    Ascending series with the logarithmic branch for x <= 2; beyond that a
    Chebyshev expansion of the scaled functions, whose coefficients are
    generated at import from Steed's continued fraction. Underflows to 0
    past the exponential range.
    """
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)) or np.any(x <= 0.0):
        raise ValueError("Bessel K requires x > 0")
    x1 = np.atleast_1d(x)
    k0 = np.empty_like(x1)
    k1 = np.empty_like(x1)
    small = x1 <= _SWITCH
    if np.any(small):
        k0[small], k1[small] = _k01_series(x1[small])
    big = ~small
    if np.any(big):
        with np.errstate(under="ignore"):
            k0[big], k1[big] = _k01_large(x1[big])
    k0 = k0.reshape(x.shape)
    k1 = k1.reshape(x.shape)
    if scalar:
        return float(k0[()]), float(k1[()])
    return k0, k1


def bessel_k(order, x):
    """Modified Bessel function of the second kind, K_0 or K_1."""
    if order not in (0, 1):
        raise ValueError("only orders 0 and 1 are supported")
    return bessel_k01(x)[order]
