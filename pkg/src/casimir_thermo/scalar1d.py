"""Two ribbons in the (1+1)-dimensional massless scalar field.

The free energy at first order in each susceptibility is

    E = -T sum_{l>=1} int dx int dx' exp(-2 a_l |x - x'|) / (2 a_l)^2
        chi(x) chi(x'),      a_l = gamma l T,

with chi = chi1 on [a, b] and chi2 on [c, d]. Both the self and the cross
integrals are elementary, and the l-sums resum into polylogarithms of
exp(-2 gamma T x) over the four edge-to-edge separations.
"""

from dataclasses import dataclass

from .specfun import polylog_exp, zeta
from .thermo import NATURAL_UNITS, ThermoPoint


def _check_T(T):
    if not T > 0.0:
        raise ValueError("temperature must be positive")


def _self_terms(L, chi, T, g):
    """(E, S, U) of one ribbon of width L, including the edge correction."""
    if chi == 0.0 or L == 0.0:
        return 0.0, 0.0, 0.0
    y = 2.0 * g * T * L
    z3, z4 = zeta(3), zeta(4)
    edge = z4 - polylog_exp(4, y)
    li3 = polylog_exp(3, y)
    c2 = chi * chi
    bulk = L * z3 / (4 * g ** 3)
    E = -c2 * (bulk / T ** 2 - edge / (8 * g ** 4 * T ** 3))
    S = c2 * (-2 * bulk / T ** 3 + 3 * edge / (8 * g ** 4 * T ** 4)
              - L * li3 / (4 * g ** 3 * T ** 3))
    U = c2 * (-3 * bulk / T ** 2 + edge / (2 * g ** 4 * T ** 3)
              - L * li3 / (4 * g ** 3 * T ** 2))
    return E, S, U


def _cross_sums(pair, T, g):
    # signed sums over the four separations of Li_4, x Li_3 and Li_3
    li4 = xli3 = li3 = 0.0
    for x, sign in pair.separations():
        y = 2.0 * g * T * x
        l4 = polylog_exp(4, y)
        l3 = polylog_exp(3, y)
        li4 += sign * l4
        li3 += sign * l3
        xli3 += sign * x * l3
    return li4, xli3, li3


def free_energy_1d(pair, T, units=NATURAL_UNITS):
    """Return ``(E_self, E_interaction)`` at temperature T."""
    _check_T(T)
    g = units.gamma
    e1 = _self_terms(2 * pair.half_width_left, pair.chi1, T, g)[0]
    e2 = _self_terms(2 * pair.half_width_right, pair.chi2, T, g)[0]
    cc = pair.chi1 * pair.chi2
    e_int = 0.0
    if cc != 0.0:
        li4, _, _ = _cross_sums(pair, T, g)
        e_int = -cc * li4 / (8 * g ** 4 * T ** 3)
    return e1 + e2, e_int


def interaction_free_energy_1d(pair, T, units=NATURAL_UNITS):
    return free_energy_1d(pair, T, units)[1]


def entropy_1d(pair, T, units=NATURAL_UNITS, part="total"):
    """S = -dE/dT in closed form.

    ``part`` selects ``"total"``, ``"self"`` or ``"interaction"``.
    """
    _check_T(T)
    g = units.gamma
    s_self = (_self_terms(2 * pair.half_width_left, pair.chi1, T, g)[1]
              + _self_terms(2 * pair.half_width_right, pair.chi2, T, g)[1])
    cc = pair.chi1 * pair.chi2
    s_int = 0.0
    if cc != 0.0:
        li4, xli3, _ = _cross_sums(pair, T, g)
        s_int = -cc * (3 * li4 + 2 * g * T * xli3) / (8 * g ** 4 * T ** 4)
    return {"total": s_self + s_int, "self": s_self,
            "interaction": s_int}[part]


def force_1d(pair, T, units=NATURAL_UNITS):
    """F = dE/dr, the derivative of the free energy with respect to the
    centre-to-centre distance r. Self energies do not depend on r."""
    _check_T(T)
    g = units.gamma
    cc = pair.chi1 * pair.chi2
    if cc == 0.0:
        return 0.0
    _, _, li3 = _cross_sums(pair, T, g)
    return cc * li3 / (4 * g ** 3 * T ** 2)


def force_on_body_1d(pair, T, units=NATURAL_UNITS):
    """-dE/dr: positive values push the ribbons apart."""
    return -force_1d(pair, T, units)


def internal_energy_1d(pair, T, units=NATURAL_UNITS, part="total"):
    """U = E + T S = -T^2 d/dT (E/T) in closed form."""
    _check_T(T)
    g = units.gamma
    u_self = (_self_terms(2 * pair.half_width_left, pair.chi1, T, g)[2]
              + _self_terms(2 * pair.half_width_right, pair.chi2, T, g)[2])
    cc = pair.chi1 * pair.chi2
    u_int = 0.0
    if cc != 0.0:
        li4, xli3, _ = _cross_sums(pair, T, g)
        u_int = -cc * (4 * li4 + 2 * g * T * xli3) / (8 * g ** 4 * T ** 3)
    return {"total": u_self + u_int, "self": u_self,
            "interaction": u_int}[part]


@dataclass(frozen=True)
class Scalar1DResult:
    point: ThermoPoint
    force_on_body: float


def thermo_1d(pair, T, units=NATURAL_UNITS):
    e_self, e_int = free_energy_1d(pair, T, units)
    F = force_1d(pair, T, units)
    point = ThermoPoint(T, e_self, e_int, entropy_1d(pair, T, units),
                        internal_energy_1d(pair, T, units), F)
    return Scalar1DResult(point, -F)


# ---------------------------------------------------------------------------
# Expressions exactly as printed in the source derivation. They disagree
# with the defining sum (see the validation report) and exist only so the
# disagreement can be quantified.
# ---------------------------------------------------------------------------

def _printed_distances(pair):
    r, rp, rpp = pair.r, pair.half_width_right, pair.half_width_left
    return {"++": r + rp + rpp, "--": r - rp - rpp,
            "+-": r + rp - rpp, "-+": r - rp + rpp}


def entropy_1d_printed(pair, T, units=NATURAL_UNITS):
    g = units.gamma
    c1, c2 = pair.chi1, pair.chi2
    rp, rpp = pair.half_width_right, pair.half_width_left
    x = _printed_distances(pair)
    gt = g * T
    li2 = {k: polylog_exp(2, 2 * gt * v) for k, v in x.items()}
    log = {k: -polylog_exp(1, 2 * gt * v) for k, v in x.items()}
    bracket = (-c1 ** 2 * rpp * zeta(3) / gt ** 3
               - c2 ** 2 * rp * zeta(3) / gt ** 3
               + c1 * c2 / (2 * gt ** 2)
               * (li2["+-"] - li2["++"] - li2["--"] + li2["-+"])
               - c1 * c2 / gt
               * (x["+-"] * log["+-"] - x["++"] * log["++"]
                  - x["--"] * log["--"] + x["-+"] * log["-+"]))
    return -bracket


def force_1d_printed(pair, T, units=NATURAL_UNITS):
    g = units.gamma
    x = _printed_distances(pair)
    log = {k: -polylog_exp(1, 2 * g * T * v) for k, v in x.items()}
    return -pair.chi1 * pair.chi2 / (2 * g) * (
        -log["++"] + log["-+"] + log["+-"] - log["--"])


def internal_energy_1d_printed(pair, T, units=NATURAL_UNITS):
    g = units.gamma
    c1, c2 = pair.chi1, pair.chi2
    r, rp, rpp = pair.r, pair.half_width_right, pair.half_width_left
    x = _printed_distances(pair)
    li4 = {k: polylog_exp(4, 2 * g * T * v) for k, v in x.items()}
    li3 = {k: polylog_exp(3, 2 * g * T * v) for k, v in x.items()}
    return (3 * (c1 ** 2 * rpp + c2 ** 2 * rp) / (4 * g ** 3 * T ** 2)
            + c1 * c2 / (2 * g ** 4 * T ** 3)
            * (li4["++"] - li4["--"] + li4["-+"] - li4["+-"])
            - c1 * c2 / (4 * g ** 3 * T ** 2)
            * (-x["++"] * li3["++"] + (-r + rp + rpp) * li3["--"]
               + (-r + rp - rpp) * li3["-+"] - x["+-"] * li3["+-"]))
