import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casimir_thermo.em3d import (PRINTED_E_SERIES, PRINTED_S_SERIES, PRINTED_U_SERIES,
                                 em_entropy, em_entropy_kernel, em_free_energy,
                                 em_free_energy_kernel, em_free_energy_series_coefficients,
                                 em_internal_energy, em_internal_energy_kernel,
                                 em_kernel_h, em_kernel_series, em_thermo,
                                 z_to_temperature)
from casimir_thermo.geometry import SpherePair
from casimir_thermo.oracle import dyadic_trace, oracle_em_free_energy, oracle_point_pair_em
from casimir_thermo.thermo import NATURAL_UNITS, entropy_from_free_energy

G = NATURAL_UNITS.gamma


def test_static_limit():
    s = 1.7
    assert em_kernel_h(0.0, s) == pytest.approx(3 / (8 * math.pi ** 2 * s ** 6), rel=1e-15)


def test_dyadic_contraction():
    assert float(dyadic_trace(1.0, [0.0, 0.0, 2.0])) == pytest.approx(float(em_kernel_h(1.0, 2.0)), rel=1e-14)
    # any direction gives the same trace
    v = np.array([1.0, -2.0, 0.5])
    v *= 2.0 / np.linalg.norm(v)
    assert float(dyadic_trace(1.0, v)) == pytest.approx(float(em_kernel_h(1.0, 2.0)), rel=1e-13)


def test_large_separation_decay():
    nu, s = 1.0, 200.0
    lead = math.exp(-2 * nu * s) * nu ** 4 / (8 * math.pi ** 2 * s ** 2)
    assert em_kernel_h(nu, s) == pytest.approx(lead, rel=0.02)


def test_kernel_input_errors():
    with pytest.raises(ValueError):
        em_kernel_h(1.0, 0.0)
    with pytest.raises(ValueError):
        em_kernel_h(-1.0, 1.0)


def test_kernel_against_oracle_sum():
    rng = np.random.default_rng(11)
    for s, T in zip(rng.uniform(0.2, 5, 10), rng.uniform(0.01, 2, 10)):
        assert float(em_free_energy_kernel(s, T)) == pytest.approx(oracle_point_pair_em(s, T).value, rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(s=st.floats(0.1, 10), T=st.floats(1e-3, 5))
def test_kernel_thermodynamics(s, T):
    E = float(em_free_energy_kernel(s, T))
    S = float(em_entropy_kernel(s, T))
    U = float(em_internal_energy_kernel(s, T))
    assert abs(U - (E + T * S)) <= 1e-8 * max(abs(E), abs(T * S))
    fd = entropy_from_free_energy(lambda t: float(em_free_energy_kernel(s, t)), T)
    assert abs(S - fd.value) <= max(1e-4 * abs(S), 1e-9 * abs(E) / T)


def test_euler_maclaurin_coefficients():
    # int_0^inf e^-2x (x^4 + 2x^3 + 5x^2 + 6x + 3) dx = 24/32 + 12/16 + 10/8 + 6/4 + 3/2
    coeffs = dict(em_free_energy_series_coefficients(4))
    assert coeffs[-1] == Fraction(23, 4)
    assert coeffs[0] == Fraction(3, 2)
    assert 1 not in coeffs and 3 not in coeffs  # g'(0) = g'''(0) = 0
    assert coeffs[5] == Fraction(11, 1890)
    assert coeffs[7] == Fraction(-23, 6300)


def test_exact_series_converges():
    s = 1.0
    for w in (0.02, 0.05, 0.1):
        T = w / (G * s)
        exact = float(em_entropy_kernel(s, T))
        series = float(em_kernel_series(s, T, quantity="S", form="exact", n_terms=5))
        assert series == pytest.approx(exact, rel=10 * w ** 6)


def test_printed_leading_coefficient_differs():
    assert PRINTED_E_SERIES[-1] != Fraction(23, 4)


def test_printed_u_is_negated_termwise_derivative():
    # U = -T^2 d/dT (E/T); with E = -T sum c_k (gamma T)^k s^(k-6) each term
    # becomes k c_k gamma^k T^(k+1) s^(k-6)
    correct = {k: k * c for k, c in PRINTED_E_SERIES.items() if k * c != 0}
    for k, c in PRINTED_U_SERIES.items():
        assert c == -correct[k]


def test_printed_s_is_negated_termwise_derivative():
    # S = -dE/dT = sum (k+1) c_k (gamma T)^k s^(k-6); the printed S is
    # normalised as S = -sum c'_k ..., so the correct c'_k is -(k+1) c_k
    correct = {k: -(k + 1) * c for k, c in PRINTED_E_SERIES.items() if (k + 1) * c != 0}
    for k in (0, 1, 3, 5):
        assert PRINTED_S_SERIES[k] == -correct[k]
    # and at k = 7 the printed magnitude is 197/50400, not 197/44100
    assert correct[7] == Fraction(197, 44100)
    assert PRINTED_S_SERIES[7] == Fraction(-197, 50400)


def test_exact_series_u_matches_fd():
    s, T = 1.0, 0.005
    fd = (em_kernel_series(s, T * 1.001, quantity="E") / (T * 1.001)
          - em_kernel_series(s, T * 0.999, quantity="E") / (T * 0.999)) / (0.002 * T)
    assert float(em_kernel_series(s, T, quantity="U")) == pytest.approx(float(-T * T * fd), rel=1e-5)


def test_zero_susceptibility():
    pair = SpherePair(1, 2, 10, 0.0, 1.0)
    for method in ("closed", "series", "exact-series"):
        assert em_free_energy(pair, 0.01, method=method) == 0.0
        assert em_entropy(pair, 0.01, method=method) == 0.0
        assert em_internal_energy(pair, 0.01, method=method) == 0.0


def test_static_term_linear_in_T(fig4_pair):
    # the l = 0 term alone is -T (3 / 8 pi^2) int int s^-6
    from casimir_thermo.geometry import p_factor, surface_weight
    from casimir_thermo.oracle import sphere_angular_nodes
    pair = fig4_pair
    s, w, n = sphere_angular_nodes(pair, 24)
    direct = np.dot(w, dyadic_trace(0.0, n * s[:, None])) * pair.radius_a ** 2 * pair.radius_b ** 2
    static = 3 / (8 * math.pi ** 2) * surface_weight(pair) * pair.R ** -6 * p_factor(-6, pair)
    assert direct == pytest.approx(static, rel=1e-10)
    # the full sum tends to the T = 0 value -(23/4) / (8 pi^2 gamma) int int s^-7
    zero_T = (-23 / 4 / (8 * math.pi ** 2 * G) * surface_weight(pair)
              * pair.R ** -7 * p_factor(-7, pair))
    assert em_free_energy(pair, 1e-6) == pytest.approx(zero_T, rel=1e-4)


def test_fig4_golden_oracle(fig4_pair):
    T = z_to_temperature(0.5, fig4_pair)
    assert T == pytest.approx(0.5 / (40 * math.pi))
    ref = oracle_em_free_energy(fig4_pair, T).value
    assert em_free_energy(fig4_pair, T) == pytest.approx(ref, rel=1e-8)
    assert em_free_energy(fig4_pair, T, method="oracle") == ref


@pytest.mark.parametrize("chi", [1, 6, 20, 50])
def test_fig4_printed_series_negative_interval(chi):
    pair = SpherePair(1.0, 2.0, 10.0, float(chi), 1.0)
    Z = np.linspace(0.1, 5.0, 50)
    S = np.array([em_entropy(pair, z_to_temperature(z, pair), method="series") for z in Z])
    assert S[0] < 0 and np.any(S > 0)
    # the exact entropy stays positive on the same grid
    exact = [em_entropy(pair, z_to_temperature(z, pair)) for z in Z]
    assert min(exact) > 0


def test_sphere_thermo_consistency(fig4_pair):
    for Z in (0.1, 1.0, 5.0):
        p = em_thermo(fig4_pair, z_to_temperature(Z, fig4_pair))
        assert p.consistency_residual() <= 1e-6 * abs(p.U)
        assert p.F > 0


def test_oracle_entropy_consistency(fig4_pair):
    T = z_to_temperature(2.0, fig4_pair)
    S = em_entropy(fig4_pair, T, method="oracle")
    U = em_internal_energy(fig4_pair, T, method="oracle")
    E = em_free_energy(fig4_pair, T, method="oracle")
    assert U == pytest.approx(E + T * S, rel=1e-4)
    assert S == pytest.approx(em_entropy(fig4_pair, T), rel=1e-4)


def test_unknown_method(fig4_pair):
    with pytest.raises(ValueError):
        em_free_energy(fig4_pair, 0.1, method="magic")
