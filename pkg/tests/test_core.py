import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import eval_genlaguerre

from noondamp.core import (
    DampingParams,
    basis_labels,
    characteristic_from_matrix,
    characteristic_function,
    displacement_matrix_element,
    evolve_coefficients,
    laguerre,
    noon_characteristic_function,
    to_matrix,
)

rates = st.floats(min_value=0.0, max_value=3.0, allow_nan=False, allow_subnormal=False)
photons = st.integers(min_value=1, max_value=6)
complexes = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)


@st.composite
def params(draw, n=photons):
    return DampingParams(draw(n), draw(rates), draw(rates), draw(rates), draw(rates), 1.0)


def displacement_by_expm(mu, dim=60):
    """Truncated-space exponential; only the low corner is trusted."""
    from scipy.linalg import expm

    a = np.diag(np.sqrt(np.arange(1, dim)), 1)
    return expm(mu * a.conj().T - np.conj(mu) * a)


# --- DampingParams -------------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n_photons=0),
        dict(n_photons=31),
        dict(n_photons=2, gamma_amp_1=-0.1),
        dict(n_photons=2, gamma_phase_2=-1e-9),
        dict(n_photons=2, time=-1.0),
        dict(n_photons=2.5),
        dict(n_photons=2, gamma_amp_1=float("nan")),
    ],
)
def test_params_reject_invalid(kwargs):
    with pytest.raises(ValueError):
        DampingParams(**kwargs)


def test_params_means():
    p = DampingParams(3, 0.1, 0.3, 0.2, 0.4, 2.0)
    assert p.mean_amp == pytest.approx(0.2)
    assert p.mean_phase == pytest.approx(0.3)
    assert p.mean_amp_t == pytest.approx(0.4)
    assert p.amp_t == pytest.approx((0.2, 0.6))


# --- evolve_coefficients -------------------------------------------------------


def test_coefficients_at_t0():
    c = evolve_coefficients(DampingParams(3, 0.7, 0.2, 0.5, 0.1, time=0.0))
    assert c.c_00 == 0.0
    assert c.c_a == (0.0, 0.0, 0.5)
    assert c.c_b == (0.0, 0.0, 0.5)
    assert c.c_off == 0.5


def test_coefficients_full_decay():
    c = evolve_coefficients(DampingParams.symmetric(2, 60.0))
    assert c.c_00 == pytest.approx(1.0, abs=1e-15)
    assert max(c.c_a + c.c_b + (c.c_off,)) < 1e-25


def test_coefficients_n2_hand_values():
    c = evolve_coefficients(DampingParams.symmetric(2, 0.1))
    e = math.exp(-0.1)
    assert c.c_00 == pytest.approx((1 - e) ** 2, rel=1e-14)
    assert c.c_N0 == pytest.approx(0.5 * math.exp(-0.2), rel=1e-14)
    assert c.c_0N == pytest.approx(0.5 * math.exp(-0.2), rel=1e-14)
    assert c.c_off == pytest.approx(0.5 * math.exp(-0.2), rel=1e-14)
    # m=1: (1/2) * 2 * (1-e) * e
    assert c.c_a[0] == pytest.approx((1 - e) * e, rel=1e-14)
    assert c.trace == pytest.approx(1.0, abs=1e-15)


def test_asymmetric_vacuum_weight_counts_both_modes():
    c = evolve_coefficients(DampingParams(2, 0.1, 0.3))
    expected = 0.5 * ((1 - math.exp(-0.1)) ** 2 + (1 - math.exp(-0.3)) ** 2)
    assert c.c_00 == pytest.approx(expected, rel=1e-14)


@given(params())
@settings(max_examples=300)
def test_unit_trace_and_validity(p):
    c = evolve_coefficients(p)
    assert abs(c.trace - 1.0) <= 1e-12
    c.validate()


@given(params(), st.sampled_from([0.25, 0.5, 2.0, 4.0, 1024.0]))
def test_scale_invariance_exact(p, k):
    # powers of two keep (rate*k)*(t/k) bit-identical
    scaled = DampingParams(
        p.n_photons, p.gamma_amp_1 * k, p.gamma_amp_2 * k, p.gamma_phase_1 * k, p.gamma_phase_2 * k, 1.0 / k
    )
    assert evolve_coefficients(scaled) == evolve_coefficients(p)


@given(params(), st.floats(min_value=0.1, max_value=10.0))
def test_scale_invariance_general(p, k):
    scaled = DampingParams(
        p.n_photons, p.gamma_amp_1 * k, p.gamma_amp_2 * k, p.gamma_phase_1 * k, p.gamma_phase_2 * k, 1.0 / k
    )
    a, b = evolve_coefficients(p), evolve_coefficients(scaled)
    np.testing.assert_allclose(a.c_a + a.c_b + (a.c_00, a.c_off), b.c_a + b.c_b + (b.c_00, b.c_off), rtol=1e-12, atol=1e-300)


@given(photons, st.floats(0.01, 2.0), st.floats(0.0, 2.0))
def test_coherence_strictly_decreasing(n, amp, phase):
    ts = np.linspace(0.0, 3.0, 40)
    offs = [evolve_coefficients(DampingParams(n, amp, amp, phase, phase, float(t))).c_off for t in ts]
    offs = [o for o in offs if o > 1e-300]
    assert all(b < a for a, b in zip(offs, offs[1:]))


# --- to_matrix ------------------------------------------------------------------


def test_basis_ordering():
    assert basis_labels(2) == [(0, 0), (1, 0), (2, 0), (0, 1), (0, 2), (2, 2)]


def test_matrix_t0_n2():
    rho = to_matrix(evolve_coefficients(DampingParams(2, time=0.0))).entries
    expected = np.zeros((6, 6))
    expected[np.ix_([2, 4], [2, 4])] = 0.5
    np.testing.assert_array_equal(rho, expected)


def test_matrix_fully_dephased_is_diagonal():
    rho = to_matrix(evolve_coefficients(DampingParams.symmetric(3, 0.2, 200.0))).entries
    assert np.count_nonzero(rho - np.diag(np.diag(rho))) == 0


def test_matrix_spectrum_n2():
    c = evolve_coefficients(DampingParams.symmetric(2, 0.1))
    m = to_matrix(c)
    assert np.allclose(m.entries, m.entries.T)
    assert np.trace(m.entries) == pytest.approx(1.0, abs=1e-15)
    got = np.sort(np.linalg.eigvalsh(m.entries))
    expected = np.sort([c.c_00, c.c_a[0], c.c_b[0], c.c_N0 + c.c_off, c.c_N0 - c.c_off, 0.0])
    np.testing.assert_allclose(got, expected, atol=1e-15)


# --- special functions -----------------------------------------------------------


@pytest.mark.parametrize("n", range(0, 8))
@pytest.mark.parametrize("x", [0.0, 0.3, 1.7, 4.0])
def test_laguerre_matches_scipy(n, x):
    assert laguerre(n, x) == pytest.approx(float(eval_genlaguerre(n, 0, x)), rel=1e-12, abs=1e-12)


def test_displacement_vacuum_and_identity():
    mu = 0.4 - 0.7j
    assert displacement_matrix_element(0, 0, mu) == pytest.approx(math.exp(-abs(mu) ** 2 / 2))
    for m in range(4):
        for n in range(4):
            assert displacement_matrix_element(m, n, 0.0) == (1.0 if m == n else 0.0)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_displacement_on_vacuum(n):
    mu = 0.8 + 0.3j
    expected = math.exp(-abs(mu) ** 2 / 2) * mu**n / math.sqrt(math.factorial(n))
    assert displacement_matrix_element(n, 0, mu) == pytest.approx(expected, rel=1e-13)


def test_displacement_matches_matrix_exponential():
    mu = 0.6 - 0.45j
    d = displacement_by_expm(mu)
    for m in range(6):
        for n in range(6):
            assert displacement_matrix_element(m, n, mu) == pytest.approx(d[m, n], abs=1e-10)


@given(st.integers(0, 6), st.integers(0, 6), complexes)
def test_displacement_hermiticity(m, n, mu):
    lhs = displacement_matrix_element(m, n, mu)
    rhs = displacement_matrix_element(n, m, -mu).conjugate()
    assert abs(lhs - rhs) <= 1e-12


# --- characteristic function ------------------------------------------------------


@given(params())
def test_characteristic_at_origin(p):
    assert characteristic_function(p, 0, 0) == pytest.approx(1.0, abs=1e-14)


@given(photons, complexes, complexes)
def test_characteristic_t0_is_noon(n, mu1, mu2):
    p = DampingParams(n, 0.3, 0.5, 0.2, 0.1, time=0.0)
    assert abs(characteristic_function(p, mu1, mu2) - noon_characteristic_function(n, mu1, mu2)) <= 1e-12


def test_characteristic_long_time_is_vacuum():
    p = DampingParams.symmetric(3, 80.0)
    for mu1, mu2 in [(0.3, 1j), (1 + 1j, -0.5), (2.0, 0.0)]:
        vac = math.exp(-(abs(mu1) ** 2 + abs(mu2) ** 2) / 2)
        assert characteristic_function(p, mu1, mu2) == pytest.approx(vac, abs=1e-14)


@given(params(n=st.integers(1, 5)), complexes, complexes)
@settings(max_examples=150, deadline=None)
def test_characteristic_matches_density_matrix(p, mu1, mu2):
    # independent route: element-wise Tr[rho D(mu1) (x) D(mu2)] from the coefficient matrix
    rho = to_matrix(evolve_coefficients(p))
    lhs = characteristic_from_matrix(rho, mu1, mu2)
    rhs = characteristic_function(p, mu1, mu2)
    assert abs(lhs - rhs) <= 1e-9

