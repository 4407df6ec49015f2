import numpy as np
import pytest

from hamming_ib import RegimeError, ValidationError
from hamming_ib.hamming import HammingParams, beta_of_rate, deficit, h_n, hamming_channel
from hamming_ib.phi_curve import (
    critical_rate,
    eta,
    eta_third_derivative,
    extreme_slope,
    ib_value,
    inflection_point,
    phi,
    phi_envelope,
    phi_slope,
    sample_curve,
)
from hamming_ib.prob_core import mutual_information, uniform

REGULAR = [(3, 0.05), (3, 0.1), (3, 0.4), (4, 0.1), (4, 0.3), (5, 0.05), (6, 0.18)]


def second_diff(f, r, h):
    return (f(r + h) - 2 * f(r) + f(r - h)) / h**2


@pytest.mark.parametrize("n,alpha", REGULAR + [(2, 0.2)])
def test_phi_endpoints(n, alpha):
    p = HammingParams(n, alpha)
    assert phi(p, 0.0) == 0.0
    assert phi(p, np.log(n)) == pytest.approx(np.log(n) - h_n(n, alpha), abs=1e-12)


def test_phi_endpoint_value():
    assert phi(HammingParams(3, 0.1), np.log(3)) == pytest.approx(0.4595804, abs=5e-8)


def test_phi_mid_regression(pinned):
    p = HammingParams(3, 0.1)
    assert phi(p, pinned["phi_mid"]["R"]) == pytest.approx(pinned["phi_mid"]["value"], abs=1e-9)


def test_phi_rejects_rate():
    with pytest.raises(ValidationError):
        phi(HammingParams(3, 0.1), 1.2)


@pytest.mark.parametrize("n,alpha", REGULAR)
def test_phi_strictly_increasing(n, alpha):
    vals = phi(HammingParams(n, alpha), np.linspace(0, np.log(n), 2001))
    assert np.all(np.diff(vals) > 0)


# --- slope ------------------------------------------------------------------

def test_slope_zero_at_log_n():
    assert phi_slope(HammingParams(3, 0.1), np.log(3)) == 0.0


def test_slope_degenerate_at_origin():
    with pytest.raises(ValidationError, match="degenerate"):
        phi_slope(HammingParams(3, 0.1), 0.0)


def test_slope_finite_difference_point():
    p = HammingParams(3, 0.1)
    R, h = 0.9 * np.log(3), 1e-6
    fd = (phi(p, R + h) - phi(p, R - h)) / (2 * h)
    assert phi_slope(p, R) == pytest.approx(fd, abs=1e-6)


@pytest.mark.parametrize("n,alpha", REGULAR)
def test_slope_matches_finite_differences(n, alpha):
    p = HammingParams(n, alpha)
    h = 1e-6
    r = np.linspace(0.01, np.log(n) - 0.01, 200)
    fd = (phi(p, r + h) - phi(p, r - h)) / (2 * h)
    s = phi_slope(p, r)
    assert np.all(s > 0)
    assert np.abs(s - fd).max() <= 1e-6


# --- eta ----------------------------------------------------------------------

@pytest.mark.parametrize("n,alpha", REGULAR)
def test_eta_limits(n, alpha):
    p = HammingParams(n, alpha)
    assert abs(eta(p, 1 / n - 1e-9)) < 1e-12
    limit = (1 - n * alpha) * alpha * (1 - (n - 1) * alpha) * np.log(alpha / (1 - (n - 1) * alpha))
    assert limit < 0
    assert eta(p, 1e-12) == pytest.approx(limit, abs=1e-9)


@pytest.mark.parametrize("alpha", [0.05, 0.2, 0.4, 0.6, 0.9])
def test_eta_negative_for_binary(alpha):
    p = HammingParams(2, alpha)
    assert eta(p, 0.2) < 0
    assert np.all(eta(p, np.linspace(1e-6, 0.49, 999)) < 0)


def test_eta_domain():
    with pytest.raises(ValidationError):
        eta(HammingParams(3, 0.1), 1 / 3)
    with pytest.raises(ValidationError):
        eta(HammingParams(3, 0.1), 0.0)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_eta_third_derivative_positive(n):
    b = np.linspace(0, 1 / n, 502)[1:-1]
    for alpha in np.linspace(0, 1 / (n - 1), 13)[1:-1]:
        if abs(alpha - 1 / n) < 1e-9:
            continue
        assert np.all(eta_third_derivative(HammingParams(n, alpha), b) > 0)


@pytest.mark.parametrize("n,alpha", REGULAR)
def test_eta_sign_matches_curvature(n, alpha):
    p = HammingParams(n, alpha)
    R_s, _ = inflection_point(p)
    r = np.linspace(0.005, np.log(n) - 0.005, 300)
    r = r[np.abs(r - R_s) > 2e-3]
    curv = second_diff(lambda x: phi(p, x), r, 1e-5)
    signs = np.sign(eta(p, beta_of_rate(n, r)))
    np.testing.assert_array_equal(signs, np.sign(curv))


# --- inflection / critical ---------------------------------------------------------

@pytest.mark.parametrize("n,alpha", REGULAR)
def test_inflection_bracket(n, alpha):
    p = HammingParams(n, alpha)
    R_s, beta_s = inflection_point(p)
    assert 0 < R_s < np.log(n)
    assert eta(p, beta_s - 1e-4) < 0 < eta(p, beta_s + 1e-4)
    assert R_s == pytest.approx(deficit(n, beta_s), abs=1e-15)
    grid = np.linspace(0, 1 / n, 20001)[1:-1]
    e = eta(p, grid)
    assert np.all(e[grid < beta_s - 1e-6] < 0)
    assert np.all(e[grid > beta_s + 1e-6] > 0)


def test_inflection_matches_sign_scan(pinned):
    _, beta_s = inflection_point(HammingParams(3, 0.1))
    assert pinned["beta_s"]["scan_lo"] <= beta_s <= pinned["beta_s"]["scan_hi"]
    assert beta_s == pytest.approx(pinned["beta_s"]["value"], abs=1e-10)


def test_inflection_binary_rejected():
    with pytest.raises(RegimeError, match="concave"):
        inflection_point(HammingParams(2, 0.2))


@pytest.mark.parametrize("n,alpha", REGULAR)
def test_critical_bracket_and_tangency(n, alpha):
    p = HammingParams(n, alpha)
    cp = critical_rate(p)

    def g(R):
        return R * phi_slope(p, R) - phi(p, R)

    assert g(cp.R_s) > 0
    assert g(np.log(n)) < 0
    assert cp.R_s < cp.R_c < np.log(n)
    assert abs(phi_slope(p, cp.R_c) - phi(p, cp.R_c) / cp.R_c) <= 1e-10
    assert cp.envelope_slope == pytest.approx(phi(p, cp.R_c) / cp.R_c, abs=1e-13)
    assert cp.beta_c == pytest.approx(beta_of_rate(n, cp.R_c), abs=1e-12)
    r = np.linspace(cp.R_s + 1e-6, np.log(n) - 1e-6, 200)
    assert np.all(np.diff(g(r)) < 0)


def test_critical_regression(pinned):
    cp = critical_rate(HammingParams(3, 0.1))
    assert cp.R_c == pytest.approx(pinned["R_c"]["value"], abs=1e-10)
    assert cp.R_s == pytest.approx(pinned["beta_s"]["R_s"], abs=1e-10)


@pytest.mark.parametrize(
    "n,alpha,msg", [(2, 0.1, "concave"), (3, 1 / 3, "extreme"), (3, 0.0, "extreme"), (3, 0.5, "extreme")]
)
def test_critical_rejects(n, alpha, msg):
    with pytest.raises(RegimeError, match=msg):
        critical_rate(HammingParams(n, alpha))


def test_near_extreme_rejected():
    with pytest.raises(RegimeError, match="within"):
        critical_rate(HammingParams(3, 1 / 3 + 1e-9))
    with pytest.raises(RegimeError):
        ib_value(HammingParams(3, 1e-9), 0.5)


# --- envelope / IB ----------------------------------------------------------------

def test_envelope_points():
    p = HammingParams(3, 0.1)
    cp = critical_rate(p)
    assert phi_envelope(p, 0.0) == 0.0
    assert phi_envelope(p, cp.R_c) == pytest.approx(phi(p, cp.R_c), abs=1e-15)
    half = phi_envelope(p, cp.R_c / 2)
    assert half == pytest.approx(phi(p, cp.R_c) / 2, abs=1e-15)
    assert half > phi(p, cp.R_c / 2)


@pytest.mark.parametrize("n,alpha", REGULAR)
def test_envelope_dominance_and_contact(n, alpha):
    p = HammingParams(n, alpha)
    cp = critical_rate(p)
    inside = np.linspace(0, cp.R_c, 502)[1:-1]
    outside = np.linspace(cp.R_c, np.log(n), 500)
    assert np.all(phi_envelope(p, inside) - phi(p, inside) > 0)
    assert np.all(np.abs(phi_envelope(p, outside) - phi(p, outside)) <= 1e-10)
    assert phi_envelope(p, 0.0) - phi(p, 0.0) == 0.0


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_ib_extremes(n):
    r = np.linspace(0, np.log(n), 100)
    np.testing.assert_array_equal(ib_value(HammingParams(n, 0.0), r), r)
    np.testing.assert_array_equal(ib_value(HammingParams(n, 1 / n), r), np.zeros(100))
    np.testing.assert_allclose(
        ib_value(HammingParams(n, 1 / (n - 1)), r), np.log(n / (n - 1)) / np.log(n) * r, atol=1e-12
    )


def test_ib_extreme_examples():
    assert ib_value(HammingParams(3, 0.0), 0.5) == 0.5
    assert ib_value(HammingParams(4, 0.25), 0.7) == 0.0
    assert ib_value(HammingParams(3, 0.5), np.log(3)) == pytest.approx(np.log(1.5), abs=1e-15)
    assert np.log(1.5) == pytest.approx(0.4054651, abs=5e-8)
    assert extreme_slope(3) == pytest.approx(0.3691, abs=5e-5)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_phi_convex_at_max_crossover(n):
    # at alpha = 1/(n-1) phi is convex, so its envelope is the chord to log n
    p = HammingParams(n, 1 / (n - 1))
    r = np.linspace(0.01, np.log(n) - 0.01, 200)
    assert np.all(second_diff(lambda x: phi(p, x), r, 1e-5) > 0)
    assert phi(p, np.log(n)) == pytest.approx(extreme_slope(n) * np.log(n), abs=1e-12)
    assert np.all(phi(p, r) < ib_value(p, r))


@pytest.mark.parametrize("n,alpha", REGULAR + [(2, 0.3), (2, 0.8)])
def test_ib_at_full_rate_is_mutual_information(n, alpha):
    p = HammingParams(n, alpha)
    assert ib_value(p, np.log(n)) == pytest.approx(
        mutual_information(uniform(n), hamming_channel(p)), abs=1e-10
    )


@pytest.mark.parametrize("alpha", [0.05, 0.2, 0.35, 0.7])
def test_binary_curve_concave(alpha):
    p = HammingParams(2, alpha)
    r = np.linspace(1e-3, np.log(2) - 1e-3, 400)
    assert np.all(second_diff(lambda x: phi(p, x), r, 1e-5) <= 0)
    np.testing.assert_array_equal(ib_value(p, r), phi(p, r))


# --- sampling ---------------------------------------------------------------------

def test_sample_endpoints():
    p = HammingParams(3, 0.1)
    a, b = sample_curve(p, [0.0, np.log(3)])
    assert (a.phi, a.phi_bar, a.slope) == (0.0, 0.0, None)
    assert b.phi == pytest.approx(np.log(3) - h_n(3, 0.1), abs=1e-12)
    assert b.phi_bar == pytest.approx(b.phi, abs=1e-12)
    assert b.slope == 0.0


def test_sample_columns():
    p = HammingParams(3, 0.1)
    pts = sample_curve(p, np.linspace(0, np.log(3), 1001))
    ph = np.array([c.phi for c in pts])
    bar = np.array([c.phi_bar for c in pts])
    assert np.all(np.diff(ph) > 0)
    assert np.all(np.diff(bar, 2) <= 1e-10)
    assert np.all(ph <= bar + 1e-12)
    assert all(0 <= c.phi <= np.log(3) - h_n(3, 0.1) + 1e-12 for c in pts)


def test_sample_is_deterministic():
    p = HammingParams(4, 0.2)
    g = np.linspace(0, np.log(4), 101)
    assert sample_curve(p, g) == sample_curve(p, g)


def test_sample_rejects_bad_grids():
    p = HammingParams(3, 0.1)
    with pytest.raises(ValidationError):
        sample_curve(p, [0.5, 0.1])
    with pytest.raises(ValidationError):
        sample_curve(p, [0.0, 2.0])
