"""Maximal output-entropy deficit curve phi(R) for uniform-input Hamming
channels, its concave envelope and the resulting IB function.

Internally every quantity is parametrised by the input crossover ``beta``;
rates are obtained from ``beta`` with the deficit function, so the root
searches below never go through a numerical inverse.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import NumericalError, RegimeError, ValidationError
from .hamming import (
    DOMAIN_SLACK,
    HammingParams,
    beta_of_rate,
    deficit,
    gamma_compose,
)

NEAR_EXTREME = 1e-7
ROOT_XTOL = 1e-13
TANGENCY_TOL = 1e-10


@dataclass(frozen=True)
class CurvePoint:
    R: float
    beta: float
    gamma: float
    phi: float
    phi_bar: float
    slope: Optional[float]  # None where the slope formula degenerates (R = 0)


@dataclass(frozen=True)
class CriticalPoints:
    R_s: float
    beta_s: float
    R_c: float
    beta_c: float
    envelope_slope: float
    tangency_residual: float


def _check_rate(p: HammingParams, R) -> np.ndarray:
    r = np.asarray(R, dtype=float)
    if np.any(~np.isfinite(r)) or np.any(r < -DOMAIN_SLACK) or np.any(r > p.log_n + DOMAIN_SLACK):
        raise ValidationError(f"rate outside [0, log {p.n}] = [0, {p.log_n:.12g}]")
    return np.clip(r, 0.0, p.log_n)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def _check_not_near_extreme(p: HammingParams) -> None:
    if p.regular and p.distance_to_extreme() < NEAR_EXTREME:
        raise RegimeError(
            f"alpha={p.alpha!r} is within {NEAR_EXTREME:g} of an extreme value; "
            "pass the extreme value exactly or move alpha away from it"
        )


def _require_curved(p: HammingParams) -> None:
    if p.n == 2:
        raise RegimeError("no critical rate: curve is concave for n = 2 (IB equals phi)")
    if not p.regular:
        raise RegimeError(
            f"alpha={p.alpha:.12g} is an extreme value (0, 1/n or 1/(n-1)); "
            "the IB curve is linear or zero there and has no critical points"
        )
    _check_not_near_extreme(p)


def _logit(n: int, q):
    # log(q / (1 - (n-1) q)); -inf at q = 0
    q = np.asarray(q, dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(q) - np.log1p(-(n - 1) * q)


def _phi_of_beta(p: HammingParams, beta):
    return deficit(p.n, gamma_compose(p, beta))


def _slope_of_beta(p: HammingParams, beta):
    b = np.asarray(beta, dtype=float)
    g = p.alpha + (1.0 - p.n * p.alpha) * b
    lb = _logit(p.n, b)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (1.0 - p.n * p.alpha) * _logit(p.n, g) / lb
    # beta = 0 is R = log n: the denominator diverges, so the slope is 0 unless
    # the numerator diverges too (alpha = 0 or alpha = 1/(n-1))
    if p.alpha == 0.0:
        at_zero = 1.0
    elif p.alpha == 1.0 / (p.n - 1):
        at_zero = 1.0 / (p.n - 1)
    else:
        at_zero = 0.0
    return np.where(b == 0.0, at_zero, s)


def _eta(p: HammingParams, beta):
    n, k = p.n, 1.0 - p.n * p.alpha
    b = np.asarray(beta, dtype=float)
    g = p.alpha + k * b
    return (
        k * g * (1 - (n - 1) * g) * _logit(n, g)
        - k * k * b * (1 - (n - 1) * b) * _logit(n, b)
    )


def _eta_at_zero(p: HammingParams) -> float:
    a, n = p.alpha, p.n
    return float((1 - n * a) * a * (1 - (n - 1) * a) * _logit(n, a))


def eta_third_derivative(p: HammingParams, beta):
    """Closed-form third derivative of ``eta`` in beta; positive on (0, 1/n)."""
    n, k = p.n, 1.0 - p.n * p.alpha
    b = np.asarray(beta, dtype=float)
    g = p.alpha + k * b
    return _scalar(
        k**2 / (b**2 * (1 - (n - 1) * b) ** 2) - k**4 / (g**2 * (1 - (n - 1) * g) ** 2)
    )


def phi(p: HammingParams, R):
    """phi(R) = log n - h_n(gamma), gamma = alpha + (1 - n alpha) h_n^{-1}(log n - R).

    The formula holds for every alpha in [0, 1/(n-1)]; at the extreme values it
    reduces to R, 0 and a convex curve respectively.
    """
    r = _check_rate(p, R)
    return _scalar(np.where(r == 0.0, 0.0, _phi_of_beta(p, beta_of_rate(p.n, r))))


def phi_slope(p: HammingParams, R):
    """dphi/dR from the chain-rule quotient. Undefined at R = 0."""
    r = _check_rate(p, R)
    if np.any(r == 0.0):
        raise ValidationError("slope formula degenerate at origin (R = 0)")
    return _scalar(_slope_of_beta(p, beta_of_rate(p.n, r)))


def eta(p: HammingParams, beta):
    """Function of beta whose sign equals the sign of d^2 phi / dR^2 at R(beta)."""
    b = np.asarray(beta, dtype=float)
    if np.any(~(b > 0)) or np.any(~(b < 1.0 / p.n)):
        raise ValidationError(f"beta must lie in the open interval (0, 1/{p.n})")
    return _scalar(_eta(p, b))


def _bisect(f, lo: float, hi: float, f_lo: float, xtol: float) -> float:
    """Bisection on a bracket where ``f`` changes sign; ``f_lo`` is f(lo)'s value."""
    sign_lo = np.sign(f_lo)
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol or mid in (lo, hi):
            break
        if np.sign(f(mid)) == sign_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _eta_peak(p: HammingParams) -> float:
    """Interior point where eta is positive (near its maximum)."""
    grid = np.linspace(0.0, 1.0 / p.n, 4002)[1:-1]
    vals = _eta(p, grid)
    i = int(np.argmax(vals))
    if not vals[i] > 0:
        raise NumericalError("eta never becomes positive; no inflection found")
    return float(grid[i])


@lru_cache(maxsize=1024)
def _inflection(p: HammingParams) -> tuple[float, float]:
    _require_curved(p)
    top = _eta_peak(p)
    beta_s = _bisect(lambda b: float(_eta(p, b)), 0.0, top, _eta_at_zero(p), 1e-16)
    if not 0.0 < beta_s < 1.0 / p.n:
        raise NumericalError(f"inflection root {beta_s!r} left (0, 1/n)")
    return float(deficit(p.n, beta_s)), beta_s


def inflection_point(p: HammingParams) -> tuple[float, float]:
    """Rate ``R_s`` and crossover ``beta_s`` where phi turns from convex to concave."""
    return _inflection(p)


def _tangent_gap(p: HammingParams, beta: float) -> float:
    """R phi'(R) - phi(R) at R(beta); decreasing in R on (R_s, log n)."""
    return float(deficit(p.n, beta) * _slope_of_beta(p, beta) - _phi_of_beta(p, beta))


@lru_cache(maxsize=1024)
def _critical(p: HammingParams) -> CriticalPoints:
    R_s, beta_s = _inflection(p)
    # beta is decreasing in R, so (R_s, log n) maps to (0, beta_s)
    g_hi = _tangent_gap(p, beta_s)
    g_lo = _tangent_gap(p, 0.0)
    if not (g_hi > 0 and g_lo < 0):
        raise NumericalError(
            f"tangent condition not bracketed on (R_s, log n): g(R_s)={g_hi:.3g}, g(log n)={g_lo:.3g}"
        )
    beta_c = _bisect(lambda b: _tangent_gap(p, b), 0.0, beta_s, g_lo, 1e-17)
    R_c = float(deficit(p.n, beta_c))
    phi_c = float(_phi_of_beta(p, beta_c))
    s = phi_c / R_c
    residual = abs(float(_slope_of_beta(p, beta_c)) - s)
    if residual > TANGENCY_TOL:
        raise NumericalError(f"tangency residual {residual:.3g} exceeds {TANGENCY_TOL:g}")
    return CriticalPoints(R_s, beta_s, R_c, beta_c, s, residual)


def critical_rate(p: HammingParams) -> CriticalPoints:
    """Rate where the tangent through the origin touches phi.

    Below ``R_c`` the concave envelope of phi is the straight line
    ``R * phi(R_c) / R_c``; above it the envelope is phi itself.
    """
    return _critical(p)


def phi_envelope(p: HammingParams, R):
    """Upper concave envelope of phi (requires n >= 3 and regular alpha)."""
    cp = _critical(p)
    r = _check_rate(p, R)
    lin = cp.envelope_slope * r
    out = np.where(r <= cp.R_c, lin, _phi_of_beta(p, beta_of_rate(p.n, r)))
    return _scalar(out)


def extreme_slope(n: int) -> float:
    """Slope of the (linear) IB curve when alpha = 1/(n-1)."""
    return float(np.log(n / (n - 1)) / np.log(n))


def ib_value(p: HammingParams, R):
    """IB(R) for uniform input through H_{n,alpha}, extreme cases included."""
    r = _check_rate(p, R)
    a, n = p.alpha, p.n
    if a == 0.0:
        return _scalar(r.copy())
    if a == 1.0 / n:
        return _scalar(np.zeros_like(r))
    if a == 1.0 / (n - 1):
        return _scalar(extreme_slope(n) * r)
    _check_not_near_extreme(p)
    if n == 2:
        return phi(p, r)
    return phi_envelope(p, r)


def sample_curve(p: HammingParams, grid) -> list[CurvePoint]:
    """Evaluate phi, its envelope and auxiliaries on a sorted grid of rates."""
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise ValidationError("grid must be a non-empty 1-D sequence")
    if np.any(np.diff(g) < 0):
        raise ValidationError("grid must be sorted")
    r = _check_rate(p, g)
    betas = np.atleast_1d(beta_of_rate(p.n, r))
    gammas = np.atleast_1d(gamma_compose(p, betas))
    phis = np.atleast_1d(_phi_of_beta(p, betas))
    bars = np.atleast_1d(ib_value(p, r))
    slopes = np.atleast_1d(_slope_of_beta(p, betas))
    return [
        CurvePoint(
            R=float(r[i]),
            beta=float(betas[i]),
            gamma=float(gammas[i]),
            phi=float(phis[i]),
            phi_bar=float(bars[i]),
            slope=None if r[i] == 0.0 else float(slopes[i]),
        )
        for i in range(r.size)
    ]
