"""The n-ary Hamming (symmetric) channel family and its row-entropy function."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .errors import ValidationError
from .prob_core import channel

DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class HammingParams:
    """Alphabet size ``n`` and crossover probability ``alpha``.

    ``alpha`` ranges over [0, 1/(n-1)]. The values 0, 1/n and 1/(n-1) are the
    extreme cases; every other value is *regular*.
    """

    n: int
    alpha: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValidationError(f"n must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        a = float(self.alpha)
        if not np.isfinite(a) or a < 0 or a > 1.0 / (self.n - 1):
            raise ValidationError(
                f"alpha must lie in [0, 1/(n-1)] = [0, {1.0 / (self.n - 1):.6g}], got {self.alpha!r}"
            )
        object.__setattr__(self, "alpha", a)

    @property
    def regular(self) -> bool:
        return self.alpha not in self.extremes

    @property
    def extremes(self) -> tuple[float, float, float]:
        return (0.0, 1.0 / self.n, 1.0 / (self.n - 1))

    @property
    def log_n(self) -> float:
        return float(np.log(self.n))

    def distance_to_extreme(self) -> float:
        return min(abs(self.alpha - e) for e in self.extremes)


def hamming_matrix(n: int, q: float) -> np.ndarray:
    """n x n matrix with 1-(n-1)q on the diagonal and q elsewhere (no range check)."""
    m = np.full((n, n), float(q))
    np.fill_diagonal(m, 1.0 - (n - 1) * q)
    return m


def hamming_channel(p: HammingParams) -> np.ndarray:
    return channel(hamming_matrix(p.n, p.alpha))


def _check_q(n: int, q, upper: float) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if np.any(~np.isfinite(q)) or np.any(q < -DOMAIN_SLACK) or np.any(q > upper + DOMAIN_SLACK):
        raise ValidationError(f"q outside [0, {upper:.6g}]")
    return np.clip(q, 0.0, upper)


def h_n(n: int, q):
    """Entropy of a row of the n-ary Hamming channel with crossover ``q``.

    Vectorised over ``q``; valid for q in [0, 1/(n-1)].
    """
    q = _check_q(n, q, 1.0 / (n - 1))
    a = 1.0 - (n - 1) * q
    out = np.maximum(-xlogy(a, a) - (n - 1) * xlogy(q, q), 0.0)
    return float(out) if out.ndim == 0 else out


def deficit(n: int, q):
    """log n - h_n(q), evaluated as a divergence from uniform to avoid cancellation."""
    q = np.clip(np.asarray(q, dtype=float), 0.0, 1.0 / (n - 1))
    a = 1.0 - (n - 1) * q
    out = np.maximum(xlogy(a, n * a) + (n - 1) * xlogy(q, n * q), 0.0)
    return float(out) if out.ndim == 0 else out


def dh_n(n: int, q):
    """Derivative of h_n: -(n-1) log(q / (1-(n-1)q)); +inf at q = 0."""
    q = np.asarray(q, dtype=float)
    with np.errstate(divide="ignore"):
        return -(n - 1) * (np.log(q) - np.log1p(-(n - 1) * q))


def _bisect_increasing(f, target, lo, hi, xtol):
    """Vectorised bisection for f(x) = target with f increasing on [lo, hi]."""
    lo = np.full(target.shape, lo)
    hi = np.full(target.shape, hi)
    for _ in range(200):
        if not np.any(hi - lo > xtol):
            break
        mid = 0.5 * (lo + hi)
        below = f(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return lo, hi


def _solve_increasing_branch(n: int, f, df, target: np.ndarray, xtol: float) -> np.ndarray:
    lo, hi = _bisect_increasing(f, target, 0.0, 1.0 / n, xtol)
    x = 0.5 * (lo + hi)
    # safeguarded Newton polish: keep a step only if it stays in the bracket
    # and does not increase the residual
    for _ in range(2):
        r = f(x) - target
        d = df(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(d > 0, r / d, 0.0)
        cand = x - step
        ok = (cand >= lo) & (cand <= hi) & (np.abs(f(cand) - target) <= np.abs(r))
        x = np.where(ok, cand, x)
    return x


def h_n_inverse(n: int, v, xtol: float = 1e-14):
    """Inverse of h_n on its increasing branch [0, 1/n].

    ``v`` in [0, log n]; values within 1e-12 outside the range are clamped.
    Vectorised over ``v``.
    """
    v = np.asarray(v, dtype=float)
    log_n = np.log(n)
    if np.any(~np.isfinite(v)) or np.any(v < -DOMAIN_SLACK) or np.any(v > log_n + DOMAIN_SLACK):
        raise ValidationError(f"entropy value outside [0, log {n}]")
    v = np.clip(v, 0.0, log_n)
    q = _solve_increasing_branch(
        n, lambda x: h_n(n, x), lambda x: dh_n(n, x), v, xtol
    )
    q = np.where(v == 0.0, 0.0, np.where(v == log_n, 1.0 / n, q))
    return float(q) if q.ndim == 0 else q


def beta_of_rate(n: int, rate, xtol: float = 1e-15):
    """Crossover beta in [0, 1/n] with log n - h_n(beta) = rate.

    Same map as ``h_n_inverse(n, log n - rate)`` but solved on the deficit
    directly, so small rates keep full relative precision.
    """
    r = np.asarray(rate, dtype=float)
    log_n = np.log(n)
    if np.any(~np.isfinite(r)) or np.any(r < -DOMAIN_SLACK) or np.any(r > log_n + DOMAIN_SLACK):
        raise ValidationError(f"rate outside [0, log {n}]")
    r = np.clip(r, 0.0, log_n)
    # deficit is decreasing in beta; solve on -deficit so the helper sees an increasing map
    b = _solve_increasing_branch(
        n, lambda x: -deficit(n, x), lambda x: dh_n(n, x), -r, xtol
    )
    b = np.where(r == 0.0, 1.0 / n, np.where(r == log_n, 0.0, b))
    return float(b) if b.ndim == 0 else b


def gamma_compose(p: HammingParams, beta):
    """Crossover of H_{n,beta} followed by H_{n,alpha}: alpha + (1 - n alpha) beta."""
    b = np.asarray(beta, dtype=float)
    if np.any(~np.isfinite(b)) or np.any(b < -DOMAIN_SLACK) or np.any(b > 1.0 / p.n + DOMAIN_SLACK):
        raise ValidationError(f"beta outside [0, 1/{p.n}]")
    b = np.clip(b, 0.0, 1.0 / p.n)
    g = p.alpha + (1.0 - p.n * p.alpha) * b
    return float(g) if g.ndim == 0 else g
