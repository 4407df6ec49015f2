"""Minimal-cardinality optimal representations p(t|x) and their validation.

Three regimes, selected by the target rate R:

* ``constant``: R = 0, a single output symbol;
* ``time_sharing``: 0 < R < R_c, n Hamming symbols at crossover beta_c used
  with total probability R/R_c plus one constant symbol (the last column);
* ``hamming``: R_c <= R <= log n, the Hamming channel H_{n, beta(R)}.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import RegimeError
from .hamming import HammingParams, beta_of_rate, hamming_matrix
from .phi_curve import _check_rate, critical_rate, ib_value
from .prob_core import (
    bayes_reverse,
    channel,
    compose,
    distribution,
    entropy,
    mutual_information,
    uniform,
)

CONSTANT = "constant"
TIME_SHARING = "time_sharing"
HAMMING = "hamming"

PATTERN_TOL = 1e-9


@dataclass(frozen=True)
class Representation:
    channel: np.ndarray  # p(t|x), n rows
    marginal: np.ndarray  # p(t)
    cardinality: int
    regime: str
    R_target: float

    def to_dict(self) -> dict:
        return {
            "channel": self.channel.tolist(),
            "marginal": self.marginal.tolist(),
            "cardinality": self.cardinality,
            "regime": self.regime,
            "R_target": self.R_target,
        }


def _make(w: np.ndarray, regime: str, R: float) -> Representation:
    w = channel(w)
    marginal = distribution(uniform(w.shape[0]) @ w)
    return Representation(w, marginal, w.shape[1], regime, float(R))


def optimal_representation(p: HammingParams, R: float) -> Representation:
    """Build the minimal-cardinality maximiser of IB(R)."""
    R = float(_check_rate(p, R))
    n = p.n
    if not p.regular:
        raise RegimeError(
            f"alpha={p.alpha:.12g} is an extreme value; representations are built for regular alpha only"
        )
    if R == 0.0:
        return _make(np.ones((n, 1)), CONSTANT, R)
    if n == 2:
        return _make(hamming_matrix(n, beta_of_rate(n, R)), HAMMING, R)
    cp = critical_rate(p)
    if R >= cp.R_c:
        return _make(hamming_matrix(n, beta_of_rate(n, R)), HAMMING, R)
    share = R / cp.R_c
    w = np.empty((n, n + 1))
    w[:, :n] = share * hamming_matrix(n, cp.beta_c)
    w[:, n] = 1.0 - share
    return _make(w, TIME_SHARING, R)


@dataclass
class ValidationReport:
    i_xt: float
    i_yt: float
    rate_deviation: float
    ib_deviation: float
    symbol_rates: list
    zero_mass_symbols: list
    pattern_ok: bool
    marginal_ok: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d


def _is_permuted_hamming_row(row: np.ndarray, beta: float, tol: float) -> bool:
    n = row.size
    i = int(np.argmax(row))
    rest = np.delete(row, i)
    return abs(row[i] - (1 - (n - 1) * beta)) <= tol and bool(np.all(np.abs(rest - beta) <= tol))


def validate_representation(p: HammingParams, rep: Representation, tol: float = 1e-9) -> ValidationReport:
    """Recompute I(X;T), I(Y;T) and per-symbol rates from the raw channel.

    I(Y;T) goes through the Markov chain Y - X - T: p(t|y) is the Bayes
    reverse of the Hamming channel composed with p(t|x).
    """
    n = p.n
    px = uniform(n)
    a = hamming_matrix(n, p.alpha)
    w = channel(rep.channel)
    failures = []

    i_xt = mutual_information(px, w)
    x_given_y, py = bayes_reverse(px, a)
    i_yt = mutual_information(py, compose(x_given_y, w))

    target_ib = float(ib_value(p, rep.R_target))
    rate_dev = abs(i_xt - rep.R_target)
    ib_dev = abs(i_yt - target_ib)
    if rate_dev > tol:
        failures.append(f"|I(X;T) - R| = {rate_dev:.3g}")
    if ib_dev > tol:
        failures.append(f"|I(Y;T) - IB(R)| = {ib_dev:.3g}")

    marginal_ok = bool(np.all(np.abs(px @ w - rep.marginal) <= 1e-12))
    if not marginal_ok:
        failures.append("marginal inconsistent with uniform input")

    x_given_t, pt = bayes_reverse(px, w)
    zero_mass = [int(t) for t in np.flatnonzero(np.isnan(x_given_t[:, 0]))]
    rates = [
        None if t in zero_mass else float(np.log(n) - entropy(x_given_t[t]))
        for t in range(w.shape[1])
    ]
    live = [r for r in rates if r is not None]

    pattern_ok = True
    if rep.regime == CONSTANT:
        pattern_ok = rep.cardinality == 1 and all(abs(r) <= tol for r in live)
    elif rep.regime == TIME_SHARING:
        cp = critical_rate(p)
        pattern_ok = rep.cardinality == n + 1 and all(
            abs(r) <= tol or abs(r - cp.R_c) <= tol for r in live
        )
        rows = [x_given_t[t] for t in range(n) if t not in zero_mass]
        pattern_ok &= all(_is_permuted_hamming_row(r, cp.beta_c, tol) for r in rows)
        peaks = [int(np.argmax(r)) for r in rows]
        pattern_ok &= len(set(peaks)) == len(peaks)
    elif rep.regime == HAMMING:
        b = beta_of_rate(n, rep.R_target)
        pattern_ok = rep.cardinality == n and all(abs(r - rep.R_target) <= tol for r in live)
        pattern_ok &= all(
            _is_permuted_hamming_row(x_given_t[t], b, tol)
            for t in range(w.shape[1])
            if t not in zero_mass
        )
    else:
        pattern_ok = False
    if not pattern_ok:
        failures.append(f"per-symbol pattern check failed for regime {rep.regime}")

    return ValidationReport(
        i_xt=i_xt,
        i_yt=i_yt,
        rate_deviation=rate_dev,
        ib_deviation=ib_dev,
        symbol_rates=rates,
        zero_mass_symbols=zero_mass,
        pattern_ok=bool(pattern_ok),
        marginal_ok=marginal_ok,
        failures=failures,
    )
