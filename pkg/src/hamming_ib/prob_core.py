"""Finite-alphabet probability: distributions, channels, entropies and mutual information.

Distributions are 1-D arrays, channels are row-stochastic 2-D arrays with
rows indexed by the input symbol. All logarithms are natural (nats).
The validators return read-only float arrays so values can be shared freely.
"""
from __future__ import annotations

import numpy as np
from scipy.special import xlogy

from .errors import ValidationError

SUM_TOL = 1e-12
RENORM_TOL = 1e-9
MI_FLOOR = -1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _stochastic_rows(a: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{what} has non-finite entries")
    if np.any(a < -SUM_TOL):
        raise ValidationError(f"{what} has negative entries (min {a.min():.3g})")
    a = np.clip(a, 0.0, None)
    if np.any(a > 1.0 + SUM_TOL):
        raise ValidationError(f"{what} has entries above 1")
    sums = a.sum(axis=-1, keepdims=True)
    err = np.abs(sums - 1.0)
    if np.any(err > RENORM_TOL):
        raise ValidationError(f"{what} does not sum to 1 (max deviation {err.max():.3g})")
    if np.any(err > SUM_TOL):
        a = a / sums
    return np.minimum(a, 1.0)


def distribution(probs) -> np.ndarray:
    """Validate ``probs`` as a probability vector.

    Sums within 1e-9 of one are renormalised; anything further off, or any
    entry below -1e-12, raises :class:`ValidationError`.
    """
    a = np.array(probs, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ValidationError("distribution must be a non-empty 1-D sequence")
    return _frozen(_stochastic_rows(a, "distribution"))


def channel(rows) -> np.ndarray:
    """Validate ``rows`` as a row-stochastic matrix (inputs x outputs)."""
    a = np.array(rows, dtype=float)
    if a.ndim != 2 or 0 in a.shape:
        raise ValidationError("channel must be a non-empty 2-D array")
    return _frozen(_stochastic_rows(a, "channel"))


def uniform(n: int) -> np.ndarray:
    return _frozen(np.full(n, 1.0 / n))


def identity_channel(n: int) -> np.ndarray:
    return _frozen(np.eye(n))


def entropy(d) -> float:
    """Shannon entropy in nats, with 0 log 0 = 0."""
    p = distribution(d)
    return float(max(-xlogy(p, p).sum(), 0.0))


def _row_entropies(w: np.ndarray) -> np.ndarray:
    return np.maximum(-xlogy(w, w).sum(axis=1), 0.0)


def _check_dims(p: np.ndarray, w: np.ndarray) -> None:
    if p.shape[0] != w.shape[0]:
        raise ValidationError(
            f"input has {p.shape[0]} symbols but channel has {w.shape[0]} rows"
        )


def output_distribution(input, ch) -> np.ndarray:
    p, w = distribution(input), channel(ch)
    _check_dims(p, w)
    return distribution(p @ w)


def mutual_information(input, ch) -> float:
    """I(X;Y) for X ~ ``input`` and Y drawn through ``ch``.

    Computed as H(Y) - H(Y|X). Values in [-1e-12, 0) are clamped to zero.
    """
    p, w = distribution(input), channel(ch)
    _check_dims(p, w)
    q = p @ w
    mi = float(-xlogy(q, q).sum() - p @ _row_entropies(w))
    if mi < 0.0:
        if mi < MI_FLOOR:
            raise ValidationError(f"negative mutual information {mi:.3g}")
        mi = 0.0
    return mi


def compose(first, second) -> np.ndarray:
    """Serial concatenation X -> Y -> Z of two channels."""
    a, b = channel(first), channel(second)
    if a.shape[1] != b.shape[0]:
        raise ValidationError(
            f"cannot compose {a.shape} channel with {b.shape} channel"
        )
    return channel(a @ b)


def bayes_reverse(input, ch) -> tuple[np.ndarray, np.ndarray]:
    """Reverse a channel by Bayes' rule.

    Returns ``(rev, p_out)`` where ``rev[t, x] = input[x] * ch[x, t] / p_out[t]``.
    Rows for output symbols of zero probability cannot be defined; they are
    returned as NaN and the caller decides whether to drop them. Subnormal
    masses count as zero: the quotient is meaningless at that scale.
    """
    p, w = distribution(input), channel(ch)
    _check_dims(p, w)
    p_out = p @ w
    joint = (p[:, None] * w).T
    rev = np.full_like(joint, np.nan)
    live = p_out >= np.finfo(float).tiny
    rev[live] = joint[live] / p_out[live, None]
    return _frozen(rev), distribution(p_out)
