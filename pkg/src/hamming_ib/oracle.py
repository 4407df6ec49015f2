"""Brute-force verifiers that do not use the closed-form curve.

* ``phi_bruteforce`` enumerates a simplex grid of input distributions.
* ``envelope_bruteforce`` takes the upper concave hull of sampled phi values.
* ``ib_constrained_search`` runs a multi-restart projected-gradient ascent on
  I(Y;T) over channels p(t|x) of fixed output size, with I(X;T) <= R.
* ``tightness_check`` combines the search at |T| = n with the explicit
  (n+1)-symbol construction to exhibit the cardinality gap.
"""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq
from scipy.special import xlogy

from .errors import NumericalError, RegimeError, ValidationError
from .hamming import HammingParams, beta_of_rate, hamming_matrix
from .phi_curve import critical_rate, ib_value
from .prob_core import mutual_information, uniform
from .representations import optimal_representation, validate_representation

MAX_BRUTEFORCE_N = 4
FEASIBILITY_TOL = 1e-9

# |gap| below this is indistinguishable from search and rounding noise
GAP_THRESHOLD = 1e-6


@dataclass(frozen=True)
class SearchConfig:
    grid_resolution: int = 400
    restarts: int = 64
    max_iterations: int = 4000
    step_tolerance: float = 1e-10
    seed: int = 1

    def __post_init__(self):
        for name in ("grid_resolution", "restarts", "max_iterations"):
            if int(getattr(self, name)) < 1:
                raise ValidationError(f"{name} must be a positive integer")
        if not self.step_tolerance > 0:
            raise ValidationError("step_tolerance must be positive")
        if not 0 <= int(self.seed) < 2**64:
            raise ValidationError("seed must be a 64-bit non-negative integer")

    @classmethod
    def for_n(cls, n: int, **kw) -> "SearchConfig":
        """Default config with the grid coarsened for n = 4."""
        kw.setdefault("grid_resolution", 400 if n <= 3 else 100)
        return cls(**kw)


# ---------------------------------------------------------------------------
# simplex-grid oracle for phi


def simplex_grid(n: int, resolution: int) -> np.ndarray:
    """All points of the simplex with coordinates in multiples of 1/resolution.

    The barycenter is appended so the zero-rate constraint always has a
    feasible point even when ``resolution`` is not a multiple of ``n``.
    """
    if n > MAX_BRUTEFORCE_N:
        raise ValidationError(f"simplex enumeration limited to n <= {MAX_BRUTEFORCE_N}")
    if resolution < 1:
        raise ValidationError("grid resolution too coarse to contain any feasible point")
    # stars and bars: choose n-1 cut positions among resolution + n - 1 slots
    cuts = np.array(
        list(itertools.combinations(range(resolution + n - 1), n - 1)), dtype=np.int64
    ).reshape(-1, n - 1)
    edges = np.hstack(
        [np.full((len(cuts), 1), -1), cuts, np.full((len(cuts), 1), resolution + n - 1)]
    )
    counts = np.diff(edges, axis=1) - 1
    pts = counts / resolution
    return np.vstack([pts, np.full((1, n), 1.0 / n)])


@lru_cache(maxsize=16)
def _grid_cloud(n: int, alpha: float, resolution: int):
    q = simplex_grid(n, resolution)
    y = q @ hamming_matrix(n, alpha)
    rates = xlogy(q, n * q).sum(axis=1)
    gains = xlogy(y, n * y).sum(axis=1)
    order = np.argsort(rates, kind="stable")
    r_sorted = rates[order]
    run = np.maximum.accumulate(gains[order])
    # index of the point attaining each running maximum
    best = np.where(gains[order] == run, np.arange(len(order)), 0)
    best = order[np.maximum.accumulate(best)]
    for a in (q, r_sorted, run, best):
        a.setflags(write=False)
    return q, r_sorted, run, best


def _grid_lookup(p: HammingParams, R, resolution: int):
    q, r_sorted, run, best = _grid_cloud(p.n, p.alpha, resolution)
    r = np.asarray(R, dtype=float)
    if np.any(r < -1e-12) or np.any(r > p.log_n + 1e-12):
        raise ValidationError(f"rate outside [0, log {p.n}]")
    k = np.searchsorted(r_sorted, r + 1e-15, side="right") - 1
    if np.any(k < 0):
        raise ValidationError("grid resolution too coarse to contain any feasible point")
    return run[k], q[best[k]]


def phi_bruteforce(p: HammingParams, R, cfg: SearchConfig, return_argmax: bool = False):
    """Maximise log n - H(Y) over simplex-grid inputs with log n - H(X) <= R."""
    value, q = _grid_lookup(p, R, cfg.grid_resolution)
    value = float(value) if np.ndim(value) == 0 else value
    return (value, q) if return_argmax else value


def nearest_extremal_input(n: int, q, R: float) -> float:
    """Max-norm distance from ``q`` to the closest permutation of
    (1-(n-1)b, b, ..., b) with b = beta_of_rate(n, R)."""
    b = beta_of_rate(n, R)
    best = np.inf
    for i in range(n):
        v = np.full(n, b)
        v[i] = 1.0 - (n - 1) * b
        best = min(best, float(np.abs(np.asarray(q) - v).max()))
    return best


# ---------------------------------------------------------------------------
# envelope oracle


def upper_concave_hull(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Indices of the vertices of the upper concave hull of points sorted by x."""
    hull: list[int] = []
    for i in range(len(x)):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    return np.array(hull)


@dataclass(frozen=True)
class Envelope:
    rates: np.ndarray
    samples: np.ndarray
    vertex_rates: np.ndarray
    vertex_values: np.ndarray
    spacing: float

    @property
    def R_c(self) -> float:
        """Right end of the first hull segment (the one starting at the origin)."""
        return float(self.vertex_rates[1])

    def __call__(self, R):
        return np.interp(R, self.vertex_rates, self.vertex_values)


def envelope_bruteforce(
    p: HammingParams,
    cfg: SearchConfig,
    samples: int = 401,
    phi_func: Optional[Callable] = None,
) -> Envelope:
    """Upper concave majorant of phi sampled on a uniform rate grid.

    By default phi is taken from the simplex-grid oracle; pass ``phi_func`` to
    hull some other sampled curve.
    """
    if p.n < 3 or not p.regular:
        raise RegimeError("envelope oracle needs n >= 3 and a regular alpha")
    rates = np.linspace(0.0, p.log_n, samples)
    if phi_func is None:
        vals = np.asarray(phi_bruteforce(p, rates, cfg), dtype=float)
    else:
        vals = np.asarray(phi_func(rates), dtype=float)
    idx = upper_concave_hull(rates, vals)
    return Envelope(rates, vals, rates[idx], vals[idx], float(rates[1] - rates[0]))


# ---------------------------------------------------------------------------
# constrained representation search


def _info_terms(w: np.ndarray, a: np.ndarray):
    """I(X;T), I(Y;T) and their gradients in w = p(t|x), uniform X."""
    n = w.shape[0]
    p_t = w.sum(axis=0) / n
    joint_yt = a.T @ w / n
    safe_w = np.maximum(w, 1e-300)
    safe_t = np.maximum(p_t, 1e-300)
    safe_yt = np.maximum(joint_yt, 1e-300)
    i_xt = float((xlogy(w, safe_w / safe_t).sum()) / n)
    log_yt = np.log(safe_yt * n / safe_t)  # log p(y,t) / (p(y) p(t)), p(y) = 1/n
    i_yt = float(xlogy(joint_yt, safe_yt * n / safe_t).sum())
    g_xt = np.log(safe_w / safe_t) / n
    g_yt = a @ log_yt / n
    return i_xt, i_yt, g_xt, g_yt


def project_rows_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of every row onto the probability simplex."""
    m = v.shape[1]
    u = -np.sort(-v, axis=1)
    css = np.cumsum(u, axis=1) - 1.0
    ks = np.arange(1, m + 1)
    cond = u - css / ks > 0
    rho = m - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = css[np.arange(len(v)), rho] / (rho + 1)
    return np.maximum(v - theta[:, None], 0.0)


def _i_xt(w: np.ndarray) -> float:
    n = w.shape[0]
    p_t = np.maximum(w.sum(axis=0) / n, 1e-300)
    return float(xlogy(w, w / p_t).sum() / n)


def _repair(w: np.ndarray, R: float) -> np.ndarray:
    """Pull ``w`` toward the uniform-row channel until I(X;T) <= R."""
    m = w.shape[1]
    target = np.full_like(w, 1.0 / m)

    def excess(t):
        return _i_xt((1 - t) * w + t * target) - R

    if excess(0.0) <= 0:
        return w
    t = brentq(excess, 0.0, 1.0, xtol=1e-15)
    for _ in range(60):
        if excess(t) <= 0:
            break
        t = min(1.0, t + 1e-14 + 1e-3 * (1 - t))
    return (1 - t) * w + t * target


def _ascend(w0: np.ndarray, a: np.ndarray, R: float, cfg: SearchConfig):
    w = _repair(project_rows_to_simplex(w0), R)
    i_xt, f, g_xt, g_yt = _info_terms(w, a)
    step = 1.0
    it = 0
    for it in range(1, cfg.max_iterations + 1):
        # row-sum-preserving directions
        df = g_yt - g_yt.mean(axis=1, keepdims=True)
        dc = g_xt - g_xt.mean(axis=1, keepdims=True)
        if i_xt >= R - 1e-9:
            cc = float((dc * dc).sum())
            if cc > 0:
                df = df - max(0.0, float((df * dc).sum()) / cc) * dc
        norm = float(np.abs(df).max())
        if norm == 0.0:
            break
        while step >= cfg.step_tolerance:
            cand = _repair(project_rows_to_simplex(w + (step / norm) * df), R)
            c_xt, c_f, c_gxt, c_gyt = _info_terms(cand, a)
            if c_f > f:
                w, i_xt, f, g_xt, g_yt = cand, c_xt, c_f, c_gxt, c_gyt
                step = min(step * 2.0, 1.0)
                break
            step *= 0.5
        else:
            break
    return w, f, it


def _structured_starts(p: HammingParams, R: float, m: int) -> list[np.ndarray]:
    """Strong |T| = m candidates built from the closed-form optimisers."""
    n = p.n
    starts = []
    b = beta_of_rate(n, R)
    if m == n:
        starts.append(hamming_matrix(n, b))
    if m >= 2:
        rep = optimal_representation(p, R) if n >= 3 and 0 < R else None
        if rep is not None and rep.cardinality == n + 1 and m == n:
            w = np.asarray(rep.channel)
            # merge the constant symbol into one Hamming symbol
            merged = w[:, :n].copy()
            merged[:, 0] += w[:, n]
            starts.append(merged)
            # merge two Hamming symbols, keep the constant one
            merged = np.hstack([w[:, :1] + w[:, 1:2], w[:, 2:]])
            starts.append(merged)
    return starts


def _random_start(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    return rng.dirichlet(np.full(m, 0.5), size=n)


@dataclass
class SearchResult:
    value: float
    channel: np.ndarray
    restart_values: list = field(default_factory=list)
    iterations: list = field(default_factory=list)
    best_restart: int = 0


def ib_constrained_search(
    p: HammingParams, R: float, cardinality: int, cfg: SearchConfig
) -> SearchResult:
    """Best I(Y;T) found over p(t|x) with |T| = ``cardinality`` and I(X;T) <= R.

    Restart ``k`` draws from its own generator seeded with ``cfg.seed + k``;
    the first restarts start from structured candidates (and perturbations
    of them), the rest from random Dirichlet rows.
    """
    n = p.n
    if n > MAX_BRUTEFORCE_N:
        raise ValidationError(f"constrained search limited to n <= {MAX_BRUTEFORCE_N}")
    if not 1 <= cardinality <= n + 1:
        raise ValidationError(f"cardinality must lie in [1, {n + 1}]")
    R = float(R)
    if not 0 <= R <= p.log_n + 1e-12:
        raise ValidationError(f"rate outside [0, log {n}]")
    m = cardinality
    a = hamming_matrix(n, p.alpha)
    if m == 1:
        w = np.ones((n, 1))
        return SearchResult(0.0, w, [0.0], [0], 0)

    structured = _structured_starts(p, R, m)
    values, iters = [], []
    best_val, best_w, best_k = -np.inf, None, 0
    for k in range(cfg.restarts):
        rng = np.random.default_rng(cfg.seed + k)
        if k < len(structured):
            w0 = structured[k]
        elif k < 2 * len(structured):
            base = structured[k - len(structured)]
            w0 = base + 0.02 * rng.standard_normal(base.shape)
        else:
            w0 = _random_start(rng, n, m)
        w, f, it = _ascend(w0, a, R, cfg)
        values.append(f)
        iters.append(it)
        if f > best_val:
            best_val, best_w, best_k = f, w, k
    if best_w is None:
        raise NumericalError("no feasible start found")
    # report the value recomputed from the raw channel
    i_yt = _markov_iyt(best_w, a)
    return SearchResult(i_yt, best_w, values, iters, best_k)


def _markov_iyt(w: np.ndarray, a: np.ndarray) -> float:
    """I(Y;T) through Y - X - T with uniform X, using the generic MI routine."""
    n = w.shape[0]
    # p(t|y) = sum_x p(x|y) p(t|x); for uniform X and symmetric A, p(x|y) = A[x, y]
    p_x_given_y = a.T * (1.0 / n) / (uniform(n) @ a)[:, None]
    return mutual_information(uniform(n) @ a, p_x_given_y @ w)


@dataclass
class TightnessReport:
    n: int
    alpha: float
    R: float
    envelope_value: float
    best_at_card_n: float
    best_at_card_n1: float
    gap: float
    search_certificate: dict

    def to_dict(self) -> dict:
        return asdict(self)


def tightness_check(p: HammingParams, R: float, cfg: SearchConfig) -> TightnessReport:
    """Compare the best |T| = n representation found with the |T| = n+1 optimum."""
    cp = critical_rate(p)
    if not 0.0 < R < cp.R_c:
        raise RegimeError(
            f"tightness claim applies only below R_c: need 0 < R < {cp.R_c:.12g}, got {R:.12g}"
        )
    env = float(ib_value(p, R))
    search = ib_constrained_search(p, R, p.n, cfg)
    rep = optimal_representation(p, R)
    report = validate_representation(p, rep)
    i_xt_best = mutual_information(uniform(p.n), search.channel)
    cert = {
        "config": asdict(cfg),
        "best_restart": search.best_restart,
        "iterations": search.iterations,
        "restart_values": search.restart_values,
        "best_channel_card_n": search.channel.tolist(),
        "best_channel_i_xt": i_xt_best,
        "card_n1_i_xt": report.i_xt,
        "card_n1_pattern_ok": report.pattern_ok,
    }
    return TightnessReport(
        n=p.n,
        alpha=p.alpha,
        R=float(R),
        envelope_value=env,
        best_at_card_n=search.value,
        best_at_card_n1=report.i_yt,
        gap=env - search.value,
        search_certificate=cert,
    )
