"""Evaluation of Fourier-Bessel expansions f(k/N) = sum_n c_n J_nu(k j_{0,n} / N).

The frequencies j_{0,n} (positive roots of J0) are not equally spaced, so
the DCT/DST machinery does not apply directly.  Writing j_{0,n} =
(n - 1/4) pi + b_n turns the expansion matrix into a perturbation of a
Schlomilch matrix with frequency shift gamma = -1/4, and the Neumann
addition formula combined with the Taylor series of the perturbation factor
J_s(r b_n) gives the truncated decomposition

    sum_{s=-K+1}^{K-1} sum_{t=0}^{T-1} (-1)^t 2^(-2t-s) / (t! (t+s)!)
        D_r^(2t+s) J_{nu-s}(r omega~^T) D_b^(2t+s)

which, after collecting terms with equal u = 2t + s and folding s with -s
through J_{-s} = (-1)^s J_s, costs only 2T + K - 2 Schlomilch applications.
The truncation is reliable only beyond the first few columns (the
perturbations b_n decay like 1/n); those columns are summed directly.
"""

import math
from dataclasses import dataclass

import numpy as np

from .bessel import bessel_j, bessel_roots_j0
from .schlomilch import MIN_EPS, SchlomilchEngine, _kahan_add

__all__ = [
    "NeumannParams",
    "neumann_column_cutoff",
    "taylor_column_cutoff",
    "select_neumann_params",
    "neumann_matvec",
    "fourier_bessel_eval",
    "fourier_bessel_direct",
]


@dataclass(frozen=True)
class NeumannParams:
    """Truncation orders for the Neumann/Taylor double sum.

    k_terms (K) truncates the addition formula to |s| <= K-1, t_terms (T)
    truncates the perturbation Taylor series; the decomposition is accurate
    from column floor(max(p_cut, q_cut)) + 1 = n_split + 1 onwards.
    """

    k_terms: int
    t_terms: int
    p_cut: float
    q_cut: float
    n_split: int


def neumann_column_cutoff(k_terms, eps):
    """p_K(eps) = (e / (16 pi)) (5.2 / eps)^(1/K) + 1/4: columns below this
    have perturbations too large for the K-truncated addition formula."""
    return math.e / (16.0 * math.pi) * (5.2 / eps) ** (1.0 / k_terms) + 0.25


def taylor_column_cutoff(t_terms, eps):
    """q_T(eps) = eps^(-1/(2T)) / (16 pi (T!)^(1/T)) + 1/4: columns below
    this have perturbations too large for the T-term Taylor factor."""
    root_fact = math.exp(math.lgamma(t_terms + 1) / t_terms)
    return eps ** (-1.0 / (2.0 * t_terms)) / (16.0 * math.pi * root_fact) + 0.25


def select_neumann_params(eps, margin=1.0):
    """Smallest K and T with margin * p_K(eps) <= 30 and
    margin * q_T(eps) <= 30, plus the resulting column split."""
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    k_terms = 1
    while margin * neumann_column_cutoff(k_terms, eps) > 30.0:
        k_terms += 1
    t_terms = 1
    while margin * taylor_column_cutoff(t_terms, eps) > 30.0:
        t_terms += 1
    p = neumann_column_cutoff(k_terms, eps)
    q = taylor_column_cutoff(t_terms, eps)
    return NeumannParams(
        k_terms=k_terms,
        t_terms=t_terms,
        p_cut=p,
        q_cut=q,
        n_split=int(margin * max(p, q)),
    )


# ---------------------------------------------------------------------------
# Rearranged truncated decomposition.


def _reflected(order, weight):
    # J_{-n} = (-1)^n J_n
    if order >= 0:
        return order, weight
    return -order, weight * (-1.0) ** (-order)


def folded_terms(base_orders, u, k_terms, t_terms):
    """Weighted Bessel orders of the u-th collected term.

    For u = 2t + s the coefficient is (-1)^t 2^(-u) / (t! (u-t)!), the s = 0
    contribution is halved (it appears once, not twice, in the folded sum),
    and negative orders are reflected to non-negative ones.  Returns a
    sorted tuple of (order, weight) pairs; empty when no (s, t) pair in the
    truncation box produces this u.
    """
    terms = {}
    t_lo = max(-(-(u - k_terms + 1) // 2), 0)  # ceil((u-K+1)/2)
    t_hi = min(u // 2, t_terms - 1)
    for t in range(t_lo, t_hi + 1):
        s = u - 2 * t
        coef = (-1.0) ** t * 2.0 ** -u / (math.factorial(t) * math.factorial(u - t))
        if s == 0:
            coef *= 0.5  # both +s and -s branches below add the same term
        for base, base_w in base_orders:
            for order, weight in (
                _reflected(base - s, base_w * coef),
                _reflected(base + s, base_w * coef * (-1.0) ** s),
            ):
                terms[order] = terms.get(order, 0.0) + weight
    return tuple(sorted(terms.items()))


def _order_universe(base_orders, k_terms):
    orders = set()
    for base, _ in base_orders:
        for s in range(k_terms):
            orders.add(abs(base - s))
            orders.add(abs(base + s))
    return orders


class _FbShared:
    """Holds the partitioned Schlomilch engine so that nested callers (the
    Hankel transform) reuse it across their own collected terms."""

    def __init__(self, engine):
        self.engine = engine


def _bump(stats, key, amount=1):
    if stats is not None:
        stats[key] = stats.get(key, 0) + amount


def _direct_columns_many(jobs, n_grid, roots, outs, stats):
    """Direct summation over each job's low columns at all N grid points,
    O(n_split * N) per job; Bessel values are evaluated once per distinct
    order and shared across jobs."""
    by_order = {}
    for i, (base_orders, c_low) in enumerate(jobs):
        if c_low.shape[0] == 0:
            continue
        for order, weight in base_orders:
            by_order.setdefault(order, []).append((i, weight))
    if not by_order:
        return
    ncols_max = max(c.shape[0] for _, c in jobs)
    r = np.arange(1, n_grid + 1, dtype=float) / n_grid
    freqs = roots.roots[:ncols_max]
    for order in sorted(by_order):
        for k0 in range(0, n_grid, 4096):
            k1 = min(k0 + 4096, n_grid)
            z = np.multiply.outer(r[k0:k1], freqs)
            vals = bessel_j(order, z)
            _bump(stats, "pointwise_evaluations", z.size)
            for i, weight in by_order[order]:
                ncols = jobs[i][1].shape[0]
                if ncols:
                    outs[i][k0:k1] += weight * (vals[:, :ncols] @ jobs[i][1])


def _fb_jobs_apply(jobs, params, schlomilch_eps, roots, stats=None,
                   shared=None, prune_eps=None):
    """Evaluate sum_j w_j J_{m_j}(k j_{0,n} / N) c_n for a batch of jobs
    (base_orders, c), all on the same grid.

    Coefficients are split at n_split: low columns are summed directly and
    the rest go through the truncated Neumann decomposition, whose
    collected terms from all jobs are dispatched to the shared engine in
    one batch.  With `prune_eps` set, collected terms whose rigorous bound
    (max |b_n| over the supported columns, powered) falls below a small
    fraction of prune_eps * ||c||_1 are skipped.
    """
    n_grid = jobs[0][1].shape[0]
    n_split = min(params.n_split, n_grid)
    outs = []
    direct_jobs = []
    for base_orders, c in jobs:
        if c.shape[0] != n_grid:
            raise ValueError("all jobs must share one grid size")
        outs.append(np.zeros(n_grid, dtype=np.result_type(c.dtype, np.float64)))
        direct_jobs.append((base_orders, c[:n_split]))
    _direct_columns_many(direct_jobs, n_grid, roots, outs, stats)
    if n_grid <= n_split:
        return outs
    support = min(n_grid, roots.n_max)
    b = np.zeros(n_grid)
    b[:support] = roots.perturbations[:support]
    top = 2 * params.t_terms + params.k_terms - 2
    requests = []
    placement = []  # (job index, u)
    for i, (base_orders, c) in enumerate(jobs):
        if np.any(c[support:]):
            raise ValueError("roots table too short for the coefficient support")
        c_high = c.copy()
        c_high[:n_split] = 0.0
        norm1 = np.sum(np.abs(c_high))
        if norm1 == 0.0:
            continue
        nonzero = c_high != 0.0
        b_max = float(np.max(np.abs(b[nonzero])))
        b_pow = np.ones(n_grid)
        for u in range(top):
            terms = folded_terms(base_orders, u, params.k_terms, params.t_terms)
            if terms:
                keep = True
                if prune_eps is not None:
                    weight_sum = sum(abs(w) for _, w in terms)
                    keep = (
                        b_max ** u * weight_sum >= 0.02 * prune_eps
                    )
                if keep:
                    requests.append((terms, b_pow * c_high))
                    placement.append((i, u))
                    _bump(stats, "schlomilch_evaluations")
            b_pow = b_pow * b
    if not requests:
        return outs
    if shared is None:
        universe = set()
        for base_orders, _ in jobs:
            universe |= _order_universe(base_orders, params.k_terms)
        shared = _FbShared(
            SchlomilchEngine(n_grid, -0.25, schlomilch_eps, universe)
        )
    ys = shared.engine.apply_many(requests, stats)
    r = np.arange(1, n_grid + 1, dtype=float) / n_grid
    for (i, u), y in zip(placement, ys):
        outs[i] += r ** u * y
    return outs


# ---------------------------------------------------------------------------
# Public entry points.


def neumann_matvec(nu, c, params, schlomilch_eps, roots=None, stats=None):
    """Truncated-Neumann evaluation of sum_n c_n J_nu(k j_{0,n} / N).

    The caller guarantees c_n = 0 for n <= params.n_split (columns where
    the truncated decomposition is unreliable); each collected term runs
    one Schlomilch application at accuracy `schlomilch_eps`.
    """
    c = np.asarray(c)
    assert not np.any(
        c[: min(params.n_split, c.shape[0])]
    ), "coefficients below n_split must be zero"
    if roots is None:
        roots = bessel_roots_j0(c.shape[0])
    jobs = [(((int(nu), 1.0),), c)]
    n_grid = c.shape[0]
    support = min(n_grid, roots.n_max)
    if np.any(c[support:]):
        raise ValueError("roots table too short for the coefficient support")
    b = np.zeros(n_grid)
    b[:support] = roots.perturbations[:support]
    out = np.zeros(n_grid, dtype=np.result_type(c.dtype, np.float64))
    requests = []
    us = []
    b_pow = np.ones(n_grid)
    for u in range(2 * params.t_terms + params.k_terms - 2):
        terms = folded_terms(jobs[0][0], u, params.k_terms, params.t_terms)
        if terms:
            requests.append((terms, b_pow * c))
            us.append(u)
            _bump(stats, "schlomilch_evaluations")
        b_pow = b_pow * b
    engine = SchlomilchEngine(
        n_grid, -0.25, schlomilch_eps,
        _order_universe(jobs[0][0], params.k_terms),
    )
    ys = engine.apply_many(requests, stats)
    r = np.arange(1, n_grid + 1, dtype=float) / n_grid
    for u, y in zip(us, ys):
        out += r ** u * y
    return out


def fourier_bessel_direct(nu, c, roots=None):
    """Direct O(N^2) summation; the reference for `fourier_bessel_eval`."""
    c = np.asarray(c)
    n = c.shape[0]
    if roots is None:
        roots = bessel_roots_j0(n)
    out = np.zeros(n, dtype=np.result_type(c.dtype, np.float64))
    comp = np.zeros_like(out)
    r = np.arange(1, n + 1, dtype=float) / n
    for c0 in range(0, n, 512):
        c1 = min(c0 + 512, n)
        part = np.zeros_like(out)
        for k0 in range(0, n, 2048):
            k1 = min(k0 + 2048, n)
            z = np.multiply.outer(r[k0:k1], roots.roots[c0:c1])
            part[k0:k1] = bessel_j(nu, z) @ c[c0:c1]
        _kahan_add(out, comp, part)
    return out


def fourier_bessel_eval(nu, c, eps, roots=None, stats=None, prune=False):
    """Evaluate sum_n c_n J_nu(k j_{0,n} / N) for k = 1..N to accuracy
    O(eps ||c||_1).

    Truncation orders come from `select_neumann_params(eps)`; the inner
    Schlomilch evaluations run at eps / (2T + K - 2) so the accumulated
    error stays within the overall budget.  `prune` skips collected terms
    whose rigorous contribution bound is negligible relative to eps; the
    default runs all 2T + K - 2 of them.
    """
    if eps < MIN_EPS:
        raise ValueError("eps below 2^-52 is not resolvable in double precision")
    nu = int(nu)
    if nu < 0:
        raise ValueError("nu must be >= 0")
    c = np.asarray(c)
    if c.shape[0] < 1:
        raise ValueError("need at least one coefficient")
    params = select_neumann_params(eps)
    if roots is None:
        roots = bessel_roots_j0(c.shape[0])
    inner_eps = eps / (2 * params.t_terms + params.k_terms - 2)
    return _fb_jobs_apply(
        [(((nu, 1.0),), c)], params, inner_eps, roots, stats,
        prune_eps=eps if prune else None,
    )[0]
