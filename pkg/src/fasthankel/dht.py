"""The discrete Hankel transform of order 0:

    f_k = sum_{n=1}^N c_n J0(j_{0,k} j_{0,n} / j_{0,N+1}),   k = 1..N.

The evaluation points j_{0,k} / j_{0,N+1} are a perturbation of the uniform
grid r~_k = (k - 1/4) / (N + 3/4), so the same Neumann/Taylor split used
for Fourier-Bessel expansions applies once more, now on the row side with
the ratio perturbations e_{k,N}.  Each collected term needs a Fourier-
Bessel evaluation at the r~ grid, realized by zero-padding the coefficients
to length 4N + 3 (so that r~_k = (4k - 1) / (4N + 3) lands on the padded
uniform grid) and keeping every fourth output.  Rows where the row-side
truncation is unreliable are recomputed directly.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .bessel import BesselRootsTable, bessel_j, bessel_roots_j0
from .fourier_bessel import (
    _bump,
    _fb_jobs_apply,
    _FbShared,
    _order_universe,
    folded_terms,
    select_neumann_params,
)
from .schlomilch import MIN_EPS, SchlomilchEngine, _kahan_add

__all__ = ["DhtPlan", "dht_plan", "dht", "dht_direct", "dht_self_inverse_residual"]

_ROW_CHUNK = 512


@dataclass(eq=False)
class DhtPlan:
    """Precomputed state for transforms of one size and accuracy.

    Rows k <= row_split = floor(1.01 max(p_K, q_T)) fall outside the
    validity of the row-side truncation and are summed directly; `weights`
    holds v_n = 2 / J1(j_{0,n})^2 for the self-inverse check.  The plan is
    reusable across calls (it caches the inner evaluation engine).
    """

    n: int
    eps: float
    k_terms: int
    t_terms: int
    p_cut: float
    q_cut: float
    row_split: int
    roots: BesselRootsTable
    weights: np.ndarray
    _shared: object = field(default=None, repr=False)


def dht_plan(n, eps):
    """Build a DhtPlan: truncation orders are the smallest K, T with
    1.01 max(p_K(eps), q_T(eps)) <= 30."""
    if eps < MIN_EPS:
        raise ValueError("eps below 2^-52 is not resolvable in double precision")
    if n < 1:
        raise ValueError("n must be >= 1")
    neumann = select_neumann_params(eps, margin=1.01)
    roots = bessel_roots_j0(n + 1)
    j1 = bessel_j(1, roots.roots[:n])
    weights = 2.0 / (j1 * j1)
    return DhtPlan(
        n=n,
        eps=eps,
        k_terms=neumann.k_terms,
        t_terms=neumann.t_terms,
        p_cut=neumann.p_cut,
        q_cut=neumann.q_cut,
        row_split=neumann.n_split,
        roots=roots,
        weights=weights,
    )


def _rows_direct(plan, c, k0, k1, stats=None):
    """Direct summation of rows k0..k1-1 (1-based, half-open)."""
    n = plan.n
    roots = plan.roots.roots
    scale = roots[k0 - 1 : k1 - 1] / roots[n]
    out = np.zeros(k1 - k0, dtype=np.result_type(c.dtype, np.float64))
    comp = np.zeros_like(out)
    for c0 in range(0, n, _ROW_CHUNK):
        c1 = min(c0 + _ROW_CHUNK, n)
        z = np.multiply.outer(scale, roots[c0:c1])
        _bump(stats, "pointwise_evaluations", z.size)
        _kahan_add(out, comp, bessel_j(0, z) @ c[c0:c1])
    return out


def dht_direct(plan, c):
    """O(N^2) direct transform; the reference for `dht`."""
    c = np.asarray(c)
    if c.shape[0] != plan.n:
        raise ValueError("coefficient length does not match plan.n")
    return _rows_direct(plan, c, 1, plan.n + 1)


def _fb_shared(plan):
    # The inner Fourier-Bessel evaluations truncate at the user accuracy
    # (their neglected tails are eps-small columnwise) while their
    # Schlomilch working accuracy carries the full nested budget
    # eps / ((2T+K-2) outer terms * (2T+K-2) inner terms).
    if plan._shared is None:
        fb_params = select_neumann_params(plan.eps)
        r_outer = 2 * plan.t_terms + plan.k_terms - 2
        r_inner = 2 * fb_params.t_terms + fb_params.k_terms - 2
        schl_eps = plan.eps / (r_outer * r_inner)
        base = [(s, 1.0) for s in range(plan.k_terms)]
        universe = _order_universe(base, fb_params.k_terms)
        n_pad = 4 * plan.n + 3
        engine = SchlomilchEngine(n_pad, -0.25, schl_eps, universe)
        plan._shared = (_FbShared(engine), fb_params, schl_eps)
    return plan._shared


def dht(plan, c, stats=None):
    """Fast transform: error O(eps ||c||_1).

    Rows above row_split go through the truncated row-side decomposition
    sum_u D_e^u [Fourier-Bessel evaluation at r~] D_{j0}^u with padded
    grids; rows up to row_split are recomputed directly.  Collected terms
    with rigorously negligible contribution to the kept rows (the pointwise
    bound |e_k j_{0,n}| <= 1.01 / (8 (k - 1/4) pi) powered by u) are
    skipped.
    """
    c = np.asarray(c)
    n = plan.n
    if c.shape[0] != n:
        raise ValueError("coefficient length does not match plan.n")
    split = min(plan.row_split, n)
    if split >= n:
        return _rows_direct(plan, c, 1, n + 1, stats)
    shared, fb_params, schl_eps = _fb_shared(plan)
    ks = np.arange(1, n + 1)
    e = plan.roots.ratio_perturbation(ks, n)
    j0 = plan.roots.roots[:n]
    n_pad = 4 * n + 3
    out = np.zeros(n, dtype=np.result_type(c.dtype, np.float64))
    norm1 = float(np.sum(np.abs(c)))
    # |e_k j_{0,n}| <= 1.01 / (8 (k - 1/4) pi) on the kept rows k > split
    g_max = 1.01 / (8.0 * (split + 0.75) * math.pi)
    jobs = []
    kept_u = []
    j_pow = np.ones(n)
    dtype = np.result_type(c.dtype, np.float64)
    for u in range(2 * plan.t_terms + plan.k_terms - 2):
        terms = folded_terms(((0, 1.0),), u, plan.k_terms, plan.t_terms)
        if terms and norm1 > 0.0:
            weight_sum = sum(abs(w) for _, w in terms)
            if g_max ** u * weight_sum >= 0.02 * plan.eps:
                padded = np.zeros(n_pad, dtype=dtype)
                padded[:n] = j_pow * c
                jobs.append((terms, padded))
                kept_u.append(u)
                _bump(stats, "fb_evaluations")
        j_pow = j_pow * j0
    if jobs:
        ys = _fb_jobs_apply(jobs, fb_params, schl_eps, plan.roots, stats,
                            shared, prune_eps=plan.eps)
        e_pow = {0: np.ones(n)}
        acc = np.ones(n)
        for u in range(1, kept_u[-1] + 1 if kept_u else 1):
            acc = acc * e
            e_pow[u] = acc.copy()
        for u, y in zip(kept_u, ys):
            # padded grid index 4k-1 (1-based) is r~_k
            out += e_pow[u] * y[2 : 4 * n : 4]
    out[:split] = _rows_direct(plan, c, 1, split + 1, stats)
    return out


def dht_self_inverse_residual(n, eps, c, method="fast", plan=None):
    """max-norm residual of the asymptotic self-inverse identity

        c~ = j_{0,N+1}^(-2) DHT(D_v DHT(D_v c)),   v_n = 2 / J1(j_{0,n})^2,

    which tends to c only as N grows; the residual first shrinks with N and
    is eventually dominated by accumulated O(eps N^(3/2)) rounding.
    """
    c = np.asarray(c)
    if plan is None:
        plan = dht_plan(n, eps)
    apply_fn = dht if method == "fast" else dht_direct
    y = apply_fn(plan, plan.weights * c)
    y = apply_fn(plan, plan.weights * y)
    c_round = y / plan.roots.roots[n] ** 2
    return float(np.max(np.abs(c_round - c)))
