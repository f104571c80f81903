"""Evaluation of Schlomilch-type expansions on the uniform grid k/N.

Computes f_k = sum_{n=1}^N c_n J_nu((n + gamma) pi k / N) for k = 1..N by

* direct summation (the O(N^2) reference),
* a single-partition scheme that applies the Hankel asymptotic expansion on
  the index square min(k, n) >= ceil(alpha sqrt(N)) via DCT-I/DST-I and
  evaluates the remaining L-shaped border directly, and
* a recursively partitioned scheme that refines the border with O(log N /
  log log N) extra rectangular blocks, each again handled by 2M transforms.

All algorithmic parameters (M, s, alpha, beta, P) derive from the working
accuracy eps; see `select_params`.  Entries are only ever replaced by the
asymptotic expansion where its truncation error is below eps, which is what
makes the scheme numerically stable.

Indices in parameter bundles and partition schemes are 1-based like the
math above; coefficient arrays are ordinary 0-based numpy arrays with
c[0] = c_1.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import trig
from .bessel import asy_coeffs, asy_cutoff, bessel_j

__all__ = [
    "SchlomilchParams",
    "PartitionScheme",
    "select_params",
    "build_partition",
    "schlomilch_direct",
    "asy_block_apply",
    "schlomilch_single_partition",
    "schlomilch_fast",
]

MIN_EPS = 2.0 ** -52

_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)

# tile sizes for streamed pointwise evaluation (fixed so that results are
# reproducible run-to-run)
_COL_CHUNK = 512
_ROW_CHUNK = 2048


@dataclass(frozen=True)
class SchlomilchParams:
    """Derived algorithmic parameters for one (nu, N, eps, gamma) problem.

    m_terms is the asymptotic term count M, s the argument cutoff above
    which the 2M-term expansion is eps-accurate, alpha = sqrt(s/pi) the
    partition constant, beta the refinement ratio, and partitions the
    number P of refinement levels.
    """

    eps: float
    nu: int
    gamma: float
    n: int
    m_terms: int
    s: float
    alpha: float
    beta: float
    partitions: int


def _m_terms(eps):
    return max(int(0.3 * math.log(1.0 / eps)), 3)


def _select_params(nu, n, eps, gamma, s=None):
    # internal: no lower bound on eps, used with subdivided error budgets
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    if n < 1:
        raise ValueError("n must be >= 1")
    if nu < 0:
        raise ValueError("nu must be >= 0")
    if gamma <= -1.0:
        raise ValueError("gamma must exceed -1 so all frequencies are positive")
    m = _m_terms(eps)
    if s is None:
        s = asy_cutoff(nu, m, eps)
    alpha = math.sqrt(s / math.pi)
    beta = 1.0 if n <= 20 else min(3.0 / math.log(n), 1.0)
    x = 30.0 / (alpha * math.sqrt(n))
    if x >= 1.0 or beta >= 1.0:
        p = 0
    else:
        p = max(math.ceil(math.log(x) / math.log(beta)), 0)
    return SchlomilchParams(
        eps=eps, nu=nu, gamma=gamma, n=n, m_terms=m, s=s, alpha=alpha,
        beta=beta, partitions=p,
    )


def select_params(nu, n, eps, gamma=0.0):
    """Derive all algorithmic parameters from the working accuracy.

    M = max(floor(0.3 ln(1/eps)), 3), s = asy_cutoff(nu, M, eps),
    alpha = sqrt(s/pi), beta = min(3/ln N, 1), and
    P = ceil(ln(30 / (alpha sqrt(N))) / ln beta) clamped to >= 0
    (P = 0 whenever 30 / (alpha sqrt(N)) >= 1 or beta = 1).
    """
    if eps < MIN_EPS:
        raise ValueError("eps below 2^-52 is not resolvable in double precision")
    return _select_params(nu, n, eps, gamma)


# ---------------------------------------------------------------------------
# Partitioning.


@dataclass(frozen=True)
class PartitionScheme:
    """Disjoint decomposition of the index square [1,N]^2.

    blocks: rectangles ((r0, r1), (c0, c1)) handled by the asymptotic
    expansion, 1-based half-open, first the central square then the 2P side
    blocks.  mask_segments: row bands (r0, r1) whose columns [1, c_end) are
    evaluated pointwise.  Every (k, n) lies in exactly one block or mask
    segment, and blocks only contain entries with k*n >= alpha^2 N.
    """

    n: int
    blocks: tuple
    mask_segments: tuple
    row_min: int

    def mask_size(self):
        return sum((r1 - r0) * (ce - 1) for r0, r1, ce in self.mask_segments)


def build_partition(params, partitions=None):
    """Partition scheme for `params` (override P with `partitions`)."""
    n = params.n
    p_levels = params.partitions if partitions is None else partitions
    root_n = math.sqrt(n)
    a = [min(math.ceil(params.alpha * params.beta ** p * root_n), n + 1)
         for p in range(p_levels + 1)]
    b = [None] + [min(math.ceil(params.alpha * params.beta ** -p * root_n), n + 1)
                  for p in range(1, p_levels + 1)]
    a0 = a[0]
    blocks = [((a0, n + 1), (a0, n + 1))]
    for p in range(1, p_levels + 1):
        blocks.append(((a[p], a[p - 1]), (b[p], n + 1)))
        blocks.append(((b[p], n + 1), (a[p], a[p - 1])))
    segments = []

    def _seg(r0, r1, c_end):
        if r1 > r0 and c_end > 1:
            segments.append((r0, r1, c_end))

    _seg(1, a[p_levels], n + 1)
    for p in range(p_levels, 0, -1):
        _seg(a[p], a[p - 1], b[p])
    prev = a0
    for p in range(1, p_levels + 1):
        _seg(prev, b[p], a[p - 1])
        prev = b[p]
    _seg(prev, n + 1, a[p_levels])
    return PartitionScheme(
        n=n, blocks=tuple(blocks), mask_segments=tuple(segments),
        row_min=a[p_levels],
    )


# ---------------------------------------------------------------------------
# Pointwise (masked / direct) evaluation.


def _kahan_add(total, comp, term):
    y = term - comp
    t = total + y
    comp[...] = (t - total) - y
    total[...] = t


def _eval_g(order_weights, z):
    """g(z) = sum_j w_j J_{o_j}(z) on an array of arguments."""
    out = None
    for order, weight in order_weights:
        val = bessel_j(order, z)
        out = weight * val if out is None else out + weight * val
    return out


def _eval_segments(order_weights, gamma, n, segments, c, out, stats=None):
    """Add the pointwise part sum_{n' < c_end} c_n' g(k (n'+gamma) pi / N)
    to `out` for every mask segment, streaming over fixed-size tiles with
    compensated (Kahan) accumulation across column chunks.
    """
    scale = math.pi / n
    for r0, r1, c_end in segments:
        ncols = c_end - 1
        if r1 <= r0 or ncols <= 0:
            continue
        freq = (np.arange(1, c_end, dtype=float) + gamma) * scale
        coeff = c[: c_end - 1]
        for row0 in range(r0, r1, _ROW_CHUNK):
            row1 = min(row0 + _ROW_CHUNK, r1)
            ks = np.arange(row0, row1, dtype=float)
            total = np.zeros(row1 - row0, dtype=out.dtype)
            comp = np.zeros_like(total)
            for col0 in range(0, ncols, _COL_CHUNK):
                col1 = min(col0 + _COL_CHUNK, ncols)
                z = np.multiply.outer(ks, freq[col0:col1])
                g = _eval_g(order_weights, z)
                _kahan_add(total, comp, g @ coeff[col0:col1])
                if stats is not None:
                    stats["pointwise_evaluations"] = (
                        stats.get("pointwise_evaluations", 0)
                        + z.size * len(order_weights)
                    )
            out[row0 - 1 : row1 - 1] += total


def schlomilch_direct(nu, gamma, c):
    """Direct O(N^2) summation; the reference for the fast evaluators."""
    c = np.asarray(c)
    n = c.shape[0]
    out = np.zeros(n, dtype=np.result_type(c.dtype, np.float64))
    _eval_segments(((int(nu), 1.0),), gamma, n, ((1, n + 1, n + 1),), c, out)
    return out


# ---------------------------------------------------------------------------
# Asymptotic block machinery.


class _AsyWork:
    """Grid-dependent state for the asymptotic decomposition: column weights
    omega^(-i-1/2), row weights r^(-i-1/2) on the rows any block can touch,
    the DCT/DST plans, and per-order cos/sin row diagonals (the diagonal
    generalization of the scalars cos/sin((2nu+1)pi/4) that a nonzero
    frequency shift gamma requires).
    """

    def __init__(self, params, row_min):
        n = params.n
        m = params.m_terms
        self.params = params
        self.n = n
        self.m = m
        self.row_min = row_min
        omega = (np.arange(1, n + 1, dtype=float) + params.gamma) * math.pi
        acc = 1.0 / np.sqrt(omega)
        col_w = np.empty((2 * m, n))
        for i in range(2 * m):
            col_w[i] = acc
            acc = acc / omega
        self.col_w = col_w
        rows = np.arange(row_min, n + 1, dtype=float)
        self.nrows = rows.shape[0]
        inv_r = n / rows if self.nrows else rows
        acc = np.sqrt(inv_r)
        row_pow = np.empty((2 * m, self.nrows))
        for i in range(2 * m):
            row_pow[i] = acc
            acc = acc * inv_r
        self.row_pow = row_pow
        self._theta = -params.gamma * rows * (math.pi / n)
        self._diag_cache = {}
        self.dct = trig.make_plan(n + 1, trig.DCT1)
        self.dst = trig.make_plan(n - 1, trig.DST1) if n >= 2 else None

    def _order_diagonals(self, order):
        cached = self._diag_cache.get(order)
        if cached is None:
            phase = self._theta + (2 * order + 1) * (math.pi / 4.0)
            cached = (np.cos(phase), np.sin(phase), asy_coeffs(order, 2 * self.m))
            self._diag_cache[order] = cached
        return cached

    def combine(self, order_weights):
        """Row-side combination coefficients (already folded with the row
        powers) for a weighted list of orders: arrays A, B of shape
        (2M, nrows) such that the block increment on rows k is
        sum_i A[i,k] (C u_i)[k] + B[i,k] (S u_i)[k].
        """
        m = self.m
        a_rows = np.zeros((2 * m, self.nrows))
        b_rows = np.zeros((2 * m, self.nrows))
        for order, weight in order_weights:
            cos_d, sin_d, coeffs = self._order_diagonals(order)
            for mm in range(m):
                lam = weight * _SQRT_2_OVER_PI * (-1.0) ** mm
                a_rows[2 * mm] += (lam * coeffs[2 * mm]) * cos_d
                b_rows[2 * mm] += (lam * coeffs[2 * mm]) * sin_d
                a_rows[2 * mm + 1] += (lam * coeffs[2 * mm + 1]) * sin_d
                b_rows[2 * mm + 1] -= (lam * coeffs[2 * mm + 1]) * cos_d
        a_rows *= self.row_pow
        b_rows *= self.row_pow
        return a_rows, b_rows

    def apply_block(self, combined, rows, cols, c, out, stats=None):
        """Add the asymptotic approximation of the (rows x cols) block of
        the expansion matrix applied to c.  Costs 2M transform pairs.
        """
        n, m = self.n, self.m
        r0, r1 = rows
        c0, c1 = cols
        a_rows, b_rows = combined
        dtype = np.result_type(c.dtype, np.float64)
        u_pad = np.zeros((2 * m, n + 1), dtype=dtype)
        if c1 > c0:
            u_pad[:, c0:c1] = self.col_w[:, c0 - 1 : c1 - 1] * c[c0 - 1 : c1 - 1]
        cos_part = trig.apply(self.dct, u_pad)[:, 1:]
        sin_part = np.zeros((2 * m, n), dtype=dtype)
        if self.dst is not None:
            sin_part[:, : n - 1] = trig.apply(self.dst, u_pad[:, 1:n])
        if stats is not None:
            stats["transform_applications"] = (
                stats.get("transform_applications", 0) + 2 * m
            )
        if r1 <= r0:
            return
        lo = r0 - self.row_min
        hi = r1 - self.row_min
        incr = (
            a_rows[:, lo:hi] * cos_part[:, r0 - 1 : r1 - 1]
            + b_rows[:, lo:hi] * sin_part[:, r0 - 1 : r1 - 1]
        ).sum(axis=0)
        out[r0 - 1 : r1 - 1] += incr


def _as_bounds(r):
    if isinstance(r, range):
        if r.step != 1:
            raise ValueError("index ranges must have step 1")
        return r.start, r.stop
    lo, hi = r
    return int(lo), int(hi)


def asy_block_apply(params, rows, cols, c, stats=None):
    """Increment vector from applying the asymptotic expansion on a single
    (rows x cols) block, rows/cols 1-based half-open.

    Every entry of the block must satisfy k (n + gamma) pi / N >= s; this
    is the caller's responsibility (checked by assertion only).
    """
    c = np.asarray(c)
    n = params.n
    r0, r1 = _as_bounds(rows)
    c0, c1 = _as_bounds(cols)
    if r1 > r0 and c1 > c0:
        assert (
            r0 * (c0 + params.gamma) * math.pi / n >= params.s * (1.0 - 1e-12)
        ), "block contains entries below the asymptotic cutoff"
    work = _AsyWork(params, max(min(r0, n), 1))
    combined = work.combine(((params.nu, 1.0),))
    out = np.zeros(n, dtype=np.result_type(c.dtype, np.float64))
    work.apply_block(combined, (r0, r1), (c0, c1), c, out, stats)
    return out


# ---------------------------------------------------------------------------
# Full evaluators.


def _apply_scheme(params, scheme, order_weights, c, stats=None):
    c = np.asarray(c)
    if c.shape[0] != params.n:
        raise ValueError("coefficient length does not match params.n")
    out = np.zeros(params.n, dtype=np.result_type(c.dtype, np.float64))
    work = _AsyWork(params, scheme.row_min)
    combined = work.combine(order_weights)
    for rows, cols in scheme.blocks:
        work.apply_block(combined, rows, cols, c, out, stats)
    _eval_segments(order_weights, params.gamma, params.n,
                   scheme.mask_segments, c, out, stats)
    return out


def schlomilch_single_partition(params, c, stats=None):
    """Single-partition O(N^(3/2)) evaluation: one central asymptotic block
    plus direct summation on the L-shaped border.
    """
    scheme = build_partition(params, partitions=0)
    return _apply_scheme(params, scheme, ((params.nu, 1.0),), c, stats)


def schlomilch_fast(params, c, stats=None):
    """Recursively partitioned evaluation, O(N (log N)^2 / log log N).

    With params.partitions == 0 this takes exactly the same code path as
    `schlomilch_single_partition` and produces bitwise-identical output.
    """
    scheme = build_partition(params)
    return _apply_scheme(params, scheme, ((params.nu, 1.0),), c, stats)


# ---------------------------------------------------------------------------
# Reusable multi-order engine (internal; used by the Fourier-Bessel and
# Hankel-transform layers, which apply many weighted order combinations on
# one grid and profit from sharing the partition and the pointwise values).


class SchlomilchEngine:
    """Applies sum_j w_j J_{o_j}((n+gamma) pi k / N) c_n for varying weighted
    order lists on a fixed grid.

    The partition cutoff is the largest asymptotic cutoff over the order
    universe given at construction, so one block structure is valid for
    every order.  A weighted combination costs the same 2M(2P+1) transform
    pairs as a single order because the transforms act on order-independent
    weighted coefficient vectors; a batch of combinations (`apply_many`)
    additionally shares the FFT calls and streams each border value once
    per distinct order instead of once per combination.
    """

    # rows per batched FFT call; large batches amortize the Bluestein setup
    # that odd transform lengths incur
    _FFT_ROWS = 264

    def __init__(self, n, gamma, eps, orders):
        orders = sorted(set(int(o) for o in orders))
        if not orders or orders[0] < 0:
            raise ValueError("order universe must be non-empty, orders >= 0")
        m = _m_terms(eps)
        s = max(asy_cutoff(o, m, eps) for o in orders)
        self.params = _select_params(orders[-1], n, eps, gamma, s=s)
        self.scheme = build_partition(self.params)
        self.orders = frozenset(orders)
        self.work = _AsyWork(self.params, self.scheme.row_min)

    def apply(self, order_weights, c, stats=None):
        return self.apply_many([(order_weights, c)], stats)[0]

    def apply_many(self, requests, stats=None):
        """Evaluate a batch of (order_weights, coefficients) requests.

        Returns one output vector per request, identical to applying them
        one at a time.
        """
        work = self.work
        params = self.params
        n = params.n
        m = params.m_terms
        reqs = []
        for order_weights, c in requests:
            order_weights = tuple(order_weights)
            for order, _ in order_weights:
                if order not in self.orders:
                    raise ValueError("order %d outside engine universe" % order)
            c = np.asarray(c)
            if c.shape[0] != n:
                raise ValueError("coefficient length does not match engine grid")
            reqs.append((order_weights, c))
        outs = [
            np.zeros(n, dtype=np.result_type(c.dtype, np.float64))
            for _, c in reqs
        ]
        combined = [work.combine(ow) for ow, _ in reqs]
        per_call = max(self._FFT_ROWS // (2 * m), 1)
        for rows, cols in self.scheme.blocks:
            for i0 in range(0, len(reqs), per_call):
                batch = list(range(i0, min(i0 + per_call, len(reqs))))
                self._blocks_batched(batch, reqs, combined, rows, cols,
                                     outs, stats)
        self._mask_streamed(reqs, outs, stats)
        return outs

    def _blocks_batched(self, batch, reqs, combined, rows, cols, outs, stats):
        work = self.work
        n, m = work.n, work.m
        r0, r1 = rows
        c0, c1 = cols
        dtype = np.result_type(*(reqs[i][1].dtype for i in batch), np.float64)
        u_pad = np.zeros((len(batch) * 2 * m, n + 1), dtype=dtype)
        if c1 > c0:
            w_cols = work.col_w[:, c0 - 1 : c1 - 1]
            for pos, i in enumerate(batch):
                c = reqs[i][1]
                u_pad[pos * 2 * m : (pos + 1) * 2 * m, c0:c1] = (
                    w_cols * c[c0 - 1 : c1 - 1]
                )
        cos_part = trig.apply(work.dct, u_pad)[:, 1:]
        sin_part = np.zeros_like(cos_part)
        if work.dst is not None:
            sin_part[:, : n - 1] = trig.apply(work.dst, u_pad[:, 1:n])
        if stats is not None:
            stats["transform_applications"] = (
                stats.get("transform_applications", 0) + len(batch) * 2 * m
            )
        if r1 <= r0:
            return
        lo = r0 - work.row_min
        hi = r1 - work.row_min
        for pos, i in enumerate(batch):
            a_rows, b_rows = combined[i]
            sl = slice(pos * 2 * m, (pos + 1) * 2 * m)
            outs[i][r0 - 1 : r1 - 1] += (
                a_rows[:, lo:hi] * cos_part[sl, r0 - 1 : r1 - 1]
                + b_rows[:, lo:hi] * sin_part[sl, r0 - 1 : r1 - 1]
            ).sum(axis=0)

    def _mask_streamed(self, reqs, outs, stats):
        params = self.params
        n = params.n
        scale = math.pi / n
        by_order = {}
        for i, (order_weights, _) in enumerate(reqs):
            for order, weight in order_weights:
                by_order.setdefault(order, []).append((i, weight))
        for order in sorted(by_order):
            users = by_order[order]
            for r0, r1, c_end in self.scheme.mask_segments:
                ncols = c_end - 1
                freq = (np.arange(1, c_end, dtype=float) + params.gamma) * scale
                for row0 in range(r0, r1, _ROW_CHUNK):
                    row1 = min(row0 + _ROW_CHUNK, r1)
                    ks = np.arange(row0, row1, dtype=float)
                    for col0 in range(0, ncols, _COL_CHUNK):
                        col1 = min(col0 + _COL_CHUNK, ncols)
                        z = np.multiply.outer(ks, freq[col0:col1])
                        vals = bessel_j(order, z)
                        if stats is not None:
                            stats["pointwise_evaluations"] = (
                                stats.get("pointwise_evaluations", 0) + z.size
                            )
                        for i, weight in users:
                            outs[i][row0 - 1 : row1 - 1] += weight * (
                                vals @ reqs[i][1][col0:col1]
                            )
