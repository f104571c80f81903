"""Bessel function evaluation, truncation cutoffs, and roots of J0.

Three classical expansions of J_nu drive everything in this package:

* the Hankel asymptotic expansion for large arguments,
      J_nu(z) ~ sqrt(2/(pi z)) * (cos(mu) * sum_m (-1)^m a_{2m}(nu) z^{-2m}
                                 - sin(mu) * sum_m (-1)^m a_{2m+1}(nu) z^{-2m-1}),
      mu = z - (2 nu + 1) pi / 4,
* the Taylor series about z = 0, and
* the Neumann addition formula for perturbed arguments.

Each comes with an explicit truncation-error bound, and the cutoff solvers
below invert those bounds: given a term count and a tolerance they return
the argument range on which the truncated expansion is that accurate.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "asy_coeff",
    "asy_coeffs",
    "hankel_asy_eval",
    "asy_error_bound",
    "asy_cutoff",
    "taylor_eval",
    "taylor_cutoff",
    "neumann_radius",
    "bessel_j",
    "BesselRootsTable",
    "bessel_roots_j0",
]

_EPS = 2.0 ** -52

# Fixed term counts for the point evaluator's small/large-argument branches.
_TAYLOR_TERMS = 10
_ASY_TERMS = 10

_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


def asy_coeffs(nu, count):
    """First `count` coefficients a_0(nu) .. a_{count-1}(nu) of the Hankel
    asymptotic expansion, computed by the ratio recurrence

        a_m(nu) = a_{m-1}(nu) * (4 nu^2 - (2m-1)^2) / (8 m),   a_0 = 1,

    which avoids forming the factorials explicitly.
    """
    a = np.empty(count)
    a[0] = 1.0
    four_nu2 = 4.0 * nu * nu
    for m in range(1, count):
        a[m] = a[m - 1] * (four_nu2 - (2 * m - 1) ** 2) / (8.0 * m)
    return a


def asy_coeff(nu, m):
    """Coefficient a_m(nu) of the Hankel asymptotic expansion.

    Overflows to +/-inf for extreme m; that signals the caller asked for
    more terms than the expansion can usefully provide.
    """
    if nu < 0 or m < 0:
        raise ValueError("asy_coeff requires nu >= 0 and m >= 0")
    return float(asy_coeffs(nu, m + 1)[m])


def hankel_asy_eval(nu, m_terms, z):
    """Evaluate the first 2*m_terms terms of the Hankel expansion of J_nu(z).

    Accurate to `asy_error_bound(nu, m_terms, z)`; only meaningful for z
    large enough that the bound is below the desired tolerance (see
    `asy_cutoff`).
    """
    z = np.asarray(z, dtype=float)
    a = asy_coeffs(nu, 2 * m_terms)
    inv_z2 = 1.0 / (z * z)
    # Horner in 1/z^2 for the cosine and sine sums.
    even = np.full_like(z, a[2 * (m_terms - 1)] * (-1.0) ** (m_terms - 1))
    odd = np.full_like(z, a[2 * (m_terms - 1) + 1] * (-1.0) ** (m_terms - 1))
    for m in range(m_terms - 2, -1, -1):
        sign = (-1.0) ** m
        even = even * inv_z2 + sign * a[2 * m]
        odd = odd * inv_z2 + sign * a[2 * m + 1]
    mu = z - (2 * nu + 1) * (math.pi / 4.0)
    out = _SQRT_2_OVER_PI / np.sqrt(z) * (np.cos(mu) * even - np.sin(mu) * odd / z)
    return out if out.ndim else float(out)


def asy_error_bound(nu, m_terms, z):
    """Bound on the truncation error of `hankel_asy_eval`:

        sqrt(2/(pi z)) * (|a_{2M}(nu)| / z^{2M} + |a_{2M+1}(nu)| / z^{2M+1})

    i.e. the size of the first neglected pair of terms.
    """
    z = np.asarray(z, dtype=float)
    a = asy_coeffs(nu, 2 * m_terms + 2)
    a0 = abs(a[2 * m_terms])
    a1 = abs(a[2 * m_terms + 1])
    out = _SQRT_2_OVER_PI / np.sqrt(z) * (a0 + a1 / z) / z ** (2 * m_terms)
    return out if out.ndim else float(out)


def asy_cutoff(nu, m_terms, eps):
    """Smallest argument beyond which the 2*m_terms-term Hankel expansion of
    J_nu is accurate to eps.

    Solves  asy_error_bound(nu, m_terms, z) = eps  by the fixed-point
    iteration

        s <- (sqrt(2) (|a_{2M}| + |a_{2M+1}| / s) / (sqrt(pi) eps))^(1/(2M+1/2))

    started at s = 1 and stopped after exactly four iterations, which is
    enough for the returned bound to hold within 0.1 percent.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    a = asy_coeffs(nu, 2 * m_terms + 2)
    a0 = abs(a[2 * m_terms])
    a1 = abs(a[2 * m_terms + 1])
    s = 1.0
    c = math.sqrt(2.0) / (math.sqrt(math.pi) * eps)
    for _ in range(4):
        s = (c * (a0 + a1 / s)) ** (1.0 / (2 * m_terms + 0.5))
    return s


def taylor_eval(nu, n_terms, z):
    """Evaluate the first `n_terms` terms of the Taylor series of J_nu:

        sum_{t<T} (-1)^t 2^(-2t-nu) z^(2t+nu) / (t! (t+nu)!)
    """
    z = np.asarray(z, dtype=float)
    half = 0.5 * z
    term = half ** nu / math.gamma(nu + 1)
    out = term.copy() if term.ndim else np.asarray(term, dtype=float)
    hh = half * half
    for t in range(1, n_terms):
        term = -term * hh / (t * (t + nu))
        out = out + term
    return out if out.ndim else float(out)


def taylor_cutoff(nu, n_terms, eps):
    """Largest argument below which the `n_terms`-term Taylor series of J_nu
    is accurate to eps:

        (2^(2T+nu) (T+nu)! T! eps)^(1/(2T+nu))

    obtained from the closed form of the remainder with the hypergeometric
    factor approximated by 1 (valid for small arguments; verified
    empirically in the tests).
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    e = 2 * n_terms + nu
    log_t = (
        e * math.log(2.0)
        + math.lgamma(n_terms + nu + 1)
        + math.lgamma(n_terms + 1)
        + math.log(eps)
    ) / e
    return math.exp(log_t)


def neumann_radius(k_terms, eps):
    """Perturbation radius within which the (2K-1)-term truncation of the
    Neumann addition formula is accurate to eps:  2/e * (eps/5.2)^(1/K).
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    return 2.0 / math.e * (eps / 5.2) ** (1.0 / k_terms)


# ---------------------------------------------------------------------------
# Point evaluation of J_nu.

_dispatch_cache = {}


def _dispatch_cutoffs(nu):
    cached = _dispatch_cache.get(nu)
    if cached is None:
        cached = (
            taylor_cutoff(nu, _TAYLOR_TERMS, _EPS),
            asy_cutoff(nu, _ASY_TERMS, _EPS),
        )
        _dispatch_cache[nu] = cached
    return cached


def _miller(nu, z):
    """Backward three-term recurrence with the normalization
    J_0 + 2 J_2 + 2 J_4 + ... = 1, for mid-range arguments.

    The starting order sits an Airy-transition width above max(nu, z) so the
    seeded values are negligible relative to the dominant recurrence
    solution; the spec's nominal seed `nu + 10 + 2 sqrt(nu z)` collapses to
    order 10 at nu = 0 and is unusable there.
    """
    base = max(float(nu), float(z.max()))
    start = int(math.ceil(base + 10.0 + 11.0 * base ** (1.0 / 3.0)))
    f_up = np.zeros_like(z)  # f_{k+1}
    f_k = np.full_like(z, 1e-30)  # f_k (arbitrary scale)
    norm = np.zeros_like(z)
    captured = np.zeros_like(z)
    inv_z = 1.0 / z
    for k in range(start, 0, -1):
        f_down = (2.0 * k) * inv_z * f_k - f_up
        f_up = f_k
        f_k = f_down
        j = k - 1
        if j == nu:
            captured = f_k.copy()
        if j % 2 == 0:
            norm = norm + (f_k if j == 0 else 2.0 * f_k)
        big = np.abs(f_k) > 1e250
        if big.any():
            scale = np.where(big, 1e-250, 1.0)
            f_k = f_k * scale
            f_up = f_up * scale
            norm = norm * scale
            captured = captured * scale
    return captured / norm


def bessel_j(nu, z):
    """J_nu(z) for integer nu >= 0 and z >= 0 (scalar or array).

    Dispatches on the argument: truncated Taylor series below the
    machine-accuracy Taylor cutoff, Hankel asymptotic expansion above the
    machine-accuracy asymptotic cutoff, and Miller's backward recurrence in
    between.  Absolute accuracy is a small multiple of 1e-15 throughout.
    """
    nu = int(nu)
    if nu < 0:
        raise ValueError("bessel_j requires nu >= 0; use J_{-n} = (-1)^n J_n")
    arr = np.asarray(z, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError("bessel_j requires z >= 0")
    t_lo, s_hi = _dispatch_cutoffs(nu)
    scalar = arr.ndim == 0
    flat = np.atleast_1d(arr).ravel()
    out = np.empty_like(flat)
    small = flat <= t_lo
    large = flat >= s_hi
    mid = ~(small | large)
    if small.any():
        out[small] = taylor_eval(nu, _TAYLOR_TERMS, flat[small])
    if large.any():
        out[large] = hankel_asy_eval(nu, _ASY_TERMS, flat[large])
    if mid.any():
        out[mid] = _miller(nu, flat[mid])
    out = out.reshape(np.atleast_1d(arr).shape)
    return float(out[0]) if scalar else out.reshape(arr.shape)


# ---------------------------------------------------------------------------
# Positive roots of J0.

_ROOT_TOL = 1e-13
_NEWTON_MAX_ITER = 20


@dataclass(frozen=True)
class BesselRootsTable:
    """The first `n_max` positive roots of J0 on a perturbed uniform grid.

    roots[n-1] = j_{0,n} = (n - 1/4) pi + b_n with
    0 <= b_n <= 1 / (8 (n - 1/4) pi); `perturbations` holds the b_n.
    Immutable, safe to share between threads.
    """

    n_max: int
    roots: np.ndarray
    perturbations: np.ndarray

    def ratio_perturbation(self, k, n):
        """e_{k,n} = j_{0,k} / j_{0,n+1} - (k - 1/4) / (n + 3/4).

        Requires the table to hold at least n+1 roots.  `k` may be an array.
        """
        if n + 1 > self.n_max:
            raise ValueError("table holds %d roots; need %d" % (self.n_max, n + 1))
        k = np.asarray(k)
        num = self.roots[k - 1] / self.roots[n]
        return num - (k - 0.25) / (n + 0.75)


def bessel_roots_j0(count):
    """First `count` positive roots of J0 by Newton iteration from the
    asymptotic guesses (n - 1/4) pi, using J0' = -J1.

    Raises RuntimeError if any residual |J0(root)| exceeds 1e-13 after 20
    iterations (which would indicate a defect in the point evaluator).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    n = np.arange(1, count + 1, dtype=float)
    grid = (n - 0.25) * math.pi
    z = grid.copy()
    for _ in range(_NEWTON_MAX_ITER):
        step = bessel_j(0, z) / bessel_j(1, z)
        z = z + step
        # iterate to rounding level, not just the residual tolerance
        if np.max(np.abs(step)) <= 4.0 * _EPS * z[-1]:
            break
    residual = np.max(np.abs(bessel_j(0, z)))
    if residual > _ROOT_TOL:
        raise RuntimeError(
            "Newton failed to converge on J0 roots (residual %.3e)" % residual
        )
    z.flags.writeable = False
    b = z - grid
    b.flags.writeable = False
    return BesselRootsTable(n_max=count, roots=z, perturbations=b)
