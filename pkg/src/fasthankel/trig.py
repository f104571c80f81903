"""DCT-I and DST-I matrix application via FFT embeddings.

The two matrices are

    C[k, n] = cos(k n pi / (N - 1)),   0 <= k, n < N,
    S[k, n] = sin((k+1)(n+1) pi / (N + 1)),   0 <= k, n < N,

applied in O(N log N): the DCT-I through a real FFT of an even-symmetric
extension of length 2(N-1), the DST-I through an odd-symmetric extension of
length 2(N+1).  Both accept a trailing-axis batch of real or complex
vectors.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = ["DCT1", "DST1", "TransformPlan", "make_plan", "apply"]

DCT1 = "dct1"
DST1 = "dst1"


@dataclass(frozen=True)
class TransformPlan:
    """Reusable plan for applying C or S of a fixed size.

    Immutable after construction; a plan may be applied concurrently from
    several threads (each call allocates its own scratch).
    """

    length: int
    kind: str
    # endpoint weights for the even extension (DCT-I only)
    _weights: np.ndarray = field(repr=False, default=None)


def make_plan(length, kind):
    """Build a TransformPlan for vectors of the given length.

    DCT-I needs length >= 2 (the matrix involves a division by N-1),
    DST-I needs length >= 1.
    """
    if kind == DCT1:
        if length < 2:
            raise ValueError("DCT-I needs length >= 2")
        w = np.full(length, 0.5)
        w[0] = 1.0
        w[-1] = 1.0
        w.flags.writeable = False
        return TransformPlan(length=length, kind=DCT1, _weights=w)
    if kind == DST1:
        if length < 1:
            raise ValueError("DST-I needs length >= 1")
        return TransformPlan(length=length, kind=DST1)
    raise ValueError("kind must be DCT1 or DST1")


def _apply_dct1(plan, v):
    n = plan.length
    u = v * plan._weights
    # even-symmetric extension [u_0 .. u_{N-1}, u_{N-2} .. u_1], length 2N-2
    ext = np.concatenate([u, u[..., -2:0:-1]], axis=-1)
    if np.iscomplexobj(v):
        return np.fft.fft(ext, axis=-1)[..., :n]
    return np.fft.rfft(ext, axis=-1).real[..., :n]


def _apply_dst1(plan, v):
    n = plan.length
    shape = v.shape[:-1] + (2 * n + 2,)
    ext = np.zeros(shape, dtype=v.dtype)
    ext[..., 1 : n + 1] = v
    ext[..., n + 2 :] = -v[..., ::-1]
    if np.iscomplexobj(v):
        return 0.5j * np.fft.fft(ext, axis=-1)[..., 1 : n + 1]
    return -0.5 * np.fft.rfft(ext, axis=-1).imag[..., 1 : n + 1]


def apply(plan, v):
    """Apply the planned matrix to `v` along its last axis."""
    v = np.asarray(v)
    if v.shape[-1] != plan.length:
        raise ValueError(
            "vector length %d does not match plan length %d"
            % (v.shape[-1], plan.length)
        )
    if not np.issubdtype(v.dtype, np.inexact):
        v = v.astype(float)
    if plan.kind == DCT1:
        return _apply_dct1(plan, v)
    return _apply_dst1(plan, v)
