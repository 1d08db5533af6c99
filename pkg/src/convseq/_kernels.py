"""O(N^2) inner loops for the complex binary64 path.

Two implementations of each kernel live here: a numba ``@njit`` version with
Neumaier-compensated inner sums, and a pure numpy version that forms the
products with numpy and sums them with ``math.fsum``. ``CONVSEQ_USE_NUMBA=0``
(or a missing numba) selects the numpy path. Exact rational arithmetic never
reaches this module.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .errors import RangeError

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def numba_enabled() -> bool:
    flag = os.environ.get("CONVSEQ_USE_NUMBA", "1").strip().lower()
    return HAVE_NUMBA and flag not in ("0", "false", "no", "off")


# -- numpy reference path ---------------------------------------------------

def _csum(p: np.ndarray) -> complex:
    return complex(math.fsum(p.real), math.fsum(p.imag))


def recurrence_numpy(b: np.ndarray, out: np.ndarray, m: int) -> np.ndarray:
    """Fill ``out[m:]`` in place from ``out[:m]``.

    out[n] = (out[n-m] - sum_{j<n} b[n-j] out[j]) / b[0]
    """
    b0 = b[0]
    for n in range(m, out.shape[0]):
        out[n] = (out[n - m] - _csum(b[n:0:-1] * out[:n])) / b0
    return out


def series_divide_numpy(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    q = np.zeros(num.shape[0], dtype=np.complex128)
    d0 = den[0]
    for n in range(num.shape[0]):
        q[n] = (num[n] - _csum(den[n:0:-1] * q[:n])) / d0
    return q


# -- numba path -------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _neumaier(s, c, x):
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        return t, c

    @njit(cache=True)
    def _conv_tail(w, v, n):
        # sum_{j<n} w[n-j] * v[j], compensated per component
        sr = 0.0
        cr = 0.0
        si = 0.0
        ci = 0.0
        for j in range(n):
            t = w[n - j] * v[j]
            sr, cr = _neumaier(sr, cr, t.real)
            si, ci = _neumaier(si, ci, t.imag)
        return complex(sr + cr, si + ci)

    @njit(cache=True)
    def recurrence_numba(b, out, m):
        b0 = b[0]
        for n in range(m, out.shape[0]):
            out[n] = (out[n - m] - _conv_tail(b, out, n)) / b0
        return out

    @njit(cache=True)
    def series_divide_numba(num, den):
        q = np.zeros(num.shape[0], dtype=np.complex128)
        d0 = den[0]
        for n in range(num.shape[0]):
            q[n] = (num[n] - _conv_tail(den, q, n)) / d0
        return q

else:  # pragma: no cover
    recurrence_numba = recurrence_numpy
    series_divide_numba = series_divide_numpy


def _finite(arr: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        if np.any(np.isnan(arr)):
            raise RangeError("complex recurrence produced NaN")
        raise RangeError("complex recurrence overflowed binary64")
    return arr


def run_recurrence(b, initials, m: int, N: int, use_numba: bool | None = None) -> np.ndarray:
    """Values 0..N of the shifted convolution recurrence as complex128."""
    b = np.ascontiguousarray(b, dtype=np.complex128)
    if b.shape[0] < N + 1:
        raise ValueError("need b_0..b_N")
    out = np.zeros(N + 1, dtype=np.complex128)
    out[:m] = np.asarray(initials, dtype=np.complex128)[:m]
    if use_numba is None:
        use_numba = numba_enabled()
    with np.errstate(all="ignore"):
        fn = recurrence_numba if use_numba else recurrence_numpy
        return _finite(fn(b[: N + 1], out, m))


def divide(num, den, use_numba: bool | None = None) -> np.ndarray:
    num = np.ascontiguousarray(num, dtype=np.complex128)
    den = np.ascontiguousarray(den, dtype=np.complex128)
    if den.shape[0] < num.shape[0]:
        raise ValueError("denominator shorter than numerator")
    if use_numba is None:
        use_numba = numba_enabled()
    with np.errstate(all="ignore"):
        fn = series_divide_numba if use_numba else series_divide_numpy
        return _finite(fn(num, den[: num.shape[0]]))
