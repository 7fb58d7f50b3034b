r"""Modified Bessel functions :math:`I_n, K_n` of integer order and complex argument.

Values come from the AMOS routines (``scipy.special.ive``/``kve``) where those
are representable.  Where the plain values underflow or overflow (large order
and small argument, or large real part) the functions are carried as complex
logarithms: a normalised power series for :math:`\log I_n` and the upward
recurrence for :math:`\log K_n`.  Ratios such as :math:`I_n(\lambda r)/I_n(\lambda)`
should always go through the log forms.

Supported range: ``0 <= n <= 256``, ``|z| <= 1e4``, ``Re z > 0`` (``z = 0``
allowed for :math:`I_n`).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln, ive, kve

from .errors import InputError, RangeError, SingularityError

MAX_ORDER = 256
MAX_ABS = 1.0e4
# below this |ive| the AMOS value is treated as underflowed
_TINY = 1e-280
_HUGE = 1e280


def _check(n, z, allow_zero=True):
    if not float(n).is_integer():
        raise InputError(f"order must be an integer, got {n!r}")
    n = int(n)
    if n < 0:
        raise RangeError(f"order must be >= 0, got {n}")
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise InputError("non-finite argument")
    if n > MAX_ORDER:
        raise RangeError(f"order {n} exceeds {MAX_ORDER}")
    if np.any(np.abs(z) > MAX_ABS):
        raise RangeError(f"|z| exceeds {MAX_ABS:g}")
    zero = z == 0
    if np.any(zero) and not allow_zero:
        raise SingularityError("K_n is singular at z = 0")
    if np.any((z.real <= 0) & ~zero):
        raise RangeError("argument must satisfy Re z > 0")
    return n, z


def _series_sum(n, z):
    """``sum_k (z^2/4)^k / (k! (n+1)_k)``, so that ``I_n = (z/2)^n / n! * sum``."""
    q = z * z / 4.0
    total = np.ones_like(z)
    term = np.ones_like(z)
    for k in range(1, 400):
        term = term * q / (k * (n + k))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def _log_series_i(n, z):
    """log I_n(z) from the normalised series, for |z|^2 small against n."""
    with np.errstate(divide="ignore"):
        return n * np.log(z / 2.0) - gammaln(n + 1) + np.log(_series_sum(n, z))


def log_bessel_i(n, z):
    """Complex logarithm of I_n(z); ``-inf`` at z = 0 for n >= 1."""
    n, z = _check(n, z)
    return _log_i(n, z)


def _log_i(n, z):
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty(z.shape, dtype=complex)
    zero = z == 0
    out[zero] = 0.0 if n == 0 else -np.inf
    nz = ~zero
    if np.any(nz):
        v = ive(n, z[nz])
        ok = np.isfinite(v) & (np.abs(v) > _TINY)
        sub = np.empty(v.shape, dtype=complex)
        sub[ok] = np.log(v[ok]) + np.abs(z[nz][ok].real)
        if np.any(~ok):
            sub[~ok] = _log_series_i(n, z[nz][~ok])
        out[nz] = sub
    return out[0] if scalar else out


def _log_k_recurrence(n, z):
    lk0 = np.log(kve(0, z)) - z
    if n == 0:
        return lk0
    lk = np.log(kve(1, z)) - z
    ratio = np.exp(lk - lk0)  # K_1 / K_0
    for m in range(1, n):
        ratio = 1.0 / ratio + 2.0 * m / z  # K_{m+1} / K_m
        lk = lk + np.log(ratio)
    return lk


def log_bessel_k(n, z):
    """Complex logarithm of K_n(z) for Re z > 0."""
    n, z = _check(n, z, allow_zero=False)
    return _log_k(n, z)


def _log_k(n, z):
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    v = kve(n, z)
    ok = np.isfinite(v) & (np.abs(v) < _HUGE) & (v != 0)
    out = np.empty(z.shape, dtype=complex)
    out[ok] = np.log(v[ok]) - z[ok]
    if np.any(~ok):
        out[~ok] = _log_k_recurrence(n, z[~ok])
    return out[0] if scalar else out


def _finish(logv, scale, scaled, what):
    with np.errstate(over="ignore"):
        val = np.exp(logv - scale) if scaled else np.exp(logv)
    if not np.all(np.isfinite(val)):
        raise RangeError(f"{what} overflows; request the scaled form")
    return val


def bessel_i(n, z, scaled=False):
    """I_n(z), or ``exp(-|Re z|) I_n(z)`` when ``scaled``."""
    n, z = _check(n, z)
    return _finish(log_bessel_i(n, z), np.abs(z.real), scaled, "I_n(z)")


def bessel_k(n, z, scaled=False):
    """K_n(z), or ``exp(z) K_n(z)`` when ``scaled``."""
    n, z = _check(n, z, allow_zero=False)
    return _finish(log_bessel_k(n, z), -z, scaled, "K_n(z)")


def ratio_i(n, num, den):
    """I_n(num) / I_n(den), finite whenever the ratio is."""
    return np.exp(log_bessel_i(n, num) - log_bessel_i(n, den))


def _shift_i(n, k, z):
    """I_{n+k}(z) / I_n(z) for z != 0, using I_{-m} = I_m."""
    m = abs(n + k)
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty(z.shape, dtype=complex)
    # for small |z| the logs are large and their difference loses digits;
    # take the ratio of the normalised series instead
    small = np.abs(z * z) <= min(n, m) + 1
    big = ~small
    if np.any(big):
        out[big] = np.exp(_log_i(m, z[big]) - _log_i(n, z[big]))
    if np.any(small):
        zs = z[small]
        # n! / m! as a short exact product (|m - n| <= 2 in practice)
        fact = math.prod(range(m + 1, n + 1)) if m < n else 1.0 / math.prod(range(n + 1, m + 1))
        out[small] = (zs / 2.0) ** (m - n) * fact * _series_sum(m, zs) / _series_sum(n, zs)
    return out[0] if scalar else out


def _shift_k(n, k, z):
    return np.exp(_log_k(abs(n + k), z) - _log_k(n, z))


def dlog_i(n, z):
    """I_n'(z) / I_n(z) for z != 0."""
    n, z = _check(n, z)
    return _shift_i(n, 1, z) + n / z


def dlog_k(n, z):
    """K_n'(z) / K_n(z)."""
    n, z = _check(n, z, allow_zero=False)
    return -_shift_k(n, 1, z) + n / z


def d2log_i(n, z):
    """I_n''(z) / I_n(z) from I'' = (I_{n-2} + 2 I_n + I_{n+2}) / 4."""
    n, z = _check(n, z)
    return 0.25 * (_shift_i(n, -2, z) + 2.0 + _shift_i(n, 2, z))


def d2log_k(n, z):
    """K_n''(z) / K_n(z) from K'' = (K_{n-2} + 2 K_n + K_{n+2}) / 4."""
    n, z = _check(n, z, allow_zero=False)
    return 0.25 * (_shift_k(n, -2, z) + 2.0 + _shift_k(n, 2, z))


def bessel_i_prime(n, z, scaled=False):
    """I_n'(z) (scaled like :func:`bessel_i` when requested)."""
    n, z = _check(n, z)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty(z.shape, dtype=complex)
    zero = z == 0
    out[zero] = 0.5 if n == 1 else 0.0
    nz = ~zero
    if np.any(nz):
        zz = z[nz]
        if n == 0:
            out[nz] = bessel_i(1, zz, scaled)
        else:
            # (I_{n-1} + I_{n+1}) / 2 in log form
            la = _log_i(n - 1, zz)
            lb = _log_i(n + 1, zz)
            lv = la + np.log(0.5 * (1.0 + np.exp(lb - la)))
            out[nz] = _finish(lv, np.abs(zz.real), scaled, "I_n'(z)")
    return out[0] if scalar else out


def bessel_k_prime(n, z, scaled=False):
    """K_n'(z) = -(K_{n-1} + K_{n+1}) / 2 (scaled by exp(z) when requested)."""
    n, z = _check(n, z, allow_zero=False)
    if n == 0:
        return -bessel_k(1, z, scaled)
    lb = _log_k(n + 1, z)
    la = _log_k(n - 1, z)
    lv = lb + np.log(-0.5 * (1.0 + np.exp(la - lb)))
    return _finish(lv, -z, scaled, "K_n'(z)")


def wronskian_residual(n, z):
    """``|z| * |I_n K_n' - I_n' K_n + 1/z|``, evaluated through log forms."""
    n, z = _check(n, z, allow_zero=False)
    prod = np.exp(log_bessel_i(n, z) + log_bessel_k(n, z))
    w = prod * (dlog_k(n, z) - dlog_i(n, z))
    return np.abs(w + 1.0 / z) * np.abs(z)


def recurrence_residual(n, z):
    """``|I_{n-1} - I_{n+1} - (2n/z) I_n| / |I_n|`` for n >= 1."""
    n, z = _check(n, z, allow_zero=False)
    return np.abs(_shift_i(n, -1, z) - _shift_i(n, 1, z) - 2.0 * n / z)
