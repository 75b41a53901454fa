"""Elementary planar maps: principal argument, winding maps, fractional powers,
and the divided difference used to bound the deflated quotient near a
critical point.

All functions are vectorised and keep the precision of their input.  The
convention ``|z|**a * exp(i*b*arg z) = 0`` at ``z = 0`` is used throughout.
"""
from __future__ import annotations

import numpy as np

# A_m membership: f_m values closer than this are treated as equal
A_M_TOL = 1e-14


def _complex(z) -> np.ndarray:
    z = np.asarray(z)
    if z.dtype.kind != "c":
        z = z.astype(np.result_type(z.dtype, np.complex128))
    return z


def _pi(rdt) -> np.floating:
    rdt = np.dtype(rdt)
    return np.arctan2(rdt.type(0), rdt.type(-1))


def _ret(a):
    return a[()] if a.ndim == 0 else a


def principal_arg(z):
    """Argument in ``(-pi, pi]``; the negative real axis maps to ``+pi``."""
    z = _complex(z)
    if np.any(z == 0):
        raise ValueError("argument undefined at origin")
    theta = np.arctan2(z.imag, z.real)
    pi = _pi(theta.dtype)
    return _ret(np.where(theta <= -pi, pi, theta))


def radial_power(z, a, b):
    """``|z|**a * exp(i*b*arg z)``, zero at the origin.

    The modulus is a real power and the phase comes from the principal
    argument, so the branch is the one fixed by ``principal_arg``.
    """
    z = _complex(z)
    rdt = z.real.dtype
    zero = z == 0
    safe = np.where(zero, 1, z)
    theta = np.arctan2(safe.imag, safe.real)
    pi = _pi(rdt)
    theta = np.where(theta <= -pi, pi, theta)
    mod = np.power(np.abs(safe), np.asarray(a, dtype=rdt))
    out = mod * np.exp(1j * (np.asarray(b, dtype=rdt) * theta))
    return _ret(np.where(zero, 0, out).astype(z.dtype))


def f_n(n: int, z):
    """Winding map ``|z| exp(i n arg z)``."""
    if n < 1:
        raise ValueError("f_n needs n >= 1")
    return radial_power(z, 1, n)


def g_kn(k: int, n: int, z):
    """``|z|**(k/n) exp(i k arg z)`` for ``1 <= k <= n-1``."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"g_kn needs 1 <= k <= n-1, got k={k}, n={n}")
    z = _complex(z)
    rdt = z.real.dtype
    return radial_power(z, np.asarray(k, dtype=rdt) / n, k)


def phi_lm(l: int, m: int, z, w):
    """Divided difference of ``u -> u**((l+m)/m)`` along the winding map ``f_m``.

    For ``z != w`` this is
    ``(|z|^((l+m)/m) e^{i(l+m)arg z} - |w|^((l+m)/m) e^{i(l+m)arg w}) / (f_m(z) - f_m(w))``;
    on the diagonal it is the limit ``((l+m)/m) |w|^(l/m) e^{i l arg w}``.
    Pairs with ``f_m(z) == f_m(w)`` and ``z != w``, or ``z = w = 0``, are
    outside the domain and raise ``ValueError``.
    """
    if l < 1 or m < 1:
        raise ValueError("phi_lm needs l >= 1 and m >= 1")
    z, w = np.broadcast_arrays(_complex(z), _complex(w))
    dt = np.result_type(z.dtype, w.dtype)
    z = z.astype(dt)
    w = w.astype(dt)
    rdt = z.real.dtype
    diag = z == w
    if np.any(diag & (w == 0)):
        raise ValueError("outside A_m: z = w = 0")
    den = f_n(m, z) - f_n(m, w)
    den = np.asarray(den)
    if np.any(~diag & (np.abs(den) <= A_M_TOL)):
        raise ValueError("outside A_m: f_m(z) = f_m(w) with z != w")
    expo = np.asarray(l + m, dtype=rdt) / m
    num = radial_power(z, expo, l + m) - radial_power(w, expo, l + m)
    with np.errstate(divide="ignore", invalid="ignore"):
        off = np.asarray(num) / np.where(diag, 1, den)
    limit = expo * np.asarray(radial_power(w, np.asarray(l, dtype=rdt) / m, l))
    return _ret(np.where(diag, limit, off).astype(dt))
