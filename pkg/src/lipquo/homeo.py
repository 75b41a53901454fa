"""The radial profile phi and the plane homeomorphisms h1, h2 with exact inverses.

phi is the identity up to R, linear from R to 2^n R^n (landing on 2R), and
t**(1/n) beyond.  h1 rescales the modulus by phi and keeps the argument.  h2
agrees with h1 outside the critical balls B_r(z_j) and inside each ball takes
an m_j-th root of the modulus about z_j, fixing the boundary circle.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .polycore import complex_dtype, real_dtype


def _unit(u, mod):
    """``u / |u|`` with 0 at the origin."""
    return np.where(mod == 0, 0, u / np.where(mod == 0, 1, mod))


@dataclass(frozen=True)
class RadialProfile:
    R: float
    n: int
    dtype: np.dtype = np.dtype(np.float64)

    def __post_init__(self):
        if not self.R > 1:
            raise ValueError("profile needs R > 1")
        if self.n < 2:
            raise ValueError("profile needs n >= 2")
        object.__setattr__(self, "dtype", np.dtype(self.dtype))

    @property
    def _R(self):
        return self.dtype.type(self.R)

    @property
    def K(self):
        """``2^n R^(n-1) - 1``, the slope of phi^{-1} on ``[R, 2R]``."""
        return self.dtype.type(2) ** self.n * self._R ** (self.n - 1) - 1

    @property
    def outer(self):
        """``2^n R^n``, where phi switches to the n-th root."""
        return self.dtype.type(2) ** self.n * self._R**self.n

    def phi(self, t):
        t = np.asarray(t, dtype=self.dtype)
        if np.any(t < 0):
            raise ValueError("phi is defined for t >= 0")
        R, K, outer = self._R, self.K, self.outer
        root = np.power(t, self.dtype.type(1) / self.n)
        mid = (t - R) / K + R
        out = np.where(t <= R, t, np.where(t < outer, mid, root))
        return out[()] if out.ndim == 0 else out

    def phi_inv(self, s):
        s = np.asarray(s, dtype=self.dtype)
        if np.any(s < 0):
            raise ValueError("phi_inv is defined for s >= 0")
        R, K = self._R, self.K
        mid = (s - R) * K + R
        out = np.where(s <= R, s, np.where(s < 2 * R, mid, s**self.n))
        return out[()] if out.ndim == 0 else out


def h1(profile: RadialProfile, z):
    z = np.asarray(z)
    z = z.astype(np.result_type(z.dtype, complex_dtype(profile.dtype)))
    mod = np.abs(z)
    # identity region returned as is, not rebuilt from modulus and phase
    out = np.where(mod <= profile._R, z, profile.phi(mod) * _unit(z, mod))
    return out[()] if np.ndim(out) == 0 else out


def h1_inv(profile: RadialProfile, w):
    w = np.asarray(w)
    w = w.astype(np.result_type(w.dtype, complex_dtype(profile.dtype)))
    mod = np.abs(w)
    out = np.where(mod <= profile._R, w, profile.phi_inv(mod) * _unit(w, mod))
    return out[()] if np.ndim(out) == 0 else out


def _ball_forward(u, r, m):
    """``r^(1-1/m) |u|^(1/m) u/|u|``: the ball branch of h2 about its centre."""
    mod = np.abs(u)
    one = mod.dtype.type(1)
    return r ** (one - one / m) * np.power(mod, one / m) * _unit(u, mod)


def _ball_inverse(v, r, m):
    """``|v|^m r^(1-m) v/|v|``, inverse of ``_ball_forward``."""
    mod = np.abs(v)
    return mod**m * r ** (1 - m) * _unit(v, mod)


@dataclass(frozen=True)
class PlaneHomeomorphism:
    """h1, h2, or the identity (used for linear P).

    ``forward``/``inverse`` dispatch on ``kind``; the ball branch owns the
    closed balls ``|z - z_j| <= r``.
    """

    kind: str
    profile: RadialProfile | None = None
    cps: tuple = field(default_factory=tuple)
    r: float = 0.0

    def __post_init__(self):
        if self.kind not in ("h1", "h2", "identity"):
            raise ValueError(f"unknown homeomorphism kind {self.kind!r}")
        if self.kind != "identity" and self.profile is None:
            raise ValueError(f"{self.kind} needs a radial profile")

    @property
    def dtype(self):
        if self.profile is None:
            return np.dtype(np.complex128)
        return complex_dtype(self.profile.dtype)

    def _apply(self, z, radial, ball):
        z = np.asarray(z)
        scalar = z.ndim == 0
        z = np.atleast_1d(z).astype(np.result_type(z.dtype, self.dtype))
        out = np.array(radial(self.profile, z))
        if self.kind == "h2":
            rr = real_dtype(self.dtype).type(self.r)
            for cp in self.cps:
                mask = np.abs(z - cp.z) <= rr
                if np.any(mask):
                    out[mask] = cp.z + ball(z[mask] - cp.z, rr, cp.m)
        return out[0] if scalar else out

    def forward(self, z):
        if self.kind == "identity":
            return z
        return self._apply(z, h1, _ball_forward)

    def inverse(self, w):
        if self.kind == "identity":
            return w
        return self._apply(w, h1_inv, _ball_inverse)

    __call__ = forward


def make_h1(profile: RadialProfile) -> PlaneHomeomorphism:
    return PlaneHomeomorphism("h1", profile)


def make_h2(profile: RadialProfile, cps, r: float) -> PlaneHomeomorphism:
    return PlaneHomeomorphism("h2", profile, tuple(cps), float(r))


def h2(H: PlaneHomeomorphism, z):
    return H.forward(z)


def h2_inv(H: PlaneHomeomorphism, w):
    return H.inverse(w)


def phi(profile: RadialProfile, t):
    return profile.phi(t)


def phi_inv(profile: RadialProfile, s):
    return profile.phi_inv(s)
