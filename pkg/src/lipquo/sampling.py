"""Seeded samplers and the geometric shrink search used by the checks."""
from __future__ import annotations

import numpy as np

# sampled offsets are log-uniform in [MIN_FRACTION * rho, rho]
MIN_FRACTION = 1e-6


def _polar(rad, turns, dtype):
    """``rad * exp(2 pi i turns)`` evaluated in the real precision of ``dtype``."""
    rdt = np.finfo(np.dtype(dtype)).dtype
    two_pi = 2 * np.arctan2(rdt.type(0), rdt.type(-1))
    ang = two_pi * np.asarray(turns, dtype=rdt)
    return (np.asarray(rad, dtype=rdt) * (np.cos(ang) + 1j * np.sin(ang))).astype(dtype)


def rng_for(seed: int, *salt: int) -> np.random.Generator:
    """Independent, reproducible stream for ``seed`` and a salt tuple."""
    return np.random.default_rng([int(seed), *[int(s) for s in salt]])


def disc_points(center, rho: float, count: int, rng: np.random.Generator, min_fraction: float = MIN_FRACTION):
    """Points of the punctured disc ``B_rho(center)``.

    Radii are log-uniform, angles uniform.  Uniforms are drawn as a
    ``(count, 2)`` block so a larger ``count`` extends, rather than reshuffles,
    the sample.
    """
    center = np.asarray(center)
    if center.dtype.kind != "c":
        center = center.astype(np.complex128)
    u = rng.random((count, 2))
    rad = rho * min_fraction ** (1.0 - u[:, 0])
    return center + _polar(rad, u[:, 1], center.dtype)


def log_radius_points(rmin: float, rmax: float, count: int, rng: np.random.Generator, dtype=np.complex128):
    """Points with log-uniform modulus in ``[rmin, rmax]`` and uniform angle."""
    u = rng.random((count, 2))
    rdt = np.finfo(np.dtype(dtype)).dtype
    lo, hi = np.log(rdt.type(rmin)), np.log(rdt.type(rmax))
    rad = np.exp(lo + (hi - lo) * u[:, 0].astype(rdt))
    return _polar(rad, u[:, 1], dtype)


def circle_points(center, radius: float, count: int, rng: np.random.Generator | None = None):
    """Equally spaced points on a circle, with a random phase if ``rng`` is given."""
    center = np.asarray(center)
    if center.dtype.kind != "c":
        center = center.astype(np.complex128)
    phase = 0.0 if rng is None else rng.random()
    turns = phase + np.arange(count) / count
    return center + _polar(radius, turns, center.dtype)


def shrink_search(predicate, rho0: float, floor: float):
    """Halve ``rho`` from ``rho0`` until ``predicate(rho)`` holds.

    ``predicate`` returns ``(ok, payload)``.  Returns ``(rho, payload)`` for the
    first passing radius, or ``(None, payload)`` of the last attempt once
    ``rho`` drops below ``floor``.  ``rho0`` itself is always tried.
    """
    rho = float(rho0)
    while True:
        ok, payload = predicate(rho)
        if ok:
            return rho, payload
        rho /= 2
        if rho < floor:
            return None, payload


def axis_points(center, rho: float, axes, count: int, rng: np.random.Generator, min_fraction: float = MIN_FRACTION):
    """Points on the lines through ``center`` along each unit direction in ``axes``.

    Distances are log-uniform in ``[min_fraction * rho, rho]`` with random sign.
    Radial maps stretch most unevenly along such lines, which uniform angles
    almost never hit.
    """
    center = np.asarray(center)
    if center.dtype.kind != "c":
        center = center.astype(np.complex128)
    out = []
    for ax in axes:
        u = rng.random((count, 2))
        dist = rho * min_fraction ** (1.0 - u[:, 0]) * np.where(u[:, 1] < 0.5, -1.0, 1.0)
        out.append(center + (dist * complex(ax)).astype(center.dtype))
    if not out:
        return np.zeros(0, dtype=center.dtype)
    return np.concatenate(out)
