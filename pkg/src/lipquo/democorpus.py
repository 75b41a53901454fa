"""Counterexamples: maps that fail to be Lipschitz, co-Lipschitz or injective.

Each demo returns explicit evidence (a witness pair or a ratio) that can be
re-checked by direct evaluation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import basemaps
from .sampling import rng_for


def quadratic_radial_homeo(z):
    """``|z|^2 e^{i arg z}``: a homeomorphism of the plane that is not Lipschitz."""
    return basemaps.radial_power(z, 2, 1)


def nonlip_homeo_growth(R0: float) -> float:
    """``|P(h(R0)) - P(h(0))| / R0`` for ``P(z) = z`` and the quadratic radial homeomorphism."""
    if R0 <= 0:
        raise ValueError("R0 must be positive")
    return float(abs(quadratic_radial_homeo(complex(R0)) - quadratic_radial_homeo(0j)) / R0)


@dataclass(frozen=True)
class PairWitness:
    z: complex
    y: complex
    ratio: float


def square_unbounded_ratio(n: int, M: float, gap: float = 1e-4) -> PairWitness:
    """Radial pair near ``|z| = M`` for ``g = f_n**2``.

    On the positive axis ``f_n`` is the identity, so the quotient is
    ``(a^2 - b^2) / (a - b) = a + b``, about ``2M``.
    """
    if M <= 1:
        raise ValueError("need M > 1")
    z = complex(M)
    y = complex(M * (1 + gap))
    fz, fy = basemaps.f_n(n, z), basemaps.f_n(n, y)
    ratio = abs(fz**2 - fy**2) / abs(z - y)
    return PairWitness(z, y, float(ratio))


@dataclass(frozen=True)
class ProjectionEvidence:
    """Outcome of the coordinate-projection demo.

    ``lipschitz_ok``: sampled images of B_r(x) lie in B_r(f(x)).
    ``colipschitz_ok``: sampled targets of B_{r(1-eps)}(f(x)) have preimages in B_r(x).
    ``witness``: a point y != x with f(y) = f(x), defeating every strong constant.
    """

    lipschitz_ok: bool
    colipschitz_ok: bool
    witness: tuple
    image_distance: float
    source_distance: float
    fiber_dimension: int
    discrete: bool


def project(p, n: int):
    """First n coordinates."""
    return np.asarray(p, dtype=float)[..., :n]


def projection_demo(n: int, k: int, x, r: float, samples: int = 1000, seed: int = 0) -> ProjectionEvidence:
    """Evidence that the projection R^{n+k} -> R^n is 1-Lipschitz and
    1-co-Lipschitz but neither strongly co-Lipschitz nor discrete."""
    if n < 1 or k < 1:
        raise ValueError("need n, k >= 1")
    x = np.asarray(x, dtype=float)
    if x.shape != (n + k,):
        raise ValueError(f"x must have {n + k} coordinates")
    rng = rng_for(seed, 7)
    d = rng.normal(size=(samples, n + k))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    pts = x + d * r * rng.random((samples, 1)) ** (1 / (n + k))
    fx = project(x, n)
    lip = bool(np.all(np.linalg.norm(project(pts, n) - fx, axis=1) < r))
    t = rng.normal(size=(samples, n))
    t /= np.linalg.norm(t, axis=1, keepdims=True)
    targets = fx + t * r * (1 - 1e-6) * rng.random((samples, 1)) ** (1 / n)
    # canonical preimage: keep the kernel coordinates of x
    pre = np.concatenate([targets, np.broadcast_to(x[n:], (samples, k))], axis=1)
    colip = bool(np.all(np.linalg.norm(pre - x, axis=1) < r) and np.allclose(project(pre, n), targets))
    y = x.copy()
    y[n] += r / 2
    img = float(np.linalg.norm(project(y, n) - fx))
    src = float(np.linalg.norm(y - x))
    return ProjectionEvidence(
        lipschitz_ok=lip,
        colipschitz_ok=colip,
        witness=(tuple(x.tolist()), tuple(y.tolist())),
        image_distance=img,
        source_distance=src,
        fiber_dimension=k,
        discrete=projection_fiber_discrete(n, k, x),
    )


def projection_fiber_discrete(n: int, k: int, x, probes: int = 16) -> bool:
    """Is x isolated in its fiber?  Probe kernel points at shrinking distances."""
    x = np.asarray(x, dtype=float)
    fx = project(x, n)
    for j in range(probes):
        y = x.copy()
        y[n + (j % k)] += 2.0 ** (-j)
        if np.array_equal(project(y, n), fx):
            # a fiber point arbitrarily close to x: not isolated
            continue
        return True
    return False


def broken_jlps_h(R: float, n: int, z):
    """The radial map that is the identity on ``|z| <= R`` and ``|z|^(1/n) e^{i arg z}`` beyond.

    For ``R > 2^(1/(n-1))`` the circle ``|z| = 2R`` lands inside ``B_R(0)``,
    so the map is not injective.
    """
    if n < 2:
        raise ValueError("need n > 1")
    if not R > 2 ** (1 / (n - 1)):
        raise ValueError("need R > 2^(1/(n-1))")
    z = np.asarray(z, dtype=np.complex128)
    out = np.where(np.abs(z) <= R, z, basemaps.radial_power(z, 1.0 / n, 1))
    return out[()] if out.ndim == 0 else out


def broken_jlps_collision(R: float, n: int, theta: float = 0.0) -> PairWitness:
    """Two distinct points with the same image under ``broken_jlps_h``."""
    z1 = 2 * R * np.exp(1j * theta)
    z2 = complex(broken_jlps_h(R, n, z1))
    if not abs(z2) < R:
        raise ValueError("no collision: image of the 2R circle is outside B_R")
    gap = abs(complex(broken_jlps_h(R, n, z1)) - complex(broken_jlps_h(R, n, z2)))
    return PairWitness(complex(z1), z2, float(gap))


def squared_composition_growth(q, radii) -> list:
    """Radial difference quotients of ``(F2)^2`` for a built quotient map.

    For a fixed homeomorphism h2, ``P^2 o h2 = (P o h2)^2`` is not Lipschitz;
    the quotient on the pair ``(t, t(1 + 1e-6))`` grows without bound in t.
    """
    out = []
    for t in radii:
        z = np.asarray(t).astype(q.dtype)
        y = np.asarray(t * (1 + 1e-6)).astype(q.dtype)
        fz, fy = q.F2(z), q.F2(y)
        out.append(float(abs(fz * fz - fy * fy) / abs(z - y)))
    return out
