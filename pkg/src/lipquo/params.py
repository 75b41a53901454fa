"""Selection of the construction constants and the region geometry.

Only existence of R and r is guaranteed by the construction; the rules here
pick concrete values deterministically so that reports are reproducible.
Constants are held in the real dtype matching the working precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .polycore import CriticalPoint, Polynomial, real_dtype

# multiplicative margin turning a non-strict bound into a strict one
STRICT_MARGIN = 1e-9
# sample count for the sampled half of the property (iv) check
R_CHECK_SAMPLES = 1000


class ConstructionError(ArithmeticError):
    """Constants cannot be represented at the working precision."""


class Region(str, Enum):
    BALL = "ball"
    INNER = "inner"
    TRANSITION = "transition"
    OUTER = "outer"


def lipschitz_tail_threshold(k: int, n: int, eps: float) -> float:
    """Point T beyond which ``t**(k/n)`` is ``eps/2``-Lipschitz."""
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    if eps <= 0:
        raise ValueError("eps must be positive")
    return (2.0 * k / (n * eps)) ** (n / (n - k))


def compute_Dk(k: int, n: int, a_k) -> float:
    """Radius beyond which ``a_k g_{k,n}`` is ``1/(2n)``-Lipschitz.

    ``k = 0`` uses the same formula (with T = 0) so that D_0 enters the max
    defining R.
    """
    if not 0 <= k <= n - 1:
        raise ValueError(f"need 0 <= k <= n-1, got k={k}, n={n}")
    mag = abs(complex(a_k))
    if mag == 0:
        return 0.0
    eps = 1.0 / (2 * n * mag)
    T = lipschitz_tail_threshold(k, n, eps) if k >= 1 else 0.0
    strict = (2.0 * (k + 1) / eps) ** (n / (n - k)) * (1 + STRICT_MARGIN)
    return max(T, strict)


def choose_R(P: Polynomial, cps) -> float:
    """``max(2, 1 + max D_k, 2 (1 + max |z_j|))``."""
    n = P.degree
    D = [compute_Dk(k, n, P.coeffs[k]) for k in range(n)]
    zmax = max((abs(complex(cp.z)) for cp in cps), default=0.0)
    return max(2.0, 1.0 + max(D), 2.0 * (1.0 + zmax))


def compute_eps_j(cp: CriticalPoint, n: int) -> float:
    tail = float(np.sum(np.abs(cp.q_coeffs[1:])))
    if n > cp.m and tail != 0:
        return float(abs(cp.c0)) / (2 * (1 + n) * tail)
    return 1.0


def _tail_bound(cp: CriticalPoint, r: float) -> float:
    mags = np.abs(cp.q_coeffs[1:]).astype(float)
    return float(np.sum(mags * r ** np.arange(1, mags.size + 1)))


def choose_r(P: Polynomial, R: float, cps) -> float:
    """Ball radius for the critical points (``1/2`` when there are none)."""
    if not cps:
        return 0.5
    n = P.degree
    terms = [1.0]
    terms += [compute_eps_j(cp, n) ** cp.m for cp in cps]
    zs = [complex(cp.z) for cp in cps]
    if len(zs) > 1:
        sep = min(abs(a - b) for i, a in enumerate(zs) for b in zs[i + 1 :])
        terms.append(sep / 4)
    terms += [(R - abs(z)) / 2 for z in zs]
    r = 0.5 * min(terms)
    while any(_tail_bound(cp, r) > float(abs(cp.c0)) / 2 for cp in cps):
        r /= 2
    return r


def alpha_j(cp: CriticalPoint, r: float) -> float:
    return r ** (cp.m - 1) * float(abs(cp.c0)) / 2


@dataclass(frozen=True)
class ConstructionConstants:
    """Everything the construction needs beyond P itself.

    ``outer_radius`` is ``2**n R**n``; ``u1``/``u2`` add 1 and 2 to it.
    """

    n: int
    R: float
    D: tuple
    r: float
    eps: tuple
    alpha: tuple
    c2: float | None
    outer_radius: float
    u1: float
    u2: float
    dtype: np.dtype = np.dtype(np.float64)

    @property
    def K(self) -> float:
        """Slope of the inverse radial profile on the transition ring."""
        return 2.0**self.n * self.R ** (self.n - 1) - 1

    def real(self, name: str):
        """Named constant as a scalar of the working real dtype."""
        return self.dtype.type(getattr(self, name))

    def to_record(self) -> dict:
        return {
            "n": self.n,
            "R": self.R,
            "D": list(self.D),
            "r": self.r,
            "eps_j": list(self.eps),
            "alpha_j": list(self.alpha),
            "c2": self.c2,
            "outer_radius": self.outer_radius,
            "u1": self.u1,
            "u2": self.u2,
        }


def build_constants(P: Polynomial, cps) -> ConstructionConstants:
    """Constants for monic ``P`` of degree at least 2."""
    n = P.degree
    if n < 2:
        raise ValueError("constants are only built for degree >= 2")
    if abs(complex(P.leading) - 1) > 1e-12:
        raise ValueError("build_constants expects a monic polynomial")
    D = tuple(compute_Dk(k, n, P.coeffs[k]) for k in range(n))
    R = choose_R(P, cps)
    r = choose_r(P, R, cps)
    eps = tuple(compute_eps_j(cp, n) for cp in cps)
    alpha = tuple(alpha_j(cp, r) for cp in cps)
    rdt = real_dtype(P.dtype)
    with np.errstate(over="ignore"):
        outer = float(rdt.type(2) ** n * rdt.type(R) ** n)
    if not np.isfinite(outer) or outer * 4 >= float(np.finfo(np.float64).max) ** 0.5:
        raise ConstructionError(
            f"outer radius 2^n R^n overflows for n={n}, R={R:.6g}; coefficients too large for this degree"
        )
    return ConstructionConstants(
        n=n,
        R=R,
        D=D,
        r=r,
        eps=eps,
        alpha=alpha,
        c2=min(alpha) if alpha else None,
        outer_radius=outer,
        u1=outer + 1,
        u2=outer + 2,
        dtype=rdt,
    )


def region_of(z, consts: ConstructionConstants, cps):
    """Region tag(s) for ``z``.

    A ball owns its closed disc; the inner region owns ``|z| <= R``; the
    outer region owns ``|z| >= 2^n R^n``; the transition ring is what is left.
    """
    z = np.asarray(z)
    mod = np.abs(z)
    tags = np.where(
        mod >= consts.real("outer_radius"),
        Region.OUTER.value,
        np.where(mod <= consts.real("R"), Region.INNER.value, Region.TRANSITION.value),
    ).astype(object)
    r = consts.real("r")
    for j, cp in enumerate(cps):
        tags = np.where(np.abs(z - cp.z) <= r, f"{Region.BALL.value}-{j}", tags)
    return tags[()] if tags.ndim == 0 else tags


def check_r_properties(P: Polynomial, consts: ConstructionConstants, cps, seed: int = 0) -> dict:
    """Check the four defining properties of r; returns ``{name: bool}``."""
    r = consts.r
    zs = [complex(cp.z) for cp in cps]
    disjoint = all(abs(a - b) > 4 * r for i, a in enumerate(zs) for b in zs[i + 1 :])
    inside = all(abs(z) + 2 * r < consts.R for z in zs)
    small = all(r <= compute_eps_j(cp, consts.n) ** cp.m * (1 + 1e-12) for cp in cps)
    rng = np.random.default_rng(seed)
    bounded = True
    for cp in cps:
        u = rng.random((R_CHECK_SAMPLES, 2))
        y = cp.z + (r * np.sqrt(u[:, 0]) * np.exp(2j * np.pi * u[:, 1])).astype(P.dtype)
        q = np.abs(cp.Q(y)).astype(float)
        q0 = float(abs(cp.c0))
        bounded &= bool(np.all(q >= q0 / 2) and np.all(q <= 2 * q0))
        bounded &= _tail_bound(cp, r) <= q0 / 2
    return {"disjoint": disjoint, "inside_R": inside, "below_eps": small, "Q_bounds": bounded}
