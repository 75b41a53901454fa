"""Complex polynomial arithmetic.

Coefficients are stored in ascending order (``coeffs[k]`` multiplies ``z**k``)
as a read-only numpy array.  Two working precisions are supported: ``double``
(complex128) and ``extended`` (the platform's clongdouble, 80-bit on x86-64).
Every routine here preserves the dtype it is handed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

PRECISIONS = {"double": np.complex128, "extended": np.clongdouble}

# default relative tolerance for the multiplicity test
MULTIPLICITY_TOL = 1e-7
# backward-error residual accepted from the root finder
RESIDUAL_TOL = 1e-12
# distinct roots closer than this (times 1 + max|root|) are merged
MERGE_TOL = 1e-8


class PolynomialError(ValueError):
    """Invalid or degenerate polynomial input."""


class RootFindingError(ArithmeticError):
    """The simultaneous iteration failed to converge."""

    def __init__(self, message, residuals=None, iterations=None):
        super().__init__(message)
        self.residuals = residuals
        self.iterations = iterations


def complex_dtype(precision) -> np.dtype:
    """Map ``"double"``/``"extended"`` (or a numpy dtype) to a complex dtype."""
    if isinstance(precision, str):
        try:
            return np.dtype(PRECISIONS[precision])
        except KeyError:
            raise ValueError(f"unknown precision {precision!r}") from None
    dt = np.dtype(precision)
    if dt.kind != "c":
        dt = np.result_type(dt, np.complex64)
    return dt


def real_dtype(cdtype) -> np.dtype:
    return np.finfo(np.dtype(cdtype)).dtype


def eps_of(dtype) -> float:
    return float(np.finfo(np.dtype(dtype)).eps)


@dataclass(frozen=True, eq=False)
class Polynomial:
    """A complex polynomial with ascending coefficients."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        dt = c.dtype if c.dtype.kind == "c" else np.result_type(c.dtype, np.complex128)
        if dt == np.complex64:
            dt = np.dtype(np.complex128)
        c = np.array(c, dtype=dt).reshape(-1)
        if c.size == 0:
            c = np.zeros(1, dtype=dt)
        if not np.all(np.isfinite(c)):
            raise PolynomialError("coefficients must be finite")
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1]
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]], precision="double") -> "Polynomial":
        dt = complex_dtype(precision)
        vals = []
        for pair in pairs:
            re, im = pair
            vals.append(complex(float(re), float(im)))
        return cls(np.array(vals, dtype=dt))

    def to_pairs(self) -> list[list[float]]:
        return [[float(c.real), float(c.imag)] for c in self.coeffs]

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def dtype(self) -> np.dtype:
        return self.coeffs.dtype

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 1 and self.coeffs[0] == 0

    @property
    def leading(self):
        return self.coeffs[-1]

    @property
    def scale(self) -> float:
        """Coefficient scale ``1 + max|a_k|`` used for relative tolerances."""
        return 1.0 + float(np.max(np.abs(self.coeffs)))

    def astype(self, precision) -> "Polynomial":
        return Polynomial(self.coeffs.astype(complex_dtype(precision)))

    def __call__(self, z):
        return evaluate(self, z)

    def __sub__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            n = max(self.coeffs.size, other.coeffs.size)
            dt = np.result_type(self.dtype, other.dtype)
            c = np.zeros(n, dtype=dt)
            c[: self.coeffs.size] += self.coeffs
            c[: other.coeffs.size] -= other.coeffs
            return Polynomial(c)
        c = np.array(self.coeffs)
        c[0] = c[0] - other
        return Polynomial(c)

    def __repr__(self):
        terms = ", ".join(f"{complex(c):.6g}" for c in self.coeffs)
        return f"Polynomial([{terms}])"


def evaluate(P: Polynomial, z):
    """Horner evaluation, vectorised over ``z``."""
    z = np.asarray(z)
    c = P.coeffs
    acc = np.zeros(z.shape, dtype=np.result_type(c.dtype, z.dtype)) + c[-1]
    for a in c[-2::-1]:
        acc = acc * z + a
    return acc[()] if acc.ndim == 0 else acc


def derivative(P: Polynomial) -> Polynomial:
    if P.degree < 1:
        return Polynomial(np.zeros(1, dtype=P.dtype))
    k = np.arange(1, P.degree + 1).astype(real_dtype(P.dtype))
    return Polynomial(P.coeffs[1:] * k)


def shifted_expansion(P: Polynomial, z0) -> np.ndarray:
    """Coefficients ``b`` with ``P(z0 + u) = sum b_k u**k`` (repeated Horner shifts)."""
    b = np.array(P.coeffs, dtype=np.result_type(P.dtype, np.asarray(z0).dtype))
    z0 = b.dtype.type(z0)
    n = b.size - 1
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            b[j] = b[j] + z0 * b[j + 1]
    return b


def multiplicity(P: Polynomial, z0, tol: float = MULTIPLICITY_TOL) -> int:
    """Multiplicity of ``z0`` as a root of ``P(z) - P(z0)``."""
    b = shifted_expansion(P, z0)
    b[0] = 0
    mags = np.abs(b)
    total = float(np.sum(mags))
    for k in range(1, b.size):
        if float(mags[k]) > tol * total:
            return k
    raise PolynomialError("degenerate polynomial")


def normalize_monic(P: Polynomial):
    """Split ``P = a * Q`` with ``Q`` monic."""
    if P.degree < 1:
        raise PolynomialError("constant polynomial has no quotient construction")
    a = P.leading
    return a, Polynomial(P.coeffs / a)


# --------------------------------------------------------------------------
# simultaneous root finding

def _root_radius(C: np.ndarray) -> np.ndarray:
    """Fujiwara-type bound on root moduli, one per row of ascending coefficients."""
    n = C.shape[1] - 1
    rdt = real_dtype(C.dtype)
    lead = np.abs(C[:, -1])
    rad = np.zeros(C.shape[0], dtype=rdt)
    for k in range(n):
        ratio = np.abs(C[:, k]) / lead
        if k == 0:
            ratio = ratio / 2
        rad = np.maximum(rad, ratio ** (np.asarray(1, dtype=rdt) / (n - k)))
    return 2 * rad


def _horner_pair(C: np.ndarray, z: np.ndarray):
    p = np.zeros(z.shape, dtype=z.dtype) + C[:, -1:]
    dp = np.zeros(z.shape, dtype=z.dtype)
    for k in range(C.shape[1] - 2, -1, -1):
        dp = dp * z + p
        p = p * z + C[:, k : k + 1]
    return p, dp


def _abs_horner(C: np.ndarray, z: np.ndarray) -> np.ndarray:
    t = np.maximum(np.abs(z), 1)
    acc = np.zeros(z.shape, dtype=t.dtype) + np.abs(C[:, -1:])
    for k in range(C.shape[1] - 2, -1, -1):
        acc = acc * t + np.abs(C[:, k : k + 1])
    return acc


def aberth(C, maxiter: int = 500, seed: int = 0, z0=None):
    """All roots of each row of ``C`` (ascending coefficients) by Aberth iteration.

    Returns ``(roots, residual)`` where ``residual`` is the scaled backward
    error ``|p(z)| / sum |a_k| max(1,|z|)^k`` for each root.
    """
    C = np.atleast_2d(np.asarray(C))
    B, n1 = C.shape
    n = n1 - 1
    if n < 1:
        return np.zeros((B, 0), dtype=C.dtype), np.zeros((B, 0), dtype=real_dtype(C.dtype))
    if n == 1:
        z = (-C[:, 0] / C[:, 1])[:, None]
        return z, np.zeros((B, 1), dtype=real_dtype(C.dtype))
    rdt = real_dtype(C.dtype)
    eps = np.finfo(rdt).eps
    if z0 is None:
        rng = np.random.default_rng(seed)
        offset = rng.uniform(0, 2 * np.pi, size=(B, 1)).astype(rdt)
        k = np.arange(n, dtype=rdt)[None, :]
        two_pi = 2 * np.arctan2(rdt.type(0), rdt.type(-1))
        theta = offset + two_pi * k / n + rdt.type(0.4) / n
        rad = _root_radius(C)[:, None]
        rad = np.where(rad > 0, rad, 1)
        z = rad * np.exp(1j * theta).astype(C.dtype)
    else:
        z = np.array(z0, dtype=C.dtype).reshape(B, n)
    active = np.ones(z.shape, dtype=bool)
    eye = np.eye(n, dtype=bool)[None, :, :]
    rows = np.arange(B)
    for _ in range(maxiter):
        # iterate only rows that still have a moving root
        rows = rows[active[rows].any(axis=1)]
        if rows.size == 0:
            break
        Cr, zr = C[rows], z[rows]
        p, dp = _horner_pair(Cr, zr)
        # a root whose residual is at rounding level cannot improve further
        done = np.abs(p) <= 2 * eps * _abs_horner(Cr, zr)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            ratio = np.where(p == 0, 0, p / dp)
            ratio = np.where(np.isfinite(ratio), ratio, 0)
            diff = zr[:, :, None] - zr[:, None, :]
            inv = np.where(eye, 0, 1 / diff)
            inv = np.where(np.isfinite(inv), inv, 0)
            s = inv.sum(axis=2)
            w = ratio / (1 - ratio * s)
            w = np.where(np.isfinite(w), w, ratio)
        act = active[rows] & ~done
        w = np.where(act, w, 0)
        z[rows] = zr - w
        active[rows] = act & ~(np.abs(w) <= 4 * eps * np.abs(z[rows]))
    p, _ = _horner_pair(C, z)
    resid = np.abs(p) / _abs_horner(C, z)
    return z, resid


def _merge_bound(poly_coeffs: np.ndarray, center, k: int) -> float:
    """Spread expected for a k-fold root blurred by rounding, times a safety factor."""
    P = Polynomial(poly_coeffs)
    b = shifted_expansion(P, center)
    eps = eps_of(P.dtype)
    S = float(_abs_horner(P.coeffs[None, :], np.asarray([[center]]))[0, 0])
    bk = float(np.abs(b[k])) if k < b.size else 0.0
    if bk == 0.0:
        return np.inf
    return 10.0 * (1e3 * eps * S / bk) ** (1.0 / k)


def _nth_derivative(P: Polynomial, k: int) -> Polynomial:
    for _ in range(k):
        P = derivative(P)
    return P


def _refine_center(P: Polynomial, center, k: int, spread: float):
    """Newton on the (k-1)-th derivative, where a k-fold root is simple."""
    if k < 2:
        return center
    D = _nth_derivative(P, k - 1)
    D1 = derivative(D)
    z = center
    for _ in range(20):
        d1 = D1(z)
        if d1 == 0:
            break
        step = D(z) / d1
        z = z - step
        if abs(complex(step)) <= 4 * eps_of(P.dtype) * max(1.0, abs(complex(z))):
            break
    if abs(complex(z - center)) > 2 * spread + 4 * eps_of(P.dtype) * max(1.0, abs(complex(center))):
        return center
    return z


def cluster_roots(P: Polynomial, roots) -> list[tuple[object, int]]:
    """Merge root estimates of ``P`` into distinct roots with multiplicities."""
    roots = [P.dtype.type(r) for r in np.asarray(roots).reshape(-1)]
    clusters = [[r] for r in roots]
    if len(clusters) <= 1:
        return [(c[0], 1) for c in clusters]
    scale = 1.0 + max(abs(complex(r)) for r in roots)
    while len(clusters) > 1:
        centers = [np.mean(np.array(c, dtype=P.dtype)) for c in clusters]
        best = None
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                d = abs(complex(centers[i] - centers[j]))
                if best is None or d < best[0]:
                    best = (d, i, j)
        d, i, j = best
        merged = clusters[i] + clusters[j]
        arr = np.array(merged, dtype=P.dtype)
        center = np.mean(arr)
        spread = float(np.max(np.abs(arr - center)))
        ok = d <= MERGE_TOL * scale or spread <= _merge_bound(P.coeffs, center, len(merged))
        if not ok:
            break
        clusters = [c for t, c in enumerate(clusters) if t not in (i, j)] + [merged]
    out = []
    for c in clusters:
        arr = np.array(c, dtype=P.dtype)
        center = np.mean(arr)
        spread = float(np.max(np.abs(arr - center)))
        out.append((_refine_center(P, center, len(c), spread), len(c)))
    return out


def polynomial_roots(P: Polynomial, seed: int = 0, maxiter: int = 500):
    """Distinct roots of ``P`` with multiplicities, sorted by (re, im)."""
    if P.degree < 1:
        return []
    z, resid = aberth(P.coeffs[None, :], maxiter=maxiter, seed=seed)
    if not np.all(resid <= RESIDUAL_TOL):
        raise RootFindingError(
            f"root iteration did not reach residual {RESIDUAL_TOL:g}; worst {float(resid.max()):.3e}",
            residuals=resid[0].astype(float).tolist(),
            iterations=maxiter,
        )
    found = cluster_roots(P, z[0])
    found.sort(key=lambda t: (float(t[0].real), float(t[0].imag)))
    return found


# --------------------------------------------------------------------------
# critical points

@dataclass(frozen=True, eq=False)
class CriticalPoint:
    """A root ``z`` of P' with the deflated quotient expanded about it.

    ``q_coeffs[l]`` is the coefficient of ``(z - z_j)**l`` in
    ``(P(z) - P(z_j)) / (z - z_j)**m``.
    """

    z: object
    m: int
    q_coeffs: np.ndarray
    p_value: object

    @property
    def c0(self):
        return self.q_coeffs[0]

    def Q(self, z):
        """Evaluate the deflated quotient at ``z``."""
        return evaluate(Polynomial(self.q_coeffs), np.asarray(z) - self.z)

    def reconstruct(self, z):
        z = np.asarray(z)
        return (z - self.z) ** self.m * self.Q(z) + self.p_value

    def to_record(self) -> dict:
        return {
            "z": [float(self.z.real), float(self.z.imag)],
            "m": self.m,
            "q_coeffs": [[float(c.real), float(c.imag)] for c in self.q_coeffs],
            "p_value": [float(self.p_value.real), float(self.p_value.imag)],
        }


def critical_points(P: Polynomial, tol: float = MULTIPLICITY_TOL, seed: int = 0) -> tuple[CriticalPoint, ...]:
    """Distinct zeros of P' with multiplicity data for the construction."""
    if P.degree < 1:
        raise PolynomialError("critical points need deg P >= 1")
    dP = derivative(P)
    if dP.degree < 1:
        return ()
    out = []
    for z, k in polynomial_roots(dP, seed=seed):
        m = multiplicity(P, z, tol)
        if m < 2:
            raise RootFindingError(
                f"root of P' at {complex(z):.6g} resolved to multiplicity 1 (cluster size {k})"
            )
        b = shifted_expansion(P, z)
        q = np.array(b[m:])
        q.setflags(write=False)
        out.append(CriticalPoint(z=z, m=m, q_coeffs=q, p_value=P(z)))
    return tuple(out)
