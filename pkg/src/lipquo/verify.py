"""Numerical checks of the Lipschitz and co-Lipschitz properties.

Every estimate here is one-sided.  A sampled supremum of difference quotients
is a lower bound for the true Lipschitz constant, and a passing sampled
co-Lipschitz inequality is evidence, not proof.  Failures always carry a
witness that can be re-evaluated independently with ``recheck``.

Maps are plain callables on complex arrays.  Ball-inclusion checks need exact
fibers and so take a ``QuotientMap`` (or any object with ``F2`` and
``fibers``).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .polycore import derivative, eps_of, evaluate
from .sampling import MIN_FRACTION, axis_points, circle_points, disc_points, log_radius_points, rng_for, shrink_search

# relative slack on the strong co-Lipschitz inequality
STRONG_SLACK = 1e-9
# rounding allowance (in ulps of the image scale) for the strong inequality
NOISE_ULPS = 64
# shrink searches stop below this fraction of the local scale
SHRINK_FLOOR = 1e-8
# boundary targets sit just inside the circle of radius c*r
TARGET_SHRINK = 1e-6


@dataclass(frozen=True)
class LipschitzEstimate:
    """Sampled supremum of ``|F(y) - F(x)| / |y - x|`` (a lower bound)."""

    value: float
    samples: int
    region: str
    refinement_delta: float
    seed: int = 0
    witness: tuple | None = None
    label: str = "lower bound estimate"

    def to_record(self) -> dict:
        rec = {
            "value": self.value,
            "samples": self.samples,
            "region": self.region,
            "refinement_delta": self.refinement_delta,
            "seed": self.seed,
            "label": self.label,
        }
        if self.witness is not None:
            rec["witness"] = [_pair(w) for w in self.witness]
        return rec


@dataclass(frozen=True)
class CoLipschitzCertificate:
    """Outcome of a co-Lipschitz test at one point.

    For ``strong-inequality`` the witness is a sample ``y`` violating the
    inequality; for ``ball-inclusion`` it is an uncovered target ``w``.
    """

    x: object
    radius: float
    c: float
    mode: str
    passed: bool
    witness: object = None
    samples: int = 0
    seed: int = 0
    label: str = "falsification test"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError("a failing certificate needs a witness")

    def to_record(self) -> dict:
        return {
            "x": _pair(self.x),
            "radius": self.radius,
            "c": self.c,
            "mode": self.mode,
            "pass": self.passed,
            "witness": None if self.witness is None else _pair(self.witness),
            "samples": self.samples,
            "seed": self.seed,
            "label": self.label,
        }

    @classmethod
    def from_record(cls, rec: dict, dtype=np.complex128) -> "CoLipschitzCertificate":
        """Rebuild from ``to_record`` output (points come back at double accuracy)."""
        def pt(v):
            return None if v is None else np.asarray(complex(*v)).astype(dtype)[()]

        return cls(
            x=pt(rec["x"]),
            radius=rec["radius"],
            c=rec["c"],
            mode=rec["mode"],
            passed=rec["pass"],
            witness=pt(rec["witness"]),
            samples=rec.get("samples", 0),
            seed=rec.get("seed", 0),
            label=rec.get("label", "falsification test"),
        )


def _pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _as_complex(x, like=None):
    x = np.asarray(x)
    dt = np.result_type(x.dtype, np.complex128 if like is None else like)
    return x.astype(dt)


def _noise(fx, fy):
    eps = eps_of(np.asarray(fy).dtype) if np.asarray(fy).dtype.kind == "c" else eps_of(np.complex128)
    return NOISE_ULPS * eps * (1 + np.abs(fx) + np.abs(fy))


# ----------------------------------------------------------------------
# Lipschitz estimates


def position_resolution(q, x) -> float:
    """Smallest displacement of ``x`` that F2 can resolve at working precision.

    This is ``eps * max(1, |x|, |h(x)| * s)`` where ``s`` is the slope of the
    inverse radial profile at ``|h(x)|``; on the transition ring ``s = K``
    and a rounding of ``h(x)`` corresponds to a displacement ``eps |h(x)| K``.
    """
    x = np.asarray(x)
    eps = eps_of(q.dtype)
    scale = max(1.0, abs(complex(x)))
    if q.consts is not None and q.region_of(x) == "transition":
        scale = max(scale, abs(complex(q.H.forward(x))) * float(q.consts.K))
    return eps * scale


def resolution_fraction(x, rho: float, resolution: float | None = None) -> float:
    """Sampling floor as a fraction of ``rho``: ``1e3 * resolution / rho``
    clamped to ``[1e-6, 0.1]``; ``resolution`` defaults to ``eps max(1, |x|)``."""
    x = np.asarray(x)
    if resolution is None:
        eps = eps_of(x.dtype if x.dtype.kind == "c" else np.complex128)
        resolution = eps * max(1.0, abs(complex(x)))
    return float(min(0.1, max(MIN_FRACTION, 1e3 * resolution / rho)))


def pointwise_lip_estimate(F, x, rho: float, N: int, seed: int = 0, region: str = "", resolution: float | None = None) -> LipschitzEstimate:
    """Max of the difference quotient over N samples of ``B_rho(x)``.

    ``refinement_delta`` compares against 2N samples drawn from the same
    stream (the first N are shared).  Distances below the resolution floor
    (see ``resolution_fraction``) are not sampled.
    """
    if rho <= 0 or N < 1:
        raise ValueError("need rho > 0 and N >= 1")
    x = _as_complex(x)
    y = disc_points(x, rho, 2 * N, rng_for(seed, 1), min_fraction=resolution_fraction(x, rho, resolution))
    fx = F(x)
    q = (np.abs(F(y) - fx) / np.abs(y - x)).astype(float)
    vN = float(q[:N].max())
    v2 = float(q.max())
    k = int(np.argmax(q[:N]))
    delta = 0.0 if v2 == 0 else (v2 - vN) / v2
    return LipschitzEstimate(vN, N, region or "disc", delta, seed, (complex(x), complex(y[k])))


def _pair_samples(rmin, rmax, N, seed, dtype):
    rng = rng_for(seed, 2)
    z = log_radius_points(rmin, rmax, N, rng, dtype)
    u = rng.random((N, 2))
    mod = np.abs(z).astype(float)
    sep = mod * 1e-6 ** (1.0 - u[:, 0])
    w = z + (sep * np.exp(2j * np.pi * u[:, 1])).astype(dtype)
    return z, w


def global_lip_estimate(F, rmax: float, N: int, seed: int = 0, rmin: float = 1e-3, dtype=np.complex128) -> LipschitzEstimate:
    """Sup of difference quotients over random pairs.

    Base points have log-uniform modulus in ``[rmin, rmax]``; partners sit at
    a log-uniform distance in ``[1e-6 |z|, |z|]``.  The reported value is the
    max over 2N pairs and ``refinement_delta`` is its relative change from
    the first N.
    """
    z, w = _pair_samples(rmin, rmax, 2 * N, seed, dtype)
    q = (np.abs(F(z) - F(w)) / np.abs(z - w)).astype(float)
    vN = float(q[:N].max())
    v2 = float(q.max())
    k = int(np.argmax(q))
    return LipschitzEstimate(v2, 2 * N, f"|z| in [{rmin:g}, {rmax:g}]", (v2 - vN) / v2, seed, (complex(z[k]), complex(w[k])))


def pair_quotients(F, rmax: float, N: int, seed: int = 0, rmin: float = 1e-3, dtype=np.complex128):
    """The pairs and quotients behind ``global_lip_estimate`` (for re-checking)."""
    z, w = _pair_samples(rmin, rmax, 2 * N, seed, dtype)
    return z, w, (np.abs(F(z) - F(w)) / np.abs(z - w)).astype(float)


def principal_axes(q, x) -> list:
    """Unit directions along which h stretches least or most near ``x``.

    These are the radial directions from the origin and from every critical
    point, together with their tangential rotations.
    """
    out = []
    for c in [0] + [cp.z for cp in getattr(q, "cps", ())]:
        d = complex(np.asarray(x) - c)
        if d != 0:
            u = d / abs(d)
            out += [u, 1j * u]
    return out


def local_colip_constant(F, x, rho: float, N: int, seed: int = 0, axes=(), resolution: float | None = None) -> float:
    """Min of ``|F(y) - F(x)| / |y - x|`` over samples of ``B_rho(x)``.

    N uniform-angle samples, plus N/8 along each direction in ``axes``.
    Distances below the resolution floor are not sampled, since there the
    quotient measures rounding rather than F.
    """
    x = _as_complex(x)
    rng = rng_for(seed, 3)
    frac = resolution_fraction(x, rho, resolution)
    y = disc_points(x, rho, N, rng, min_fraction=frac)
    if len(axes):
        y = np.concatenate([y, axis_points(x, rho, axes, max(1, N // 8), rng, min_fraction=frac)])
    return float(np.min(np.abs(F(y) - F(x)) / np.abs(y - x)))


# ----------------------------------------------------------------------
# co-Lipschitz checks


def strong_colip_check(F, x, c: float, rho: float, N: int, seed: int = 0, axes=()) -> CoLipschitzCertificate:
    """Test ``|F(y) - F(x)| >= c |y - x|`` on N samples of ``B_rho(x)``.

    N/8 extra samples go along each direction in ``axes``.  A sample counts
    as a violation only if it misses the bound by more than the rounding
    noise of the two image values.
    """
    if c <= 0:
        raise ValueError("c must be positive")
    x = _as_complex(x)
    rng = rng_for(seed, 4)
    y = disc_points(x, rho, N, rng)
    if len(axes):
        y = np.concatenate([y, axis_points(x, rho, axes, max(1, N // 8), rng)])
    fx = F(x)
    fy = F(y)
    lhs = np.abs(fy - fx)
    bound = c * np.abs(y - x) * (1 - STRONG_SLACK) - _noise(fx, fy)
    bad = np.flatnonzero(lhs < bound)
    if bad.size:
        k = bad[np.argmin((lhs / np.abs(y - x))[bad])]
        return CoLipschitzCertificate(x[()], rho, c, "strong-inequality", False, y[k], y.size, seed)
    return CoLipschitzCertificate(x[()], rho, c, "strong-inequality", True, None, y.size, seed)


def strong_colip_search(F, x, c: float, rho0: float, N: int, seed: int = 0, floor: float | None = None, axes=()):
    """Shrink ``rho`` from ``rho0`` until the strong inequality holds.

    Returns the passing certificate, or the last failing one once ``rho``
    falls below ``floor`` (default ``1e-8 * max(1, |x|)``).
    """
    if floor is None:
        floor = SHRINK_FLOOR * max(1.0, abs(complex(x)))

    def attempt(rho):
        cert = strong_colip_check(F, x, c, rho, N, seed, axes)
        return cert.passed, cert

    _, cert = shrink_search(attempt, rho0, floor)
    return cert


def _inclusion_targets(center, radius, M, seed):
    rng = rng_for(seed, 5)
    ring = circle_points(center, radius * (1 - TARGET_SHRINK), M, rng)
    inner = disc_points(center, radius, max(1, M // 4), rng, min_fraction=1e-3)
    return np.concatenate([ring, inner])


def ball_inclusion_checks(q, x, radii, c: float, M: int = 64, seed: int = 0):
    """``B_{c r}(F(x)) ⊆ F(B_r(x))`` for several radii, one fiber batch."""
    if c <= 0 or M < 1:
        raise ValueError("need c > 0 and M >= 1")
    x = _as_complex(x, q.dtype)
    fx = q.F2(x)
    radii = [float(r) for r in radii]
    blocks = [_inclusion_targets(fx, c * r, M, seed) for r in radii]
    fibs = q.fibers(np.concatenate(blocks))
    out = []
    k = 0
    for r, targets in zip(radii, blocks):
        witness = None
        for w in targets:
            pts = fibs[k]
            k += 1
            if witness is None and not np.any(np.abs(pts - x) < r):
                witness = w
        cert = CoLipschitzCertificate(
            x[()], r, c, "ball-inclusion", witness is None, witness, len(targets), seed
        )
        out.append(cert)
    return out


def ball_inclusion_check(q, x, r: float, c: float, M: int = 64, seed: int = 0) -> CoLipschitzCertificate:
    """Every sampled target of ``B_{c r}(F(x))`` has a fiber point in ``B_r(x)``."""
    return ball_inclusion_checks(q, x, [r], c, M, seed)[0]


def recheck(cert: CoLipschitzCertificate, F=None, q=None) -> bool:
    """Independently confirm that a failing certificate's witness is a violation."""
    if cert.passed:
        return False
    if cert.mode == "strong-inequality":
        F = F if F is not None else q.F2
        x, y = np.asarray(cert.x), np.asarray(cert.witness)
        fx, fy = F(x), F(y)
        return bool(abs(fy - fx) < cert.c * abs(y - x) * (1 - STRONG_SLACK) - float(_noise(fx, fy)))
    pts = q.fiber(np.asarray(cert.witness))
    return not bool(np.any(np.abs(pts - np.asarray(cert.x)) < cert.radius))


def local_injectivity_check(q, x, rho: float) -> bool:
    """Exactly one point of the fiber through ``x`` lies in ``B_rho(x)``."""
    x = _as_complex(x, q.dtype)
    pts = q.fiber(q.F2(x))
    return int(np.sum(np.abs(pts - x) < rho)) == 1


def discreteness_check(q, w) -> bool:
    """The fiber over ``w`` is finite (at most deg P points) and separated."""
    pts = np.atleast_1d(q.fiber(np.asarray(w).astype(q.dtype)))
    if pts.size == 0 or pts.size > q.n:
        return False
    if pts.size == 1:
        return True
    d = np.abs(pts[:, None] - pts[None, :])
    np.fill_diagonal(d, np.inf)
    return bool(d.min() > 0)


def inverse_duality_check(h, h_inv, x, c: float, rho: float, N: int, seed: int = 0, tol: float | None = None) -> bool:
    """Strong c-co-Lipschitz of h at x implies h^{-1} is (1/c)-Lipschitz near h(x).

    Returns the truth value of the implication on the sampled instance.  The
    round trip ``h_inv(h(x)) = x`` must hold to ``tol`` (default
    ``1e-9 max(1, |x|)``).
    """
    x = _as_complex(x)
    hx = h(x)
    back = h_inv(hx)
    if tol is None:
        tol = 1e-9 * max(1.0, abs(complex(x)))
    if abs(complex(back - x)) > tol:
        raise ValueError(f"h_inv(h(x)) != x at x={complex(x):.6g}")
    strong = strong_colip_check(h, x, c, rho, N, seed)
    if not strong.passed:
        return True
    est = pointwise_lip_estimate(h_inv, hx, c * rho / 2, N, seed)
    return est.value <= (1 / c) * (1 + 1e-6)


@dataclass(frozen=True)
class CompositionResult:
    x: complex
    a: float
    b: float
    c: float
    certificate: CoLipschitzCertificate

    @property
    def passed(self) -> bool:
        return self.certificate.passed


def composition_colip_check(q, xs, N: int = 256, seed: int = 0, factor: float = 0.9, override: float | None = None):
    """Co-Lipschitz constant of F1 = P o h1 from those of h1 and P.

    At each x, ``a`` is the reciprocal of the sampled Lipschitz estimate of
    h1^{-1} near h1(x) and ``b`` is the minimum of ``|P'|`` (times the leading
    factor) on a small disc around h1(x).  The strong inequality for F1 is
    then tested with ``factor * a * b`` (or ``override``) and a shrink-found
    radius.  Returns one ``CompositionResult`` per point.
    """
    dP = derivative(q.P)
    out = []
    for i, x in enumerate(np.atleast_1d(np.asarray(xs))):
        x = _as_complex(x, q.dtype)
        hx = q.H1.forward(x)
        scale = max(1.0, abs(complex(hx)))
        delta = 1e-4 * scale
        inv = pointwise_lip_estimate(q.H1.inverse, hx, delta, N, seed + i)
        a = 1.0 / inv.value
        disc = disc_points(hx, delta, N, rng_for(seed + i, 6), min_fraction=1e-3)
        b = float(np.min(np.abs(evaluate(dP, disc)))) * abs(complex(q.a))
        c = override if override is not None else factor * a * b
        rho0 = 1e-3 * max(1.0, abs(complex(x)))
        cert = strong_colip_search(q.F1, x, c, rho0, N, seed + i)
        out.append(CompositionResult(complex(x), a, b, c, cert))
    return out


def constant_chain(q, grid: int = 400) -> dict:
    """Grid estimates for the constants with no closed form.

    ``L_h1inv`` is the sup over a radial grid of the two stretch factors of
    h1^{-1} on h1(U_2); ``xi`` is half the min of ``|P'|`` over a polar grid
    of h1(U_2 \\ W); then ``c0 = xi / L``, ``c1 = min(c0, 1/2)``,
    ``c3 = min(c0, c2)`` and ``c = min(c1, c2, c3)``.
    """
    consts = q.consts
    if consts is None:
        return {"linear": True, "c": 1.0, "grid": grid}
    prof = q.profile
    rdt = consts.dtype
    s_max = prof.phi(rdt.type(consts.u2))
    s = np.linspace(0, 1, grid + 1, dtype=rdt)[1:] * s_max
    t = prof.phi_inv(s)
    tang = t / s
    ds = s[1] - s[0]
    radial = np.diff(prof.phi_inv(np.concatenate([[rdt.type(0)], s]))) / ds
    L = float(max(np.max(tang), np.max(radial)))
    rad = np.linspace(0, 1, grid + 1, dtype=rdt)[1:] * s_max
    ang = np.linspace(0, 2 * np.pi, grid, endpoint=False).astype(rdt)
    pts = (rad[:, None] * np.exp(1j * ang)[None, :]).reshape(-1).astype(q.dtype)
    keep = np.ones(pts.shape, dtype=bool)
    for cp in q.cps:
        keep &= np.abs(pts - cp.z) > consts.r / 2
    dP = derivative(q.P)
    xi = 0.5 * float(np.min(np.abs(evaluate(dP, pts[keep])))) * abs(complex(q.a))
    c0 = xi / L
    c1 = min(c0, 0.5)
    c2 = consts.c2 if consts.c2 is not None else np.inf
    c2 = c2 * abs(complex(q.a))
    c3 = min(c0, c2)
    return {
        "grid": grid,
        "L_h1inv": L,
        "xi": xi,
        "c0": c0,
        "c1": c1,
        "c2": c2,
        "c3": c3,
        "c": min(c1, c2, c3),
        "label": "grid estimate",
    }
