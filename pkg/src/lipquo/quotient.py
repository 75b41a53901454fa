"""The composed maps F1 = P o h1 and F2 = P o h2, their closed forms on the
critical balls and on the outer region, and exact fibers of F2.

A non-monic P is handled by building everything for the monic Q = P / a and
returning ``a * (Q o h)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import basemaps
from .homeo import PlaneHomeomorphism, RadialProfile, make_h1, make_h2
from .params import ConstructionConstants, build_constants, region_of
from .polycore import (
    MERGE_TOL,
    RESIDUAL_TOL,
    Polynomial,
    RootFindingError,
    aberth,
    cluster_roots,
    complex_dtype,
    critical_points,
    evaluate,
    normalize_monic,
)

# fiber points must reproduce the target to this relative accuracy
FIBER_TOL = 1e-7
DEFAULT_PRECISION = "extended"


@dataclass(frozen=True, eq=False)
class QuotientMap:
    """``F2 = a * (Q o h2)`` for ``P = a * Q`` with Q monic.

    For linear P, ``H`` is the identity and ``consts`` is None.
    """

    a: object
    P: Polynomial
    H: PlaneHomeomorphism
    H1: PlaneHomeomorphism
    consts: ConstructionConstants | None
    cps: tuple
    seed: int = 0

    @classmethod
    def build(cls, P: Polynomial, precision=DEFAULT_PRECISION, seed: int = 0) -> "QuotientMap":
        P = P.astype(precision)
        a, Q = normalize_monic(P)
        if Q.degree == 1:
            ident = PlaneHomeomorphism("identity")
            return cls(a=a, P=Q, H=ident, H1=ident, consts=None, cps=(), seed=seed)
        cps = critical_points(Q, seed=seed)
        consts = build_constants(Q, cps)
        prof = RadialProfile(consts.R, consts.n, consts.dtype)
        return cls(a=a, P=Q, H=make_h2(prof, cps, consts.r), H1=make_h1(prof), consts=consts, cps=cps, seed=seed)

    @property
    def n(self) -> int:
        return self.P.degree

    @property
    def dtype(self):
        return self.P.dtype

    @property
    def profile(self) -> RadialProfile | None:
        return self.H.profile

    def _z(self, z):
        z = np.asarray(z)
        return z.astype(np.result_type(z.dtype, self.dtype))

    def F1(self, z):
        return self.a * evaluate(self.P, self.H1.forward(self._z(z)))

    def F2(self, z):
        return self.a * evaluate(self.P, self.H.forward(self._z(z)))

    __call__ = F2

    def F1_outer_form(self, z):
        """``a0 + f_n(z) + sum_k a_k g_{k,n}(z)`` (times ``a``), valid for ``|z| >= 2^n R^n``."""
        z = self._z(z)
        if self.consts is None:
            raise ValueError("outer form needs a nonlinear polynomial")
        if np.any(np.abs(z) < self.consts.real("outer_radius")):
            raise ValueError("outer form out of domain")
        c = self.P.coeffs
        out = c[0] + basemaps.f_n(self.n, z)
        for k in range(1, self.n):
            if c[k] != 0:
                out = out + c[k] * basemaps.g_kn(k, self.n, z)
        return self.a * out

    def F2_ball_form(self, z, j: int):
        """``P(z_j) + r^(m-1) f_m(z - z_j) Q_j(h2(z))`` (times ``a``) on ``B_r(z_j)``."""
        z = self._z(z)
        cp = self.cps[j]
        r = self.consts.real("r")
        # points on the circle may land an ulp outside it
        if np.any(np.abs(z - cp.z) > r + 16 * np.finfo(r.dtype).eps * (r + abs(cp.z))):
            raise ValueError("ball form out of domain")
        wind = basemaps.f_n(cp.m, z - cp.z)
        return self.a * (cp.p_value + r ** (cp.m - 1) * wind * cp.Q(self.H.forward(z)))

    def region_of(self, z):
        if self.consts is None:
            return "linear"
        return region_of(z, self.consts, self.cps)

    # ------------------------------------------------------------------
    # fibers

    def _roots_many(self, ws):
        """Roots (rows) of ``P(zeta) = w / a`` for each target, residual-checked."""
        ws = np.asarray(ws, dtype=self.dtype).reshape(-1)
        C = np.repeat(self.P.coeffs[None, :], ws.size, axis=0)
        C[:, 0] = C[:, 0] - ws / self.a
        z, resid = aberth(C, seed=self.seed)
        bad = ~np.all(resid <= RESIDUAL_TOL, axis=1)
        if np.any(bad):
            # retry stragglers from a fresh random start
            idx = np.flatnonzero(bad)
            z2, r2 = aberth(C[idx], seed=self.seed + 1, maxiter=2000)
            z[idx], resid[idx] = z2, r2
            if not np.all(resid <= RESIDUAL_TOL):
                worst = float(resid.max())
                raise RootFindingError(
                    f"fiber root iteration did not converge; worst residual {worst:.3e}",
                    residuals=resid.max(axis=1).astype(float).tolist(),
                )
        return ws, C, z

    def _distinct(self, coeffs, row):
        """Distinct roots of one row; clustering only when two estimates are close."""
        if row.size < 2:
            return row
        d = np.abs(row[:, None] - row[None, :])
        np.fill_diagonal(d, np.inf)
        scale = 1.0 + float(np.max(np.abs(row)))
        if float(d.min()) > 1e-5 * scale:
            return row
        return np.array([c for c, _ in cluster_roots(Polynomial(coeffs), row)], dtype=row.dtype)

    def fibers(self, ws, check: bool = True):
        """Fibers ``F2^{-1}(w)`` for many targets; a list of arrays."""
        ws, C, z = self._roots_many(ws)
        pts = self.H.inverse(z.reshape(-1)).reshape(z.shape)
        if check:
            res = np.abs(self.F2(pts.reshape(-1)).reshape(z.shape) - ws[:, None])
            tol = FIBER_TOL * (1 + np.abs(ws))
            bad = np.flatnonzero(np.any(res >= tol[:, None], axis=1))
            if bad.size:
                i = bad[0]
                raise RootFindingError(
                    f"fiber residual {float(res[i].max()):.3e} exceeds {float(tol[i]):.3e} at w={complex(ws[i]):.6g}",
                    residuals=res[i].astype(float).tolist(),
                )
        out = []
        for i in range(ws.size):
            zeta = self._distinct(C[i], z[i])
            out.append(pts[i] if zeta is z[i] else np.atleast_1d(self.H.inverse(zeta)))
        return out

    def fiber(self, w):
        return self.fibers([w])[0]

    def summary(self) -> dict:
        rec = {
            "degree": self.n,
            "leading": [float(np.real(self.a)), float(np.imag(self.a))],
            "monic_coeffs": self.P.to_pairs(),
            "precision": "extended" if self.dtype == complex_dtype("extended") and self.dtype != np.complex128 else "double",
        }
        if self.consts is None:
            rec["linear"] = True
            rec["homeomorphism"] = "identity"
            return rec
        rec["linear"] = False
        rec["critical_points"] = [cp.to_record() for cp in self.cps]
        rec["constants"] = self.consts.to_record()
        return rec


def build(P: Polynomial, precision=DEFAULT_PRECISION, seed: int = 0) -> QuotientMap:
    return QuotientMap.build(P, precision=precision, seed=seed)


def F1(q: QuotientMap, z):
    return q.F1(z)


def F2(q: QuotientMap, z):
    return q.F2(z)


def fiber(q: QuotientMap, w):
    return q.fiber(w)


__all__ = ["QuotientMap", "build", "F1", "F2", "fiber", "FIBER_TOL", "MERGE_TOL"]
