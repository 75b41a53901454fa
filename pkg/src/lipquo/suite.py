"""Acceptance checks, one function per criterion.

Each runner returns a ``CriterionResult`` whose ``records`` list the
individual checks in a canonical order.  Sample counts default to the
published desk-scale values and can be lowered for quick runs.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import basemaps, democorpus
from . import verify as V
from .params import check_r_properties
from .polycore import Polynomial, RootFindingError
from .quotient import QuotientMap, build
from .sampling import _polar, circle_points, log_radius_points, rng_for

CORPUS = {
    "z^2": [[0, 0], [0, 0], [1, 0]],
    "z^3-3z": [[0, 0], [-3, 0], [0, 0], [1, 0]],
    "z^4+z^2+z+1": [[1, 0], [1, 0], [1, 0], [0, 0], [1, 0]],
    "z^3+(1+i)z+2": [[2, 0], [1, 1], [0, 0], [1, 0]],
}

# round trips and form agreement are judged relative to max(1, |z|)
ROUNDTRIP_TOL = 1e-9
FORM_TOL = 1e-9
INCLUSION_RADII = (1e-2, 1e-1, 1.0, 10.0)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    records: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def line(self) -> str:
        return f"criterion {self.number} [{self.title}]: {'PASS' if self.passed else 'FAIL'}"

    def to_record(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "pass": self.passed,
            "records": self.records,
            "notes": self.notes,
        }


def corpus_maps(precision="extended", seed: int = 0) -> dict:
    return {name: build(Polynomial.from_pairs(c), precision, seed) for name, c in CORPUS.items()}


# ----------------------------------------------------------------------
# stratified samples


def stratified_points(q: QuotientMap, per_stratum: int, seed: int = 0) -> dict:
    """Points in every region of the construction, keyed by stratum name."""
    rng = rng_for(seed, 11)
    dt = q.dtype
    out = {}
    if q.consts is None:
        out["plane"] = log_radius_points(1e-3, 1e3, per_stratum, rng, dt)
        return out
    c = q.consts
    r = c.real("r")
    for j, cp in enumerate(q.cps):
        u = rng.random((per_stratum, 2))
        out[f"ball-{j}"] = cp.z + _polar(r * np.sqrt(u[:, 0].astype(r.dtype)), u[:, 1], dt)
        out[f"ball-boundary-{j}"] = cp.z + _polar(r, rng.random(per_stratum), dt)
    pts = []
    while sum(len(p) for p in pts) < per_stratum:
        u = rng.random((per_stratum, 2))
        z = _polar(c.R * np.sqrt(u[:, 0]), u[:, 1], dt)
        keep = np.ones(z.shape, dtype=bool)
        for cp in q.cps:
            keep &= np.abs(z - cp.z) > r
        pts.append(z[keep])
    out["inner"] = np.concatenate(pts)[:per_stratum]
    out["transition"] = log_radius_points(c.R, c.outer_radius, per_stratum, rng, dt)
    out["outer"] = log_radius_points(c.outer_radius, 10 * c.outer_radius, per_stratum, rng, dt)
    return out


# ----------------------------------------------------------------------
# criterion 1


def criterion_1(pairs: int = 10_000, points: int = 100, seed: int = 0) -> CriterionResult:
    """Winding maps: Lipschitz constant n and strong 1-co-Lipschitz everywhere."""
    res = CriterionResult(1, "archetype constants", True)
    for n in (2, 3, 5):
        rng = rng_for(seed, 21, n)
        z = log_radius_points(0.5, 2.0, 4 * pairs, rng)
        u = rng.random((4 * pairs, 2))
        w = z + np.abs(z) * 1e-6 ** u[:, 0] * np.exp(2j * np.pi * u[:, 1])
        ok = (np.abs(w) >= 0.5) & (np.abs(w) <= 2.0)
        z, w = z[ok][:pairs], w[ok][:pairs]
        q = np.abs(basemaps.f_n(n, z) - basemaps.f_n(n, w)) / np.abs(z - w)
        est = float(q.max())
        lip_ok = n - 0.05 <= est <= n + 1e-9
        res.records.append({"check": "lipschitz", "n": n, "pairs": int(z.size), "estimate": est, "pass": lip_ok})
        x0 = log_radius_points(1e-3, 1e3, points, rng)
        fails = []
        for x in x0:
            cert = V.strong_colip_search(lambda t, n=n: basemaps.f_n(n, t), x, 1.0, 0.5 * abs(x), 256, seed)
            if not cert.passed:
                fails.append(cert.to_record())
        res.records.append({"check": "strong-1-colip", "n": n, "points": points, "failures": fails, "pass": not fails})
        res.passed &= lip_ok and not fails
    return res


# ----------------------------------------------------------------------
# criterion 2


def roundtrip_errors(q: QuotientMap, z):
    """Relative errors of ``h2^{-1} o h2`` and ``h2 o h2^{-1}`` at z."""
    scale = np.maximum(1, np.abs(z))
    a = np.abs(q.H.inverse(q.H.forward(z)) - z) / scale
    b = np.abs(q.H.forward(q.H.inverse(z)) - z) / scale
    return a.astype(float), b.astype(float)


def criterion_2(maps: dict, samples: int = 10_000, boundary: int = 1_000, seed: int = 0) -> CriterionResult:
    res = CriterionResult(2, "construction soundness", True)
    for name, q in maps.items():
        strata = stratified_points(q, max(1, samples // max(1, 3 + 2 * len(q.cps))), seed)
        worst = {}
        rt_ok = True
        for stratum, z in strata.items():
            a, b = roundtrip_errors(q, z)
            worst[stratum] = [float(a.max()), float(b.max())]
            rt_ok &= bool(a.max() < ROUNDTRIP_TOL and b.max() < ROUNDTRIP_TOL)
        res.records.append({"check": "h2-roundtrip", "poly": name, "worst_rel_error": worst, "tol": ROUNDTRIP_TOL, "pass": rt_ok})
        form_ok = True
        form_err = {}
        if q.consts is not None:
            for j, cp in enumerate(q.cps):
                z = np.concatenate([strata[f"ball-{j}"], strata[f"ball-boundary-{j}"]])
                direct, special = q.F2(z), q.F2_ball_form(z, j)
                err = float(np.max(np.abs(direct - special) / (1 + np.abs(direct))))
                form_err[f"ball-{j}"] = err
                form_ok &= err < FORM_TOL
            z = strata["outer"]
            direct, special = q.F1(z), q.F1_outer_form(z)
            err = float(np.max(np.abs(direct - special) / (1 + np.abs(direct))))
            form_err["outer"] = err
            form_ok &= err < FORM_TOL
            # the two maps agree on the ball boundaries
            rng = rng_for(seed, 22)
            per = max(1, boundary // max(1, len(q.cps)))
            errs = []
            for cp in q.cps:
                zb = circle_points(cp.z, q.consts.real("r"), per, rng)
                f1, f2 = q.F1(zb), q.F2(zb)
                errs.append(float(np.max(np.abs(f1 - f2) / (1 + np.abs(f1)))))
            err = max(errs) if errs else 0.0
            form_err["F1=F2 on boundary"] = err
            form_ok &= err < FORM_TOL
        res.records.append({"check": "forms", "poly": name, "rel_error": form_err, "tol": FORM_TOL, "pass": form_ok})
        res.passed &= rt_ok and form_ok
    return res


# ----------------------------------------------------------------------
# criterion 3


def criterion_3(maps: dict, seed: int = 0) -> CriterionResult:
    res = CriterionResult(3, "constant ledger", True)
    for name, q in maps.items():
        if q.consts is None:
            continue
        props = check_r_properties(q.P, q.consts, q.cps, seed)
        ok = all(props.values())
        res.records.append({"check": "r-properties", "poly": name, **props, "pass": ok})
        res.passed &= ok
    q = maps.get("z^3-3z")
    if q is not None:
        c = q.consts
        expect = {"eps_j": 3 / 8, "r": 9 / 128, "alpha_j": 1.5 * 9 / 128}
        got = {"eps_j": list(c.eps), "r": c.r, "alpha_j": list(c.alpha)}
        ok = (
            all(abs(e - expect["eps_j"]) < 1e-12 for e in c.eps)
            and abs(c.r - expect["r"]) < 1e-12
            and all(abs(a - expect["alpha_j"]) < 1e-12 for a in c.alpha)
        )
        res.records.append({"check": "derived values", "poly": "z^3-3z", "expected": expect, "got": got, "pass": ok})
        res.passed &= ok
    return res


# ----------------------------------------------------------------------
# criterion 4


def lipschitz_estimate(q: QuotientMap, pairs: int = 100_000, seed: int = 0) -> V.LipschitzEstimate:
    rmax = 10 * q.consts.outer_radius if q.consts is not None else 1e3
    rmin = min(1e-4, q.consts.r / 100) if q.consts is not None else 1e-4
    return V.global_lip_estimate(q.F2, rmax, pairs, seed, rmin=rmin, dtype=q.dtype)


def criterion_4(maps: dict, pairs: int = 100_000, seed: int = 0) -> CriterionResult:
    res = CriterionResult(4, "Lipschitz estimate of F2", True)
    for name, q in maps.items():
        est = lipschitz_estimate(q, pairs, seed)
        rmax = 10 * q.consts.outer_radius if q.consts is not None else 1e3
        rmin = min(1e-4, q.consts.r / 100) if q.consts is not None else 1e-4
        _, _, quo = V.pair_quotients(q.F2, rmax, pairs, seed, rmin=rmin, dtype=q.dtype)
        ok = bool(np.isfinite(est.value) and est.refinement_delta < 0.05 and quo.max() <= est.value)
        res.records.append({"check": "global-lipschitz", "poly": name, **est.to_record(), "pass": ok})
        res.passed &= ok
    return res


# ----------------------------------------------------------------------
# criterion 5


def colip_centers(q: QuotientMap, count: int = 200, seed: int = 0):
    """Stratified centers: critical points, ball boundaries, just outside the
    balls, ball interiors, inner region, transition ring and outer region."""
    rng = rng_for(seed, 31)
    dt = q.dtype
    if q.consts is None:
        return list(log_radius_points(1e-3, 1e3, count, rng, dt))
    c = q.consts
    centers = [np.asarray(cp.z).astype(dt) for cp in q.cps]
    per = max(1, (count - len(centers)) // 7)
    for j in range(per):
        cp = q.cps[j % len(q.cps)]
        t = np.exp(2j * np.pi * rng.random())
        centers.append(np.asarray(cp.z + c.r * t).astype(dt))
        centers.append(np.asarray(cp.z + c.r * (1 + 1e-3) * np.exp(2j * np.pi * rng.random())).astype(dt))
        centers.append(np.asarray(cp.z + c.r * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())).astype(dt))
    inner = stratified_points(q, per, seed + 1)["inner"]
    centers += list(inner)
    centers += list(log_radius_points(c.R, c.outer_radius, per, rng, dt))
    rest = count - len(centers)
    centers += list(log_radius_points(c.outer_radius, 10 * c.outer_radius, rest, rng, dt))
    return centers[:count]


def local_constant(q: QuotientMap, x, rho: float = 10.0, N: int = 512, seed: int = 0) -> float:
    """Sampled min of ``|F2(y) - F2(x)| / |y - x|`` over ``B_rho(x)``."""
    return V.local_colip_constant(
        q.F2, x, rho, N, seed, axes=V.principal_axes(q, x), resolution=V.position_resolution(q, x)
    )


def criterion_5(maps: dict, centers: int = 200, M: int = 64, N: int = 256, seed: int = 0, force_c: float | None = None) -> CriterionResult:
    res = CriterionResult(5, "co-Lipschitz F2", True)
    for name, q in maps.items():
        failures = []
        tested = 0
        for i, x in enumerate(colip_centers(q, centers, seed)):
            tested += 1
            loc = local_constant(q, x, max(INCLUSION_RADII), 2 * N, seed + i)
            c = force_c if force_c is not None else 0.5 * loc
            if not c > 0:
                failures.append({"x": V._pair(x), "reason": "non-positive local constant", "local": loc})
                continue
            try:
                certs = V.ball_inclusion_checks(q, x, INCLUSION_RADII, c, M, seed + i)
            except RootFindingError as exc:
                # fibers that do not reproduce their targets: F2 is not what h2 promises
                failures.append({"x": V._pair(x), "reason": str(exc)})
                certs = []
            for cert in certs:
                if not cert.passed:
                    failures.append({"region": str(q.region_of(x)), **cert.to_record()})
            cert = V.strong_colip_search(q.F2, x, c, 1.0, N, seed + i, axes=V.principal_axes(q, x))
            if not cert.passed:
                failures.append({"region": str(q.region_of(x)), **cert.to_record()})
        ok = not failures
        res.records.append({"check": "co-lipschitz", "poly": name, "centers": tested, "failures": failures[:20], "n_failures": len(failures), "pass": ok})
        res.passed &= ok
    return res


# ----------------------------------------------------------------------
# criterion 6


def criterion_6(maps: dict, points: int = 100, targets: int = 1000, seed: int = 0) -> CriterionResult:
    res = CriterionResult(6, "local injectivity and discreteness", True)
    for name, q in maps.items():
        rng = rng_for(seed, 41)
        E = np.array([cp.z for cp in q.cps], dtype=q.dtype)
        rmin = q.consts.r if q.consts is not None else 1e-3
        rmax = 10 * q.consts.outer_radius if q.consts is not None else 1e3
        xs = []
        while len(xs) < points:
            cand = np.concatenate(
                [log_radius_points(rmin, rmax, points, rng, q.dtype)]
                + [cp.z + log_radius_points(rmin / 2, 1.0, points // 4, rng, q.dtype) for cp in q.cps]
            )
            for x in cand:
                d = float(np.min(np.abs(E - x))) if E.size else np.inf
                if d > rmin / 2:
                    xs.append((x, d))
        inj_fail = []
        for x, d in xs[:points]:
            rho = 0.49 * d if np.isfinite(d) else 1.0
            if not V.local_injectivity_check(q, x, rho):
                inj_fail.append(V._pair(x))
        ws = list(q.F2(log_radius_points(rmin, rmax, targets - len(q.cps), rng, q.dtype)))
        ws += [q.a * cp.p_value for cp in q.cps]
        fibs = q.fibers(np.array(ws, dtype=q.dtype))
        disc_fail = []
        for w, pts in zip(ws, fibs):
            if not (0 < pts.size <= q.n) or not V.discreteness_check(q, w):
                disc_fail.append(V._pair(w))
        ok = not inj_fail and not disc_fail
        res.records.append(
            {
                "check": "injectivity/discreteness",
                "poly": name,
                "injectivity_points": points,
                "injectivity_failures": inj_fail,
                "targets": len(ws),
                "discreteness_failures": disc_fail,
                "pass": ok,
            }
        )
        res.passed &= ok
    return res


# ----------------------------------------------------------------------
# criterion 7


def _h1_points(q, count, seed):
    rng = rng_for(seed, 51)
    c = q.consts
    k = count // 3
    return np.concatenate(
        [
            log_radius_points(0.1, c.R, k, rng, q.dtype),
            log_radius_points(c.R, c.outer_radius, k, rng, q.dtype),
            log_radius_points(c.outer_radius, 10 * c.outer_radius, count - 2 * k, rng, q.dtype),
        ]
    )


def _u2_minus_w(q, count, seed):
    rng = rng_for(seed, 52)
    c = q.consts
    out = []
    while len(out) < count:
        cand = np.concatenate(
            [
                log_radius_points(0.05, c.R, count, rng, q.dtype),
                log_radius_points(c.R, c.u2, count, rng, q.dtype),
            ]
        )
        for z in cand:
            if abs(z) < c.u2 and all(abs(complex(z - cp.z)) > c.r / 2 for cp in q.cps):
                out.append(z)
    rng.shuffle(out)
    return out[:count]


def criterion_7(maps: dict, points: int = 50, N: int = 256, seed: int = 0) -> CriterionResult:
    res = CriterionResult(7, "duality and composition lemmas", True)
    for name, q in maps.items():
        if q.consts is None:
            continue
        H1 = q.H1
        dual_fail = []
        for i, x in enumerate(_h1_points(q, points, seed)):
            rho = 1e-3 * max(1.0, abs(complex(x)))
            reso = V.position_resolution(q, x)
            loc = V.local_colip_constant(H1.forward, x, rho, N, seed + i, axes=V.principal_axes(None, x), resolution=reso)
            c = 0.5 * loc
            tol = max(ROUNDTRIP_TOL * max(1.0, abs(complex(x))), 1e3 * reso)
            if not V.inverse_duality_check(H1.forward, H1.inverse, x, c, rho, N, seed + i, tol=tol):
                dual_fail.append(V._pair(x))
        comp = V.composition_colip_check(q, _u2_minus_w(q, points, seed), N, seed)
        comp_fail = [V._pair(r.x) for r in comp if not r.passed]
        # strong inequality follows from ball inclusion under local injectivity
        impl_fail = []
        tested = 0
        for i, x in enumerate(colip_centers(q, 4 * points, seed + 7)):
            if tested >= points:
                break
            E = [cp.z for cp in q.cps]
            d = min((abs(complex(x - e)) for e in E), default=np.inf)
            if d == 0 or not V.local_injectivity_check(q, x, 0.49 * d if np.isfinite(d) else 1.0):
                continue
            tested += 1
            c = 0.5 * local_constant(q, x, 1.0, N, seed + i)
            r = 1e-2
            incl = V.ball_inclusion_check(q, x, r, c, 64, seed + i)
            if incl.passed:
                strong = V.strong_colip_search(q.F2, x, c * (1 - 1e-3), r, N, seed + i, axes=V.principal_axes(q, x))
                if not strong.passed:
                    impl_fail.append(V._pair(x))
        ok = not dual_fail and not comp_fail and not impl_fail and tested == points
        res.records.append(
            {
                "check": "lemmas",
                "poly": name,
                "duality_points": points,
                "duality_failures": dual_fail,
                "composition_points": len(comp),
                "composition_failures": comp_fail,
                "implication_instances": tested,
                "implication_failures": impl_fail,
                "pass": ok,
            }
        )
        res.passed &= ok
    return res


# ----------------------------------------------------------------------
# criterion 8


def criterion_8(maps: dict | None = None) -> CriterionResult:
    res = CriterionResult(8, "counterexamples", True)
    g = democorpus.nonlip_homeo_growth(1e3)
    ok = g >= 1e3
    res.records.append({"check": "non-Lipschitz homeomorphism", "R0": 1e3, "ratio": g, "pass": ok})
    res.passed &= ok
    for M in (10.0, 1e3, 1e6):
        w = democorpus.square_unbounded_ratio(2, M)
        ok = w.ratio >= M
        res.records.append({"check": "square not Lipschitz", "M": M, "ratio": w.ratio, "pair": [V._pair(w.z), V._pair(w.y)], "pass": ok})
        res.passed &= ok
    ev = democorpus.projection_demo(2, 1, np.zeros(3), 1.0)
    ok = ev.lipschitz_ok and ev.colipschitz_ok and ev.image_distance == 0 and ev.source_distance > 0 and not ev.discrete
    res.records.append(
        {
            "check": "projection",
            "witness": [list(p) for p in ev.witness],
            "image_distance": ev.image_distance,
            "source_distance": ev.source_distance,
            "discrete": ev.discrete,
            "pass": ok,
        }
    )
    res.passed &= ok
    col = democorpus.broken_jlps_collision(4.0, 2)
    ok = col.z != col.y and col.ratio < 1e-12
    res.records.append({"check": "broken radial map collision", "pair": [V._pair(col.z), V._pair(col.y)], "image_distance": col.ratio, "pass": ok})
    res.passed &= ok
    if maps:
        for name, q in maps.items():
            if q.consts is None:
                continue
            t = [q.consts.outer_radius * 10.0**k for k in range(0, 4)]
            growth = democorpus.squared_composition_growth(q, t)
            ok = all(b > a for a, b in zip(growth, growth[1:]))
            res.records.append({"check": "squared composition growth", "poly": name, "radii": t, "ratios": growth, "pass": ok})
            res.passed &= ok
    return res


SUITES = {
    "construction": (2, 3),
    "metric": (1, 4, 5, 6, 7),
    "demos": (8,),
}
SUITES["all"] = tuple(sorted(sum(SUITES.values(), ())))


def run(criteria, maps: dict, seed: int = 0, samples: int | None = None, force_c: float | None = None) -> list:
    """Run the listed criteria; ``samples`` scales every sample count down."""
    scale = 1.0 if samples is None else max(1e-3, samples / 10_000)

    def n(k):
        return max(8, int(round(k * scale)))

    out = []
    for k in criteria:
        if k == 1:
            out.append(criterion_1(n(10_000), n(100), seed))
        elif k == 2:
            out.append(criterion_2(maps, n(10_000), n(1_000), seed))
        elif k == 3:
            out.append(criterion_3(maps, seed))
        elif k == 4:
            out.append(criterion_4(maps, n(100_000), seed))
        elif k == 5:
            out.append(criterion_5(maps, n(200), seed=seed, force_c=force_c))
        elif k == 6:
            out.append(criterion_6(maps, n(100), n(1_000), seed))
        elif k == 7:
            out.append(criterion_7(maps, n(50), seed=seed))
        elif k == 8:
            out.append(criterion_8(maps))
        else:
            raise ValueError(f"unknown criterion {k}")
    return out


__all__ = ["CORPUS", "CriterionResult", "corpus_maps", "run", "SUITES"]
