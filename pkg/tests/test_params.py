import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from lipquo.params import (
    ConstructionError,
    build_constants,
    check_r_properties,
    choose_R,
    choose_r,
    compute_Dk,
    compute_eps_j,
    lipschitz_tail_threshold,
    region_of,
)
from lipquo.polycore import Polynomial, critical_points
from lipquo.suite import CORPUS


def setup(pairs, precision="extended"):
    P = Polynomial.from_pairs(pairs, precision)
    cps = critical_points(P)
    return P, cps, build_constants(P, cps)


def test_tail_threshold_examples():
    assert lipschitz_tail_threshold(1, 3, 1 / 18) == pytest.approx(12**1.5, rel=1e-12)
    assert lipschitz_tail_threshold(1, 2, 1) == pytest.approx(1)
    assert lipschitz_tail_threshold(1, 3, 1e12) < 1e-10
    with pytest.raises(ValueError):
        lipschitz_tail_threshold(3, 3, 1)


@given(st.integers(2, 7).flatmap(lambda n: st.tuples(st.integers(1, n - 1), st.just(n))), st.floats(1e-3, 1e3))
def test_tail_threshold_matches_root_solve(kn, eps):
    k, n = kn
    want = oracle.T_threshold(k, n, eps)
    assert lipschitz_tail_threshold(k, n, eps) == pytest.approx(float(want), rel=1e-9)


def test_tail_threshold_makes_power_lipschitz():
    T = lipschitz_tail_threshold(1, 3, 1 / 18)
    t = np.linspace(T, 10 * T, 10_001)
    q = np.diff(t ** (1 / 3)) / np.diff(t)
    assert q.max() <= 1 / 36


def test_Dk_examples():
    assert compute_Dk(1, 3, 0) == 0
    assert compute_Dk(1, 3, -3) == pytest.approx(72**1.5 * (1 + 1e-9), rel=1e-12)
    # the constant term: n/(n-0) = 1, so (2/eps) with eps = 1/(2n|a0|)
    assert compute_Dk(0, 3, 2) == pytest.approx(2 * 6 * 2 * (1 + 1e-9))


@given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.integers(0, n - 1), st.just(n))), st.floats(1e-3, 1e2), st.floats(1.01, 10))
def test_Dk_monotone_in_coefficient(kn, a, factor):
    k, n = kn
    assert compute_Dk(k, n, a * factor) > compute_Dk(k, n, a)


def test_choose_R_examples():
    P, cps, _ = setup([[0, 0], [0, 0], [1, 0]])
    assert choose_R(P, cps) == 2
    P, cps, _ = setup(CORPUS["z^3-3z"])
    assert choose_R(P, cps) == pytest.approx(1 + 72**1.5 * (1 + 1e-9), rel=1e-12)


def test_eps_examples():
    _, cps, _ = setup([[0, 0], [0, 0], [1, 0]])
    assert compute_eps_j(cps[0], 2) == 1
    _, cps, _ = setup(CORPUS["z^3-3z"])
    assert all(compute_eps_j(cp, 3) == pytest.approx(3 / 8, abs=1e-12) for cp in cps)
    _, cps, _ = setup([[0, 0], [0, 0], [0, 0], [1, 0]])
    assert compute_eps_j(cps[0], 3) == 1


def test_r_examples():
    P, cps, c = setup([[0, 0], [0, 0], [1, 0]])
    assert c.r == 0.5 and c.alpha == (0.25,) and c.R == 2 and c.outer_radius == 16
    P, cps, c = setup(CORPUS["z^3-3z"])
    assert abs(c.r - 9 / 128) < 1e-12
    assert all(abs(a - 1.5 * 9 / 128) < 1e-12 for a in c.alpha)
    assert c.c2 == min(c.alpha)
    assert choose_r(P, c.R, ()) == 0.5


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_constants_match_oracle(name):
    pairs = CORPUS[name]
    _, cps, c = setup(pairs)
    crit = oracle.critical_data(pairs)
    R = oracle.rule_R(pairs, crit)
    r = oracle.rule_r(pairs, crit, R)
    assert c.R == pytest.approx(float(R), rel=1e-12)
    assert c.r == pytest.approx(float(r), rel=1e-9)
    assert c.outer_radius == pytest.approx(float(2 ** c.n * R**c.n), rel=1e-12)
    assert c.K == pytest.approx(float(2 ** c.n * R ** (c.n - 1) - 1), rel=1e-12)


def test_corpus_reference_values():
    _, _, c = setup(CORPUS["z^4+z^2+z+1"])
    assert c.R == pytest.approx(2305.000002304, rel=1e-12)
    assert c.outer_radius == pytest.approx(4.5165e14, rel=1e-4)
    _, _, c = setup(CORPUS["z^3+(1+i)z+2"])
    assert c.R == pytest.approx(198.74, rel=1e-4)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_r_properties(name):
    P, cps, c = setup(CORPUS[name])
    assert check_r_properties(P, c, cps) == {"disjoint": True, "inside_R": True, "below_eps": True, "Q_bounds": True}


def test_r_property_checker_detects_bad_r():
    from dataclasses import replace

    P, cps, c = setup(CORPUS["z^3-3z"])
    bad = replace(c, r=0.6)
    props = check_r_properties(P, bad, cps)
    assert not props["disjoint"] and not props["below_eps"]


def test_region_examples():
    P, cps, c = setup([[0, 0], [0, 0], [1, 0]])
    assert region_of(0.1, c, cps) == "ball-0"
    assert region_of(3, c, cps) == "transition"
    assert region_of(16, c, cps) == "outer"
    assert region_of(2, c, cps) == "inner"
    assert region_of(1.5, c, cps) == "inner"
    assert region_of(0.5, c, cps) == "ball-0"
    assert list(region_of(np.array([0.1, 3.0]), c, cps)) == ["ball-0", "transition"]


def test_profile_junctions_exact():
    for name in CORPUS:
        _, _, c = setup(CORPUS[name])
        n, R = c.n, mp.mpf(c.R)
        assert abs(mp.root(2**n * R**n, n) / (2 * R) - 1) < 1e-12
        assert abs(((2**n * R**n - R) / (2**n * R ** (n - 1) - 1) + R) / (2 * R) - 1) < 1e-12


def test_overflow_guard():
    pairs = [[0, 0]] * 20 + [[1, 0]]
    pairs[1] = [1e10, 0]
    P = Polynomial.from_pairs(pairs, "extended")
    with pytest.raises(ConstructionError, match="overflow"):
        build_constants(P, critical_points(P))


def test_build_constants_preconditions():
    P = Polynomial.from_pairs([[0, 0], [0, 0], [2, 0]])
    with pytest.raises(ValueError, match="monic"):
        build_constants(P, critical_points(P))
    with pytest.raises(ValueError):
        build_constants(Polynomial.from_pairs([[1, 0], [1, 0]]), ())
