import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from lipquo.polycore import (
    MERGE_TOL,
    Polynomial,
    PolynomialError,
    RootFindingError,
    aberth,
    cluster_roots,
    critical_points,
    derivative,
    evaluate,
    multiplicity,
    normalize_monic,
    polynomial_roots,
    shifted_expansion,
)

CUBIC = [[0, 0], [-3, 0], [0, 0], [1, 0]]

coef = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


def P(*coeffs, precision="double"):
    return Polynomial(np.array(coeffs, dtype=complex)).astype(precision)


def test_eval_examples():
    assert evaluate(P(1, 0, 1), 2) == 5
    assert abs(evaluate(P(1, 0, 1), 1j)) == 0


def test_eval_matches_power_sum():
    rng = np.random.default_rng(3)
    c = rng.normal(size=6) + 1j * rng.normal(size=6)
    z = rng.normal(size=100) + 1j * rng.normal(size=100)
    got = evaluate(Polynomial(c), z)
    want = np.array([oracle.naive_eval(c, zz) for zz in z])
    assert np.all(np.abs(got - want) <= 1e-12 * np.maximum(1, np.abs(want)))


def test_derivative_examples():
    assert np.array_equal(derivative(Polynomial.from_pairs(CUBIC)).coeffs, [-3, 0, 3])
    assert np.array_equal(derivative(P(7, 1)).coeffs, [1])
    assert np.array_equal(derivative(derivative(P(0, 0, 1))).coeffs, [2])
    assert derivative(P(5)).is_zero


def test_shifted_expansion_examples():
    assert np.allclose(shifted_expansion(P(0, 0, 1), 1), [1, 2, 1])
    assert np.allclose(shifted_expansion(Polynomial.from_pairs(CUBIC), 1), [-2, 0, 3, 1])
    c = [2, -1j, 3, 0.5]
    assert np.array_equal(shifted_expansion(P(*c), 0), c)


@given(st.lists(coef, min_size=2, max_size=6), coef, coef)
def test_shifted_expansion_reproduces_P(c, z0, u):
    p = P(*c)
    b = shifted_expansion(p, z0)
    assert abs(evaluate(Polynomial(b), u) - evaluate(p, z0 + u)) <= 1e-9 * (1 + sum(abs(x) for x in c)) * (1 + abs(z0) + abs(u)) ** len(c)


def test_multiplicity_examples():
    assert multiplicity(P(0, 0, 1), 0) == 2
    assert multiplicity(Polynomial.from_pairs(CUBIC), 1) == 2
    assert multiplicity(P(0, 0, 0, 1), 0) == 3
    with pytest.raises(PolynomialError, match="degenerate"):
        multiplicity(P(4), 0)


def test_normalize_monic():
    a, Q = normalize_monic(P(4, 0, 2))
    assert a == 2 and np.array_equal(Q.coeffs, [2, 0, 1])
    a, Q = normalize_monic(P(0, 0, 0, 1j))
    assert a == 1j and np.array_equal(Q.coeffs, [0, 0, 0, 1])
    a, Q = normalize_monic(Polynomial.from_pairs(CUBIC))
    assert a == 1
    with pytest.raises(PolynomialError, match="constant polynomial"):
        normalize_monic(P(3))


def test_polynomial_validation():
    with pytest.raises(PolynomialError):
        Polynomial(np.array([1, np.nan]))
    assert Polynomial(np.array([1, 2, 0, 0])).degree == 1
    assert Polynomial.from_pairs([[1, 2], [3, 4]]).to_pairs() == [[1.0, 2.0], [3.0, 4.0]]


@pytest.mark.parametrize("precision", ["double", "extended"])
def test_aberth_batched(precision):
    rng = np.random.default_rng(0)
    C = (rng.normal(size=(20, 6)) + 1j * rng.normal(size=(20, 6))).astype(P(1, precision=precision).dtype)
    C[:, -1] = 1
    z, resid = aberth(C)
    assert z.shape == (20, 5) and np.all(resid <= 1e-12)
    for row, roots in zip(C, z):
        assert np.allclose(np.sort_complex(np.roots(row[::-1].astype(complex))), np.sort_complex(roots.astype(complex)), atol=1e-9)


def test_aberth_reports_non_convergence():
    with pytest.raises(RootFindingError) as info:
        polynomial_roots(P(1, 0, 0, 0, 0, 0, 1e-300), maxiter=2)
    assert info.value.residuals is not None


def test_cluster_roots_merges_multiple_root():
    p = P(-1, 3, -3, 1)  # (z - 1)^3
    roots = [1 + 1e-6, 1 - 0.5e-6 + 0.8e-6j, 1 - 0.5e-6 - 0.8e-6j]
    (c, k), = cluster_roots(p, np.array(roots))
    assert k == 3 and abs(c - 1) < MERGE_TOL


@pytest.mark.parametrize(
    "pairs",
    [
        [[0, 0], [0, 0], [1, 0]],
        CUBIC,
        [[1, 0], [1, 0], [1, 0], [0, 0], [1, 0]],
        [[2, 0], [1, 1], [0, 0], [1, 0]],
        [[0, 0], [0, 0], [0, 0], [1, 0]],
        [[1, 0], [-4, 0], [6, 0], [-4, 0], [1, 0]],
        [[0, 0], [0, 0], [1, 0], [-2, 0], [1, 0]],
    ],
)
def test_critical_points_match_exact(pairs):
    want = oracle.critical_data(pairs)
    got = sorted(critical_points(Polynomial.from_pairs(pairs, "extended")), key=lambda c: (round(float(c.z.real), 9), round(float(c.z.imag), 9)))
    assert len(got) == len(want)
    for cp, (z, m, q, pv) in zip(got, want):
        assert abs(complex(cp.z) - z) < 1e-8
        assert cp.m == m
        assert len(cp.q_coeffs) == len(q)
        assert np.allclose(cp.q_coeffs.astype(complex), q, atol=1e-7)
        assert abs(complex(cp.p_value) - pv) < 1e-9


def test_critical_points_examples():
    (cp,) = critical_points(P(0, 0, 1))
    assert cp.z == 0 and cp.m == 2 and np.array_equal(cp.q_coeffs, [1])
    assert critical_points(P(5, 1)) == ()
    cps = critical_points(Polynomial.from_pairs(CUBIC))
    one = [c for c in cps if abs(c.z - 1) < 1e-9][0]
    assert one.m == 2 and np.allclose(one.q_coeffs, [3, 1])


@given(st.lists(coef, min_size=3, max_size=6).filter(lambda c: abs(c[-1]) > 0.1))
def test_critical_point_invariants(c):
    p = P(*c)
    try:
        cps = critical_points(p)
    except RootFindingError:
        return  # near-degenerate input: best effort, reported not hidden
    scale = 1 + max(abs(x) for x in c)
    assert sum(cp.m - 1 for cp in cps) <= p.degree - 1
    rng = np.random.default_rng(0)
    dP = derivative(p)
    for cp in cps:
        assert abs(evaluate(dP, cp.z)) < 1e-8 * scale * (1 + abs(cp.z)) ** p.degree
        z = cp.z + 2 * np.sqrt(rng.random(100)) * np.exp(2j * np.pi * rng.random(100))
        diff = np.abs(evaluate(p, z) - cp.reconstruct(z))
        assert np.all(diff < 1e-9 * (1 + np.abs(evaluate(p, z))) * (1 + abs(cp.z)) ** p.degree)
