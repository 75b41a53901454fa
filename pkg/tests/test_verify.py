import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lipquo import verify as V
from lipquo.basemaps import f_n
from lipquo.democorpus import quadratic_radial_homeo
from lipquo.homeo import h1, h1_inv
from lipquo.polycore import Polynomial
from lipquo.quotient import build
from lipquo.suite import lipschitz_estimate


def identity(z):
    return z


def flatten(z):
    # planar analogue of a coordinate projection
    return np.real(z) + 0j


@pytest.fixture(scope="module")
def ident():
    return build(Polynomial.from_pairs([[0, 0], [1, 0]]))


def test_pointwise_estimate_examples():
    est = V.pointwise_lip_estimate(lambda z: f_n(2, z), 1.0, 0.1, 4000, seed=0)
    assert 1.9 <= est.value <= 2.0
    assert est.label == "lower bound estimate"
    assert V.pointwise_lip_estimate(identity, 1 + 1j, 0.5, 100).value == pytest.approx(1.0, abs=1e-12)
    assert V.pointwise_lip_estimate(quadratic_radial_homeo, 10.0, 1.0, 2000).value >= 19


@given(st.integers(1, 200), st.integers(0, 50))
def test_pointwise_estimate_monotone_in_N(N, seed):
    F = lambda z: f_n(3, z)  # noqa: E731
    a = V.pointwise_lip_estimate(F, 0.3 + 0.2j, 0.1, N, seed)
    b = V.pointwise_lip_estimate(F, 0.3 + 0.2j, 0.1, 2 * N, seed)
    assert b.value >= a.value
    assert a.refinement_delta >= 0


def test_pointwise_estimate_validates():
    with pytest.raises(ValueError):
        V.pointwise_lip_estimate(identity, 0j, 0.0, 10)


def test_global_estimate_witness_reproduces_value():
    F = lambda z: f_n(3, z)  # noqa: E731
    est = V.global_lip_estimate(F, 10.0, 2000, seed=1)
    z, w = est.witness
    assert abs(F(z) - F(w)) / abs(z - w) == pytest.approx(est.value, rel=1e-12)
    assert est.value <= 3 + 1e-9
    _, _, q = V.pair_quotients(F, 10.0, 2000, seed=1)
    assert q.max() == est.value


def test_strong_check_archetype():
    rng = np.random.default_rng(0)
    for n in (1, 2, 5):
        for x in rng.normal(size=5) + 1j * rng.normal(size=5):
            cert = V.strong_colip_search(lambda z: f_n(n, z), x, 1.0, 1.0, 256, seed=0)
            assert cert.passed and cert.label == "falsification test"


def test_strong_check_projection_fails_with_witness():
    for c in (1e-3, 0.5, 1.0):
        cert = V.strong_colip_search(flatten, 0.2 + 0.1j, c, 1.0, 256, axes=(1, 1j))
        assert not cert.passed
        assert V.recheck(cert, F=flatten)
        # the witness lies near the collapsed direction
        d = complex(cert.witness - cert.x)
        assert abs(d.real) < c * abs(d)


def test_strong_check_at_critical_points(corpus):
    for q in corpus.values():
        for cp, a in zip(q.cps, q.consts.alpha):
            cert = V.strong_colip_check(q.F2, cp.z, a * (1 - 1e-6), q.consts.r / 2, 2000)
            assert cert.passed


def test_failing_certificate_needs_witness():
    with pytest.raises(ValueError):
        V.CoLipschitzCertificate(0j, 1.0, 1.0, "strong-inequality", False)


def test_ball_inclusion_examples(square, ident):
    r, a = square.consts.r, square.consts.alpha[0]
    for rad in (r / 2, r / 8, 1e-3):
        assert V.ball_inclusion_check(square, 0j, rad, a / 2, 128).passed
    for x in (0j, 3 - 1j, 1e5j):
        for rad in (1e-3, 1.0, 1e3):
            assert V.ball_inclusion_check(ident, x, rad, 1.0, 64).passed


def test_ball_inclusion_inflated_constant_fails(corpus):
    for q in corpus.values():
        L = lipschitz_estimate(q, 2000, 0).value
        cert = V.ball_inclusion_check(q, q.cps[0].z + 0.3, 1e-2, 10 * L, 64)
        assert not cert.passed
        assert V.recheck(cert, q=q)
        # survives the round trip through a report record
        again = V.CoLipschitzCertificate.from_record(cert.to_record(), q.dtype)
        assert V.recheck(again, q=q)


def test_recheck_rejects_passing_certificate(square):
    cert = V.ball_inclusion_check(square, 0j, 0.1, 0.01)
    assert cert.passed and not V.recheck(cert, q=square)


def test_local_injectivity_examples(square):
    assert V.local_injectivity_check(square, 1.0, 0.5)
    # at the branch point itself: recorded, not asserted
    V.local_injectivity_check(square, 0j, 0.1)
    x = 1e-3 + 0j
    assert V.local_injectivity_check(square, x, abs(x) / 2 * 0.99)


def test_discreteness(corpus):
    for q in corpus.values():
        for w in [0, 1 + 1j, -1e4, 1e12j]:
            assert V.discreteness_check(q, w)
        for cp in q.cps:
            assert V.discreteness_check(q, q.a * cp.p_value)


def test_inverse_duality_examples(cubic):
    p = cubic.profile
    F, G = (lambda z: h1(p, z)), (lambda w: h1_inv(p, w))
    assert V.inverse_duality_check(F, G, 1 + 1j, 1.0, 0.1, 256)
    x = 3 * cubic.consts.outer_radius
    c = 0.5 * V.local_colip_constant(F, x, 1.0, 512, axes=V.principal_axes(None, x))
    assert c > 0
    assert V.inverse_duality_check(F, G, x, c, 1.0, 256)
    assert V.inverse_duality_check(lambda z: 2 * z, lambda w: w / 2, 1j, 2.0, 0.5, 256)
    est = V.pointwise_lip_estimate(lambda w: w / 2, 2j, 0.5, 256)
    assert est.value == pytest.approx(0.5)


def test_inverse_duality_rejects_bad_pair():
    with pytest.raises(ValueError):
        V.inverse_duality_check(lambda z: 2 * z, lambda w: w, 1.0, 1.0, 0.1, 16)


def test_composition_examples(square):
    (res,) = V.composition_colip_check(square, [1.5])
    assert res.a == pytest.approx(1.0) and 2.9 < res.b <= 3.0 + 1e-9
    assert res.passed
    L = lipschitz_estimate(square, 2000, 0).value
    (res,) = V.composition_colip_check(square, [1.5], override=10 * L)
    assert not res.passed and V.recheck(res.certificate, F=square.F1)


def test_principal_axes(cubic):
    axes = V.principal_axes(cubic, 2 + 0j)
    assert len(axes) == 6 and all(abs(abs(a) - 1) < 1e-12 for a in axes)
    assert V.principal_axes(None, 0j) == []


def test_resolution_fraction_bounds(corpus):
    q = corpus["z^4+z^2+z+1"]
    x = np.asarray(3000.0).astype(q.dtype)
    res = V.position_resolution(q, x)
    assert res > V.position_resolution(q, np.asarray(1.0).astype(q.dtype))
    assert 1e-6 <= V.resolution_fraction(x, 10.0, res) <= 0.1


def test_constant_chain(corpus):
    for q in corpus.values():
        ch = V.constant_chain(q, grid=100)
        assert ch["c"] == min(ch["c1"], ch["c2"], ch["c3"])
        assert ch["c1"] <= 0.5 and ch["c"] > 0 and ch["L_h1inv"] >= 1
    ch = V.constant_chain(corpus["z^3-3z"], grid=100)
    assert ch["c2"] == pytest.approx(0.10546875)
