import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lipquo import democorpus as D
from lipquo import verify as V


def test_nonlip_homeo_growth():
    assert D.nonlip_homeo_growth(1.0) == pytest.approx(1)
    assert D.nonlip_homeo_growth(1e3) == pytest.approx(1e3)
    assert D.nonlip_homeo_growth(2e3) == pytest.approx(2 * D.nonlip_homeo_growth(1e3))
    with pytest.raises(ValueError):
        D.nonlip_homeo_growth(0)


def test_square_ratio_examples():
    w = D.square_unbounded_ratio(2, 100.0)
    assert w.ratio == pytest.approx(100 + 100 * (1 + 1e-4), rel=1e-9)
    assert abs(w.y - w.z) > 0
    # the witness re-checks by direct evaluation
    f = D.basemaps.f_n
    assert abs(f(2, w.z) ** 2 - f(2, w.y) ** 2) / abs(w.z - w.y) == pytest.approx(w.ratio)
    assert D.square_unbounded_ratio(1, 100.0).ratio == pytest.approx(w.ratio)


@given(st.integers(1, 6), st.floats(1.5, 1e6))
def test_square_ratio_grows(n, M):
    assert D.square_unbounded_ratio(n, M).ratio >= M


def test_projection_examples():
    ev = D.projection_demo(2, 1, [0, 0, 0], 1.0)
    assert ev.lipschitz_ok and ev.colipschitz_ok
    assert ev.witness[1] == (0.0, 0.0, 0.5)
    assert ev.image_distance == 0 and ev.source_distance == 0.5
    assert not ev.discrete
    ev = D.projection_demo(2, 2, [1.0, -2.0, 3.0, 0.5], 0.3, seed=4)
    assert ev.lipschitz_ok and ev.colipschitz_ok and ev.image_distance == 0
    assert ev.fiber_dimension == 2 and not D.projection_fiber_discrete(2, 2, [0, 0, 0, 0])
    with pytest.raises(ValueError):
        D.projection_demo(2, 1, [0, 0], 1.0)


@given(st.floats(1e-9, 1e9))
def test_projection_defeats_every_constant(c):
    ev = D.projection_demo(1, 1, [0.3, -0.2], 1.0, samples=10)
    assert ev.image_distance < c * ev.source_distance


def test_broken_jlps_examples():
    assert abs(D.broken_jlps_h(4, 2, 8.0)) == pytest.approx(8**0.5)
    assert D.broken_jlps_h(4, 2, 3 + 1j) == 3 + 1j
    w = D.broken_jlps_collision(4, 2)
    assert w.z != w.y and w.ratio < 1e-12
    assert D.broken_jlps_h(4, 2, w.z) == D.broken_jlps_h(4, 2, w.y)
    with pytest.raises(ValueError):
        D.broken_jlps_h(1.5, 2, 1.0)


@given(st.integers(2, 6), st.floats(0, 2 * np.pi))
def test_broken_jlps_collides_for_every_valid_R(n, theta):
    R = 2 ** (1 / (n - 1)) * 1.5 + 1
    w = D.broken_jlps_collision(R, n, theta)
    assert w.ratio < 1e-12 and abs(w.z - w.y) > 0


def test_squared_composition_not_lipschitz(corpus):
    q = corpus["z^3-3z"]
    vals = D.squared_composition_growth(q, [1e1, 1e3, 1e5, 1e9, 1e12])
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 1e3 * V.global_lip_estimate(q.F2, 1e12, 500, dtype=q.dtype).value
