import math

import numpy as np
import pytest

from hlestim.errors import DomainError
from hlestim.probe import make_probe
from hlestim.qpe import (
    FAILURE_RADIUS, failure_curve, failure_probability, kaiser_scan, max_failure, qpe_distribution,
)


def _direct_distribution(c, theta):
    n = c.size
    mu = np.arange(n)
    return np.array([abs(np.sum(c * np.exp(2j * math.pi * (theta - l / n) * mu))) ** 2 / n for l in range(n)])


def _direct_failure(c, theta):
    n = c.size
    probs = _direct_distribution(c, theta)
    est = np.arange(n) / n
    dist = np.minimum(np.abs(est - theta), 1 - np.abs(est - theta))
    return float(np.sum(probs[dist > FAILURE_RADIUS]))


@pytest.mark.parametrize("family,alpha", [("uniform", None), ("cos1", None), ("cos2", None), ("kaiser", 0.98)])
def test_distribution_matches_direct_sum(family, alpha):
    s = make_probe(family, 3, alpha)
    for theta in (0.0, 0.0123, 0.37, 0.5, 0.9876):
        probs = qpe_distribution(s, theta)
        np.testing.assert_allclose(probs, _direct_distribution(np.asarray(s.amplitudes), theta), atol=1e-12)
        assert probs.sum() == pytest.approx(1.0, abs=1e-12)


def test_failure_probability_matches_direct_sum():
    s = make_probe("cos1", 4)
    for theta in (0.01, 0.2, 0.49, 0.97):
        assert failure_probability(s, theta) == pytest.approx(_direct_failure(np.asarray(s.amplitudes), theta), abs=1e-12)


def test_grid_aligned_phase_never_fails_with_uniform_probe():
    s = make_probe("uniform", 3)
    for l in range(8):
        assert failure_probability(s, l / 8) == pytest.approx(0.0, abs=1e-12)


def test_phase_domain():
    s = make_probe("uniform", 3)
    with pytest.raises(DomainError):
        failure_probability(s, 1.0)
    with pytest.raises(DomainError):
        failure_probability(s, -0.1)


def test_chunked_curve_equals_single_block():
    s = make_probe("cos2", 3)
    thetas = np.arange(20_000) / 20_000
    curve = failure_curve(s, thetas, workers=3)
    assert curve.shape == thetas.shape
    for i in (0, 8191, 8192, 16_384, 19_999):
        assert curve[i] == pytest.approx(failure_curve(s, thetas[i:i + 1])[0], abs=1e-15)


def test_max_failure_keeps_half_curve():
    summary = max_failure(make_probe("cos1", 3), grid_points=1000)
    assert summary.curve.thetas.max() <= 0.5
    assert summary.curve.thetas.size == summary.curve.probs.size == 501
    assert 0.0 <= summary.max <= 1.0
    with pytest.raises(DomainError):
        max_failure(make_probe("cos1", 3), grid_points=1)


def test_kaiser_scan_shape():
    scan = kaiser_scan(3, [0.5, 0.98, 2.0], grid_points=2000)
    assert [a for a, _ in scan] == [0.5, 0.98, 2.0]
    assert all(0.0 <= m <= 1.0 for _, m in scan)
    with pytest.raises(DomainError):
        kaiser_scan(3, [])


@pytest.mark.slow
@pytest.mark.parametrize("family,alpha,expected,bound", [
    ("uniform", None, 0.1789, 0.18),
    ("cos1", None, 0.0108, 0.011),
    ("cos2", None, 0.0139, 0.014),
    ("kaiser", 0.98, 0.0086, 0.009),
])
def test_single_shot_failure_maxima_p3(family, alpha, expected, bound):
    summary = max_failure(make_probe(family, 3, alpha), grid_points=100_000)
    assert summary.max == pytest.approx(expected, abs=5e-4)
    assert summary.max < bound


def test_larger_registers_stay_bounded_in_memory():
    # p = 10 exercises the size-aware blocking
    curve = failure_curve(make_probe("cos1", 10), np.linspace(0, 0.999, 3000))
    assert curve.shape == (3000,)
    assert np.all((curve >= 0) & (curve <= 1))


@pytest.mark.parametrize("family,alpha", [("uniform", None), ("cos1", None), ("cos2", None), ("kaiser", 0.98)])
def test_failure_curve_is_mirror_symmetric(family, alpha):
    s = make_probe(family, 4, alpha)
    thetas = np.random.default_rng(5).uniform(0.001, 0.999, 64)
    np.testing.assert_allclose(failure_curve(s, thetas), failure_curve(s, 1.0 - thetas), atol=1e-10)
