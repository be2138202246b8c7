"""Projection-weight sampler: determinism, open-interval mapping, the
closed-form checkpoints, and the small-gap scaling of log Z."""

import math

import numpy as np
import pytest

from ccsketch import (SketchConfig, StableParams, UniformExpPair, derive_pair,
                      projection_weight, skewed_stable)
from ccsketch._backend import kernels
from ccsketch.errors import ConfigurationError, DomainError


def test_derive_pair_deterministic():
    a = derive_pair(71, 5, 2)
    b = derive_pair(71, 5, 2)
    assert a.v == b.v and a.w == b.w


def test_derive_pair_distinct_over_million_grid():
    # adjacent counters must decorrelate; a million pairs should all differ
    idx = np.arange(1_000_000, dtype=np.uint64)
    v, w = kernels.uniform_exp_pairs(7, idx, 0)
    stacked = np.stack([v, w], axis=1)
    assert len(np.unique(stacked, axis=0)) == len(idx)


def test_angle_uniformity_ks():
    n = 100_000
    v, _ = kernels.uniform_exp_pairs(31337, np.arange(n, dtype=np.uint64), 1)
    u = np.sort(v) / np.pi
    i = np.arange(n)
    ks = max(np.max(u - i / n), np.max((i + 1) / n - u))
    assert ks <= 1.36 / math.sqrt(n) * 1.5


def test_closed_form_at_half_gap():
    # gap 0.5, v = pi/2, w = 1: Z = sin(pi/4) * sin(pi/4) = 1/2
    z = skewed_stable(StableParams(0.5), UniformExpPair(math.pi / 2, 1.0))
    assert z == pytest.approx(0.5, rel=1e-12)


def test_unit_limit_small_gap():
    # Z -> 1 at rate |gap log gap| for fixed (v, w)
    z = skewed_stable(StableParams(1e-8), UniformExpPair(math.pi / 2, 1.0))
    assert abs(z - 1.0) <= 1e-6


def test_log_weight_scaling_on_fixed_grid():
    # max |log Z| / |gap log gap| over a fixed (v, w) grid must not grow as
    # the gap shrinks decade by decade
    vg = np.array([0.3, 0.7, 1.2, 1.6, 2.2, 2.8])
    wg = np.array([0.1, 1.0, 10.0])
    V, W = np.meshgrid(vg, wg)
    ratios = []
    for gap in (1e-2, 1e-4, 1e-6):
        z = kernels.stable_transform(gap, V.ravel(), W.ravel())
        ratios.append(np.max(np.abs(np.log(z))) / abs(gap * math.log(gap)))
    assert ratios[1] <= ratios[0] * 1.05
    assert ratios[2] <= ratios[1] * 1.05


def test_log_weight_envelope_sampled():
    # Sampled (index, column) envelope at gap=1e-5.  The constant is set by
    # a pre-build scan: angles near pi inflate |log Z| well beyond the
    # fixed-(v,w) scale, to ~6400x |gap log gap| in 1e4 draws, so the
    # envelope is wide; the median carries the typical-scale claim.
    gap = 1e-5
    scale = abs(gap * math.log(gap))
    v, w = kernels.uniform_exp_pairs(1234, np.arange(10_000, dtype=np.uint64), 0)
    ratio = np.abs(np.log(kernels.stable_transform(gap, v, w))) / scale
    assert ratio.max() <= 8000.0
    assert np.median(ratio) <= 2.0


def test_projection_weight_determinism_and_seed_sensitivity():
    cfg1 = SketchConfig(1e-4, 3, 9, 100)
    cfg2 = SketchConfig(1e-4, 3, 10, 100)
    w1 = projection_weight(cfg1, 5, 1)
    assert w1 == projection_weight(cfg1, 5, 1)
    assert w1 != projection_weight(cfg2, 5, 1)
    assert w1 != projection_weight(cfg1, 6, 1)
    assert w1 != projection_weight(cfg1, 5, 2)


def test_projection_weight_out_of_range_column():
    cfg = SketchConfig(1e-4, 3, 9, 100)
    with pytest.raises(IndexError):
        projection_weight(cfg, 5, 3)


def test_weights_positive_and_finite():
    for gap in (0.49, 1e-6):
        z = kernels.stable_minima(2, gap, 0, 100_000, 1)
        assert (z > 0.0).all() and np.isfinite(z).all()


def test_params_validation():
    for bad in (0.0, -0.1, 0.51, 0.6, 1.0):
        with pytest.raises(ConfigurationError):
            StableParams(bad)
    p = StableParams(0.2)
    assert p.alpha == 0.8 and p.beta == 1.0 and p.rho == math.pi / 2
    assert p.alpha + p.gap == 1.0


def test_pair_validation():
    with pytest.raises(DomainError):
        UniformExpPair(0.0, 1.0)
    with pytest.raises(DomainError):
        UniformExpPair(math.pi, 1.0)
    with pytest.raises(DomainError):
        UniformExpPair(1.0, 0.0)
    with pytest.raises(DomainError):
        UniformExpPair(1.0, math.inf)
