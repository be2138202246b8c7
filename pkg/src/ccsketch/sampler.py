"""Deterministic generation of maximally skewed stable projection weights.

Weights are never stored: any entry r[index, column] of the virtual
projection matrix is regenerated on demand from a counter-based hash of
(seed, index, column).  This is what makes turnstile deletions work: the
exact weight used for an earlier insertion can always be reproduced.

The variate is the Chambers-Mallows-Stuck construction for the maximally
skewed case (stability index alpha = 1 - gap < 1, skewness beta = 1),
folded so the angle is uniform on (0, pi):

    Z = sin(alpha v) / sin(v)^(1/alpha) * (sin(v gap) / w)^(gap/alpha)

with v ~ uniform(0, pi) and w ~ exp(1).  Z follows the stable law with
scale cos(pi alpha / 2).  All arithmetic runs in log domain: at gap = 1e-6
the direct form underflows because sin(v gap) ~ 1e-6 is raised to huge
powers.

Typical size: log Z is of order |gap log gap| (tiny as gap -> 0), though
the constant degrades for angles close to pi.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .errors import ConfigurationError, DomainError

__all__ = ["StableParams", "UniformExpPair", "derive_pair", "skewed_stable",
           "projection_weight"]


@dataclass(frozen=True)
class StableParams:
    """Parameters of the maximally skewed stable family used for projection.

    gap is 1 - alpha.  The sketch and bound machinery require gap < 0.5
    strictly; the sampler itself is well defined at gap = 0.5 (where it has
    a handy closed form), so construction allows the boundary.
    """

    gap: float
    alpha: float = field(init=False)
    beta: float = field(init=False, default=1.0)
    rho: float = field(init=False, default=math.pi / 2)

    def __post_init__(self):
        if not (0.0 < self.gap <= 0.5):
            raise ConfigurationError(f"gap must be in (0, 0.5]; got {self.gap}")
        object.__setattr__(self, "alpha", 1.0 - self.gap)


@dataclass(frozen=True)
class UniformExpPair:
    """An angle v strictly inside (0, pi) and a positive exponential w."""

    v: float
    w: float

    def __post_init__(self):
        if not (0.0 < self.v < math.pi):
            raise DomainError(f"v must lie strictly inside (0, pi); got {self.v}")
        if not (self.w > 0.0 and math.isfinite(self.w)):
            raise DomainError(f"w must be positive and finite; got {self.w}")


def _check_u64(name, value):
    if not (0 <= value < 2**64):
        raise DomainError(f"{name} must fit in 64 unsigned bits; got {value}")


def derive_pair(seed: int, index: int, column: int) -> UniformExpPair:
    """The (v, w) pair for matrix entry (index, column) under `seed`.

    Pure: identical arguments always return the bit-identical pair.  The
    hash output is mapped so the open-interval constraints cannot be hit.
    """
    _check_u64("seed", seed)
    _check_u64("index", index)
    _check_u64("column", column)
    v, w = kernels.uniform_exp_pairs(seed, np.array([index], dtype=np.uint64), column)
    return UniformExpPair(float(v[0]), float(w[0]))


def skewed_stable(params: StableParams, pair: UniformExpPair) -> float:
    """One skewed-stable variate from an explicit (v, w) pair.

    Strictly positive and finite for every valid pair: both sine factors
    are positive on (0, pi) and the log-domain exponent is bounded by a few
    hundred.
    """
    z = float(kernels.stable_transform(params.gap, np.array([pair.v]), np.array([pair.w]))[0])
    if not (z > 0.0 and math.isfinite(z)):
        raise DomainError(f"non-finite stable variate from v={pair.v}, w={pair.w}")
    return z


def projection_weight(config, index: int, column: int) -> float:
    """Projection weight r[index, column] for a sketch configuration.

    Deterministic in (config.seed, index, column); `column` must be inside
    the sketch width.
    """
    if not (0 <= column < config.k):
        raise IndexError(f"column {column} outside sketch width {config.k}")
    config.check_index(index)
    pair = derive_pair(config.seed, index, column)
    return skewed_stable(StableParams(config.gap), pair)
