"""Analytic machinery for the sample-minimum estimator.

Everything here is a pure function of (epsilon, fail_prob, gap, k):

* ``log_stable_kernel``: log of the kernel driving the skewed-stable CDF
  integrand.  Monotonically increasing and convex on (0, pi) for gap < 0.5,
  with limit gap * alpha**(1/gap - 1) at 0+.
* ``stable_cdf``: CDF of the standardized skewed-stable law by quadrature
  of (1/pi) * integral of exp(-exp(kernel - (alpha/gap) log t)).
* ``right_tail_bound`` / ``left_tail_bound``: one-sided deviation bounds
  for the estimator; ``sample_size`` inverts the right bound into the
  minimum number of projections.
* ``crossing_angle`` / ``crossing_angle_asymptotic``: the angle where the
  kernel crosses gap**gamma * (1+epsilon)**(1/gap), by bisection and by the
  closed-form asymptotic.

The quoted bound formulas drop their O(gap^2) (resp. O(gap)) remainder
terms; callers' tolerances are expected to absorb those.  Quantities like
(1+epsilon)**(1/gap) are never formed directly, only their logarithms,
since gap = 1e-6 would overflow any hardware float.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (ConfigurationError, DomainError, InfeasibleRegimeError,
                     NoRootError, NumericError)

__all__ = ["BoundQuery", "ThetaQuery", "SamplePlan", "LeftTailBound",
           "log_stable_kernel", "stable_cdf", "right_tail_bound",
           "right_tail_bound_refined", "left_tail_bound",
           "left_tail_log_exponent", "sample_size", "max_feasible_gap",
           "crossing_angle", "crossing_angle_asymptotic"]

_BRACKET_LO = 1e-9
_BRACKET_HI = math.pi - 1e-9
_BISECT_ITERS = 64
_PANEL_EDGE_ITERS = 50

# Quadrature panels are delimited where the integrand's inner exponent
# crosses these levels; outside +-36 the integrand is exactly 1 or 0 at
# double precision.
_LEVELS = np.array([-36.0, -18.0, -9.0, -4.5, -2.0, -1.0, 0.0,
                    1.0, 2.0, 4.5, 9.0, 18.0, 36.0])
_GL16 = np.polynomial.legendre.leggauss(16)
_GL24 = np.polynomial.legendre.leggauss(24)
_CDF_TOL = 1e-9


def _check_gap(gap):
    if not (0.0 < gap < 0.5):
        raise DomainError(f"gap must be in (0, 0.5); got {gap}")


def _check_epsilon(epsilon):
    if not (epsilon > 0.0 and math.isfinite(epsilon)):
        raise DomainError(f"epsilon must be positive and finite; got {epsilon}")


@dataclass(frozen=True)
class BoundQuery:
    """(epsilon, fail_prob, gap[, k]) triple parameterizing the bounds.

    fail_prob = 1 is admitted (it makes the planner return k = 0).
    """

    epsilon: float
    fail_prob: float
    gap: float
    k: int | None = None

    def __post_init__(self):
        _check_epsilon(self.epsilon)
        _check_gap(self.gap)
        if not (0.0 < self.fail_prob <= 1.0):
            raise ConfigurationError(
                f"fail_prob must be in (0, 1]; got {self.fail_prob}")
        if self.k is not None and self.k < 1:
            raise ConfigurationError(f"k must be >= 1; got {self.k}")


@dataclass(frozen=True)
class ThetaQuery:
    """(gamma, epsilon, gap) for the kernel level-crossing angle."""

    gamma: float
    epsilon: float
    gap: float

    def __post_init__(self):
        if not (self.gamma >= 0.0 and math.isfinite(self.gamma)):
            raise DomainError(f"gamma must be finite and >= 0; got {self.gamma}")
        _check_epsilon(self.epsilon)
        _check_gap(self.gap)


@dataclass(frozen=True)
class SamplePlan:
    """Planner output: the fractional bound and its integer ceiling."""

    k_fractional: float
    k: int


@dataclass(frozen=True)
class LeftTailBound:
    """Left-tail bound value; `underflow` marks an exact-zero report for
    exponents beyond double range."""

    value: float
    underflow: bool

    def __float__(self):
        return self.value


def log_stable_kernel(theta, gap):
    """log of the CDF integrand kernel
    (sin(gap theta) / sin(alpha theta)) * [sin(alpha theta) / sin theta]**(1/gap),
    finite on all of (0, pi).

    Evaluates sin(theta) as sin(pi - theta) on the upper half so the factor
    that explodes near pi is formed without cancellation.  Accepts scalars
    or arrays.
    """
    _check_gap(gap)
    th = np.asarray(theta, dtype=np.float64)
    if np.any(th <= 0.0) or np.any(th >= math.pi):
        raise DomainError("theta must lie strictly inside (0, pi)")
    out = _log_kernel_raw(th, gap)
    return float(out) if np.isscalar(theta) else out


def _log_kernel_raw(th, gap):
    # no domain checks; bisection helpers call this on bracket interiors
    alpha = 1.0 - gap
    sin_t = np.where(th > math.pi / 2, np.sin(math.pi - th), np.sin(th))
    log_sin_t = np.log(sin_t)
    log_sin_at = np.log(np.sin(alpha * th))
    return ((1.0 / gap) * (log_sin_at - log_sin_t)
            + np.log(np.sin(gap * th)) - log_sin_at)


def _log_kernel_limit(gap):
    # value approached as theta -> 0+
    alpha = 1.0 - gap
    return math.log(gap) + (1.0 / gap - 1.0) * math.log(alpha)


def _bisect_kernel(targets, gap, iters=_BISECT_ITERS):
    """Angles where the log kernel crosses each target, clamped to the
    bracket when a target lies outside the kernel's range there."""
    targets = np.asarray(targets, dtype=np.float64)
    lo = np.full(targets.shape, _BRACKET_LO)
    hi = np.full(targets.shape, _BRACKET_HI)
    f_lo = _log_kernel_raw(lo, gap)
    f_hi = _log_kernel_raw(hi, gap)
    clamp_lo = f_lo >= targets
    clamp_hi = f_hi <= targets
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        go_right = _log_kernel_raw(mid, gap) < targets
        lo = np.where(go_right, mid, lo)
        hi = np.where(go_right, hi, mid)
    out = 0.5 * (lo + hi)
    out = np.where(clamp_lo, _BRACKET_LO, out)
    out = np.where(clamp_hi, _BRACKET_HI, out)
    return out


def _cdf_panels(t, gap, nodes, weights):
    t = np.asarray(t, dtype=np.float64)
    alpha = 1.0 - gap
    shift = (alpha / gap) * np.log(t)
    # panel edges only delimit subintervals (the integrand is evaluated, not
    # approximated, inside each), so they need far less precision than roots
    edges = _bisect_kernel(shift[np.newaxis, :] + _LEVELS[:, np.newaxis], gap,
                           iters=_PANEL_EDGE_ITERS)
    total = np.zeros_like(t)
    for p in range(len(_LEVELS) - 1):
        a, b = edges[p], edges[p + 1]
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        for x, wgt in zip(nodes, weights):
            inner = _log_kernel_raw(mid + half * x, gap) - shift
            total += (wgt * half) * np.where(
                inner > 36.0, 0.0, np.exp(-np.exp(np.minimum(inner, 36.0))))
    cdf = (edges[0] + total) / math.pi
    # whole integrand already suppressed at theta -> 0+: the CDF is 0
    return np.where(_log_kernel_limit(gap) - shift >= 36.0, 0.0, cdf)


def _stable_cdf_batch(t, gap, chunk=32768):
    """Vectorized CDF on a positive array; fixed validated quadrature."""
    t = np.asarray(t, dtype=np.float64)
    out = np.empty_like(t)
    for lo in range(0, len(t), chunk):
        sl = slice(lo, min(lo + chunk, len(t)))
        out[sl] = _cdf_panels(t[sl], gap, *_GL16)
    return out


def stable_cdf(t, gap):
    """P(Z <= t) for the standardized maximally skewed stable law.

    Adaptive verification: the panelized Gauss-Legendre value is accepted
    only if a higher-order pass agrees to 1e-9 absolute.
    """
    _check_gap(gap)
    if np.ndim(t) > 0:
        arr = np.asarray(t, dtype=np.float64)
        if np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
            raise DomainError("t must be positive and finite")
        return _stable_cdf_batch(arr, gap)
    if not (t > 0.0 and math.isfinite(t)):
        raise DomainError(f"t must be positive and finite; got {t}")
    t_arr = np.array([t], dtype=np.float64)
    coarse = _cdf_panels(t_arr, gap, *_GL16)[0]
    fine = _cdf_panels(t_arr, gap, *_GL24)[0]
    if abs(fine - coarse) > _CDF_TOL:
        raise NumericError(
            f"stable_cdf quadrature did not converge at t={t}, gap={gap}: "
            f"|{fine} - {coarse}| > {_CDF_TOL}")
    return float(fine)


def _right_bracket(epsilon, gap, scale=1.0):
    """The bracket gap + gap/log(1+eps) + gap/(scale*gap*log(gap) + log(1+eps)),
    with the third denominator's positivity enforced."""
    log1pe = math.log1p(epsilon)
    den3 = scale * gap * math.log(gap) + log1pe
    if den3 <= 0.0:
        raise InfeasibleRegimeError(
            f"epsilon={epsilon} too small for gap={gap}: "
            f"gap*log(gap) + log(1+epsilon) = {den3:.6g} <= 0")
    return gap + gap / log1pe + gap / den3


def right_tail_bound(epsilon, gap, k=1):
    """Upper bound on P(estimate >= (1+epsilon) * truth) for k projections.

    exp(k * log(bracket / 2)) with the O(gap^2) remainder dropped; values
    above 1 are possible near the feasibility edge and are vacuous.
    """
    _check_epsilon(epsilon)
    _check_gap(gap)
    if k < 1:
        raise ConfigurationError(f"k must be >= 1; got {k}")
    bracket = _right_bracket(epsilon, gap)
    return math.exp(k * math.log(0.5 * bracket))


def right_tail_bound_refined(epsilon, gap, k=1, interior_exponent=0.5):
    """Right tail bound with the gap*log(gap) term damped by an extra
    trapezoid point: the third denominator becomes
    interior_exponent * gap * log(gap) + log(1+epsilon).

    Exponents very close to 0 push the dropped remainder above O(gap^2);
    no admissible cutoff is enforced here, so choose conservatively.
    """
    _check_epsilon(epsilon)
    _check_gap(gap)
    if k < 1:
        raise ConfigurationError(f"k must be >= 1; got {k}")
    if not (0.0 < interior_exponent < 1.0):
        raise DomainError(
            f"interior_exponent must be in (0, 1); got {interior_exponent}")
    bracket = _right_bracket(epsilon, gap, scale=interior_exponent)
    return math.exp(k * math.log(0.5 * bracket))


def left_tail_log_exponent(epsilon, gap):
    """log of the exponent E in the left bound k * exp(-E), where
    E = gap * alpha**(1/gap - 1) / (1-epsilon)**(1/gap)."""
    _check_gap(gap)
    if not (0.0 < epsilon < 1.0):
        raise DomainError(f"epsilon must be in (0, 1); got {epsilon}")
    alpha = 1.0 - gap
    return (math.log(gap) + (1.0 / gap - 1.0) * math.log(alpha)
            - (1.0 / gap) * math.log1p(-epsilon))


def left_tail_bound(epsilon, gap, k=1):
    """Upper bound on P(estimate <= (1-epsilon) * truth) for k projections.

    The exponent explodes as gap -> 0; past E > 700 the bound is reported
    as an exact 0 with the underflow flag set rather than a subnormal.
    """
    if k < 1:
        raise ConfigurationError(f"k must be >= 1; got {k}")
    log_e = left_tail_log_exponent(epsilon, gap)
    if log_e > math.log(700.0):
        return LeftTailBound(0.0, True)
    return LeftTailBound(k * math.exp(-math.exp(log_e)), False)


def _planner_denominator(epsilon, gap):
    log1pe = math.log1p(epsilon)
    den3 = gap * math.log(gap) + log1pe
    if den3 <= 0.0:
        return None
    bracket = 0.5 + 1.0 / (2.0 * log1pe) + 1.0 / (2.0 * den3)
    den = math.log(1.0 / gap) - math.log(bracket)
    return den if den > 0.0 else None


def sample_size(epsilon, fail_prob, gap):
    """Minimum number of projections so the estimate is within a factor
    1 + epsilon of the truth with probability at least 1 - fail_prob:

        log(1/fail_prob) / [log(1/gap) - log(1/2 + 1/(2 log(1+eps))
                            + 1/(2 gap log gap + 2 log(1+eps)))]

    (O(gap) term dropped).  Returns both the fractional value and its
    ceiling."""
    _check_epsilon(epsilon)
    _check_gap(gap)
    if not (0.0 < fail_prob <= 1.0):
        raise ConfigurationError(f"fail_prob must be in (0, 1]; got {fail_prob}")
    den = _planner_denominator(epsilon, gap)
    if den is None:
        raise InfeasibleRegimeError(
            f"sample-size denominator not positive at epsilon={epsilon}, "
            f"gap={gap}; largest feasible gap for this epsilon is about "
            f"{max_feasible_gap(epsilon):.4g}")
    k_frac = math.log(1.0 / fail_prob) / den
    return SamplePlan(k_frac, math.ceil(k_frac))


def max_feasible_gap(epsilon):
    """Largest gap for which sample_size is defined at this epsilon
    (smaller gaps are feasible, larger are not); 0.0 if none is."""
    _check_epsilon(epsilon)

    def feasible(g):
        return _planner_denominator(epsilon, g) is not None

    lo, hi = 1e-15, 0.5 - 1e-15
    if not feasible(lo):
        return 0.0
    if feasible(hi):
        return hi
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def crossing_angle(gamma, epsilon, gap):
    """Angle where kernel = gap**gamma * (1+epsilon)**(1/gap), solved by
    bisection of the (strictly increasing) log kernel to |theta| ~ 1e-12.

    Monotone bracketing is used instead of Newton because the kernel's
    derivative spans hundreds of orders of magnitude across (0, pi)."""
    ThetaQuery(gamma, epsilon, gap)  # validation
    target = gamma * math.log(gap) + math.log1p(epsilon) / gap
    if _log_kernel_raw(np.float64(_BRACKET_LO), gap) >= target:
        raise NoRootError(
            f"level gap**{gamma} * (1+{epsilon})**(1/{gap}) is below the "
            f"kernel's infimum")
    if _log_kernel_raw(np.float64(_BRACKET_HI), gap) <= target:
        raise NoRootError(
            f"level gap**{gamma} * (1+{epsilon})**(1/{gap}) is above the "
            f"kernel's range on the bracket")
    return float(_bisect_kernel(np.array([target]), gap)[0])


def crossing_angle_asymptotic(gamma, epsilon, gap):
    """Closed-form small-gap asymptotic for the crossing angle:

        pi - pi*gap / (gap + L + gap*log(1/L + 1)),
        L = gamma*gap*log(gap) + log(1+epsilon)

    (O(gap^2) term dropped).  Requires L > 0."""
    ThetaQuery(gamma, epsilon, gap)  # validation
    level = gamma * gap * math.log(gap) + math.log1p(epsilon)
    if level <= 0.0:
        raise InfeasibleRegimeError(
            f"gamma*gap*log(gap) + log(1+epsilon) = {level:.6g} <= 0 at "
            f"gamma={gamma}, epsilon={epsilon}, gap={gap}")
    den = gap + level + gap * math.log(1.0 / level + 1.0)
    return math.pi - math.pi * gap / den
