"""Pure numpy kernel backend.

Mirrors the compiled extension (`ccsketch._kernels`) function for function.
The integer hash path is exact and bit-identical to the compiled backend;
float results may differ from it in the last ulp because numpy's vectorized
log/exp are not always the libm ones.

Hash scheme: a stateless SplitMix64-finalizer chain keyed on
(seed, index, column), so any matrix entry can be regenerated on demand in
any order.  The two 64-bit outputs are mapped to open-interval uniforms via
((h >> 12) + 0.5) * 2**-52, which is exact in double precision and can hit
neither 0 nor 1.
"""

import numpy as np

BACKEND = "python"

_U64 = np.uint64
_MUL1 = _U64(0xBF58476D1CE4E5B9)
_MUL2 = _U64(0x94D049BB133111EB)
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_TWEAK_V = _U64(0xD1B54A32D192ED03)
_TWEAK_W = _U64(0x8CB92BA72F3D8DD7)
_SH30 = _U64(30)
_SH27 = _U64(27)
_SH31 = _U64(31)
_SH12 = _U64(12)
_TWO_NEG52 = 2.0 ** -52

# numpy fallback accumulates updates in fixed-size blocks so results do not
# depend on the caller's batching
_BLOCK = 4096


def _mix(z):
    with np.errstate(over="ignore"):
        z = z ^ (z >> _SH30)
        z = z * _MUL1
        z = z ^ (z >> _SH27)
        z = z * _MUL2
        z = z ^ (z >> _SH31)
    return z


def _hash_pair_bits(seed, indices, column):
    k0 = _mix(_U64(seed) ^ _GOLDEN)
    k1 = _mix(k0 ^ indices)
    k2 = _mix(k1 ^ _U64(column))
    return _mix(k2 ^ _TWEAK_V), _mix(k2 ^ _TWEAK_W)


def _to_open_unit(h):
    return ((h >> _SH12).astype(np.float64) + 0.5) * _TWO_NEG52


def uniform_exp_pairs(seed, indices, column):
    """(v, w) arrays: v ~ uniform(0, pi) open, w ~ exp(1), both strictly
    inside their supports; pure function of (seed, index, column)."""
    indices = np.ascontiguousarray(indices, dtype=np.uint64)
    h1, h2 = _hash_pair_bits(seed, indices, column)
    v = np.pi * _to_open_unit(h1)
    w = -np.log(_to_open_unit(h2))
    return v, w


def stable_transform(gap, v, w):
    """Skewed-stable variate Z from an angle/exponential pair, evaluated in
    log domain: exp(log sin(a v) - (1/a) log sin v + (gap/a)(log sin(v gap)
    - log w)) with a = 1 - gap."""
    alpha = 1.0 - gap
    v = np.asarray(v, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    return np.exp(np.log(np.sin(alpha * v)) - (1.0 / alpha) * np.log(np.sin(v))
                  + (gap / alpha) * (np.log(np.sin(v * gap)) - np.log(w)))


def weight_block(seed, gap, indices, k):
    """Dense (len(indices), k) block of projection weights."""
    indices = np.ascontiguousarray(indices, dtype=np.uint64)
    out = np.empty((len(indices), k))
    for j in range(k):
        v, w = uniform_exp_pairs(seed, indices, j)
        out[:, j] = stable_transform(gap, v, w)
    return out


def accumulate(seed, gap, indices, increments, x):
    """x[j] += increment * weight(index, j) for every update, in place."""
    indices = np.ascontiguousarray(indices, dtype=np.uint64)
    increments = np.ascontiguousarray(increments, dtype=np.float64)
    k = len(x)
    for lo in range(0, len(indices), _BLOCK):
        hi = min(lo + _BLOCK, len(indices))
        block = weight_block(seed, gap, indices[lo:hi], k)
        x += increments[lo:hi] @ block


def stable_minima(seed, gap, start, stop, k):
    """Per-trial minimum over k weights, trials indexed start..stop-1."""
    indices = np.arange(start, stop, dtype=np.uint64)
    out = None
    for j in range(k):
        v, w = uniform_exp_pairs(seed, indices, j)
        z = stable_transform(gap, v, w)
        out = z if out is None else np.minimum(out, z)
    return out
