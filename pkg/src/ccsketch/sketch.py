"""The projection sketch itself: k accumulators under turnstile updates,
an exact first-moment counter, and the sample-minimum moment estimate.

The sketch is the k-vector X = A x R for the current frequency vector A and
the virtual weight matrix R (regenerated on demand, never stored).  Because
X is linear in A, sketches over disjoint stream shards merge by plain
addition.  The first moment rides along in an ordinary counter: every
entropy formula needs it and it costs nothing.

Under strict-turnstile input (all current frequencies non-negative, some
positive) every accumulator is strictly positive, so a non-positive sample
minimum is treated as a data-integrity signal rather than clamped.

``domain_size`` exists purely for index validation; the math never uses D.
Pass ``domain_size=None`` for hashed key spaces (e.g. 2**64 flow keys)
where validation is off.
"""

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .errors import (ConfigurationError, DegenerateInputError, DomainError,
                     FormatError, IncompatibleSketchError,
                     NonPositiveMinimumError, StreamIndexError)

__all__ = ["StreamUpdate", "SketchConfig", "CCSketch", "MomentEstimate",
           "dense_project", "exact_moment", "save_sketch", "load_sketch",
           "sketch_to_bytes", "sketch_from_bytes"]

_MAGIC = b"CCSK"
_VERSION = 1
_HEADER = struct.Struct("<dIQQd")  # gap, k, seed, domain (0=unbounded), f1


@dataclass(frozen=True)
class StreamUpdate:
    """One turnstile arrival: frequency `index` changes by `increment`
    (positive insertion, negative deletion)."""

    index: int
    increment: float


@dataclass(frozen=True)
class SketchConfig:
    """Fully determines a sketch: the virtual projection matrix is a pure
    function of (seed, gap) and the width k."""

    gap: float
    k: int
    seed: int
    domain_size: int | None = None

    def __post_init__(self):
        if not (0.0 < self.gap < 0.5):
            raise ConfigurationError(f"gap must be in (0, 0.5); got {self.gap}")
        if not (isinstance(self.k, int) and 1 <= self.k < 2**32):
            raise ConfigurationError(f"k must be an integer >= 1; got {self.k}")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer")
        if self.domain_size is not None and not (1 <= self.domain_size < 2**64):
            raise ConfigurationError(
                f"domain_size must be in [1, 2**64) or None; got {self.domain_size}")

    @property
    def alpha(self):
        return 1.0 - self.gap

    def check_index(self, index):
        if not (0 <= index < 2**64):
            raise StreamIndexError(f"index {index} is not a 64-bit unsigned integer")
        if self.domain_size is not None and index >= self.domain_size:
            raise StreamIndexError(
                f"index {index} outside declared domain of size {self.domain_size}")


@dataclass(frozen=True)
class MomentEstimate:
    """An estimated frequency moment and the order it was computed at."""

    value: float
    alpha: float
    k_used: int


@dataclass
class CCSketch:
    """Compressed-counting sketch state: config, the k accumulators, and
    the exact running sum of increments."""

    config: SketchConfig
    x: np.ndarray = field(default=None)
    f1: float = 0.0

    def __post_init__(self):
        if self.x is None:
            self.x = np.zeros(self.config.k)
        else:
            self.x = np.asarray(self.x, dtype=np.float64).copy()
            if self.x.shape != (self.config.k,):
                raise ConfigurationError(
                    f"accumulator vector has shape {self.x.shape}, "
                    f"expected ({self.config.k},)")

    def update(self, index, increment):
        """Apply one turnstile arrival: x[j] += increment * r[index, j]."""
        self.config.check_index(index)
        if not math.isfinite(increment):
            raise DomainError(f"increment must be finite; got {increment}")
        self.update_batch(np.array([index], dtype=np.uint64),
                          np.array([increment], dtype=np.float64))

    def update_batch(self, indices, increments):
        """Apply many arrivals at once (same result as one-by-one up to
        float reassociation in the numpy backend)."""
        indices = np.asarray(indices)
        increments = np.asarray(increments, dtype=np.float64)
        if indices.shape != increments.shape:
            raise DomainError("indices and increments must have equal length")
        if len(indices) == 0:
            return
        if np.any(indices < 0):
            raise StreamIndexError("negative stream index")
        if self.config.domain_size is not None and np.any(
                indices.astype(np.uint64) >= np.uint64(self.config.domain_size)):
            bad = int(indices[indices.astype(np.uint64)
                              >= np.uint64(self.config.domain_size)][0])
            raise StreamIndexError(
                f"index {bad} outside declared domain of size "
                f"{self.config.domain_size}")
        if not np.all(np.isfinite(increments)):
            raise DomainError("increments must be finite")
        kernels.accumulate(self.config.seed, self.config.gap,
                           indices.astype(np.uint64), increments, self.x)
        self.f1 += float(increments.sum())

    def merge(self, other):
        """Sketch of the concatenated streams; exact by linearity."""
        if not isinstance(other, CCSketch) or other.config != self.config:
            raise IncompatibleSketchError(
                "sketches must share an identical configuration (including "
                "seed) to merge")
        return CCSketch(self.config, self.x + other.x, self.f1 + other.f1)

    def estimate_moment(self):
        """Sample-minimum estimate: (min_j x_j) ** alpha.

        A non-positive minimum means non-strict-turnstile data, an empty
        stream, or numeric cancellation; it is an error, never a clamp."""
        m = float(self.x.min())
        if not (m > 0.0):
            raise NonPositiveMinimumError(
                f"sample minimum {m} is not positive: the stream is empty, "
                f"violates the strict-turnstile model, or cancelled to zero")
        alpha = self.config.alpha
        return MomentEstimate(math.exp(alpha * math.log(m)), alpha, self.config.k)


def dense_project(vector, config):
    """Project an explicit frequency vector (test/oracle path for the
    streaming updates): x[j] = sum_i vector[i] * r[i, j]."""
    vector = np.asarray(vector, dtype=np.float64)
    if vector.ndim != 1:
        raise DomainError("vector must be one-dimensional")
    if config.domain_size is not None and len(vector) != config.domain_size:
        raise DomainError(
            f"vector length {len(vector)} != domain size {config.domain_size}")
    sketch = CCSketch(config)
    sketch.update_batch(np.arange(len(vector), dtype=np.uint64), vector)
    return sketch


def exact_moment(vector, alpha):
    """Brute-force moment sum_i vector[i]**alpha with 0**alpha := 0.

    The oracle the sketch is judged against; requires non-negative entries
    with at least one positive."""
    if not (alpha > 0.0 and math.isfinite(alpha)):
        raise DomainError(f"alpha must be positive and finite; got {alpha}")
    vector = np.asarray(vector, dtype=np.float64)
    if np.any(vector < 0.0) or not np.all(np.isfinite(vector)):
        raise DomainError("entries must be non-negative and finite")
    positive = vector[vector > 0.0]
    if len(positive) == 0:
        raise DegenerateInputError("all-zero vector has no defined moment here")
    return float(np.exp(alpha * np.log(positive)).sum())


def sketch_to_bytes(sketch):
    """Serialize: magic 'CCSK', version 0x01, then little-endian gap f64,
    k u32, seed u64, domain u64 (0 = unbounded), f1 f64, x as k f64s."""
    cfg = sketch.config
    domain = 0 if cfg.domain_size is None else cfg.domain_size
    header = _MAGIC + bytes([_VERSION]) + _HEADER.pack(
        cfg.gap, cfg.k, cfg.seed, domain, sketch.f1)
    return header + np.ascontiguousarray(sketch.x, dtype="<f8").tobytes()


def sketch_from_bytes(blob):
    if len(blob) < 5 + _HEADER.size:
        raise FormatError("sketch file truncated")
    if blob[:4] != _MAGIC:
        raise FormatError(f"bad magic bytes {blob[:4]!r}; not a sketch file")
    if blob[4] != _VERSION:
        raise FormatError(f"unsupported sketch format version {blob[4]}")
    gap, k, seed, domain, f1 = _HEADER.unpack(blob[5:5 + _HEADER.size])
    payload = blob[5 + _HEADER.size:]
    if len(payload) != 8 * k:
        raise FormatError(
            f"payload holds {len(payload)} bytes, expected {8 * k}")
    x = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    config = SketchConfig(gap, int(k), int(seed),
                          None if domain == 0 else int(domain))
    sketch = CCSketch(config, x, float(f1))
    return sketch


def save_sketch(sketch, path):
    with open(path, "wb") as fh:
        fh.write(sketch_to_bytes(sketch))


def load_sketch(path):
    with open(path, "rb") as fh:
        return sketch_from_bytes(fh.read())
