"""Dense float64 linear algebra, activations, and seeded random streams.

All randomness in the library flows through :class:`RngStream`, a
counter-based Philox generator keyed by ``(master_seed, stream_id)``.
Equal keys replay identical sequences; distinct stream ids give
statistically independent streams, which is what makes ensemble training
reproducible regardless of how members are scheduled across workers.
"""

from __future__ import annotations

import numpy as np

from .errors import ContractViolationError

# Matrices are plain 2-D float64 numpy arrays throughout the library.
Matrix = np.ndarray


def as_matrix(values) -> Matrix:
    """Coerce to a 2-D float64 array, rejecting NaN/Inf and wrong rank."""
    m = np.asarray(values, dtype=np.float64)
    if m.ndim != 2:
        raise ContractViolationError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ContractViolationError("matrix contains NaN or Inf")
    return m


def identity(n: int) -> Matrix:
    return np.eye(int(n), dtype=np.float64)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Matrix product with explicit conformability checking."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ContractViolationError(
            f"matmul shape mismatch: ({a.shape[0]}x{a.shape[1]}) @ ({b.shape[0]}x{b.shape[1]})"
        )
    out = a @ b
    if not np.all(np.isfinite(out)):
        raise ContractViolationError("matmul produced non-finite values")
    return out


def sigmoid(x):
    """Numerically stable logistic function.

    Saturates to 0/1 at the extremes without overflowing; accepts scalars
    or arrays and preserves the input shape.
    """
    arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = np.empty_like(arr)
    pos = arr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-arr[pos]))
    ex = np.exp(arr[~pos])
    out[~pos] = ex / (1.0 + ex)
    if np.ndim(x) == 0:
        return float(out[0])
    return out.reshape(np.shape(x))


class RngStream:
    """Deterministic random substream of a master seed.

    Backed by numpy's counter-based Philox generator with the 128-bit key
    ``(master_seed, stream_id)``. A stream is stateful: draws advance it.
    Callers that need private randomness derive their own stream instead
    of sharing one.
    """

    def __init__(self, master_seed: int, stream_id: int):
        self.master_seed = int(master_seed)
        self.stream_id = int(stream_id)
        key = np.array(
            [self.master_seed % 2**64, self.stream_id % 2**64], dtype=np.uint64
        )
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def __repr__(self):
        return f"RngStream(master_seed={self.master_seed}, stream_id={self.stream_id})"

    def uniform(self, size=None):
        """Uniform draws on [0, 1)."""
        return self._gen.random(size)

    def normal(self, loc=0.0, scale=1.0, size=None):
        return self._gen.normal(loc, scale, size)

    def integers(self, low, high=None, size=None):
        """Integer draws on [low, high) (numpy half-open convention)."""
        return self._gen.integers(low, high, size)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def bernoulli(self, probs) -> np.ndarray:
        """Sample {0., 1.} with per-element success probabilities."""
        probs = np.asarray(probs, dtype=np.float64)
        return (self._gen.random(probs.shape) < probs).astype(np.float64)


def derive_stream(master_seed: int, stream_id: int) -> RngStream:
    """Create the deterministic random stream for ``(master_seed, stream_id)``."""
    return RngStream(master_seed, stream_id)
