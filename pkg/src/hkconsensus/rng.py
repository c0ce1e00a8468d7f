"""Counter-based uniform random numbers for reproducible Monte Carlo.

Every random draw in the walk estimators is addressed by an explicit
64-bit counter: draw number ``j`` of walk ``w`` lives at counter
``w * stride + j``. The mapping (seed, counter) -> uniform is a SplitMix64
step, so draws can be produced in any order -- scalar loop, vectorized
batch, or parallel workers -- and the result is bit-identical to a
sequential pass for the same seed.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_DERIVE_SALT = np.uint64(0xD1B54A32D192ED03)
_INV_2_53 = float(2.0**-53)

# numpy integer arithmetic wraps mod 2**64, which is exactly what SplitMix64 needs;
# silence the scalar overflow warnings locally rather than globally.
_WRAP = {"over": "ignore"}


def mix64(z: np.ndarray | np.uint64) -> np.ndarray | np.uint64:
    """SplitMix64 finalizer: avalanche a 64-bit word (vectorized)."""
    with np.errstate(**_WRAP):
        z = np.uint64(z) if np.isscalar(z) else z.astype(np.uint64, copy=True)
        z ^= z >> np.uint64(30)
        z *= _MIX1
        z ^= z >> np.uint64(27)
        z *= _MIX2
        z ^= z >> np.uint64(31)
    return z


def uniforms(seed: int, counters: np.ndarray) -> np.ndarray:
    """Uniforms in [0, 1) at the given counter positions of the stream `seed`.

    counters: uint64 array (any shape). Returns float64 of the same shape.
    """
    with np.errstate(**_WRAP):
        state = np.uint64(seed) + (counters.astype(np.uint64) + np.uint64(1)) * _GOLDEN
    bits = mix64(state)
    return (bits >> np.uint64(11)).astype(np.float64) * _INV_2_53


def uniform_at(seed: int, counter: int) -> float:
    """Scalar convenience wrapper around `uniforms`."""
    return float(uniforms(seed, np.array([counter], dtype=np.uint64))[0])


def derive_seed(seed: int, index: int) -> int:
    """Child stream seed for sub-task `index` (trace rows, quadrature samples).

    Mixing keeps sibling streams decorrelated even for adjacent parent seeds.
    """
    with np.errstate(**_WRAP):
        z = (np.uint64(seed) ^ _DERIVE_SALT) + (np.uint64(index) + np.uint64(1)) * _GOLDEN
    return int(mix64(z))


class CounterStream:
    """Sequential view of a counter-based stream; satisfies the tiny
    `.random()` protocol the scalar walk helpers expect."""

    def __init__(self, seed: int, start: int = 0):
        self.seed = int(seed)
        self.position = int(start)

    def random(self) -> float:
        u = uniform_at(self.seed, self.position)
        self.position += 1
        return u
