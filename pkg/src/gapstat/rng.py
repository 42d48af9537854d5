"""SplitMix64: a tiny counter-based 64-bit generator.

Output ``i`` (0-based) of a stream seeded with ``s`` is
``mix64(s + (i + 1) * GOLDEN)`` modulo 2**64, where ``mix64`` is the
SplitMix64 finalizer.  Because each output depends only on its index the
stream vectorizes cleanly with numpy and is reproducible on any platform.
Doubles are formed from the top 53 bits, so they lie in [0, 1).
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a Python int (taken modulo 2**64)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    # uint64 array arithmetic wraps modulo 2**64
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Sequential view over the SplitMix64 stream for a given seed."""

    def __init__(self, seed: int):
        self.seed = int(seed) & MASK64
        self.position = 0

    def next_u64(self, size: int) -> np.ndarray:
        idx = np.arange(self.position + 1, self.position + 1 + size, dtype=np.uint64)
        self.position += size
        return _mix64_array(np.uint64(self.seed) + idx * np.uint64(GOLDEN))

    def random(self, size: int) -> np.ndarray:
        """``size`` doubles uniform on [0, 1) with 53 random bits each."""
        bits = self.next_u64(size) >> np.uint64(11)
        return bits.astype(np.float64) * (1.0 / (1 << 53))
