"""Counter-based, fully reproducible random number streams.

The generator is frozen so that golden files and experiment reports stay
byte-stable forever.  Contract (do not change without regenerating every
golden file):

    mix64(z):  the SplitMix64 finalizer
        z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9   (mod 2^64)
        z ^= z >> 27;  z *= 0x94D049BB133111EB   (mod 2^64)
        z ^= z >> 31

    stream key for (master_seed, stream_id):
        key = mix64(master_seed ^ mix64(stream_id + GOLDEN))

    i-th raw draw of a stream (i = 1, 2, ...):
        u_i = mix64(key + i * GOLDEN)            (mod 2^64)

    uniform in [0, 1): top 53 bits of u_i, scaled by 2^-53.

GOLDEN = 0x9E3779B97F4A7C15 (2^64 / golden ratio).  Every draw is a pure
function of (master_seed, stream_id, i): streams can be consumed scalar
or in vectorized blocks and always produce the same sequence.
"""

from __future__ import annotations

import numpy as np

_M64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MULT1 = 0xBF58476D1CE4E5B9
_MULT2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 finalizer on 64-bit integers."""
    z &= _M64
    z = ((z ^ (z >> 30)) * _MULT1) & _M64
    z = ((z ^ (z >> 27)) * _MULT2) & _M64
    return z ^ (z >> 31)


class RngStream:
    """One independent stream, addressed by (master_seed, stream_id).

    Single consumer: the draw counter advances on every call.  Parallel
    work should use distinct stream_ids rather than sharing a stream.
    """

    __slots__ = ("master_seed", "stream_id", "_key", "_count")

    def __init__(self, master_seed: int, stream_id: int = 0):
        self.master_seed = master_seed & _M64
        self.stream_id = stream_id & _M64
        self._key = mix64(self.master_seed ^ mix64((self.stream_id + GOLDEN) & _M64))
        self._count = 0

    def next_u64(self) -> int:
        self._count += 1
        return mix64((self._key + self._count * GOLDEN) & _M64)

    def uniform(self) -> float:
        """Next uniform variate in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniforms(self, count: int) -> np.ndarray:
        """Next `count` uniforms as a float64 array (same sequence as uniform())."""
        if count < 0:
            raise ValueError("count must be >= 0")
        start = self._count + 1
        self._count += count
        idx = np.arange(start, start + count, dtype=np.uint64)
        z = idx * np.uint64(GOLDEN) + np.uint64(self._key)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MULT1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MULT2)
        z ^= z >> np.uint64(31)
        return (z >> np.uint64(11)) * 2.0**-53

    def randint(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection on the top 53 bits."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        # 53 random bits, rejection-sampled to kill modulo bias
        limit = (1 << 53) - ((1 << 53) % bound)
        while True:
            r = self.next_u64() >> 11
            if r < limit:
                return r % bound

    def shuffled(self, items: list) -> list:
        """Fisher-Yates shuffle of a copy of `items`."""
        out = list(items)
        for i in range(len(out) - 1, 0, -1):
            j = self.randint(i + 1)
            out[i], out[j] = out[j], out[i]
        return out

    def __repr__(self) -> str:
        return f"RngStream(master_seed={self.master_seed}, stream_id={self.stream_id})"
