"""
SplitMix64 streams: one independent, replayable stream per Monte Carlo trial.

The Python class and the jitted helpers below implement the same generator
bit for bit; samplers hand the integer state to a kernel and store back the
state it returns.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """SplitMix64 output finalizer, a bijection on 64-bit integers."""
    z = ((x ^ (x >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


class RngStream:
    """
    SplitMix64 generator seeded from ``(master_seed, stream_index)``.

    The initial state is ``master_seed ^ mix64(stream_index * GOLDEN)``.
    Without the finalizer, stream ``i`` would be stream 0 advanced by ``i``
    draws, since the generator itself steps by ``GOLDEN``.  Stream 0 starts
    at ``master_seed`` either way.
    """

    def __init__(self, master_seed: int, stream_index: int = 0):
        if not (0 <= master_seed <= MASK64 and 0 <= stream_index <= MASK64):
            raise ValueError("seed and stream index must be unsigned 64-bit integers")
        self.master_seed = master_seed
        self.stream_index = stream_index
        self.state = master_seed ^ mix64((stream_index * GOLDEN) & MASK64)

    def __repr__(self):
        return f"RngStream(master_seed={self.master_seed}, stream_index={self.stream_index})"

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def randbelow(self, k: int) -> int:
        """Uniform integer in ``[0, k)`` by rejection (no modulo bias)."""
        if k < 1:
            raise ValueError("k must be positive")
        threshold = (-k) % (1 << 64) % k
        while True:
            x = self.next_u64()
            if x >= threshold:
                return x % k

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates, same draw order as the jitted kernels."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def permutation(self, n: int) -> list[int]:
        p = list(range(n))
        self.shuffle(p)
        return p


_GOLDEN = np.uint64(GOLDEN)
_MIX1 = np.uint64(MIX1)
_MIX2 = np.uint64(MIX2)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)


@njit(cache=True, nogil=True)
def next_u64(state):
    state = np.uint64(state) + _GOLDEN
    z = state
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31), state


@njit(cache=True, nogil=True)
def randbelow(state, k):
    """Returns ``(value, new_state)`` for a uniform draw from ``[0, k)``."""
    state = np.uint64(state)
    kk = np.uint64(k)
    threshold = (np.uint64(0) - kk) % kk
    while True:
        x, state = next_u64(state)
        if x >= threshold:
            return np.int64(x % kk), state


@njit(cache=True, nogil=True)
def shuffle_inplace(arr, state):
    state = np.uint64(state)
    for i in range(arr.size - 1, 0, -1):
        j, state = randbelow(state, i + 1)
        tmp = arr[i]
        arr[i] = arr[j]
        arr[j] = tmp
    return state


def to_kernel_state(stream: RngStream) -> np.uint64:
    return np.uint64(stream.state)


def from_kernel_state(stream: RngStream, state) -> None:
    stream.state = int(state)
