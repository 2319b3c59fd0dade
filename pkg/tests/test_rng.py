from __future__ import annotations

import numpy as np
import pytest

from tannercycles.rng import (
    GOLDEN,
    MASK64,
    RngStream,
    from_kernel_state,
    mix64,
    next_u64,
    randbelow,
    shuffle_inplace,
    to_kernel_state,
)


def test_stream_zero_starts_at_master_seed():
    assert RngStream(12345, 0).state == 12345


def test_splitmix_reference_values():
    # published SplitMix64 outputs for seed 0
    r = RngStream(0, 0)
    assert r.next_u64() == 0xE220A8397B1DCDAF
    assert r.next_u64() == 0x6E789E6AA1B965F4


def test_streams_are_not_shifted_copies():
    a = [RngStream(7, 0).next_u64() for _ in range(1)]
    s0 = RngStream(7, 0)
    first = [s0.next_u64() for _ in range(50)]
    for i in range(1, 20):
        assert RngStream(7, i).next_u64() not in first
    assert a[0] == first[0]


def test_mix64_is_reference_finalizer():
    assert mix64(GOLDEN) == 0xE220A8397B1DCDAF
    assert mix64(0) == 0


def test_determinism():
    a, b = RngStream(99, 3), RngStream(99, 3)
    assert [a.next_u64() for _ in range(10)] == [b.next_u64() for _ in range(10)]


def test_randbelow_range_and_errors():
    r = RngStream(1, 1)
    assert all(0 <= r.randbelow(7) < 7 for _ in range(500))
    assert r.randbelow(1) == 0
    with pytest.raises(ValueError):
        r.randbelow(0)
    with pytest.raises(ValueError):
        RngStream(-1)
    with pytest.raises(ValueError):
        RngStream(MASK64 + 1)


def test_randbelow_uniform():
    r = RngStream(5, 0)
    counts = np.bincount([r.randbelow(6) for _ in range(60000)], minlength=6)
    assert np.all(np.abs(counts - 10000) < 5 * np.sqrt(10000 * 5 / 6))


def test_kernels_match_python():
    py = RngStream(2024, 17)
    state = to_kernel_state(RngStream(2024, 17))
    for k in (1, 2, 3, 10, 1000, 2**40 + 3):
        for _ in range(50):
            v, state = randbelow(np.uint64(state), k)
            assert int(v) == py.randbelow(k)
    x, state = next_u64(np.uint64(state))
    assert int(x) == py.next_u64()


def test_shuffle_kernel_matches_python():
    py = RngStream(3, 4)
    k = RngStream(3, 4)
    arr = np.arange(30, dtype=np.int64)
    state = shuffle_inplace(arr, to_kernel_state(k))
    from_kernel_state(k, state)
    assert arr.tolist() == py.permutation(30)
    assert k.state == py.state
