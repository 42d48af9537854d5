import numpy as np

from gapstat.rng import MASK64, SplitMix64, mix64


def _reference_stream(seed, count):
    # textbook sequential SplitMix64
    state = seed
    out = []
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        out.append(z ^ (z >> 31))
    return out


def test_known_first_output():
    # first output of SplitMix64 seeded with 0
    assert mix64(0x9E3779B97F4A7C15) == 0xE220A8397B1DCDAF


def test_vectorized_stream_matches_sequential():
    for seed in (0, 1, 2**63 + 12345, MASK64):
        got = SplitMix64(seed).next_u64(50).tolist()
        assert got == _reference_stream(seed, 50)


def test_stream_continues_across_calls():
    a = SplitMix64(9)
    joined = np.concatenate([a.next_u64(3), a.next_u64(4)])
    assert joined.tolist() == SplitMix64(9).next_u64(7).tolist()


def test_random_range_and_moments():
    u = SplitMix64(1).random(200_000)
    assert u.min() >= 0.0 and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 0.005
    assert abs(u.var() - 1 / 12) < 0.002
