"""Deterministic 64-bit random stream (SplitMix64).

SplitMix64 is used for every random decision in the error pipeline so
that a (word, seed) pair yields the same output on any platform or in
any reimplementation. The stream per call is:

    state = (state + 0x9E3779B97F4A7C15) mod 2^64
    z = state
    z = (z xor (z >> 30)) * 0xBF58476D1CE4E5B9  mod 2^64
    z = (z xor (z >> 27)) * 0x94D049BB133111EB  mod 2^64
    output = z xor (z >> 31)

Floats take the top 53 bits of the output, giving uniform values in
[0, 1). Bounded choices use ``floor(float * n)``.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV_2_53 = 1.0 / (1 << 53)


def mix64(x: int) -> int:
    """SplitMix64 finalizer; a bijection on 64-bit integers."""
    z = x & _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def derive_word_seed(global_seed: int, word_index: int) -> int:
    """Per-word seed: ``mix64(mix64(global_seed) xor mix64(word_index))``.

    Both inner mixes are bijections, so distinct word indices under one
    global seed can never collide, independent of processing order.
    """
    return mix64(mix64(global_seed) ^ mix64(word_index))


class SplitMix64:
    """Sequential SplitMix64 stream seeded with a 64-bit value."""

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK

    def next_u64(self) -> int:
        s = (self._state + _GOLDEN) & _MASK
        self._state = s
        z = ((s ^ (s >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def next_float(self) -> float:
        return (self.next_u64() >> 11) * _INV_2_53

    def bernoulli(self, p: float) -> bool:
        return self.next_float() < p

    def choice_index(self, n: int) -> int:
        """Uniform index in [0, n). ``n`` must be positive."""
        idx = int(self.next_float() * n)
        return idx if idx < n else n - 1
