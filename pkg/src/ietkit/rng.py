"""Deterministic 64-bit PRNG for reproducible experiments.

The generator is SplitMix64.  Its entire state is one 64-bit word and the
update function is::

    state  = (state + 0x9E3779B97F4A7C15) mod 2**64        # golden gamma
    z      = state
    z      = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2**64
    z      = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2**64
    output = z ^ (z >> 31)

Sub-seed for sample ``i`` of a run seeded with ``s`` is the ``i``-th output
of SplitMix64 seeded with ``s``; each sample then draws from a fresh
generator seeded with its sub-seed.  Results are therefore independent of
execution order and worker count.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Sequential SplitMix64 stream."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        return _mix(self._state)

    def bits(self, nbits: int) -> int:
        """The next ``nbits`` bits as an integer in [0, 2**nbits)."""
        out = 0
        filled = 0
        while filled < nbits:
            out = (out << 64) | self.next64()
            filled += 64
        return out >> (filled - nbits)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], by rejection sampling."""
        if hi < lo:
            raise ValueError("empty range")
        span = hi - lo + 1
        nbits = span.bit_length()
        while True:
            v = self.bits(nbits)
            if v < span:
                return lo + v

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(0, i)
            items[i], items[j] = items[j], items[i]


def subseed(seed: int, index: int) -> int:
    """Sub-seed for sample ``index``: the index-th output of the master stream."""
    if index < 0:
        raise ValueError("index must be nonnegative")
    return _mix((seed + (index + 1) * _GAMMA) & _MASK64)
