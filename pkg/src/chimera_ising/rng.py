"""Small portable pseudo-random generator for reproducible fixtures.

Instance files generated from a seed must be identical across platforms
and languages, so the generator is pinned by its update equations rather
than delegated to any runtime's default.  This is the well-known 64-bit
splitmix generator.  All arithmetic is modulo 2^64:

    state <- state + 0x9E3779B97F4A7C15
    z <- state
    z <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9
    z <- (z XOR (z >> 27)) * 0x94D049BB133111EB
    output  z XOR (z >> 31)

Derived draws, in terms of one raw 64-bit output ``z`` each:

* sign: +1 if the top bit of z is set, else -1
* unit: (z >> 11) / 2^53, uniform on [0, 1)

and the Gaussian draw consumes two raw outputs via the Box-Muller map
sqrt(-2 ln u1) * cos(2 pi u2) with u1 in (0, 1] (first draw, shifted to
avoid log 0) and u2 in [0, 1).
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


class SplitMix64:
    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_raw(self) -> int:
        """Next 64-bit output."""
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MUL1) & _MASK
        z = ((z ^ (z >> 27)) * _MUL2) & _MASK
        return z ^ (z >> 31)

    def next_sign(self) -> float:
        return 1.0 if self.next_raw() >> 63 else -1.0

    def next_unit(self) -> float:
        """Uniform on [0, 1) with 53 random bits."""
        return (self.next_raw() >> 11) * 2.0 ** -53

    def next_uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.next_unit()

    def next_gaussian(self, mean: float, sd: float) -> float:
        u1 = ((self.next_raw() >> 11) + 1) * 2.0 ** -53
        u2 = self.next_unit()
        z = math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
        return mean + sd * z
