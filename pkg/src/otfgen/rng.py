"""SplitMix64 pseudo-random generator.

Chosen because the whole algorithm is three integer mixes with published
constants, so any language can reproduce a parameter stream bit for bit.
The generator state advances exactly once per scalar draw; replay
correctness depends on that discipline, so no draw helper below ever
consumes more than one step.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

# Weyl increment and the two finalizer multipliers of SplitMix64.
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_MULT_1 = 0xBF58476D1CE4E5B9
MIX_MULT_2 = 0x94D049BB133111EB

# A unit draw keeps the top 53 bits so the result is an exact multiple
# of 2**-53, uniform on [0, 1).
UNIT_SCALE = 2.0 ** -53


class SplitMix64:
    """Deterministic 64-bit generator with a single u64 of state."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        """Advance the state once and return the mixed 64-bit output."""
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * MIX_MULT_1) & MASK64
        z = ((z ^ (z >> 27)) * MIX_MULT_2) & MASK64
        return z ^ (z >> 31)

    def next_unit(self) -> float:
        """One draw, mapped to a double in [0, 1)."""
        return (self.next_u64() >> 11) * UNIT_SCALE

    def next_index(self, n: int) -> int:
        """One draw, mapped to an index in [0, n).

        Plain modulo reduction: the bias for n far below 2**64 is
        immaterial and the mapping stays trivially portable.
        """
        if n <= 0:
            raise ValueError("index range must be positive")
        return self.next_u64() % n
