"""Deterministic random streams for reproducible optimizer runs.

Every stochastic draw in this package comes from :class:`RngStream`, a
xoshiro256++ generator seeded through SplitMix64.  The algorithm is fixed
so that a (seed, draw index) pair identifies one exact double on every
platform with IEEE-754 arithmetic.

Two stream kinds are exposed:

* ``uniform01`` / ``uniform_in`` -- uniform doubles, 53-bit resolution,
  half-open intervals.
* ``cauchy_standard`` -- standard Cauchy via the inverse CDF,
  ``tan(pi * (u - 0.5))``.

Parallel work derives independent child streams from a master seed with
:func:`derive_seed`; the rule is a pure function of (master seed, index),
so results never depend on scheduling order.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15  # SplitMix64 increment
_INV_2_53 = 1.0 / (1 << 53)


def _mix64(z: int) -> int:
    """SplitMix64 finalizer: avalanche a 64-bit word."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, index: int) -> int:
    """Child seed for run `index` under `master_seed`.

    Pure function; used by the experiment harness so that parallel runs
    get independent, order-free streams: ``seed_i = mix64(master + (i+1)*gamma)``.
    """
    if index < 0:
        raise ValueError("index must be >= 0")
    master_seed &= _MASK64
    return _mix64((master_seed + (index + 1) * _GAMMA) & _MASK64)


class RngStream:
    """xoshiro256++ stream owned by a single sequential consumer.

    Two streams built from the same seed produce identical draw
    sequences.  Not thread-safe by design: concurrent runs must each own
    a stream (see :func:`derive_seed`).
    """

    __slots__ = ("seed", "_s0", "_s1", "_s2", "_s3")

    def __init__(self, seed: int):
        if not isinstance(seed, int):
            raise TypeError("seed must be an integer")
        if seed < 0 or seed > _MASK64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        self.seed = seed
        # Standard xoshiro seeding: four SplitMix64 outputs.
        z = seed
        state = []
        for _ in range(4):
            z = (z + _GAMMA) & _MASK64
            state.append(_mix64(z))
        self._s0, self._s1, self._s2, self._s3 = state

    def _next64(self) -> int:
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        tmp = (s0 + s3) & _MASK64
        result = ((tmp << 23) | (tmp >> 41)) & _MASK64
        result = (result + s0) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & _MASK64
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return result

    def uniform01(self) -> float:
        """Next uniform double in [0, 1); 1.0 is unreachable."""
        return (self._next64() >> 11) * _INV_2_53

    def uniform_open01(self) -> float:
        """Uniform double in (0, 1): redraws on an exact 0.0.

        Used wherever ``log(1/u)`` appears, so the position update can
        never produce an infinity.
        """
        u = self.uniform01()
        while u == 0.0:
            u = self.uniform01()
        return u

    def cauchy_standard(self) -> float:
        """Standard Cauchy draw (density 1/(pi*(1+x^2))), inverse-CDF method."""
        return math.tan(math.pi * (self.uniform01() - 0.5))

    def uniform_in(self, lo: float, hi: float) -> float:
        """Uniform double in [lo, hi)."""
        if not lo < hi:
            raise ValueError(f"uniform_in requires lo < hi, got [{lo}, {hi})")
        v = lo + (hi - lo) * self.uniform01()
        if v >= hi:  # guards against rounding up at the top of huge ranges
            v = math.nextafter(hi, lo)
        return v

    def spawn(self, index: int) -> "RngStream":
        """Independent child stream number `index` of this stream's seed."""
        return RngStream(derive_seed(self.seed, index))
