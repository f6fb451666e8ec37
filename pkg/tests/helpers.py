"""Shared test utilities."""

import math


class FakeStream:
    """Stream stub with scripted draws for exact-arithmetic checks."""

    def __init__(self, uniforms=(), cauchys=()):
        self._uniforms = list(uniforms)
        self._cauchys = list(cauchys)

    def uniform01(self):
        return self._uniforms.pop(0)

    def uniform_open01(self):
        u = self._uniforms.pop(0)
        while u == 0.0:
            u = self._uniforms.pop(0)
        return u

    def cauchy_standard(self):
        return self._cauchys.pop(0)

    def uniform_in(self, lo, hi):
        if not lo < hi:
            raise ValueError("lo < hi required")
        return lo + (hi - lo) * self.uniform01()

    @property
    def drained(self):
        return not self._uniforms and not self._cauchys


def two_pass_moments(values):
    """Independent plug-in mean/variance oracle."""
    n = len(values)
    mean = sum(values) / n
    variance = sum((v - mean) ** 2 for v in values) / n
    return mean, variance


def cauchy_tail(n, lam, xi):
    """Closed-form P(|n^-lam * C| > xi) for a standard Cauchy C."""
    return 1.0 - (2.0 / math.pi) * math.atan(xi * n ** lam)
