"""Seeded stream contracts: determinism, ranges, distributions."""

import math

import pytest

from qpso.rng import RngStream, derive_seed


def test_same_seed_gives_identical_sequences():
    a = RngStream(42)
    b = RngStream(42)
    draws_a = [a.uniform01() for _ in range(100)]
    draws_b = [b.uniform01() for _ in range(100)]
    assert draws_a == draws_b
    assert len(set(draws_a)) > 90  # draws are distinct values


def test_first_draws_in_unit_interval():
    s = RngStream(42)
    first, second = s.uniform01(), s.uniform01()
    assert first != second
    assert 0.0 <= first < 1.0 and 0.0 <= second < 1.0


def test_uniform01_mean_large_sample():
    s = RngStream(7)
    n = 10 ** 6
    total = 0.0
    top = 0.0
    for _ in range(n):
        u = s.uniform01()
        total += u
        if u > top:
            top = u
    assert abs(total / n - 0.5) < 0.005
    assert top < 1.0  # 1.0 is unreachable


def test_different_seeds_differ():
    assert [RngStream(1).uniform01() for _ in range(5)] != \
           [RngStream(2).uniform01() for _ in range(5)]


def test_seed_validation():
    with pytest.raises(ValueError):
        RngStream(-1)
    with pytest.raises(ValueError):
        RngStream(1 << 64)
    with pytest.raises(TypeError):
        RngStream(1.5)


def test_uniform_open01_redraws_zero():
    class ZeroFirst(RngStream):
        def __init__(self):
            super().__init__(0)
            self._script = [0.0, 0.0, 0.25]

        def uniform01(self):
            return self._script.pop(0)

    assert ZeroFirst().uniform_open01() == 0.25


def test_cauchy_median_is_zero():
    class HalfStream(RngStream):
        def uniform01(self):
            return 0.5

    assert HalfStream(0).cauchy_standard() == 0.0


def test_cauchy_cdf_fractions():
    s = RngStream(2024)
    n = 10 ** 6
    inside = 0
    below_one = 0
    for _ in range(n):
        x = s.cauchy_standard()
        if -1.0 <= x <= 1.0:
            inside += 1
        if x <= 1.0:
            below_one += 1
    assert abs(inside / n - 0.5) < 0.01
    assert abs(below_one / n - 0.75) < 0.01


def test_cauchy_quantiles_match_inverse_cdf():
    s = RngStream(99)
    n = 10 ** 6
    sample = sorted(s.cauchy_standard() for _ in range(n))
    for q in (0.6, 0.75, 0.9):
        expected = math.tan(math.pi * (q - 0.5))
        observed = sample[int(q * n)]
        assert abs(observed - expected) / expected < 0.02


def test_uniform_in_rejects_bad_interval():
    s = RngStream(0)
    with pytest.raises(ValueError):
        s.uniform_in(1.0, 1.0)
    with pytest.raises(ValueError):
        s.uniform_in(2.0, -2.0)


def test_uniform_in_unit_interval_matches_uniform01():
    a = RngStream(5)
    b = RngStream(5)
    assert [a.uniform_in(0.0, 1.0) for _ in range(50)] == \
           [b.uniform01() for _ in range(50)]


def test_uniform_in_range_contract():
    s = RngStream(17)
    for _ in range(10 ** 5):
        v = s.uniform_in(-100.0, 100.0)
        assert -100.0 <= v < 100.0


def test_uniform_in_symmetric_mean():
    s = RngStream(3)
    n = 10 ** 6
    total = 0.0
    for _ in range(n):
        total += s.uniform_in(-5.12, 5.12)
    assert abs(total / n) < 0.05


def test_derive_seed_deterministic_and_spread():
    assert derive_seed(123, 0) == derive_seed(123, 0)
    children = {derive_seed(123, i) for i in range(1000)}
    assert len(children) == 1000
    assert derive_seed(123, 0) != derive_seed(124, 0)
    with pytest.raises(ValueError):
        derive_seed(123, -1)


def test_spawn_matches_derive_seed():
    parent = RngStream(55)
    child = parent.spawn(3)
    assert child.seed == derive_seed(55, 3)
    # spawning does not consume parent state
    assert RngStream(55).uniform01() == parent.uniform01()
