from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from vilenkin import (InvalidBasisError, OutOfRangeError, ResolutionTooLargeError, UndefinedMeanError,
                      build_basis, digit_add, expand, harmonic, harmonic_exact, harmonic_numbers, q_index,
                      walsh)

patterns = st.lists(st.integers(2, 5), min_size=1, max_size=3).map(tuple)


def test_walsh_powers():
    assert walsh(4).M == (1, 2, 4, 8, 16)


def test_mixed_powers():
    assert build_basis((2, 3), 4).M == (1, 2, 6, 12, 36)


@pytest.mark.parametrize("pattern,N", [((1,), 1), ((), 3), ((2,), 0), ((2, 0), 2)])
def test_invalid_basis(pattern, N):
    with pytest.raises(InvalidBasisError):
        build_basis(pattern, N)


def test_overflow():
    with pytest.raises(ResolutionTooLargeError):
        build_basis((2,), 64)


def test_expand_examples():
    e = expand(walsh(4), 5)
    assert e.digits[:3] == (1, 0, 1) and e.order == 2
    e = expand(build_basis((2, 3), 2), 5)
    assert e.digits == (1, 2) and e.order == 1
    assert expand(walsh(3), 0).order == -1
    with pytest.raises(OutOfRangeError):
        expand(walsh(3), 8)


def test_q_index_examples():
    assert q_index(walsh(5), 2) == 21
    assert q_index(walsh(1), 0) == 1
    assert q_index(build_basis((2, 3), 3), 1) == 7
    with pytest.raises(OutOfRangeError):
        q_index(walsh(4), 2)


def test_harmonic_examples():
    assert harmonic(2) == 1.0
    assert harmonic_exact(5) == Fraction(25, 12)
    assert harmonic(5) == pytest.approx(25 / 12, rel=1e-15)
    with pytest.raises(UndefinedMeanError):
        harmonic(1)


def test_harmonic_numbers_against_fractions():
    H = harmonic_numbers(300)
    for n in (2, 3, 17, 100, 301):
        assert H[n - 1] == pytest.approx(float(oracles.harmonic_fraction(n)), rel=1e-15)


def test_harmonic_large_n_continuity():
    # crossover between the summed and the digamma branch
    assert harmonic(10_001) == pytest.approx(harmonic(10_000) + 1 / 10_000, rel=1e-14)


@given(patterns, st.integers(1, 6), st.data())
def test_expand_roundtrip(pattern, N, data):
    b = build_basis(pattern, N)
    n = data.draw(st.integers(0, b.size - 1))
    e = expand(b, n)
    assert e.value(b) == n
    assert list(e.digits) == oracles.digits(pattern, N, n)


@given(patterns, st.integers(1, 5), st.data())
def test_digit_add_is_a_group_law(pattern, N, data):
    b = build_basis(pattern, N)
    a, c, d = (data.draw(st.integers(0, b.size - 1)) for _ in range(3))
    assert digit_add(b, a, 0) == a
    assert digit_add(b, a, c) == digit_add(b, c, a)
    assert digit_add(b, digit_add(b, a, c), d) == digit_add(b, a, digit_add(b, c, d))


def test_digit_table_matches_oracle():
    b = build_basis((2, 3), 4)
    assert np.array_equal(b.digit_table, oracles.digit_matrix((2, 3), 4))
