import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from vilenkin import (GridFunction, IncompatibleOperandsError, Multiplier, OracleSizeError, Spectrum,
                      apply_multiplier, build_basis, character, constant, dirichlet, forward, inverse,
                      naive_forward, naive_inverse, partial_sum, walsh, zeros)
from vilenkin.transform import character_table

BASES = [((2,), 5), ((2, 3), 3), ((3, 4), 2), ((5, 2, 3), 3)]
cplx = st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False)


def test_character_examples():
    assert np.array_equal(character(walsh(3), 0).values, np.ones(8))
    assert np.array_equal(character(walsh(1), 1).values, [1, -1])
    got = character(build_basis((3,), 1), 1).values
    assert np.allclose(got, [1, cmath.exp(2j * cmath.pi / 3), cmath.exp(4j * cmath.pi / 3)], atol=1e-15)


@pytest.mark.parametrize("pattern,N", BASES)
def test_character_table_matches_exponentials(pattern, N):
    b = build_basis(pattern, N)
    got = character_table(b, np.arange(b.size))
    assert np.abs(got - oracles.character_matrix(pattern, N)).max() < 1e-13


def test_forward_examples():
    b = build_basis((2, 3), 3)
    assert np.allclose(forward(character(b, 7)).coeffs, Spectrum.unit(b, 7).coeffs, atol=1e-15)
    assert np.allclose(forward(constant(b, 2.5)).coeffs, 2.5 * Spectrum.unit(b, 0).coeffs, atol=1e-15)
    assert np.all(forward(zeros(b)).coeffs == 0)
    w = walsh(4)
    expected = np.zeros(16)
    expected[:5] = 1
    assert np.allclose(forward(dirichlet(w, 5, "naive")).coeffs, expected, atol=1e-14)


def test_inverse_examples():
    b = build_basis((3, 4), 2)
    assert np.allclose(inverse(Spectrum.unit(b, 0)).values, 1, atol=0)
    assert inverse(Spectrum.unit(b, 5)).allclose(character(b, 5), 1e-15)


@pytest.mark.parametrize("pattern,N", BASES)
def test_fast_matches_naive_and_fftn(pattern, N):
    b = build_basis(pattern, N)
    rng = np.random.default_rng(N)
    v = rng.standard_normal(b.size) + 1j * rng.standard_normal(b.size)
    f = GridFunction(b, v)
    fast = forward(f).coeffs
    assert np.abs(fast - naive_forward(f).coeffs).max() < 1e-12
    assert np.abs(fast - oracles.fft_forward(v, pattern, N)).max() < 1e-12
    C = oracles.character_matrix(pattern, N)
    assert np.abs(fast - C.conj() @ v / b.size).max() < 1e-12
    s = Spectrum(b, v)
    assert np.abs(inverse(s).values - naive_inverse(s).values).max() < 1e-11


def test_oracle_size_guard():
    with pytest.raises(OracleSizeError):
        naive_forward(constant(walsh(13)))


@given(st.sampled_from(BASES), st.data())
def test_roundtrip_property(bn, data):
    b = build_basis(*bn)
    v = data.draw(arrays(np.complex128, b.size, elements=cplx))
    f = GridFunction(b, v)
    assert np.allclose(inverse(forward(f)).values, v, atol=1e-9)


@given(st.sampled_from(BASES), st.data())
def test_parseval(bn, data):
    b = build_basis(*bn)
    v = data.draw(arrays(np.complex128, b.size, elements=cplx))
    c = forward(GridFunction(b, v)).coeffs
    assert np.sum(np.abs(c) ** 2) == pytest.approx(np.mean(np.abs(v) ** 2), rel=1e-9, abs=1e-9)


@given(st.sampled_from(BASES), st.data())
def test_character_group_law(bn, data):
    b = build_basis(*bn)
    a = data.draw(st.integers(0, b.size - 1))
    c = data.draw(st.integers(0, b.size - 1))
    from vilenkin import digit_add
    assert (character(b, a) * character(b, c)).allclose(character(b, digit_add(b, a, c)), 1e-12)


def test_multiplier_examples():
    b = build_basis((2, 3), 3)
    rng = np.random.default_rng(3)
    f = GridFunction(b, rng.standard_normal(b.size))
    assert apply_multiplier(f, Multiplier(np.ones(b.size))).allclose(f, 1e-12)
    assert apply_multiplier(f, Multiplier(np.zeros(b.size))).allclose(zeros(b), 0)
    w = np.zeros(b.size)
    w[:7] = 1
    assert apply_multiplier(f, Multiplier(w)).allclose(partial_sum(f, 7), 1e-14)
    with pytest.raises(IncompatibleOperandsError):
        apply_multiplier(f, Multiplier(np.ones(3)))
