import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from multuniform.spectral import (
    CyclicSignal,
    DimensionError,
    character,
    convolve,
    convolve_naive,
    dft,
    dft_naive,
    idft,
    spectrum_csv,
)

from conftest import random_signal

PRIMES = [11, 61, 601, 1201]


def test_character_spectrum():
    p = 601
    f = character(p, 17)
    s = dft(f)
    expected = np.zeros(p)
    expected[17] = 1
    assert np.max(np.abs(s - expected)) < 1e-10


def test_constant_and_point_mass():
    p = 61
    s = dft(np.full(p, 2 - 1j))
    assert abs(s[0] - (2 - 1j)) < 1e-12 and np.max(np.abs(s[1:])) < 1e-12
    delta = np.zeros(p)
    delta[0] = 1
    assert np.allclose(dft(delta), 1 / p, atol=1e-15)


@pytest.mark.parametrize("p", PRIMES)
def test_fast_matches_naive(rng, p):
    f = random_signal(rng, p)
    assert np.max(np.abs(dft(f) - dft_naive(f))) < 1e-9


@pytest.mark.parametrize("p", [11, 601, 1201])
def test_parseval(rng, p):
    f = random_signal(rng, p)
    lhs = np.mean(np.abs(f) ** 2)
    assert abs(lhs - np.sum(np.abs(dft(f)) ** 2)) < 1e-10 * lhs


def test_roundtrip(rng):
    f = random_signal(rng, 601)
    assert np.max(np.abs(idft(dft(f), 601).values - f)) < 1e-10
    delta = np.zeros(601)
    delta[0] = 1
    assert np.allclose(idft(delta, 601).values, 1)


@given(st.integers(0, 600), st.integers(0, 600), st.integers(0, 2**32 - 1))
def test_shift_and_modulation_duality(h, xi, seed):
    p = 601
    f = CyclicSignal(p, random_signal(np.random.default_rng(seed), p))
    k = np.arange(p)
    # f(n + h) has spectrum f^(k) e(h k / p)
    assert np.max(np.abs(f.shift(h).spectrum - f.spectrum * np.exp(2j * np.pi * h * k / p))) < 1e-10
    assert np.max(np.abs(f.modulate(xi).spectrum - np.roll(f.spectrum, xi))) < 1e-10


@given(arrays(np.float64, 61, elements=st.floats(-5, 5)), arrays(np.float64, 61, elements=st.floats(-5, 5)))
def test_linearity(a, b):
    assert np.max(np.abs(dft(a + 2 * b) - dft(a) - 2 * dft(b))) < 1e-10


def test_convolution(rng):
    p = 601
    f, g = CyclicSignal(p, random_signal(rng, p)), CyclicSignal(p, random_signal(rng, p))
    fg = convolve(f, g)
    assert np.max(np.abs(fg.spectrum - f.spectrum * g.spectrum)) < 1e-10
    assert np.max(np.abs(fg.values - convolve_naive(f, g).values)) < 1e-9
    unit = np.zeros(p)
    unit[0] = p
    assert np.max(np.abs(convolve(f, CyclicSignal(p, unit)).values - f.values)) < 1e-9
    ones = convolve(f, CyclicSignal(p, np.ones(p)))
    assert np.allclose(ones.values, np.mean(f.values), atol=1e-12)


def test_signal_validation_and_norms():
    with pytest.raises(DimensionError):
        CyclicSignal(11, np.ones(10))
    with pytest.raises(DimensionError):
        convolve(CyclicSignal(11, np.ones(11)), CyclicSignal(13, np.ones(13)))
    with pytest.raises(DimensionError):
        idft(np.ones(10), 11)
    s = CyclicSignal(5, [3, -4, 0, 0, 0])
    assert s.sup_norm == 4 and s.l1_norm() == pytest.approx(7 / 5) and s.l2_norm_sq() == pytest.approx(5)
    with pytest.raises(ValueError):
        s.values[0] = 1  # read-only


def test_spectrum_csv():
    text = spectrum_csv(np.array([1 + 0j, 0.5j]))
    assert text == "xi,re,im\n0,1.0,0.0\n1,0.0,0.5\n"
