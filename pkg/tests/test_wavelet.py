import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kboot import (DimensionError, crop_to_shape, haar_forward, haar_inverse,
                   pad_to_multiple)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_orthonormality_and_roundtrip(seed, levels):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(32, 32))
    c = haar_forward(x, levels)
    assert np.linalg.norm(c) == pytest.approx(np.linalg.norm(x), rel=1e-9)
    assert np.abs(haar_inverse(c, levels) - x).max() <= 1e-9


def test_complex_roundtrip():
    rng = np.random.default_rng(1)
    z = rng.normal(size=(64, 48)) + 1j * rng.normal(size=(64, 48))
    back = haar_inverse(haar_forward(z, 3), 3)
    assert np.abs(back - z).max() < 1e-12


def test_single_level_layout():
    # constant block: all energy lands in the low-pass quadrant
    x = np.full((8, 8), 2.0)
    c = haar_forward(x, 1)
    assert np.abs(c[:4, :4] - 4.0).max() < 1e-12
    detail = c.copy()
    detail[:4, :4] = 0
    assert np.abs(detail).max() < 1e-12


def test_shape_validation():
    with pytest.raises(DimensionError):
        haar_forward(np.zeros((30, 32)), 3)  # 30 not divisible by 8
    with pytest.raises(DimensionError):
        haar_forward(np.zeros((32, 32)), 0)
    with pytest.raises(DimensionError):
        haar_forward(np.zeros(16), 1)


def test_pad_and_crop_are_inverse():
    rng = np.random.default_rng(2)
    x = rng.normal(size=(30, 21))
    padded = pad_to_multiple(x, 8)
    assert padded.shape == (32, 24)
    assert np.array_equal(crop_to_shape(padded, x.shape), x)
    # norm preserved by zero-pad
    assert np.linalg.norm(padded) == pytest.approx(np.linalg.norm(x), rel=1e-12)


def test_pad_noop_when_divisible():
    x = np.zeros((16, 16))
    assert pad_to_multiple(x, 8) is x
