from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phaselab.core import (
    SupportSet,
    Tolerances,
    array_to_json,
    as_signal,
    close,
    dft,
    idft,
    poly_eval,
    roots_of_unity,
    signal_from_json,
    signal_to_json,
)


def test_as_signal_accepts_wire_forms():
    x = as_signal(["9/2", [3, 4], 1.5, 2])
    np.testing.assert_array_equal(x, [4.5, 3 + 4j, 1.5, 2])
    assert x.dtype == np.complex128


@pytest.mark.parametrize("bad", [[], [float("nan")], [[1, 2, 3]], np.zeros((2, 2))])
def test_as_signal_rejects(bad):
    with pytest.raises((ValueError, TypeError)):
        as_signal(bad)


def test_tolerances_validated():
    with pytest.raises(ValueError):
        Tolerances(eq_tol=0)
    assert Tolerances().rank_tol == 1e-8


def test_support_set():
    S = SupportSet.of([4, 0, 2, 1, 9], 8)
    assert S.indices == (0, 1, 2, 4) and len(S) == 4 and 2 in S
    np.testing.assert_array_equal(S.indicator(), [1, 1, 1, 0, 1, 0, 0, 0])
    assert str(S) == "{0,1,2,4}"
    assert SupportSet.from_signal([0, 3, 0, 1]).indices == (1, 3)
    with pytest.raises(ValueError):
        SupportSet((2, 1), 4)
    with pytest.raises(ValueError):
        SupportSet((), 4)


def test_dft_small_cases():
    np.testing.assert_allclose(dft([1, 0, 0, 0]), [1, 1, 1, 1])
    np.testing.assert_allclose(dft([1, 1, 1, 1]), [4, 0, 0, 0], atol=1e-12)
    np.testing.assert_allclose(dft([1, 1j]), [1 + 1j, 1 - 1j])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 33), st.integers(0, 2**32 - 1))
def test_dft_matches_numpy_fft(N, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    np.testing.assert_allclose(dft(x), np.fft.fft(x), atol=1e-9 * N)
    np.testing.assert_allclose(idft(dft(x)), x, atol=1e-9)
    # dft samples the polynomial at the roots of unity
    w = roots_of_unity(N)
    np.testing.assert_allclose([poly_eval(x, v) for v in w], np.fft.fft(x), atol=1e-9 * N)


def test_poly_eval():
    assert poly_eval([4.5, 9, 0.5, 1], 1) == 15
    assert poly_eval([7, 2, 3], 0) == 7
    assert poly_eval([0, 0, 0], 0.3 + 2j) == 0


def test_close_and_json_roundtrip():
    assert close([1, 2], [1, 2 + 1e-12])
    assert not close([1, 2], [1, 2.1])
    assert not close([1], [1, 1])
    x = np.array([1.5, 2 - 1j])
    assert signal_to_json(x) == [[1.5, 0.0], [2.0, -1.0]]
    assert signal_to_json(np.array([1.0, 2.0])) == [1.0, 2.0]
    np.testing.assert_array_equal(signal_from_json(signal_to_json(x)), x)
    assert array_to_json(np.array([[1j]])) == [[[0.0, 1.0]]]
    assert as_signal([Fraction(1, 3)])[0] == pytest.approx(1 / 3)
