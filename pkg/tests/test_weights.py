import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ghill import DomainError, PowerWeight, SumWeight, TabulatedWeight, UnsupportedWeightError
from ghill.weights import power_exponent


def test_power_weight_exact_values():
    f = PowerWeight(1.0)
    assert f(5) == 5.0
    assert f(1) == 1.0
    np.testing.assert_allclose(f(np.arange(1, 6)), [1, 2, 3, 4, 5])


def test_power_zero_is_constant_one():
    f = PowerWeight(0.0)
    np.testing.assert_array_equal(f(np.arange(1, 100)), np.ones(99))


@given(tau=st.floats(min_value=0.0, max_value=16.0),
       j=st.integers(min_value=1, max_value=10**8))
@settings(max_examples=200)
def test_power_weight_positive(tau, j):
    assert PowerWeight(tau)(j) > 0.0


def test_power_weight_rejects_negative_tau():
    with pytest.raises(DomainError):
        PowerWeight(-0.5)


def test_tabulated_lookup_and_hold():
    f = TabulatedWeight([2.0, 3.0, 5.0], extend="hold")
    np.testing.assert_allclose(f(np.array([1, 2, 3, 4, 10])), [2, 3, 5, 5, 5])


def test_tabulated_without_rule_errors_beyond_table():
    f = TabulatedWeight([2.0, 3.0])
    assert f(2) == 3.0
    with pytest.raises(UnsupportedWeightError):
        f(3)


def test_tabulated_rejects_nonpositive():
    with pytest.raises(DomainError):
        TabulatedWeight([1.0, 0.0])


def test_composites():
    f = 2.0 * PowerWeight(1.0)
    assert f(3) == 6.0
    g = f + PowerWeight(0.0)
    assert isinstance(g, SumWeight)
    assert g(3) == 7.0
    env = g.tail_envelope()
    assert env.power == 1.0 and env.coeff == 3.0


def test_power_exponent_detection():
    assert power_exponent(PowerWeight(0.75)) == 0.75
    assert power_exponent(2.0 * PowerWeight(0.75)) == 0.75
    assert power_exponent(TabulatedWeight([1.0], extend="hold")) is None
