import math

import numpy as np
import pytest

from coherence_engine.bath import (
    BathSpec,
    bath_from_json,
    cross_rates,
    flat_rate,
    rate_derivative,
    rates_at,
    tabulated_rate,
)


def test_detailed_balance_everywhere():
    for beta in (0.1, 0.5, 1.0, 2.0, 5.0):
        for omega in (0.2, 1.0, 3.0):
            bath = BathSpec(beta=beta)
            pair = rates_at(bath, omega)
            assert pair.gamma_minus / pair.gamma_plus == pytest.approx(
                math.exp(-beta * omega), abs=1e-14
            )


def test_flat_rate_default():
    fn = flat_rate()
    assert fn(0.3) == 1.0 and fn(7.0) == 1.0
    assert flat_rate(2.5)(1.0) == 2.5
    with pytest.raises(ValueError):
        flat_rate(-1.0)


def test_tabulated_rate_interpolates():
    fn = tabulated_rate([(1.0, 1.0), (2.0, 3.0)])
    assert fn(1.5) == pytest.approx(2.0, abs=1e-15)
    assert fn(1.0) == 1.0 and fn(2.0) == 3.0
    with pytest.raises(ValueError):
        tabulated_rate([(1.0, 1.0)])
    with pytest.raises(ValueError):
        tabulated_rate([(1.0, -1.0), (2.0, 1.0)])


def test_bath_spec_validation():
    with pytest.raises(ValueError):
        BathSpec(beta=0.0)
    with pytest.raises(ValueError):
        BathSpec(beta=1.0, alignment=1.5)
    BathSpec(beta=1.0, alignment=-1.0)


def test_rates_at_requires_positive_frequency():
    bath = BathSpec(beta=1.0)
    with pytest.raises(ValueError):
        rates_at(bath, 0.0)


def test_cross_rates_pattern():
    bath = BathSpec(beta=1.0, alignment=0.4)
    gamma_plus, gamma_minus = cross_rates(bath, 1.0)
    pair = rates_at(bath, 1.0)
    expected_plus = pair.gamma_plus * np.array([[1.0, 0.4], [0.4, 1.0]])
    expected_minus = pair.gamma_minus * np.array([[1.0, 0.4], [0.4, 1.0]])
    np.testing.assert_allclose(gamma_plus, expected_plus, atol=1e-15)
    np.testing.assert_allclose(gamma_minus, expected_minus, atol=1e-15)


def test_rate_derivative_flat_profile():
    bath = BathSpec(beta=1.0)
    diff = rate_derivative(bath, 1.0, 0.01)
    assert diff.gamma_plus == 0.0
    assert diff.gamma_minus == pytest.approx(-0.3660461599919007, abs=1e-15)
    with pytest.raises(ValueError):
        rate_derivative(bath, 1.0, 0.0)


def test_rate_derivative_tabulated_profile():
    bath = BathSpec(beta=1.0, rate_fn=tabulated_rate([(0.5, 1.0), (2.0, 2.5)]))
    delta = 0.01
    diff = rate_derivative(bath, 1.0, delta)
    slope = (2.5 - 1.0) / 1.5
    assert diff.gamma_plus == pytest.approx(slope, rel=1e-12)
    pair_hi = rates_at(bath, 1.0 + delta)
    pair_lo = rates_at(bath, 1.0)
    assert diff.gamma_minus == pytest.approx(
        (pair_hi.gamma_minus - pair_lo.gamma_minus) / delta, rel=1e-12
    )


def test_bath_from_json():
    bath = bath_from_json({"beta": 2.0, "gamma_plus": 0.5, "alignment": 0.3})
    assert bath.beta == 2.0 and bath.alignment == 0.3
    assert rates_at(bath, 1.0).gamma_plus == 0.5

    tab = bath_from_json(
        {
            "beta": 1.0,
            "gamma_plus": {"kind": "tabulated", "points": [[1.0, 1.0], [2.0, 2.0]]},
        }
    )
    assert rates_at(tab, 1.5).gamma_plus == pytest.approx(1.5, abs=1e-15)

    with pytest.raises(ValueError):
        bath_from_json({"beta": 1.0, "temperature": 300.0})
