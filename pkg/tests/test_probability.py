import math
import threading
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ruinpaths import (
    SeriesCancelled,
    absorption_exact,
    absorption_series,
    absorption_via_gf,
    generating_function,
    tail_start,
    verify_three_term,
)

RATIONAL_GRID = [
    Fraction(1, 10),
    Fraction(1, 4),
    Fraction(2, 5),
    Fraction(1, 2),
    Fraction(3, 5),
    Fraction(3, 4),
    Fraction(9, 10),
]


def rational_p_open_interval():
    # Fractions strictly inside (0, 1) with small denominators.
    return (
        st.integers(min_value=2, max_value=60)
        .flatmap(
            lambda den: st.integers(min_value=1, max_value=den - 1).map(
                lambda num: Fraction(num, den)
            )
        )
    )


# ---------------------------------------------------------------------------
# closed form

def test_absorption_exact_below_half_is_one():
    assert absorption_exact(3, 0.4) == 1.0
    assert absorption_exact(7, Fraction(1, 2)) == 1
    assert absorption_exact(2, 0) == 1


def test_absorption_exact_above_half():
    assert absorption_exact(1, Fraction(2, 3)) == Fraction(1, 2)
    assert absorption_exact(3, Fraction(2, 3)) == Fraction(1, 8)
    assert absorption_exact(3, Fraction(3, 4)) == Fraction(1, 27)
    assert absorption_exact(1, 0.75) == pytest.approx(1 / 3)


def test_absorption_exact_boundaries():
    assert absorption_exact(5, 1) == 0
    assert absorption_exact(5, 1.0) == 0.0
    assert absorption_exact(5, Fraction(0)) == 1


def test_absorption_exact_preserves_representation():
    assert isinstance(absorption_exact(2, Fraction(3, 5)), Fraction)
    assert isinstance(absorption_exact(2, 0.6), float)
    assert isinstance(absorption_exact(2, 0.4), float)
    assert isinstance(absorption_exact(2, Fraction(2, 5)), Fraction)


def test_absorption_exact_power_law():
    for p in RATIONAL_GRID:
        base = absorption_exact(1, p)
        for k in range(1, 65):
            assert absorption_exact(k, p) == base**k


def test_absorption_exact_rejects_bad_input():
    with pytest.raises(ValueError):
        absorption_exact(0, 0.5)
    with pytest.raises(ValueError):
        absorption_exact(2, 1.5)
    with pytest.raises(TypeError):
        absorption_exact(2, "0.5")


# ---------------------------------------------------------------------------
# generating function route

def test_generating_function_endpoints():
    assert generating_function(0) == 0
    assert generating_function(0.0) == 0.0
    assert generating_function(Fraction(1, 4)) == Fraction(1, 2)


def test_generating_function_solves_quadratic():
    for z in (0.0, 0.01, 0.1, 0.2, 0.25):
        f = generating_function(z)
        assert abs(f * f - f + z) <= 1e-14


def test_generating_function_exact_on_perfect_squares():
    # 1 - 4z = 1/9 at z = 2/9, a perfect rational square.
    assert generating_function(Fraction(2, 9)) == Fraction(1, 3)


def test_generating_function_falls_back_to_float_otherwise():
    value = generating_function(Fraction(1, 5))
    assert isinstance(value, float)
    assert abs(value * value - value + 0.2) <= 1e-14


def test_generating_function_domain():
    with pytest.raises(ValueError):
        generating_function(-0.01)
    with pytest.raises(ValueError):
        generating_function(0.2501)
    with pytest.raises(ValueError):
        generating_function(Fraction(1, 3))


def test_gf_route_matches_closed_form():
    assert absorption_via_gf(Fraction(1, 2)) == 1
    assert absorption_via_gf(Fraction(2, 3)) == Fraction(1, 2)
    assert abs(absorption_via_gf(0.3) - 1.0) <= 1e-12
    for p in (0.1, 0.3, 0.5, 0.6, 0.9):
        assert abs(absorption_via_gf(p) - absorption_exact(1, p)) <= 1e-12
    for p in RATIONAL_GRID:
        assert absorption_via_gf(p) == absorption_exact(1, p)


def test_gf_route_rejects_p_zero():
    with pytest.raises(ValueError):
        absorption_via_gf(0)
    assert absorption_via_gf(1.0) == 0.0


# ---------------------------------------------------------------------------
# series route

def test_tail_start_values():
    assert [tail_start(k) for k in (1, 2, 3, 4, 5, 10)] == [0, 0, 2, 5, 9, 44]


def test_series_degenerate_p_zero():
    result = absorption_series(1, Fraction(0), 1e-12)
    assert result.partial_sum == 1
    assert result.terms_used == 1
    assert result.converged


def test_series_degenerate_p_one():
    result = absorption_series(3, Fraction(1), 1e-12)
    assert result.partial_sum == 0
    assert result.converged
    assert result.terms_used == tail_start(3) + 1


def test_series_brackets_exact_value_in_rational_arithmetic():
    for p in (Fraction(1, 10), Fraction(2, 5), Fraction(3, 5), Fraction(9, 10)):
        for k in range(1, 7):
            result = absorption_series(k, p, 1e-12)
            exact = absorption_exact(k, p)
            assert result.converged
            assert result.tail_bound <= 1e-12
            assert result.partial_sum <= exact <= result.partial_sum + result.tail_bound
            assert result.terms_used >= tail_start(k) + 1


def test_series_float_route_close_to_closed_form():
    result = absorption_series(1, 0.6, 1e-12)
    assert result.converged
    assert math.isclose(result.partial_sum, 2 / 3, abs_tol=1e-11)


def test_series_certificate_never_starts_before_gate():
    # Generous tail target: without the gate the bound would fire at n = 0.
    for k in range(3, 11):
        result = absorption_series(k, Fraction(1, 10), 0.5)
        assert result.converged
        assert result.terms_used >= tail_start(k) + 1


def test_series_near_critical_reports_lower_bound():
    result = absorption_series(2, Fraction(1, 2), 1e-12, max_terms=1500)
    assert not result.converged
    assert math.isinf(result.tail_bound)
    assert result.terms_used == 1500
    assert result.partial_sum < 1
    longer = absorption_series(2, Fraction(1, 2), 1e-12, max_terms=3000)
    assert longer.partial_sum > result.partial_sum  # monotone in the term budget


def test_series_near_critical_band_is_two_sided():
    for p in (0.499, 0.501):
        result = absorption_series(1, p, 1e-12, max_terms=200)
        assert not result.converged


def test_series_cancellation():
    token = threading.Event()
    token.set()
    with pytest.raises(SeriesCancelled):
        absorption_series(1, Fraction(1, 2), 1e-12, cancel=token)


def test_series_rejects_bad_parameters():
    with pytest.raises(ValueError):
        absorption_series(1, 0.6, 0.0)
    with pytest.raises(ValueError):
        absorption_series(1, 0.6, 1e-12, max_terms=0)
    with pytest.raises(ValueError):
        absorption_series(1, 0.6, 1e-12, delta=0.0)


@given(rational_p_open_interval(), st.integers(min_value=1, max_value=8))
def test_series_partial_sum_never_exceeds_exact_value(p, k):
    result = absorption_series(k, p, 1e-6, max_terms=400)
    assert result.partial_sum <= absorption_exact(k, p)


# ---------------------------------------------------------------------------
# three-term recurrence

def test_three_term_known_cases():
    assert verify_three_term(1, Fraction(3, 4))
    assert verify_three_term(2, Fraction(1, 3))
    assert verify_three_term(7, 0.51)


def test_three_term_rejects_endpoints():
    with pytest.raises(ValueError):
        verify_three_term(1, 0)
    with pytest.raises(ValueError):
        verify_three_term(1, Fraction(1))


@given(rational_p_open_interval(), st.integers(min_value=1, max_value=32))
def test_three_term_holds_for_rational_p(p, k):
    assert verify_three_term(k, p)


def test_three_term_holds_on_float_grid():
    for p in (0.1, 0.3, 0.5, 0.6, 0.9):
        for k in range(1, 33):
            assert verify_three_term(k, p)
