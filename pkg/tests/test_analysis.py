import math

import numpy as np
import pytest

from polyflood.analysis import (ErrorReport, convergence_rates, front_position, l1_error,
                                mass_totals,
                                render_table, report_csv, restrict, total_variation)
from polyflood.riemann import State, solve_riemann
from polyflood.solver import Grid1D, SolverState


def test_convergence_rates_halving():
    assert convergence_rates([0.4, 0.2, 0.1]) == pytest.approx([1.0, 1.0])
    rates = convergence_rates([0.2373, 0.15134])
    assert rates[0] == pytest.approx(math.log2(0.2373 / 0.15134))


def test_convergence_rates_undefined():
    assert convergence_rates([0.1]) == []
    assert convergence_rates([0.1, 0.0, 0.05]) == [None, None]


def test_total_variation():
    assert total_variation([0, 1, 0, 2]) == 4.0
    assert total_variation([3.0]) == 0.0
    with pytest.raises(ValueError):
        total_variation([])


def test_mass_totals(quad):
    st = SolverState(np.array([1.0, 2.0]), np.array([0.5, 0.0]))
    # sum s h = 1.5 ; sum (c s + c) h = (0.5 + 0.5 + 0) * 0.5
    assert mass_totals(st, quad, 0.5) == pytest.approx((1.5, 0.5))


def test_restrict():
    np.testing.assert_allclose(restrict(np.arange(8.0), 4), [1.5, 5.5])
    with pytest.raises(ValueError):
        restrict(np.arange(7.0), 2)


def test_l1_error_zero_for_exact_constant_state(quad):
    g = Grid1D(0.0, 1.0, 10)
    fan = solve_riemann(quad, State(1.0, 0.2), State(1.0, 0.2))
    st = SolverState(np.full(10, 1.0), np.full(10, 0.2), 0.5)
    assert l1_error(st, g, fan, 0.5) == (0.0, 0.0)


def test_l1_error_single_jump(quad):
    g = Grid1D(0.0, 1.0, 10)
    fan = solve_riemann(quad, State(2.5, 0.5), State(1.0, 0.0))
    st = SolverState(np.full(10, 1.0), np.full(10, 0.0), 0.0)
    es, ec = l1_error(st, g, fan, 0.5)
    # left half differs by 1.5 in s and 0.5 in c
    assert es == pytest.approx(0.5 * 1.5)
    assert ec == pytest.approx(0.5 * 0.5)


def test_report_and_table():
    rep = ErrorReport.from_errors("dflu", [1 / 50, 1 / 100], [0.2, 0.1], [0.04, 0.03])
    assert rep.rows[0].rate_s is None
    assert rep.rows[1].rate_s == pytest.approx(1.0)
    text = render_table([rep])
    assert "1/50" in text and "1/100" in text and "1.0000" in text
    csv_text = report_csv([rep])
    lines = csv_text.strip().splitlines()
    assert lines[0] == "scheme,h,error_s,rate_s,error_c,rate_c"
    assert lines[1].split(",")[3] == ""
    assert float(lines[2].split(",")[2]) == 0.1


def test_single_h_table_has_no_rates():
    rep = ErrorReport.from_errors("godunov", [0.01], [0.5], [0.2])
    text = render_table([rep])
    assert "1/100" in text
    assert rep.rows[0].rate_c is None


def test_front_position_ignores_far_wall_pool():
    x = np.arange(10) + 0.5
    s = np.array([0.9, 0.6, 0.4, 0.3, 0.1, 0.1, 0.1, 0.1, 0.8, 0.95])
    assert front_position(x, s, 0.1) == 4.5
    assert front_position(x, np.full(10, 0.5), 0.1) == 9.5
    # an isolated cell passing through s_ahead is not an undisturbed region
    s2 = np.array([0.0, 0.1, 0.3, 0.4, 0.5, 0.5, 0.4, 0.3, 0.2, 0.8])
    assert front_position(x, s2, 0.1) == 9.5
