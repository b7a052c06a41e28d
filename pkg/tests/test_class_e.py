import math

import pytest

from dirichlet_lab import class_e as ce
from dirichlet_lab.function_model import FunctionSpec


def test_tail_average_examples():
    s = ce.tail_average(FunctionSpec("0"), 30.0, 2.0)
    assert (s.right_value, s.left_value) == (0.0, 0.0)
    s = ce.tail_average(FunctionSpec("sin(t)"), 100.0, 2 * math.pi)
    assert s.right_value == pytest.approx(0.04, abs=1e-8)
    assert s.left_value == pytest.approx(0.04, abs=1e-8)
    s = ce.tail_average(FunctionSpec("abs(t)"), 100.0, 1.0)
    assert s.right_value == pytest.approx(1.005, abs=1e-12)
    assert s.left_value == pytest.approx(1.005, abs=1e-12)


def test_tail_average_validation():
    with pytest.raises(ValueError):
        ce.tail_average(FunctionSpec("t"), 0.0, 1.0)
    with pytest.raises(ValueError):
        ce.tail_average(FunctionSpec("t"), 1.0, -1.0)


@pytest.mark.parametrize("alpha", [-3.0, 0.5, 7.0])
def test_tail_average_scaling(alpha):
    f = FunctionSpec("exp(-abs(t)/40)*cos(2*t)")
    g = FunctionSpec(f"{alpha!r}*(exp(-abs(t)/40)*cos(2*t))")
    for T, c in [(10.0, 1.0), (55.0, 6.0)]:
        a, b = ce.tail_average(f, T, c), ce.tail_average(g, T, c)
        assert b.right_value == pytest.approx(abs(alpha) * a.right_value, rel=1e-9, abs=1e-12)
        assert b.left_value == pytest.approx(abs(alpha) * a.left_value, rel=1e-9, abs=1e-12)


def test_diagnostic_periodic_consistent():
    rep = ce.class_e_diagnostic(FunctionSpec("sin(t)"))
    assert rep.all_consistent
    assert set(rep.samples) == set(ce.DEFAULT_C_LIST)
    for c, samples in rep.samples.items():
        assert [s.T for s in samples] == list(ce.DEFAULT_T_GRID)
        assert all(s.right_value >= 0 and s.left_value >= 0 for s in samples)
        assert all(isinstance(v, float) for v in rep.right_envelope[c])


def test_diagnostic_abs_inconsistent():
    rep = ce.class_e_diagnostic(FunctionSpec("abs(t)"))
    assert not any(rep.consistent.values())


def test_diagnostic_compact_support_exact_zeros():
    f = FunctionSpec("exp(t)*cos(t)", support_hint=(-5.0, 5.0))
    rep = ce.class_e_diagnostic(f)
    for samples in rep.samples.values():
        assert all(s.right_value == 0.0 and s.left_value == 0.0 for s in samples)
    assert rep.all_consistent
    bump = ce.class_e_diagnostic(FunctionSpec("bump(2, 5) + bump(-5, -2)"), T_grid=[10, 100, 1000])
    assert all(s.right_value == 0.0 and s.left_value == 0.0 for v in bump.samples.values() for s in v)


def test_diagnostic_validation():
    f = FunctionSpec("sin(t)")
    with pytest.raises(ValueError):
        ce.class_e_diagnostic(f, c_list=[])
    with pytest.raises(ValueError):
        ce.class_e_diagnostic(f, T_grid=[10, 10, 100])


def test_periodic_bound_examples():
    pb = ce.periodic_bound_check(FunctionSpec("sin(t)", period_hint=2 * math.pi), 1.0, 50.0)
    assert pb.k == 1
    assert pb.M == pytest.approx(4.0, abs=1e-10)
    assert pb.bound == pytest.approx(0.08, abs=1e-10)
    assert pb.holds
    pb = ce.periodic_bound_check(FunctionSpec("0", period_hint=1.0), 3.0, 10.0)
    assert (pb.lhs, pb.bound) == (0.0, 0.0)
    for T in (20.0, 200.0):
        pb = ce.periodic_bound_check(FunctionSpec("cos(t)", period_hint=2 * math.pi), 10.0, T)
        assert pb.k == 2
        assert pb.bound == pytest.approx(8 / T, abs=1e-10)
        assert pb.lhs <= pb.bound + 1e-8


def test_periodic_bound_sweep():
    f = FunctionSpec("cos(pi*t/5)", period_hint=10.0)
    for c in (0.5, 3.0, 10.0, 27.0):
        for T in (10.0, 33.0, 1000.0):
            assert ce.periodic_bound_check(f, c, T).holds


def test_periodic_bound_needs_period():
    with pytest.raises(ce.MissingPeriodError):
        ce.periodic_bound_check(FunctionSpec("sin(t)"), 1.0, 10.0)
