import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirichlet_lab.corpus import CORPUS
from dirichlet_lab.function_model import FunctionSpec, SymmetricDifference, eval_function, make_function, phi


def test_eval_examples():
    assert eval_function(FunctionSpec("1"), 7.5) == 1.0
    assert eval_function(FunctionSpec("abs(t)"), -3.0) == 3.0
    assert abs(eval_function(FunctionSpec("sin(t)"), math.pi / 2) - 1.0) <= 1e-15


def test_scalar_and_array_evaluation():
    f = FunctionSpec("t^2")
    assert isinstance(f(2.0), float)
    np.testing.assert_array_equal(f(np.array([[1.0, 2.0], [3.0, 4.0]])), [[1.0, 4.0], [9.0, 16.0]])


def test_support_hint_gives_exact_zero():
    f = FunctionSpec("exp(t)", support_hint=(-1.0, 2.0))
    outside = np.array([-50.0, -1.0000001, 2.0000001, 700.0])
    assert np.all(f(outside) == 0.0)
    assert f(2.0) == math.exp(2.0)


def test_support_combines_declared_and_derived():
    assert FunctionSpec("bump(2, 5)", support_hint=(0, 3)).support == (2.0, 3.0)
    assert FunctionSpec("sin(t)").support is None
    assert FunctionSpec("piecewise([0,1]: 1; else: 0)").support == (0.0, 1.0)


def test_support_hint_breakpoints():
    assert FunctionSpec("abs(t - 1)", support_hint=(-3, 3)).breakpoints == (-3.0, 1.0, 3.0)


def test_invalid_hints():
    with pytest.raises(ValueError):
        FunctionSpec("t", period_hint=0.0)
    with pytest.raises(ValueError):
        FunctionSpec("t", support_hint=(2.0, 1.0))


def test_make_function_passthrough():
    f = FunctionSpec("t")
    assert make_function(f) is f
    assert make_function("t", support_hint=[0, 1]).support_hint == (0.0, 1.0)


@pytest.mark.parametrize("f", [f for f in CORPUS if f.period_hint is not None], ids=lambda f: f.expression_source)
def test_declared_period(f):
    t = np.linspace(-30, 30, 241)
    np.testing.assert_allclose(f(t + f.period_hint), f(t), rtol=0, atol=1e-13)


@pytest.mark.parametrize("f", CORPUS, ids=lambda f: f.expression_source)
def test_corpus_is_finite(f):
    t = np.linspace(-1e3, 1e3, 20001)
    assert np.all(np.isfinite(f(t)))


def test_phi_examples():
    assert phi(FunctionSpec("t"), 0.0, 1.7) == 0.0
    assert phi(FunctionSpec("abs(t)"), 0.0, 2.0) == 4.0
    x, t = math.pi / 2, 1.0
    closed = 2 * math.sin(x) * (math.cos(t) - 1)
    direct = math.sin(x + t) + math.sin(x - t) - 2 * math.sin(x)
    value = phi(FunctionSpec("sin(t)"), x, t)
    assert value == pytest.approx(closed, abs=1e-15)
    assert value == pytest.approx(direct, abs=1e-15)
    assert value == pytest.approx(-0.919395, abs=1e-6)


@pytest.mark.parametrize("f", CORPUS, ids=lambda f: f.expression_source)
@pytest.mark.parametrize("x", [-2.5, 0.0, 0.7, 1.0, 3.0])
def test_phi_vanishes_at_zero(f, x):
    assert abs(phi(f, x, 0.0)) <= 4 * np.spacing(abs(f(x)) + 1e-300)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(-3, 3), st.floats(-3, 3), st.floats(-4, 4), st.floats(0, 10),
    st.sampled_from(range(len(CORPUS))), st.sampled_from(range(len(CORPUS))),
)
def test_phi_linear_in_f(alpha, beta, x, t, i, j):
    f, g = CORPUS[i], CORPUS[j]
    combo = FunctionSpec(f"{alpha!r}*({f.expression_source}) + {beta!r}*({g.expression_source})")
    expected = alpha * phi(f, x, t) + beta * phi(g, x, t)
    scale = abs(alpha) * (abs(f(x)) + 1) + abs(beta) * (abs(g(x)) + 1)
    assert phi(combo, x, t) == pytest.approx(expected, abs=1e-13 * scale + 1e-300)


@pytest.mark.parametrize("src, x", [("abs(t)", 0.0), ("cos(t)", math.pi), ("exp(-(t - 1)^2)", 1.0), ("t^2 - 4*t", 2.0)])
def test_phi_even_about_x(src, x):
    f = FunctionSpec(src)
    t = np.linspace(0, 5, 51)
    np.testing.assert_allclose(phi(f, x, t), 2 * (f(x + t) - f(x)), rtol=0, atol=1e-13)


def test_symmetric_difference_metadata():
    sd = SymmetricDifference(FunctionSpec("piecewise([-1,1]: 1 - t^2; else: 0)"), 0.5)
    assert sd.breakpoints == (0.5, 1.5)
    assert sd.support_radius == 1.5
    assert sd.f_center == 0.75
    assert SymmetricDifference(FunctionSpec("sin(t)"), 0.0).support_radius is None
