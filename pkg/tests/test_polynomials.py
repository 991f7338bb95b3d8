import random
from fractions import Fraction as F

import pytest

from erugin import RealPoly, RealPolySystem, eval_system, partial_derivative

from _builders import second01_system


def test_eval_second_order_example():
    system, _ = second01_system()
    assert eval_system(system, [F(2), F(1)]) == (F(-6), F(0))


def test_eval_zero_system():
    system = RealPolySystem(("x", "y"), (RealPoly.zero(2), RealPoly.zero(2)))
    assert eval_system(system, [F(3), F(-7, 2)]) == (F(0), F(0))


def test_eval_fixed_point():
    # dx = 1 - x vanishes at x = 1
    eq = RealPoly(1, {(0,): 1, (1,): -1})
    system = RealPolySystem(("x",), (eq,))
    assert eval_system(system, [F(1)]) == (F(0),)


def test_eval_dimension_mismatch():
    system, _ = second01_system()
    with pytest.raises(ValueError):
        eval_system(system, [F(1)])


def test_eval_float_point_gives_float():
    system, _ = second01_system()
    out = eval_system(system, [2.0, 1.0])
    assert out == (-6.0, 0.0)
    assert all(isinstance(v, float) for v in out)


def test_partial_derivative_x2y():
    p = RealPoly(2, {(2, 1): 1})
    assert partial_derivative(p, 0) == RealPoly(2, {(1, 1): 2})


def test_partial_derivative_linear():
    p = RealPoly(2, {(0, 0): F(3, 2), (1, 0): -2, (0, 1): F(5, 3)})
    assert partial_derivative(p, 1) == RealPoly.constant(2, F(5, 3))


def test_partial_derivative_constant_is_zero():
    p = RealPoly.constant(2, F(7, 4))
    assert partial_derivative(p, 0).is_zero()


def test_mixed_partials_commute():
    rng = random.Random(11)
    for _ in range(50):
        nvars = rng.randint(1, 3)
        terms = {}
        for _ in range(rng.randint(1, 8)):
            exps = tuple(rng.randint(0, 3) for _ in range(nvars))
            terms[exps] = terms.get(exps, F(0)) + F(rng.randint(-5, 5), rng.randint(1, 4))
        p = RealPoly(nvars, terms)
        for j in range(nvars):
            for k in range(nvars):
                left = p.partial_derivative(j).partial_derivative(k)
                right = p.partial_derivative(k).partial_derivative(j)
                assert left == right


def test_no_zero_coefficients_stored():
    p = RealPoly(2, {(1, 0): 1}) - RealPoly(2, {(1, 0): 1})
    assert p.is_zero()
    assert len(p) == 0
    q = RealPoly(2, {(1, 0): 1, (0, 1): 0})
    assert len(q) == 1


def test_arithmetic_and_scaling():
    a = RealPoly(2, {(1, 0): 1, (0, 1): 2})
    b = RealPoly(2, {(1, 0): F(1, 2)})
    assert (a + b).coefficient((1, 0)) == F(3, 2)
    assert (a - b).coefficient((1, 0)) == F(1, 2)
    assert (a * b).coefficient((2, 0)) == F(1, 2)
    assert (a * b).coefficient((1, 1)) == 1
    assert a.scale(F(-1, 3)).coefficient((0, 1)) == F(-2, 3)
    assert (2 * a).coefficient((0, 1)) == 4


def test_exponent_validation():
    with pytest.raises(ValueError):
        RealPoly(2, {(1,): 1})
    with pytest.raises(ValueError):
        RealPoly(2, {(-1, 0): 1})
    with pytest.raises(ValueError):
        RealPolySystem(("x", "y"), (RealPoly.zero(2),))


def test_total_degree():
    system, _ = second01_system()
    assert system.total_degree() == 2
    assert RealPoly.zero(3).total_degree() == 0


def test_to_string_roundtrippable_shape():
    u = RealPoly(2, {(0, 0): 1, (2, 0): -1, (1, 1): -2, (0, 2): 1})
    s = u.to_string(("x", "y"))
    assert "x^2" in s and "x*y" in s
