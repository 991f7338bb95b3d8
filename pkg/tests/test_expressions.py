import cmath
import math
import random
from fractions import Fraction as F

import pytest

from erugin.expressions import (
    Add,
    Const,
    Div,
    Exp,
    Log,
    Mul,
    Neg,
    Pow,
    Time,
    dumps,
    evaluate,
    from_dict,
    loads,
    to_dict,
)


def test_node_evaluation():
    t = 0.7
    assert evaluate(Const(complex(2, -1)), t) == complex(2, -1)
    assert evaluate(Time(), t) == complex(t)
    assert evaluate(Add((Const(complex(1)), Time())), t) == complex(1 + t)
    assert evaluate(Mul((Const(complex(2)), Time())), t) == complex(2 * t)
    assert evaluate(Div(Const(complex(1)), Const(complex(2))), t) == complex(0.5)
    assert evaluate(Neg(Time()), t) == complex(-t)
    assert abs(evaluate(Exp(Time()), t) - cmath.exp(t)) < 1e-15
    assert abs(evaluate(Log(Const(complex(math.e))), t) - 1.0) < 1e-15
    assert abs(evaluate(Pow(Const(complex(4)), F(-1, 2)), t) - 0.5) < 1e-15
    assert evaluate(Pow(Const(complex(3)), F(2)), t) == complex(9)


def test_pow_principal_branch():
    # radicand on the positive real axis stays real
    val = evaluate(Pow(Const(complex(2.25, 0.0)), F(-1, 2)), 0.0)
    assert abs(val - (1 / 1.5)) < 1e-15


def _random_expr(rng: random.Random, depth: int):
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.5:
            return Const(complex(rng.uniform(-2, 2), rng.uniform(-2, 2)))
        return Time()
    kind = rng.randrange(7)
    if kind == 0:
        return Add(tuple(_random_expr(rng, depth - 1) for _ in range(rng.randint(2, 3))))
    if kind == 1:
        return Mul(tuple(_random_expr(rng, depth - 1) for _ in range(2)))
    if kind == 2:
        return Div(_random_expr(rng, depth - 1), Const(complex(rng.uniform(1, 2), 1)))
    if kind == 3:
        return Neg(_random_expr(rng, depth - 1))
    if kind == 4:
        return Exp(_random_expr(rng, depth - 1))
    if kind == 5:
        return Log(Const(complex(rng.uniform(1, 3), rng.uniform(0.5, 2))))
    return Pow(Const(complex(rng.uniform(1, 3), 0)), F(rng.randint(-3, 3), rng.randint(1, 4)))


def test_serialize_parse_identity():
    rng = random.Random(20)
    for _ in range(200):
        expr = _random_expr(rng, 3)
        assert from_dict(to_dict(expr)) == expr
        assert loads(dumps(expr)) == expr


def test_serialized_values_survive():
    rng = random.Random(21)
    for _ in range(50):
        expr = _random_expr(rng, 3)
        clone = loads(dumps(expr))
        t = rng.uniform(-1, 1)
        assert evaluate(expr, t) == evaluate(clone, t)


def test_unknown_node_rejected():
    with pytest.raises(ValueError):
        from_dict({"type": "sin", "children": []})
