"""Evaluable expression trees for closed-form solutions.

Node set: complex constant, the time variable, add, multiply, divide, negate,
exponential, power with rational exponent, natural logarithm.  Trees evaluate
to complex numbers at a float time and serialize to a documented JSON form
(``{"type": ..., "children": [...]}``); serialize/parse is the identity.

Powers use the principal branch.  The solvers only emit powers whose radicand
stays off the negative real axis inside the solution's validity interval, so
no branch tracking is needed here.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .complex_numbers import Scalar, as_complex


@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class Time:
    pass


@dataclass(frozen=True)
class Add:
    terms: tuple["Expr", ...]


@dataclass(frozen=True)
class Mul:
    factors: tuple["Expr", ...]


@dataclass(frozen=True)
class Div:
    numerator: "Expr"
    denominator: "Expr"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Exp:
    operand: "Expr"


@dataclass(frozen=True)
class Log:
    operand: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: Fraction


Expr = Union[Const, Time, Add, Mul, Div, Neg, Exp, Log, Pow]


def const(value: Scalar) -> Const:
    return Const(as_complex(value))


def add(*terms: Expr) -> Expr:
    return terms[0] if len(terms) == 1 else Add(tuple(terms))


def mul(*factors: Expr) -> Expr:
    return factors[0] if len(factors) == 1 else Mul(tuple(factors))


def evaluate(expr: Expr, t: float) -> complex:
    """Evaluate the tree at time ``t``."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Time):
        return complex(t)
    if isinstance(expr, Add):
        return sum((evaluate(e, t) for e in expr.terms), start=complex(0))
    if isinstance(expr, Mul):
        out = complex(1)
        for e in expr.factors:
            out *= evaluate(e, t)
        return out
    if isinstance(expr, Div):
        return evaluate(expr.numerator, t) / evaluate(expr.denominator, t)
    if isinstance(expr, Neg):
        return -evaluate(expr.operand, t)
    if isinstance(expr, Exp):
        return cmath.exp(evaluate(expr.operand, t))
    if isinstance(expr, Log):
        return cmath.log(evaluate(expr.operand, t))
    if isinstance(expr, Pow):
        base = evaluate(expr.base, t)
        e = expr.exponent
        if e.denominator == 1:
            return base ** int(e)
        return base ** float(e)
    raise TypeError(f"not an expression node: {expr!r}")


def to_dict(expr: Expr) -> dict:
    if isinstance(expr, Const):
        return {"type": "const", "re": expr.value.real, "im": expr.value.imag}
    if isinstance(expr, Time):
        return {"type": "time"}
    if isinstance(expr, Add):
        return {"type": "add", "children": [to_dict(e) for e in expr.terms]}
    if isinstance(expr, Mul):
        return {"type": "mul", "children": [to_dict(e) for e in expr.factors]}
    if isinstance(expr, Div):
        return {"type": "div", "children": [to_dict(expr.numerator), to_dict(expr.denominator)]}
    if isinstance(expr, Neg):
        return {"type": "neg", "children": [to_dict(expr.operand)]}
    if isinstance(expr, Exp):
        return {"type": "exp", "children": [to_dict(expr.operand)]}
    if isinstance(expr, Log):
        return {"type": "log", "children": [to_dict(expr.operand)]}
    if isinstance(expr, Pow):
        return {
            "type": "pow",
            "children": [to_dict(expr.base)],
            "exponent": str(expr.exponent),
        }
    raise TypeError(f"not an expression node: {expr!r}")


def from_dict(data: dict) -> Expr:
    kind = data.get("type")
    if kind == "const":
        return Const(complex(data["re"], data["im"]))
    if kind == "time":
        return Time()
    if kind == "add":
        return Add(tuple(from_dict(c) for c in data["children"]))
    if kind == "mul":
        return Mul(tuple(from_dict(c) for c in data["children"]))
    if kind == "div":
        num, den = data["children"]
        return Div(from_dict(num), from_dict(den))
    if kind == "neg":
        return Neg(from_dict(data["children"][0]))
    if kind == "exp":
        return Exp(from_dict(data["children"][0]))
    if kind == "log":
        return Log(from_dict(data["children"][0]))
    if kind == "pow":
        return Pow(from_dict(data["children"][0]), Fraction(data["exponent"]))
    raise ValueError(f"unknown expression node type: {kind!r}")


def dumps(expr: Expr, **kwargs) -> str:
    return json.dumps(to_dict(expr), **kwargs)


def loads(text: str) -> Expr:
    return from_dict(json.loads(text))
