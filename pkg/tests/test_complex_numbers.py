import cmath
import math
import random
from fractions import Fraction as F

import pytest

from erugin import (
    ComplexRational,
    complex_sqrt,
    cubic_roots,
    quadratic_roots,
    root_multiplicities,
)

CR = ComplexRational


def test_sqrt_exact_gaussian():
    s = complex_sqrt(CR(3, 4))
    assert isinstance(s, CR)
    assert s == CR(2, 1)


def test_sqrt_of_minus_one_is_i():
    s = complex_sqrt(CR(-1))
    assert s == CR(0, 1)


def test_sqrt_of_i_half_angle():
    s = complex_sqrt(complex(0, 1))
    expected = complex(1, 1) / math.sqrt(2.0)
    assert abs(s - expected) < 1e-15


def test_sqrt_principal_branch_normalization():
    for w in (complex(-4, 0), complex(-4, -0.0), complex(-9, 1e-30)):
        s = complex_sqrt(w)
        assert s.real >= 0
        if s.real == 0:
            assert s.imag >= 0


def test_sqrt_squares_back_on_random_floats():
    rng = random.Random(5)
    for _ in range(10_000):
        w = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
        s = complex_sqrt(w)
        assert abs(s * s - w) <= 1e-14 * max(1.0, abs(w))


def test_sqrt_exact_on_exact_squares():
    rng = random.Random(6)
    for _ in range(300):
        s = CR(F(rng.randint(-9, 9), rng.randint(1, 5)), F(rng.randint(-9, 9), rng.randint(1, 5)))
        r = complex_sqrt(s * s)
        assert isinstance(r, CR)
        assert r * r == s * s


def test_quadratic_paper_shape():
    # (-1+i) z^2 + (1+i) = 0  <=>  z^2 = i, roots +/- (1+i)/sqrt(2)
    r1, r2 = quadratic_roots(CR(-1, 1), CR(0), CR(1, 1))
    w = complex(1, 1) / math.sqrt(2.0)
    assert abs(complex(r1) + w) < 1e-14
    assert abs(complex(r2) - w) < 1e-14


def test_quadratic_exact_real_roots():
    r1, r2 = quadratic_roots(CR(1), CR(0), CR(-1))
    assert (r1, r2) == (CR(-1), CR(1))
    assert isinstance(r1, CR)


def test_quadratic_double_root():
    r1, r2 = quadratic_roots(CR(1), CR(0), CR(0))
    assert r1 == CR(0) and r2 == CR(0)


def test_quadratic_rejects_zero_leading():
    with pytest.raises(ValueError):
        quadratic_roots(CR(0), CR(1), CR(1))


def test_quadratic_reconstruction():
    rng = random.Random(7)
    for _ in range(300):
        c2 = complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) or complex(1)
        c1 = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        c0 = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        r1, r2 = (complex(r) for r in quadratic_roots(c2, c1, c0))
        scale = max(1.0, abs(c1), abs(c0))
        assert abs(c2 * (r1 + r2) + c1) <= 1e-10 * scale
        assert abs(c2 * r1 * r2 - c0) <= 1e-10 * scale


def test_cubic_triple_root_exact():
    # (z - 2)^3 = z^3 - 6 z^2 + 12 z - 8
    roots = cubic_roots(CR(1), CR(-6), CR(12), CR(-8))
    assert roots == (CR(2), CR(2), CR(2))
    clusters = root_multiplicities(roots)
    assert len(clusters) == 1 and clusters[0][1] == 3


def test_cubic_three_gaussian_roots():
    # (z-1)(z-i)(z-1-i) = z^3 - (2+2i) z^2 + (3i) z + (1-i)
    roots = [complex(r) for r in cubic_roots(CR(1), CR(-2, -2), CR(0, 3), CR(1, -1))]
    remaining = [complex(1), complex(0, 1), complex(1, 1)]
    for got in roots:
        want = min(remaining, key=lambda z: abs(z - got))
        assert abs(got - want) < 1e-12
        remaining.remove(want)


def test_cubic_roots_of_unity():
    roots = [complex(r) for r in cubic_roots(1, 0, 0, -1)]
    for r in roots:
        assert abs(r**3 - 1) < 1e-12
    assert abs(sum(roots)) < 1e-12


def test_cubic_rejects_zero_leading():
    with pytest.raises(ValueError):
        cubic_roots(0, 1, 1, 1)


def test_cubic_reconstruction():
    rng = random.Random(8)
    for _ in range(300):
        c3 = complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) or complex(1)
        c2 = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        c1 = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        c0 = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        r = [complex(x) for x in cubic_roots(c3, c2, c1, c0)]
        scale = max(1.0, abs(c2), abs(c1), abs(c0))
        assert abs(c3 * (r[0] + r[1] + r[2]) + c2) <= 1e-10 * scale
        assert abs(c3 * (r[0] * r[1] + r[0] * r[2] + r[1] * r[2]) - c1) <= 1e-10 * scale
        assert abs(c3 * r[0] * r[1] * r[2] + c0) <= 1e-10 * scale


def test_cubic_exact_double_root_classified():
    # (z - 1)^2 (z - 3) = z^3 - 5 z^2 + 7 z - 3
    roots = cubic_roots(CR(1), CR(-5), CR(7), CR(-3))
    assert roots == (CR(1), CR(1), CR(3))
    clusters = root_multiplicities(roots)
    assert sorted(m for _, m in clusters) == [1, 2]


def test_cubic_near_multiple_root_polish():
    # Cardano alone loses digits here; the Newton polish must recover them.
    eps = 1e-5
    roots = [complex(r) for r in cubic_roots(1, -(2 + eps), 1 + 2 * eps, -eps)]
    expected = sorted([eps, 1.0, 1.0 + 0.0], key=lambda v: v)
    got_small = min(roots, key=lambda z: abs(z))
    assert abs(got_small - eps) < 1e-12


def test_exact_arithmetic_field_ops():
    a = CR(F(1, 2), F(-3, 4))
    b = CR(F(2, 3), F(5, 6))
    assert (a + b) - b == a
    assert (a * b) / b == a
    assert a * (1 / (b / b)) == a
    assert complex(a) == complex(0.5, -0.75)
    with pytest.raises(ZeroDivisionError):
        a / CR(0)
