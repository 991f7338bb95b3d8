import cmath
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from erugin import (
    ClosedFormSolution,
    ComplexPoly,
    ComplexRational,
    ComplexScalarODE,
    ImplicitSolution,
    UnsupportedDegreeError,
    ValidityError,
    check_cr_2var,
    complexify_2var,
    eval_solution,
    integrate,
    real_components,
    solve,
    solve_cubic_ode,
    solve_linear,
    solve_riccati,
)

from _builders import fd_derivative_adaptive, nicesol, second01_system

CR = ComplexRational


def poly_value(coeffs, z):
    out = complex(0)
    for c in reversed([complex(v) for v in coeffs]):
        out = out * z + c
    return out


def residual_check(solution, coeffs, n_samples: int = 100):
    """dz/dt at sampled times must match the right-hand side (FD oracle)."""
    lo, hi = solution.validity
    a = max(lo, -3.0) if lo != -math.inf else -3.0
    b = min(hi, 3.0) if hi != math.inf else 3.0
    span = b - a
    a, b = a + 0.1 * span, b - 0.1 * span
    for t in np.linspace(a, b, n_samples):
        t = float(t)
        z = eval_solution(solution, t)
        rhs = poly_value(coeffs, z)
        dz = fd_derivative_adaptive(lambda s: eval_solution(solution, s), t)
        assert abs(dz - rhs) < 1e-8 * (1.0 + abs(rhs))


# ---- linear ----------------------------------------------------------------


def test_linear_kinetic_components():
    rng = random.Random(30)
    for _ in range(20):
        a = F(rng.randint(0, 5), rng.randint(1, 3))
        A = F(rng.randint(0, 5), rng.randint(1, 3))
        b = F(rng.choice([-4, -2, -1, 1, 2]), rng.randint(1, 3))
        x0, y0 = rng.uniform(-2, 2), rng.uniform(-2, 2)
        solution = solve_linear(CR(a, A), CR(b), complex(x0, y0))
        for t in (0.0, 0.3, 1.0, -0.7):
            z = eval_solution(solution, t)
            ebt = math.exp(float(b) * t)
            x_expect = (x0 + a / b) * ebt - a / b
            y_expect = (y0 + A / b) * ebt - A / b
            assert abs(z.real - x_expect) < 1e-12 * max(1.0, abs(x_expect))
            assert abs(z.imag - y_expect) < 1e-12 * max(1.0, abs(y_expect))


def test_linear_general_components():
    # full planar linear case against its trigonometric closed form
    rng = random.Random(31)
    for _ in range(20):
        a, b, c, A = (rng.uniform(-2, 2) for _ in range(4))
        if b * b + c * c < 1e-2:
            b = 1.0
        x0, y0 = rng.uniform(-2, 2), rng.uniform(-2, 2)
        solution = solve_linear(complex(a, A), complex(b, -c), complex(x0, y0))
        den = b * b + c * c
        X = a * b - A * c + x0 * den
        Y = a * c + A * b + y0 * den
        for t in (0.0, 0.4, 1.2):
            z = eval_solution(solution, t)
            ebt = math.exp(b * t)
            x_expect = (ebt * (math.cos(c * t) * X + math.sin(c * t) * Y) - a * b + A * c) / den
            y_expect = (ebt * (math.cos(c * t) * Y - math.sin(c * t) * X) - a * c - A * b) / den
            assert abs(z.real - x_expect) < 1e-11 * max(1.0, abs(x_expect))
            assert abs(z.imag - y_expect) < 1e-11 * max(1.0, abs(y_expect))


def test_linear_pure_exponential():
    solution = solve_linear(0, 1, 1)
    assert abs(eval_solution(solution, 1.0) - math.e) < 1e-14
    assert solution.validity == (-math.inf, math.inf)


def test_linear_fixed_point_is_constant():
    solution = solve_linear(CR(1, 2), CR(-1), CR(1, 2))
    for t in (-3.0, 0.0, 5.0):
        assert eval_solution(solution, t) == complex(1, 2)


def test_degree_zero_line():
    ode = ComplexScalarODE(ComplexPoly((CR(1, 1),)), CR(0))
    solution = solve(ode)
    assert eval_solution(solution, 2.5) == complex(2.5, 2.5)


# ---- quadratic -------------------------------------------------------------


def test_riccati_matches_published_solution():
    system, (x0, y0) = second01_system()
    report = check_cr_2var(system)
    solution = solve(complexify_2var(system, report, x0, y0))
    assert isinstance(solution, ClosedFormSolution)
    assert solution.validity == (-math.inf, math.inf)
    for t in (0.0, 0.1, 0.5, 1.0, 2.0, -0.5):
        z = eval_solution(solution, t)
        x, y = nicesol(t)
        assert abs(z.real - x) < 1e-12
        assert abs(z.imag - y) < 1e-12
    residual_check(solution, (CR(1, 1), CR(0), CR(-1, 1)))


def test_riccati_blow_up_validity():
    solution = solve_riccati(CR(0), CR(0), CR(1), CR(1))
    assert solution.metadata["mode"] == "riccati-double-exact"
    assert solution.validity == (-math.inf, 1.0)
    for t in (-1.0, 0.0, 0.9):
        assert abs(eval_solution(solution, t) - 1.0 / (1.0 - t)) < 1e-12
    with pytest.raises(ValidityError):
        eval_solution(solution, 1.0)
    with pytest.raises(ValidityError):
        eval_solution(solution, 2.0)


def test_riccati_logistic():
    solution = solve_riccati(CR(0), CR(1), CR(-1), CR(F(1, 2)))
    assert solution.validity == (-math.inf, math.inf)
    for t in (-2.0, 0.0, 1.5):
        expect = math.exp(t) / (1.0 + math.exp(t))
        assert abs(eval_solution(solution, t) - expect) < 1e-12
    residual_check(solution, (CR(0), CR(1), CR(-1)))


def test_riccati_tangent_validity():
    # dz = 1 + z^2 from 0 is tan(t): poles at +/- pi/2
    solution = solve_riccati(CR(1), CR(0), CR(1), CR(0))
    lo, hi = solution.validity
    assert abs(lo + math.pi / 2) < 1e-12
    assert abs(hi - math.pi / 2) < 1e-12
    for t in (-1.2, 0.3, 1.2):
        assert abs(eval_solution(solution, t) - math.tan(t)) < 1e-10


def test_riccati_fixed_point():
    # z0 sitting exactly on a root stays put
    solution = solve_riccati(CR(0), CR(1), CR(-1), CR(1))
    assert solution.metadata["mode"] == "fixed-point"
    assert eval_solution(solution, 10.0) == complex(1)


def test_riccati_near_double_float_inputs():
    eps = 1e-11
    solution = solve_riccati(complex(0.25 - eps), complex(-1), complex(1), complex(2))
    assert solution.metadata["mode"] == "riccati-double-threshold"
    residual_check(solution, (complex(0.25 - eps), complex(-1), complex(1)), n_samples=40)


def test_riccati_defers_to_linear():
    solution = solve_riccati(CR(1), CR(1), CR(0), CR(0))
    assert solution.metadata["mode"] == "linear"


# ---- cubic -----------------------------------------------------------------


def test_cubic_triple_root_first_example():
    # dz = (z - 2)^3 from 2 + i: x stays 2, y = (1 + 2t)^(-1/2)
    solution = solve_cubic_ode(CR(-8), CR(12), CR(-6), CR(1), CR(2, 1))
    assert solution.metadata["mode"] == "cubic-triple-exact"
    assert solution.validity == (-0.5, math.inf)
    for t in (-0.4, 0.0, 1.5, 3.0):
        z = eval_solution(solution, t)
        assert abs(z.real - 2.0) < 1e-12
        assert abs(z.imag - (1.0 + 2.0 * t) ** -0.5) < 1e-12
    assert abs(eval_solution(solution, 1.5) - complex(2, 0.5)) < 1e-12
    with pytest.raises(ValidityError):
        eval_solution(solution, -0.5)


def test_cubic_triple_root_second_example():
    # dz = (z - i)^3 from 2 + i: x = 2 (1 - 8t)^(-1/2), y stays 1
    solution = solve_cubic_ode(CR(0, 1), CR(-3), CR(0, -3), CR(1), CR(2, 1))
    assert solution.validity == (-math.inf, 0.125)
    for t in (-1.0, 0.0, 0.12):
        z = eval_solution(solution, t)
        assert abs(z.real - 2.0 * (1.0 - 8.0 * t) ** -0.5) < 1e-12
        assert abs(z.imag - 1.0) < 1e-12
    with pytest.raises(ValidityError):
        eval_solution(solution, 0.125)


def test_cubic_fixed_point():
    solution = solve_cubic_ode(CR(-8), CR(12), CR(-6), CR(1), CR(2))
    assert solution.metadata["mode"] == "fixed-point"
    assert eval_solution(solution, 4.0) == complex(2)


def test_cubic_three_roots_implicit_drift():
    # dz = (z-1)(z-i)(z-1-i): no useful explicit form; first integral instead
    coeffs = (CR(1, -1), CR(0, 3), CR(-2, -2), CR(1))
    z0 = CR(F(3, 10), F(1, 5))
    solution = solve_cubic_ode(*coeffs, z0)
    assert isinstance(solution, ImplicitSolution)
    ode = ComplexScalarODE(ComplexPoly(coeffs), z0)
    samples = list(np.linspace(0.0, 0.8, 160))
    trajectory = integrate(ode, z0, 0.8, rel_tol=1e-11, abs_tol=1e-13, t_eval=samples)
    points = [complex(s[0], s[1]) for s in trajectory.states]
    drift = max(
        abs(phi - t) for phi, t in zip(solution.first_integral_values(points), trajectory.times)
    )
    assert drift < 1e-6


def test_cubic_implicit_inversion_matches_integration():
    coeffs = (CR(1, -1), CR(0, 3), CR(-2, -2), CR(1))
    z0 = CR(F(3, 10), F(1, 5))
    solution = solve_cubic_ode(*coeffs, z0)
    assert eval_solution(solution, 0.0) == complex(z0)
    samples = [0.1, 0.35, 0.6]
    trajectory = integrate(
        ComplexScalarODE(ComplexPoly(coeffs), z0), z0, 0.6,
        rel_tol=1e-12, abs_tol=1e-14, t_eval=samples,
    )
    for t, state in zip(trajectory.times, trajectory.states):
        z = eval_solution(solution, float(t))
        assert abs(z - complex(state[0], state[1])) < 1e-9


def test_cubic_double_root_implicit():
    # dz = (z - 1)^2 (z - 3) = z^3 - 5 z^2 + 7 z - 3
    coeffs = (CR(-3), CR(7), CR(-5), CR(1))
    z0 = CR(2, 1)
    solution = solve_cubic_ode(*coeffs, z0)
    assert isinstance(solution, ImplicitSolution)
    assert solution.metadata["mode"] == "cubic-implicit-double-exact"
    samples = list(np.linspace(0.0, 0.5, 80))
    trajectory = integrate(
        ComplexScalarODE(ComplexPoly(coeffs), z0), z0, 0.5,
        rel_tol=1e-11, abs_tol=1e-13, t_eval=samples,
    )
    points = [complex(s[0], s[1]) for s in trajectory.states]
    drift = max(
        abs(phi - t) for phi, t in zip(solution.first_integral_values(points), trajectory.times)
    )
    assert drift < 1e-6


def test_cubic_defers_to_riccati():
    solution = solve_cubic_ode(CR(0), CR(0), CR(1), CR(0), CR(1))
    assert solution.metadata["mode"].startswith("riccati")


# ---- dispatch and components ----------------------------------------------


def test_solve_dispatch_unsupported_degree():
    coeffs = tuple(CR(v) for v in (1, 0, 0, 0, 1))
    with pytest.raises(UnsupportedDegreeError):
        solve(ComplexScalarODE(ComplexPoly(coeffs), CR(0)))


def test_solve_dispatch_drops_exact_zero_leading():
    coeffs = (CR(1), CR(1), CR(0), CR(0), CR(0))
    solution = solve(ComplexScalarODE(ComplexPoly(coeffs), CR(0)))
    assert solution.metadata["mode"] == "linear"


def test_real_components_rotation():
    solution = solve_linear(CR(0), CR(0, 1), CR(1))
    x_of, y_of = real_components(solution)
    for t in (0.0, 0.7, 2.0):
        assert abs(x_of(t) - math.cos(t)) < 1e-13
        assert abs(y_of(t) - math.sin(t)) < 1e-13


def test_real_components_published_quadratic():
    system, (x0, y0) = second01_system()
    solution = solve(complexify_2var(system, check_cr_2var(system), x0, y0))
    x_of, y_of = real_components(solution)
    for t in (0.0, 0.5, 1.0):
        x, y = nicesol(t)
        assert abs(x_of(t) - x) < 1e-12
        assert abs(y_of(t) - y) < 1e-12


def test_real_components_second_cubic():
    solution = solve_cubic_ode(CR(0, 1), CR(-3), CR(0, -3), CR(1), CR(2, 1))
    x_of, y_of = real_components(solution)
    assert abs(x_of(0.1) - 2.0 / math.sqrt(1.0 - 0.8)) < 1e-12
    assert abs(y_of(0.1) - 1.0) < 1e-12


def test_residuals_on_random_explicit_solutions():
    rng = random.Random(33)
    for _ in range(25):
        degree = rng.choice([1, 2, 2, 3])
        if degree < 3:
            coeffs = [complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)) for _ in range(degree + 1)]
            if abs(coeffs[-1]) < 0.1:
                coeffs[-1] = complex(1)
        else:
            c3 = complex(rng.uniform(0.3, 1.5), rng.uniform(-1, 1))
            rho = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            # expanded (z - rho)^3 times c3
            coeffs = [
                -c3 * rho**3,
                3 * c3 * rho**2,
                -3 * c3 * rho,
                c3,
            ]
        z0 = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        solution = solve(ComplexScalarODE(ComplexPoly(tuple(coeffs)), z0))
        if isinstance(solution, ClosedFormSolution):
            residual_check(solution, coeffs, n_samples=40)
