import random
from fractions import Fraction as F

import pytest

from erugin import (
    CRParameters,
    RealPoly,
    RealPolySystem,
    check_calogero_payandeh,
    check_cr_2var,
    check_cr_2var_via_recursions,
    check_cr_multivar,
    cr_parameterize,
    cr_solution_dimensions,
    random_cr_system,
)

from _builders import (
    cp_example_system,
    cubic_kinetic_system,
    linear_cr_system,
    quadratic_kinetic_system,
    second01_system,
)


def test_second_order_example_report():
    system, _ = second01_system()
    report = check_cr_2var(system)
    assert report.satisfied
    assert report.degree == 2
    p = report.parameters
    assert (p.const_x, p.const_y) == (F(1), F(1))
    assert p.pairs == ((F(0), F(0)), (F(-1), F(-2)))
    assert report.free_parameter_count == 5  # 2R + 1


def test_linear_iff_coupling():
    good = linear_cr_system(F(1, 2), F(-3), F(2, 3), F(5))
    assert check_cr_2var(good).satisfied
    # dy coefficient of y must equal b, of x must equal -c
    u = RealPoly(2, {(0, 0): 1, (1, 0): 2, (0, 1): 3})
    v = RealPoly(2, {(0, 0): 4, (1, 0): -3, (0, 1): 5})  # 5 != 2 breaks it
    assert not check_cr_2var(RealPolySystem(("x", "y"), (u, v))).satisfied


def test_pure_square_violation():
    system = RealPolySystem(("x", "y"), (RealPoly(2, {(2, 0): 1}), RealPoly.zero(2)))
    report = check_cr_2var(system)
    assert not report.satisfied
    assert report.parameters is None
    [violation] = report.violations
    assert violation.left == 2 and violation.right == 0


def test_parameterize_reproduces_second_order_example():
    system, _ = second01_system()
    params = CRParameters.of(1, 1, [(0, 0), (-1, -2)])
    assert cr_parameterize(params).equations == system.equations


def test_parameterize_linear_form():
    a, b, c, A = F(1, 3), F(-2), F(7, 2), F(4)
    built = cr_parameterize(CRParameters.of(a, A, [(b, c)]))
    assert built.equations == linear_cr_system(a, b, c, A).equations


def test_parameterize_zero():
    built = cr_parameterize(CRParameters.of(0, 0, [(0, 0), (0, 0)]))
    assert all(eq.is_zero() for eq in built.equations)


def test_generator_checker_round_trip():
    rng = random.Random(42)
    for _ in range(200):
        degree = rng.randint(0, 6)
        params, system = random_cr_system(degree, rng)
        report = check_cr_2var(system)
        assert report.satisfied
        assert report.parameters == params


def test_two_verification_routes_agree():
    rng = random.Random(43)
    for _ in range(150):
        degree = rng.randint(0, 5)
        _, system = random_cr_system(degree, rng)
        assert check_cr_2var_via_recursions(system).satisfied
        # break a determined coefficient of the second equation (everything
        # except its constant term is forced); both routes must reject
        u, v = system.equations
        exps = rng.choice([(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)])
        broken = RealPolySystem(system.variables, (u, v + RealPoly(2, {exps: F(1, 7)})))
        a = check_cr_2var(broken).satisfied
        b = check_cr_2var_via_recursions(broken).satisfied
        assert a == b
        assert not a


def test_scaling_preserves_verdict():
    rng = random.Random(44)
    for _ in range(50):
        _, system = random_cr_system(rng.randint(0, 4), rng)
        factor = F(rng.choice([-3, -1, 2, 5]), rng.randint(1, 4))
        assert check_cr_2var(system.scale(factor)).satisfied
    bad = RealPolySystem(("x", "y"), (RealPoly(2, {(2, 0): 1}), RealPoly.zero(2)))
    assert not check_cr_2var(bad.scale(F(-7, 3))).satisfied


def test_tolerant_variant_accepts_small_residuals():
    system, _ = second01_system()
    u, v = system.equations
    noisy = RealPolySystem(("x", "y"), (u + RealPoly(2, {(1, 0): F(1, 10**12)}), v))
    assert not check_cr_2var(noisy).satisfied
    assert check_cr_2var(noisy, tolerance=1e-9).satisfied


# ---- multivariate ---------------------------------------------------------


def kinetic_quadratic_4var(j1, j7, j11, j12, j15, k15, J2, J10, J11, J12, J15, K15):
    """The coupled kinetic family in (x1, y1, x2, y2) coordinates."""
    u1 = RealPoly(4, {(2, 0, 0, 0): j1, (0, 2, 0, 0): -F(j1), (1, 1, 0, 0): j7,
                      (1, 0, 0, 0): j11, (0, 0, 1, 0): j12, (0, 0, 0, 0): j15})
    v1 = RealPoly(4, {(2, 0, 0, 0): -F(j7) / 2, (0, 2, 0, 0): F(j7) / 2, (1, 1, 0, 0): 2 * F(j1),
                      (0, 1, 0, 0): j11, (0, 0, 0, 1): j12, (0, 0, 0, 0): k15})
    u2 = RealPoly(4, {(0, 0, 2, 0): J2, (0, 0, 0, 2): -F(J2), (0, 0, 1, 1): J10,
                      (1, 0, 0, 0): J11, (0, 0, 1, 0): J12, (0, 0, 0, 0): J15})
    v2 = RealPoly(4, {(0, 0, 2, 0): -F(J10) / 2, (0, 0, 0, 2): F(J10) / 2, (0, 0, 1, 1): 2 * F(J2),
                      (0, 1, 0, 0): J11, (0, 0, 0, 1): J12, (0, 0, 0, 0): K15})
    return RealPolySystem(("x1", "y1", "x2", "y2"), (u1, v1, u2, v2))


def test_multivar_kinetic_family_satisfies():
    system = kinetic_quadratic_4var(
        F(-1, 2), F(-2), F(-1), F(1, 2), F(2), F(1),
        F(-1), F(-3), F(1, 3), F(-2), F(0), F(3, 2),
    )
    report = check_cr_multivar(system, ((0, 1), (2, 3)))
    assert report.satisfied


def test_multivar_decoupled_blocks_satisfy():
    rng = random.Random(45)
    _, block_a = random_cr_system(2, rng)
    _, block_b = random_cr_system(1, rng)

    def embed(poly, offset):
        terms = {}
        for exps, coeff in poly:
            full = [0, 0, 0, 0]
            full[offset], full[offset + 1] = exps
            terms[tuple(full)] = coeff
        return RealPoly(4, terms)

    system = RealPolySystem(
        ("x1", "y1", "x2", "y2"),
        (
            embed(block_a.equations[0], 0),
            embed(block_a.equations[1], 0),
            embed(block_b.equations[0], 2),
            embed(block_b.equations[1], 2),
        ),
    )
    assert check_cr_multivar(system, ((0, 1), (2, 3))).satisfied


def test_multivar_single_cross_term_violates():
    eqs = (RealPoly(4, {(0, 0, 0, 1): 1}), RealPoly.zero(4), RealPoly.zero(4), RealPoly.zero(4))
    system = RealPolySystem(("x1", "y1", "x2", "y2"), eqs)
    report = check_cr_multivar(system, ((0, 1), (2, 3)))
    assert not report.satisfied
    assert report.violations


def test_multivar_rejects_odd_variable_count():
    system = RealPolySystem(("x",), (RealPoly.zero(1),))
    with pytest.raises(ValueError):
        check_cr_multivar(system, ((0, 0),))


def test_multivar_rejects_bad_pairing():
    system = kinetic_quadratic_4var(*([F(0)] * 11 + [F(1)]))
    with pytest.raises(ValueError):
        check_cr_multivar(system, ((0, 1), (1, 3)))


# ---- quadratic coupling conditions ---------------------------------------


def test_cp_worked_example_satisfies_cp_but_not_cr():
    system = cp_example_system()
    cp = check_calogero_payandeh(system)
    assert cp.satisfied
    assert cp.residuals == (F(0), F(0), F(0), F(0))
    assert not check_cr_2var(system).satisfied


def test_cp_violated_by_pure_cross_squares():
    system = RealPolySystem(
        ("x", "y"), (RealPoly(2, {(0, 2): 1}), RealPoly(2, {(2, 0): 1}))
    )
    cp = check_calogero_payandeh(system)
    assert not cp.satisfied
    assert cp.residuals[0] == 4  # 4 c13 c21


def test_cr_implies_cp_random():
    rng = random.Random(46)
    for _ in range(200):
        _, system = random_cr_system(rng.randint(0, 2), rng)
        assert check_calogero_payandeh(system).satisfied


def test_cp_rejects_higher_degree():
    system = cubic_kinetic_system(1, -1, -1, 0, 1, 0, 1)
    with pytest.raises(ValueError):
        check_calogero_payandeh(system)


def test_cp_on_kinetic_quadratic_family():
    system = quadratic_kinetic_system(F(1), F(-2), F(-1, 2), F(-3), F(2))
    assert check_cr_2var(system).satisfied
    assert check_calogero_payandeh(system).satisfied


# ---- parameter-space dimensions ------------------------------------------


def test_solution_space_dimensions():
    for degree in range(1, 7):
        full, first_equation = cr_solution_dimensions(degree)
        assert full == 2 * degree + 2
        assert first_equation == 2 * degree + 1
