"""Closed-form and implicit solutions of complex scalar ODEs of degree <= 3.

Explicit solutions are expression trees with a computed validity interval:
the connected component around t = 0 on which every denominator and radicand
stays away from its singular set.  Intervals are computed from the explicit
zero conditions, not assumed.

Degree 3 with distinct roots has no useful explicit form; it gets an
:class:`ImplicitSolution` built on the first integral

    Phi(z) = sum_j w_j * log(z - z_j)  (+ 1/(z - z_j) terms for double roots)

normalized so Phi(z0) = 0 and Phi(z(t)) = t along the true solution.  The
log branches are tracked by continuity along a cached seed trajectory (a
small fixed-grid RK4 walk owned by this module; the adaptive verification
integrator lives elsewhere and shares no code with evaluation here).
"""

from __future__ import annotations

import cmath
import math
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence, Union

from .complex_numbers import (
    ComplexRational,
    Scalar,
    as_complex,
    cubic_roots,
    quadratic_roots,
    scalar_is_zero,
    to_exact,
)
from .complexify import ComplexPoly, ComplexScalarODE
from .expressions import Add, Const, Div, Exp, Expr, Mul, Neg, Pow, Time, evaluate

_INF = float("inf")


class UnsupportedDegreeError(ValueError):
    """The equation degree is outside the supported range (<= 3)."""


class ValidityError(ValueError):
    """Requested evaluation time lies outside the solution's validity."""


class NewtonConvergenceError(RuntimeError):
    """The implicit inverter failed to converge."""


def _as_scalar(value: Scalar) -> Scalar:
    exact = to_exact(value)
    if exact is not None:
        return exact
    return complex(value)


def _close(a: complex, b: complex, rel: float = 1e-12) -> bool:
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class ClosedFormSolution:
    """Explicit solution: an evaluable expression with its validity interval."""

    expr: Expr
    validity: tuple[float, float]
    metadata: Mapping = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return "explicit"


def _require_inside(validity: tuple[float, float], t: float) -> None:
    lo, hi = validity
    if not lo < t < hi:
        raise ValidityError(f"t = {t} outside the validity interval ({lo}, {hi})")


# ---------------------------------------------------------------------------
# explicit solvers


def solve_linear(c0: Scalar, c1: Scalar, z0: Scalar) -> ClosedFormSolution:
    """dz/dt = c0 + c1 z.

    c1 = 0 degenerates to the straight line z0 + c0 t; otherwise
    z(t) = e^(c1 t) (z0 + c0/c1) - c0/c1.  Valid for all times.
    """
    c0, c1, z0 = _as_scalar(c0), _as_scalar(c1), _as_scalar(z0)
    if scalar_is_zero(c1):
        expr = Add((Const(as_complex(z0)), Mul((Const(as_complex(c0)), Time()))))
        return ClosedFormSolution(expr, (-_INF, _INF), {"mode": "constant-slope"})
    offset = c0 / c1
    amplitude = z0 + offset
    expr = Add(
        (
            Mul((Const(as_complex(amplitude)), Exp(Mul((Const(as_complex(c1)), Time()))))),
            Const(-as_complex(offset)),
        )
    )
    meta = {"mode": "linear", "rate": as_complex(c1), "fixed_point": -as_complex(offset)}
    return ClosedFormSolution(expr, (-_INF, _INF), meta)


def _constant_solution(z0: Scalar, roots, leading, mode: str) -> ClosedFormSolution:
    meta = {
        "mode": mode,
        "roots": tuple(as_complex(r) for r in roots),
        "leading": as_complex(leading),
    }
    return ClosedFormSolution(Const(as_complex(z0)), (-_INF, _INF), meta)


def _interval_from_real_pole(pole: float) -> tuple[float, float]:
    return (-_INF, pole) if pole > 0 else (pole, _INF)


def _reciprocal_pole_interval(product: Scalar) -> tuple[float, float]:
    """Validity of 1/(1 - product*t): splits at t = 1/product when real."""
    exact = to_exact(product)
    if exact is not None:
        if exact.is_zero():
            return (-_INF, _INF)
        pole = ComplexRational(1) / exact
        if pole.im == 0:
            return _interval_from_real_pole(float(pole.re))
        return (-_INF, _INF)
    value = as_complex(product)
    if value == 0:
        return (-_INF, _INF)
    pole = 1.0 / value
    if abs(pole.imag) <= 1e-12 * abs(pole):
        return _interval_from_real_pole(pole.real)
    return (-_INF, _INF)


def _exp_denominator_interval(ratio: complex, rate: complex) -> tuple[float, float]:
    """Validity of 1/(1 - ratio * e^(rate t)) around t = 0.

    The denominator vanishes only where rate*t lands on log(1/ratio) modulo
    2*pi*i.  With Re(rate) != 0 there is at most one real crossing; with
    Re(rate) = 0 there are either none or a periodic family.
    """
    if ratio == 0:
        return (-_INF, _INF)
    p, q = rate.real, rate.imag
    scale = abs(rate)
    alpha = -math.log(abs(ratio))
    if abs(p) > 1e-12 * scale:
        t_star = alpha / p
        if t_star != 0 and abs(1.0 - ratio * cmath.exp(rate * t_star)) < 1e-9:
            return _interval_from_real_pole(t_star)
        return (-_INF, _INF)
    if abs(alpha) > 1e-12:
        return (-_INF, _INF)
    period = abs(2.0 * math.pi / q)
    first = (-cmath.phase(ratio) / q) % period
    if first <= 0.0:
        first = period
    return (first - period, first)


def solve_riccati(c0: Scalar, c1: Scalar, c2: Scalar, z0: Scalar) -> ClosedFormSolution:
    """dz/dt = c0 + c1 z + c2 z^2 with c2 != 0 (c2 = 0 defers to the linear solver).

    Distinct roots z1, z2 of the right-hand side give
    z(t) = z1 + (z2 - z1) / (1 - ((z0 - z2)/(z0 - z1)) e^(c2 (z2 - z1) t));
    a double root z* gives z(t) = z* + (z0 - z*)/(1 - c2 (z0 - z*) t); an
    initial value sitting on a root stays there.
    """
    c0, c1, c2, z0 = (_as_scalar(v) for v in (c0, c1, c2, z0))
    if scalar_is_zero(c2):
        return solve_linear(c0, c1, z0)
    exact = [to_exact(v) for v in (c0, c1, c2, z0)]
    all_exact = None not in exact
    mode_suffix = "exact" if all_exact else "threshold"

    if all_exact:
        e0, e1, e2, ez = exact
        disc = e1 * e1 - ComplexRational(4) * e2 * e0
        double = disc.is_zero()
        zstar = -e1 / (ComplexRational(2) * e2) if double else None
        on_root = (e2 * ez * ez + e1 * ez + e0).is_zero()
    else:
        f0, f1, f2, fz = (as_complex(v) for v in (c0, c1, c2, z0))
        r1, r2 = (as_complex(r) for r in quadratic_roots(f2, f1, f0))
        double = _close(r1, r2, rel=1e-9)
        zstar = -f1 / (2.0 * f2) if double else None
        on_root = min(abs(fz - r1), abs(fz - r2)) <= 1e-12 * max(1.0, abs(fz), abs(r1), abs(r2))

    if double:
        roots = (zstar, zstar)
        if on_root:
            return _constant_solution(z0, roots, c2, "fixed-point")
        w0 = z0 - zstar
        product = c2 * w0
        denom = Add((Const(1), Neg(Mul((Const(as_complex(product)), Time())))))
        expr = Add((Const(as_complex(zstar)), Div(Const(as_complex(w0)), denom)))
        meta = {
            "mode": f"riccati-double-{mode_suffix}",
            "roots": tuple(as_complex(r) for r in roots),
            "leading": as_complex(c2),
        }
        return ClosedFormSolution(expr, _reciprocal_pole_interval(product), meta)

    r1, r2 = quadratic_roots(c2, c1, c0)
    if on_root:
        return _constant_solution(z0, (r1, r2), c2, "fixed-point")
    fz = as_complex(z0)
    fa, fb = as_complex(r1), as_complex(r2)
    if abs(fz - fa) < abs(fz - fb):  # anchor on the farther root so |ratio| <= 1
        fa, fb = fb, fa
    ratio = (fz - fb) / (fz - fa)
    rate = as_complex(c2) * (fb - fa)
    expr = Add(
        (
            Const(fa),
            Div(
                Const(fb - fa),
                Add((Const(1), Neg(Mul((Const(ratio), Exp(Mul((Const(rate), Time())))))))),
            ),
        )
    )
    meta = {
        "mode": "riccati-distinct",
        "roots": (as_complex(r1), as_complex(r2)),
        "leading": as_complex(c2),
    }
    return ClosedFormSolution(expr, _exp_denominator_interval(ratio, rate), meta)


def _radicand_interval(mu: Scalar) -> tuple[float, float]:
    """Validity of (1 - mu t)^(-1/2): where the radicand stays off (-inf, 0]."""
    exact = to_exact(mu)
    if exact is not None:
        if exact.im == 0:
            m = float(exact.re)
            return _interval_from_real_pole(1.0 / m)
        return (-_INF, _INF)
    value = as_complex(mu)
    if abs(value.imag) <= 1e-12 * abs(value):
        return _interval_from_real_pole(1.0 / value.real)
    return (-_INF, _INF)


def _triple_root_solution(c3: Scalar, rho: Scalar, z0: Scalar, mode_suffix: str) -> ClosedFormSolution:
    w0 = z0 - rho
    mu = 2 * c3 * w0 * w0
    radicand = Add((Const(1), Neg(Mul((Const(as_complex(mu)), Time())))))
    expr = Add((Const(as_complex(rho)), Mul((Const(as_complex(w0)), Pow(radicand, Fraction(-1, 2))))))
    meta = {
        "mode": f"cubic-triple-{mode_suffix}",
        "roots": (as_complex(rho),) * 3,
        "leading": as_complex(c3),
    }
    return ClosedFormSolution(expr, _radicand_interval(mu), meta)


def solve_cubic_ode(
    c0: Scalar, c1: Scalar, c2: Scalar, c3: Scalar, z0: Scalar
) -> Union[ClosedFormSolution, "ImplicitSolution"]:
    """dz/dt = c0 + c1 z + c2 z^2 + c3 z^3 with c3 != 0 (c3 = 0 defers down).

    Triple root z*:   z(t) = z* + (z0 - z*) (1 - 2 c3 (z0 - z*)^2 t)^(-1/2),
    the branch continuous from t = 0 (inside the computed validity interval
    the radicand never meets the principal cut, so the principal power is
    that branch).  Initial value on a root: constant.  Otherwise an implicit
    first-integral solution with partial-fraction weights.
    """
    c0, c1, c2, c3, z0 = (_as_scalar(v) for v in (c0, c1, c2, c3, z0))
    if scalar_is_zero(c3):
        return solve_riccati(c0, c1, c2, z0)
    exact = [to_exact(v) for v in (c0, c1, c2, c3, z0)]
    all_exact = None not in exact

    if all_exact:
        e0, e1, e2, e3, ez = exact
        on_root = (((e3 * ez + e2) * ez + e1) * ez + e0).is_zero()
        d0 = e2 * e2 - ComplexRational(3) * e3 * e1
        disc = (
            ComplexRational(18) * e3 * e2 * e1 * e0
            - ComplexRational(4) * e2**3 * e0
            + e2 * e2 * e1 * e1
            - ComplexRational(4) * e3 * e1**3
            - ComplexRational(27) * e3 * e3 * e0 * e0
        )
        if disc.is_zero() and d0.is_zero():
            rho = -e2 / (ComplexRational(3) * e3)
            if on_root:
                return _constant_solution(z0, (rho,) * 3, c3, "fixed-point")
            return _triple_root_solution(e3, rho, ez, "exact")
        roots = cubic_roots(c3, c2, c1, c0)
        if on_root:
            return _constant_solution(z0, roots, c3, "fixed-point")
        if disc.is_zero():
            zd = (ComplexRational(9) * e3 * e0 - e2 * e1) / (ComplexRational(2) * d0)
            zs = (ComplexRational(4) * e3 * e2 * e1 - ComplexRational(9) * e3 * e3 * e0 - e2**3) / (e3 * d0)
            return _double_root_implicit(c3, c2, c1, c0, z0, as_complex(zd), as_complex(zs), "exact")
        return _distinct_roots_implicit(c3, c2, c1, c0, z0, [as_complex(r) for r in roots])

    f0, f1, f2, f3, fz = (as_complex(v) for v in (c0, c1, c2, c3, z0))
    roots = [as_complex(r) for r in cubic_roots(f3, f2, f1, f0)]
    scale = max([1.0] + [abs(r) for r in roots])
    on_root = min(abs(fz - r) for r in roots) <= 1e-12 * max(scale, abs(fz))
    if on_root:
        return _constant_solution(z0, roots, c3, "fixed-point")
    gaps = [abs(roots[0] - roots[1]), abs(roots[0] - roots[2]), abs(roots[1] - roots[2])]
    tol = 1e-9 * scale
    if all(g < tol for g in gaps):
        rho = -f2 / (3.0 * f3)
        return _triple_root_solution(f3, rho, fz, "threshold")
    if min(gaps) < tol:
        d0 = f2 * f2 - 3.0 * f3 * f1
        zd = (9.0 * f3 * f0 - f2 * f1) / (2.0 * d0)
        zs = (4.0 * f3 * f2 * f1 - 9.0 * f3 * f3 * f0 - f2**3) / (f3 * d0)
        return _double_root_implicit(c3, c2, c1, c0, z0, zd, zs, "threshold")
    return _distinct_roots_implicit(c3, c2, c1, c0, z0, roots)


def _distinct_roots_implicit(c3, c2, c1, c0, z0, roots: list[complex]) -> "ImplicitSolution":
    lead = as_complex(c3)
    weights = []
    for j, rj in enumerate(roots):
        prod = lead
        for k, rk in enumerate(roots):
            if k != j:
                prod *= rj - rk
        weights.append(1.0 / prod)
    poly = ComplexPoly((c0, c1, c2, c3))
    return ImplicitSolution(
        poly,
        as_complex(z0),
        tuple(roots),
        tuple(weights),
        (0.0,) * len(roots),
        {"mode": "cubic-implicit-distinct", "roots": tuple(roots), "leading": lead},
    )


def _double_root_implicit(c3, c2, c1, c0, z0, double: complex, simple: complex, suffix: str) -> "ImplicitSolution":
    # 1/(c3 (z - zd)^2 (z - zs)) = (-1/(c3 D^2))/(z-zd) + (1/(c3 D))/(z-zd)^2
    #                              + (1/(c3 D^2))/(z-zs),  D = zd - zs
    lead = as_complex(c3)
    gap = double - simple
    log_weights = (-1.0 / (lead * gap * gap), 1.0 / (lead * gap * gap))
    pole_weights = (1.0 / (lead * gap), 0.0)
    poly = ComplexPoly((c0, c1, c2, c3))
    return ImplicitSolution(
        poly,
        as_complex(z0),
        (double, simple),
        log_weights,
        pole_weights,
        {
            "mode": f"cubic-implicit-double-{suffix}",
            "roots": (double, double, simple),
            "leading": lead,
        },
    )


# ---------------------------------------------------------------------------
# implicit solutions


def _rk4_walk(
    rhs: Callable[[complex], complex],
    z0: complex,
    t_end: float,
    n_points: int,
    stop_radius: Callable[[complex], bool],
) -> tuple[list[float], list[complex]]:
    """Fixed-grid RK4 walk from t = 0 toward t_end, derivative-bounded substeps.

    Stops early at blow-up, loss of finiteness, or when ``stop_radius``
    fires; the recorded points are what the branch tracker anchors to.
    """
    times = [0.0]
    states = [z0]
    if t_end == 0 or n_points == 0:
        return times, states
    direction = 1.0 if t_end > 0 else -1.0
    z = z0
    t = 0.0
    grid = [t_end * (k + 1) / n_points for k in range(n_points)]
    for target in grid:
        substeps = 0
        while (target - t) * direction > 1e-15 * max(1.0, abs(target)):
            substeps += 1
            if substeps > 10_000:  # crawling toward a singularity: truncate
                return times, states
            speed = abs(rhs(z))
            # relative bound: |dz| stays near 5% of the state scale per substep
            h = direction * min(abs(target - t), 0.05 * (1.0 + abs(z)) / (1.0 + speed))
            k1 = rhs(z)
            k2 = rhs(z + 0.5 * h * k1)
            k3 = rhs(z + 0.5 * h * k2)
            k4 = rhs(z + h * k3)
            z_next = z + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            if (
                not (math.isfinite(z_next.real) and math.isfinite(z_next.imag))
                or abs(z_next) > 1e6
                or stop_radius(z_next)
            ):
                return times, states
            z = z_next
            t += h
        times.append(target)
        states.append(z)
    return times, states


class ImplicitSolution:
    """First-integral solution Phi(z(t)) = t for cubics without a triple root.

    Phi(z) = sum_j w_j [log(z - z_j) - log(z0 - z_j)]
             - sum_j b_j [1/(z - z_j) - 1/(z0 - z_j)]

    with weights from the partial fractions of 1/P(z), so dPhi/dz = 1/P(z)
    and Phi is constant minus t along solutions.  Construction walks a seed
    trajectory once and unwraps every log argument continuously; after that
    the object is read-only and evaluation (Newton on Phi(z) - t = 0, seeded
    from the nearest cached point) is safe for concurrent use.
    """

    kind = "implicit"

    def __init__(
        self,
        poly: ComplexPoly,
        z0: complex,
        roots: tuple[complex, ...],
        log_weights: tuple[complex, ...],
        pole_weights: tuple[complex, ...],
        metadata: Mapping,
        seed_horizon: tuple[float, float] = (-4.0, 4.0),
        seed_points: int = 400,
    ):
        self.poly = poly
        self.z0 = z0
        self.roots = roots
        self.log_weights = log_weights
        self.pole_weights = pole_weights
        self.metadata = dict(metadata)
        root_scale = max([1.0] + [abs(r) for r in roots])

        def near_root(z: complex) -> bool:
            return min(abs(z - r) for r in roots) < 1e-8 * root_scale

        rhs = self.poly.__call__
        lo, hi = seed_horizon
        if not lo <= 0 <= hi:
            raise ValueError("seed horizon must contain t = 0")
        n_back = round(seed_points * abs(lo) / max(hi - lo, 1e-12))
        t_back, z_back = _rk4_walk(rhs, z0, lo, n_back, near_root)
        t_fwd, z_fwd = _rk4_walk(rhs, z0, hi, seed_points - n_back, near_root)
        times = list(reversed(t_back)) + t_fwd[1:]
        states = list(reversed(z_back)) + z_fwd[1:]
        self._times = times
        self._states = states
        self._phi = self._unwrap_phi(states, anchor_index=len(t_back) - 1)
        self.validity = (times[0], times[-1])

    # -- branch-tracked first-integral values ----------------------------

    def _phi_increments(self, points: Sequence[complex]) -> list[complex]:
        """Phi at each point, logs unwrapped continuously along the sequence.

        The branch is anchored so the principal log is used at ``self.z0``;
        the first point is expected to be reachable from z0 without crossing
        a cut (callers pass trajectories starting at z0).
        """
        base_logs = [cmath.log(points[0] - r) for r in self.roots]
        anchor_logs = [cmath.log(self.z0 - r) for r in self.roots]
        out = []
        logs = list(base_logs)
        prev = points[0]
        for idx, z in enumerate(points):
            if idx > 0:
                for j, r in enumerate(self.roots):
                    logs[j] += cmath.log((z - r) / (prev - r))
                prev = z
            value = complex(0)
            for j, r in enumerate(self.roots):
                value += self.log_weights[j] * (logs[j] - anchor_logs[j])
                if self.pole_weights[j]:
                    value -= self.pole_weights[j] * (1.0 / (z - r) - 1.0 / (self.z0 - r))
            out.append(value)
        return out

    def _unwrap_phi(self, states: Sequence[complex], anchor_index: int) -> list[complex]:
        forward = self._phi_increments(states[anchor_index:])
        backward = self._phi_increments(states[anchor_index::-1])
        return list(reversed(backward[1:])) + forward

    def first_integral_values(self, points: Sequence[complex]) -> list[complex]:
        """Phi along a supplied trajectory (continuity-in-sequence branches)."""
        return self._phi_increments(points)

    def _phi_near(self, z: complex, seed_index: int) -> complex:
        anchor = self._states[seed_index]
        value = self._phi[seed_index]
        for j, r in enumerate(self.roots):
            value += self.log_weights[j] * cmath.log((z - r) / (anchor - r))
            if self.pole_weights[j]:
                value -= self.pole_weights[j] * (1.0 / (z - r) - 1.0 / (anchor - r))
        return value

    def evaluate(self, t: float, residual_tol: float = 1e-10, max_iter: int = 50) -> complex:
        lo, hi = self.validity
        if not lo <= t <= hi:
            raise ValidityError(f"t = {t} outside the seeded horizon ({lo}, {hi})")
        idx = min(
            range(max(0, bisect_left(self._times, t) - 1), min(len(self._times), bisect_left(self._times, t) + 1)),
            key=lambda i: abs(self._times[i] - t),
        )
        z = self._states[idx]
        for _ in range(max_iter):
            residual = self._phi_near(z, idx) - t
            if abs(residual) < residual_tol:
                return z
            z = z - residual * self.poly(z)
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                break
        raise NewtonConvergenceError(f"no convergence inverting the first integral at t = {t}")


Solution = Union[ClosedFormSolution, ImplicitSolution]


# ---------------------------------------------------------------------------
# dispatch and evaluation


def solve(ode: ComplexScalarODE) -> Solution:
    """Dispatch on the effective degree (exact-zero leading terms dropped)."""
    coeffs = ode.poly.coefficients
    degree = ode.poly.degree
    if degree == 0:
        return solve_linear(coeffs[0], 0, ode.z0)
    if degree == 1:
        return solve_linear(coeffs[0], coeffs[1], ode.z0)
    if degree == 2:
        return solve_riccati(coeffs[0], coeffs[1], coeffs[2], ode.z0)
    if degree == 3:
        return solve_cubic_ode(coeffs[0], coeffs[1], coeffs[2], coeffs[3], ode.z0)
    raise UnsupportedDegreeError(f"degree {degree} is not supported (the limit is 3)")


def eval_solution(solution: Solution, t: float) -> complex:
    """Value z(t); validity is enforced, implicit solutions are inverted."""
    if isinstance(solution, ClosedFormSolution):
        _require_inside(solution.validity, t)
        return evaluate(solution.expr, t)
    if isinstance(solution, ImplicitSolution):
        return solution.evaluate(t)
    raise TypeError(f"not a solution object: {solution!r}")


def real_components(solution: Solution) -> tuple[Callable[[float], float], Callable[[float], float]]:
    """The two coordinate functions t -> x(t), t -> y(t)."""

    def x_of(t: float) -> float:
        return eval_solution(solution, t).real

    def y_of(t: float) -> float:
        return eval_solution(solution, t).imag

    return x_of, y_of
