"""Adaptive numeric integration: the independent oracle for symbolic claims.

An explicit embedded Runge-Kutta 5(4) pair (Dormand-Prince) with standard
step control.  This module never calls into closed-form evaluation; keeping
the two code paths disjoint is what makes verification meaningful.

Complex equations are integrated as their two-real-component expansion
computed numerically from the complex polynomial, not via the symbolic
realification (again: no shared path with the code under test).

Blow-up is declared when the step size underflows (below 1e-14 * |t_end|)
while the state magnitude exceeds the blow-up limit (default 1e8); the
reported t* is the last accepted time.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .cauchy_riemann import check_cr_2var
from .closed_form import Solution, eval_solution
from .complexify import ComplexODESystem, ComplexScalarODE, complexify_2var
from .complex_numbers import as_complex
from .kinetics import check_kinetic
from .polynomials import RealPoly, RealPolySystem

COMPLETED = "completed"
BLOW_UP = "blow-up"
MAX_STEPS = "max-steps"

_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    status: str
    blowup_time: float | None = None
    var_names: tuple[str, ...] = ()

    def state_at_index(self, i: int) -> np.ndarray:
        return self.states[i]


def _compile_real_rhs(system: RealPolySystem) -> Callable:
    """Generate a fast float right-hand side for a polynomial system."""
    n = system.nvars
    lines = ["def rhs(t, y):"]
    for i in range(n):
        lines.append(f"    v{i} = y[{i}]")
    returns = []
    for eq in system.equations:
        parts = []
        for exps, coeff in eq:
            factors = [repr(float(coeff))]
            for k, e in enumerate(exps):
                if e == 1:
                    factors.append(f"v{k}")
                elif e > 1:
                    factors.append(f"v{k}**{e}")
            parts.append("*".join(factors))
        returns.append(" + ".join(parts) if parts else "0.0")
    lines.append("    return (" + ", ".join(returns) + ("," if n == 1 else "") + ")")
    namespace: dict = {}
    exec(compile("\n".join(lines), "<system-rhs>", "exec"), namespace)
    return namespace["rhs"]


def _complex_scalar_rhs(ode: ComplexScalarODE) -> Callable:
    coeffs = ode.poly.float_coefficients()

    def rhs(t, y):
        z = complex(y[0], y[1])
        w = complex(0)
        for c in reversed(coeffs):
            w = w * z + c
        return (w.real, w.imag)

    return rhs


def _complex_system_rhs(system: ComplexODESystem) -> Callable:
    n = system.nvars
    compiled = [
        [(as_complex(c), exps) for exps, c in eq.terms.items()] for eq in system.equations
    ]

    def rhs(t, y):
        zs = [complex(y[2 * k], y[2 * k + 1]) for k in range(n)]
        out = []
        for terms in compiled:
            w = complex(0)
            for coeff, exps in terms:
                term = coeff
                for z, e in zip(zs, exps):
                    if e:
                        term *= z**e
                w += term
            out.append(w.real)
            out.append(w.imag)
        return tuple(out)

    return rhs


def _prepare(system, initial) -> tuple[Callable, list[float], tuple[str, ...]]:
    if isinstance(system, RealPolySystem):
        if len(initial) != system.nvars:
            raise ValueError(f"initial state has {len(initial)} entries, expected {system.nvars}")
        return _compile_real_rhs(system), [float(v) for v in initial], system.variables
    if isinstance(system, ComplexScalarODE):
        z = as_complex(initial) if not isinstance(initial, (tuple, list)) else complex(
            float(initial[0]), float(initial[1])
        )
        return _complex_scalar_rhs(system), [z.real, z.imag], ("Re(z)", "Im(z)")
    if isinstance(system, ComplexODESystem):
        if len(initial) != system.nvars:
            raise ValueError(f"initial vector has {len(initial)} entries, expected {system.nvars}")
        y0 = []
        names = []
        for name, z in zip(system.variables, initial):
            w = as_complex(z)
            y0 += [w.real, w.imag]
            names += [f"Re({name})", f"Im({name})"]
        return _complex_system_rhs(system), y0, tuple(names)
    raise TypeError(f"cannot integrate objects of type {type(system).__name__}")


def integrate(
    system,
    initial,
    t_end: float,
    rel_tol: float = 1e-9,
    abs_tol: float = 1e-12,
    t_eval: Sequence[float] | None = None,
    max_steps: int = 200_000,
    blow_limit: float = 1e8,
) -> Trajectory:
    """Integrate from t = 0 to ``t_end`` (either sign) with adaptive steps.

    With ``t_eval`` given, exactly those times are recorded (they must lie
    between 0 and ``t_end``); otherwise every accepted step is recorded.
    Times in the returned trajectory are always increasing.
    """
    if rel_tol <= 0 or abs_tol <= 0:
        raise ValueError("tolerances must be positive")
    rhs, y, names = _prepare(system, initial)
    dim = len(y)

    targets: list[float] | None = None
    if t_eval is not None:
        targets = sorted((float(t) for t in t_eval), reverse=t_end < 0)
        for t in targets:
            if t * (1 if t_end >= 0 else -1) < 0 or abs(t) > abs(t_end) + 1e-12:
                raise ValueError(f"sample time {t} outside [0, {t_end}]")

    times = [0.0]
    states = [tuple(y)]
    if targets is not None:
        times, states = [], []
        while targets and targets[0] == 0.0:
            targets.pop(0)
            times.append(0.0)
            states.append(tuple(y))

    status = COMPLETED
    blowup_time = None
    if t_end != 0.0:
        direction = 1.0 if t_end > 0 else -1.0
        h_min = 1e-14 * abs(t_end)

        def call(t, state):
            try:
                out = rhs(t, state)
            except (OverflowError, ValueError):
                return None
            if any(not math.isfinite(v) for v in out):
                return None
            return out

        f0 = call(0.0, y)
        if f0 is None:
            raise ValueError("right-hand side not finite at the initial state")
        norm_y = max(abs(v) for v in y) if y else 0.0
        norm_f = max(abs(v) for v in f0)
        h = direction * min(abs(t_end), 0.01 * (1.0 + norm_y) / (1.0 + norm_f))
        t = 0.0
        steps = 0
        while (t_end - t) * direction > 1e-15 * max(1.0, abs(t_end)):
            if steps >= max_steps:
                status = MAX_STEPS
                break
            steps += 1
            next_stop = t_end
            if targets:
                next_stop = targets[0]
            clamped = (t + h - next_stop) * direction > 0
            h_try = next_stop - t if clamped else h
            ks = [call(t, y)]
            failed = ks[0] is None
            if not failed:
                for i in range(1, 7):
                    yi = list(y)
                    for a, ki in zip(_DP_A[i], ks):
                        if a:
                            for j in range(dim):
                                yi[j] += h_try * a * ki[j]
                    ki = call(t + _DP_C[i] * h_try, yi)
                    if ki is None:
                        failed = True
                        break
                    ks.append(ki)
            if failed:
                err_norm = math.inf
            else:
                y_new = list(y)
                err = [0.0] * dim
                for b, e, ki in zip(_DP_B, _DP_E, ks):
                    for j in range(dim):
                        if b:
                            y_new[j] += h_try * b * ki[j]
                        err[j] += h_try * e * ki[j]
                acc = 0.0
                for j in range(dim):
                    sc = abs_tol + rel_tol * max(abs(y[j]), abs(y_new[j]))
                    acc += (err[j] / sc) ** 2
                err_norm = math.sqrt(acc / dim)
                if not math.isfinite(err_norm):
                    err_norm = math.inf
            if err_norm <= 1.0:
                t = next_stop if clamped else t + h_try
                y = y_new
                if targets is not None:
                    while targets and abs(targets[0] - t) <= 1e-15 * max(1.0, abs(t)):
                        targets.pop(0)
                        times.append(t)
                        states.append(tuple(y))
                else:
                    times.append(t)
                    states.append(tuple(y))
                if not clamped:
                    factor = 5.0 if err_norm == 0 else min(5.0, max(0.2, 0.9 * err_norm**-0.2))
                    h = h_try * factor
            else:
                shrink = 0.5 if math.isinf(err_norm) else max(0.1, 0.9 * err_norm**-0.2)
                h = h_try * min(0.9, shrink)
            if abs(h) < h_min:
                if max(abs(v) for v in y) > blow_limit:
                    status = BLOW_UP
                    blowup_time = t
                    break
                raise RuntimeError(f"step size underflow at t = {t} without blow-up")

    order = np.argsort(times, kind="stable")
    times_arr = np.asarray(times, dtype=float)[order]
    states_arr = np.asarray(states, dtype=float).reshape(len(times), dim)[order]
    return Trajectory(times_arr, states_arr, status, blowup_time, names)


def integrate_window(
    system,
    initial,
    horizon: tuple[float, float],
    t_eval: Sequence[float],
    **kwargs,
) -> Trajectory:
    """Integrate over a window containing 0, backward and forward as needed."""
    lo, hi = horizon
    if lo > 0 or hi < 0 or lo >= hi:
        raise ValueError(f"horizon {horizon} must be an interval containing 0")
    back = [t for t in t_eval if t < 0]
    fwd = [t for t in t_eval if t >= 0]
    pieces = []
    for t_end, samples in ((lo, back), (hi, fwd)):
        if samples:
            pieces.append(integrate(system, initial, t_end, t_eval=samples, **kwargs))
    if not pieces:
        raise ValueError("no sample times supplied")
    times = np.concatenate([p.times for p in pieces])
    states = np.concatenate([p.states for p in pieces])
    order = np.argsort(times, kind="stable")
    status = COMPLETED
    blowup = None
    for p in pieces:
        if p.status != COMPLETED:
            status = p.status
            blowup = p.blowup_time
    return Trajectory(times[order], states[order], status, blowup, pieces[0].var_names)


# ---------------------------------------------------------------------------
# symbolic-vs-numeric verification


@dataclass(frozen=True)
class VerificationReport:
    times: tuple[float, ...]
    deviations: tuple[float, ...]
    max_deviation: float
    horizon: tuple[float, float]
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def verify_solution(
    solution: Solution,
    system,
    initial,
    horizon: tuple[float, float],
    tol: float,
    n_samples: int = 200,
    rel_tol: float = 1e-11,
    abs_tol: float = 1e-13,
) -> VerificationReport:
    """Sup-norm gap between the symbolic solution and independent integration.

    ``horizon`` must sit inside the solution's validity interval.  The gap is
    measured at ``n_samples`` uniform times; ``passed`` compares it to
    ``tol``.
    """
    lo, hi = horizon
    if lo >= hi:
        raise ValueError(f"horizon {horizon} is empty")
    v_lo, v_hi = solution.validity
    if not (v_lo < lo and hi < v_hi):
        raise ValueError(f"horizon {horizon} outside the validity interval ({v_lo}, {v_hi})")
    samples = list(np.linspace(lo, hi, n_samples))
    trajectory = integrate_window(system, initial, (min(lo, 0.0), max(hi, 0.0)), samples,
                                  rel_tol=rel_tol, abs_tol=abs_tol)
    deviations = []
    for t, state in zip(trajectory.times, trajectory.states):
        z = eval_solution(solution, float(t))
        deviations.append(max(abs(state[0] - z.real), abs(state[1] - z.imag)))
    max_dev = max(deviations) if deviations else math.inf
    return VerificationReport(
        tuple(float(t) for t in trajectory.times),
        tuple(deviations),
        max_dev,
        horizon,
        tol,
    )


# ---------------------------------------------------------------------------
# perturbation study


@dataclass(frozen=True)
class DifferenceCurve:
    epsilon: float
    times: tuple[float, ...]
    differences: tuple[tuple[float, ...], ...]  # one row per time, one column per variable
    sup_norm: float
    status: str


@dataclass(frozen=True)
class PerturbationResult:
    var_names: tuple[str, ...]
    curves: tuple[DifferenceCurve, ...]

    def curve(self, epsilon: float) -> DifferenceCurve:
        for c in self.curves:
            if c.epsilon == epsilon:
                return c
        raise KeyError(f"no curve for epsilon = {epsilon}")


def perturbation_experiment(
    base: RealPolySystem,
    initial: Sequence,
    perturbation: tuple[int, Sequence[int], Fraction | int],
    eps_list: Sequence[float],
    horizon: float,
    n_samples: int = 201,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-12,
) -> PerturbationResult:
    """Difference between perturbed trajectories and the unperturbed closed form.

    ``perturbation`` is (equation index, monomial exponents, coefficient);
    epsilon times that term is added to the named equation.  The base system
    must pass the structure check (its symbolic solution is the reference)
    and every perturbed system must stay kinetic.  Curves are truncated with
    a blow-up status when integration does not reach the horizon.
    """
    eq_index, exponents, coefficient = perturbation
    report = check_cr_2var(base)
    if not report.satisfied:
        raise ValueError("the base system must satisfy the structure check")
    x0, y0 = initial
    from .closed_form import solve  # local import keeps module load cheap

    solution = solve(complexify_2var(base, report, x0, y0))
    samples = list(np.linspace(0.0, horizon, n_samples))
    bump = RealPoly(base.nvars, {tuple(exponents): Fraction(coefficient)})
    curves = []
    for eps in eps_list:
        eps_frac = Fraction(eps)  # floats convert exactly
        equations = list(base.equations)
        equations[eq_index] = equations[eq_index] + bump.scale(eps_frac)
        perturbed = RealPolySystem(base.variables, tuple(equations))
        kin = check_kinetic(perturbed)
        if not kin.kinetic:
            raise ValueError(f"perturbed system for epsilon = {eps} is not kinetic: {kin.offenders}")
        trajectory = integrate(perturbed, initial, horizon, rel_tol=rel_tol, abs_tol=abs_tol,
                               t_eval=samples)
        rows = []
        sup = 0.0
        for t, state in zip(trajectory.times, trajectory.states):
            z = eval_solution(solution, float(t))
            row = (state[0] - z.real, state[1] - z.imag)
            rows.append(row)
            sup = max(sup, abs(row[0]), abs(row[1]))
        curves.append(
            DifferenceCurve(
                float(eps),
                tuple(float(t) for t in trajectory.times),
                tuple(rows),
                sup,
                trajectory.status,
            )
        )
    return PerturbationResult(base.variables, tuple(curves))


# ---------------------------------------------------------------------------
# CSV output


def write_trajectory_csv(path, trajectory: Trajectory) -> None:
    """Columns: t, then one column per state variable; header included."""
    names = trajectory.var_names or tuple(f"y{i}" for i in range(trajectory.states.shape[1]))
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t", *names])
        for t, state in zip(trajectory.times, trajectory.states):
            writer.writerow([repr(float(t)), *(repr(float(v)) for v in state)])


def write_difference_csv(path, curve: DifferenceCurve, var_names: Sequence[str]) -> None:
    """Columns: t, then the per-variable differences; header included."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t", *(f"d_{name}" for name in var_names)])
        for t, row in zip(curve.times, curve.differences):
            writer.writerow([repr(float(t)), *(repr(float(v)) for v in row)])
