"""First integrals of homogeneous quadratic pairs via the ratio substitution.

For dz1/dt = a z1^2 + b z1 z2 + c z2^2, dz2/dt = A z1^2 + B z1 z2 + C z2^2
the ratio U = z2/z1 obeys a separable equation: with

    N(U) = a + b U + c U^2,
    D(U) = A + (B - a) U + (C - b) U^2 - c U^3,

any antiderivative F of N/D yields the first integral

    Phi(z1, z2) = F(z2/z1) - log(z1) + const,

constant along every trajectory.  F is computed by partial fractions over
the distinct roots of D (plus a small polynomial part when the fraction is
improper); repeated roots are reported, not solved.  The additive constant
is fixed so Phi vanishes at the supplied initial point, and log branches are
tracked by continuity along a cached seed trajectory.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

from .complex_numbers import Scalar, as_complex, cubic_roots, quadratic_roots, scalar_is_zero
from .complexify import ComplexMultiPoly, ComplexODESystem


class UnsupportedDegeneracyError(ValueError):
    """The ratio equation has a repeated denominator root; out of scope."""


class SingularArgumentError(ValueError):
    """First-integral evaluation at a singular point (z1 = 0 or a root ratio)."""


@dataclass(frozen=True)
class HomogeneousPair:
    """Coefficient triples (z1^2, z1*z2, z2^2) of the two equations."""

    first: tuple[Scalar, Scalar, Scalar]
    second: tuple[Scalar, Scalar, Scalar]

    def __post_init__(self):
        if all(scalar_is_zero(v) for v in (*self.first, *self.second)):
            raise ValueError("all six coefficients are zero; there is no dynamics to reduce")

    def rhs(self, z1: complex, z2: complex) -> tuple[complex, complex]:
        a, b, c = (as_complex(v) for v in self.first)
        aa, bb, cc = (as_complex(v) for v in self.second)
        return (
            a * z1 * z1 + b * z1 * z2 + c * z2 * z2,
            aa * z1 * z1 + bb * z1 * z2 + cc * z2 * z2,
        )

    def as_complex_system(self, initial: tuple[Scalar, Scalar]) -> ComplexODESystem:
        terms_first = {(2, 0): self.first[0], (1, 1): self.first[1], (0, 2): self.first[2]}
        terms_second = {(2, 0): self.second[0], (1, 1): self.second[1], (0, 2): self.second[2]}
        return ComplexODESystem(
            ("z1", "z2"),
            (ComplexMultiPoly(2, terms_first), ComplexMultiPoly(2, terms_second)),
            tuple(initial),
        )


def _trim(coeffs: list[complex]) -> list[complex]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_eval(coeffs: Sequence[complex], z: complex) -> complex:
    result = complex(0)
    for c in reversed(coeffs):
        result = result * z + c
    return result


def _poly_roots(coeffs: Sequence[complex]) -> list[complex]:
    degree = len(coeffs) - 1
    if degree == 1:
        return [-coeffs[0] / coeffs[1]]
    if degree == 2:
        return [as_complex(r) for r in quadratic_roots(coeffs[2], coeffs[1], coeffs[0])]
    if degree == 3:
        return [as_complex(r) for r in cubic_roots(coeffs[3], coeffs[2], coeffs[1], coeffs[0])]
    raise AssertionError(f"unexpected denominator degree {degree}")


class FirstIntegral:
    """Phi(z1, z2), zero at the anchor point and constant along trajectories.

    ``kind`` is "log-sum" in the generic case (polynomial part + residue-
    weighted logs of U - u_j, minus log z1) and "linear" when the ratio
    equation degenerates to dz2/dz1 = z2/z1, where Phi = z2 - U0 * z1.
    """

    def __init__(
        self,
        pair: HomogeneousPair,
        initial: tuple[Scalar, Scalar],
        kind: str,
        roots: tuple[complex, ...] = (),
        residues: tuple[complex, ...] = (),
        poly_part: tuple[complex, ...] = (),
        seed_horizon: tuple[float, float] = (-2.0, 2.0),
        seed_points: int = 400,
    ):
        self.pair = pair
        self.z1_0 = as_complex(initial[0])
        self.z2_0 = as_complex(initial[1])
        if self.z1_0 == 0:
            raise SingularArgumentError("the anchor point must have z1 != 0")
        self.kind = kind
        self.roots = roots
        self.residues = residues
        self.poly_part = poly_part  # antiderivative coefficients for U^1, U^2, U^3
        self.anchor_ratio = self.z2_0 / self.z1_0
        if kind == "log-sum":
            self._seed(seed_horizon, seed_points)
            forward = self.values_along(self._states[self._anchor_index :])
            backward = self.values_along(self._states[self._anchor_index :: -1])
            self._seed_phi = list(reversed(backward[1:])) + forward
        else:
            self._times = [0.0]
            self._states = [(self.z1_0, self.z2_0)]
            self._seed_phi = [complex(0)]

    # -- seed trajectory ---------------------------------------------------

    def _seed(self, horizon: tuple[float, float], n_points: int) -> None:
        lo, hi = horizon
        if not lo <= 0 <= hi:
            raise ValueError("seed horizon must contain t = 0")
        n_back = round(n_points * abs(lo) / max(hi - lo, 1e-12))
        t_back, s_back = self._walk(lo, n_back)
        t_fwd, s_fwd = self._walk(hi, n_points - n_back)
        self._times = list(reversed(t_back)) + t_fwd[1:]
        self._states = list(reversed(s_back)) + s_fwd[1:]
        self._anchor_index = len(t_back) - 1

    def _walk(self, t_end: float, n_points: int):
        times = [0.0]
        states = [(self.z1_0, self.z2_0)]
        if t_end == 0 or n_points == 0:
            return times, states
        scale = max([1.0] + [abs(r) for r in self.roots])

        def bad(state) -> bool:
            z1, z2 = state
            if not all(math.isfinite(v) for v in (z1.real, z1.imag, z2.real, z2.imag)):
                return True
            if max(abs(z1), abs(z2)) > 1e6 or abs(z1) < 1e-8:
                return True
            ratio = z2 / z1
            return any(abs(ratio - u) < 1e-8 * scale for u in self.roots)

        direction = 1.0 if t_end > 0 else -1.0
        z = (self.z1_0, self.z2_0)
        t = 0.0
        for k in range(n_points):
            target = t_end * (k + 1) / n_points
            substeps = 0
            while (target - t) * direction > 1e-15 * max(1.0, abs(target)):
                substeps += 1
                if substeps > 10_000:  # crawling toward a singularity: truncate
                    return times, states
                f0 = self.pair.rhs(*z)
                speed = max(abs(f0[0]), abs(f0[1]))
                size = max(abs(z[0]), abs(z[1]))
                h = direction * min(abs(target - t), 0.05 * (1.0 + size) / (1.0 + speed))

                def step(state, scale_h, k_prev=None):
                    if k_prev is None:
                        return state
                    return (state[0] + scale_h * k_prev[0], state[1] + scale_h * k_prev[1])

                k1 = f0
                k2 = self.pair.rhs(*step(z, 0.5 * h, k1))
                k3 = self.pair.rhs(*step(z, 0.5 * h, k2))
                k4 = self.pair.rhs(*step(z, h, k3))
                z_next = (
                    z[0] + (h / 6.0) * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
                    z[1] + (h / 6.0) * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]),
                )
                if bad(z_next):
                    return times, states
                z = z_next
                t += h
            times.append(target)
            states.append(z)
        return times, states

    # -- evaluation ---------------------------------------------------------

    def _check_point(self, z1: complex, z2: complex) -> complex:
        if z1 == 0:
            raise SingularArgumentError("z1 = 0 is a singular point of the first integral")
        ratio = z2 / z1
        scale = max([1.0] + [abs(r) for r in self.roots])
        if any(abs(ratio - u) < 1e-12 * scale for u in self.roots):
            raise SingularArgumentError(f"z2/z1 = {ratio} sits on a denominator root")
        return ratio

    def _poly_term(self, ratio: complex) -> complex:
        value = complex(0)
        for k, coeff in enumerate(self.poly_part, start=1):
            value += coeff * ratio**k
        return value

    def values_along(self, points: Sequence[tuple[complex, complex]]) -> list[complex]:
        """Phi at each point of a trajectory, branches tracked by continuity.

        The first point should be branch-reachable from the anchor (callers
        pass trajectories that start at the anchor point).
        """
        if self.kind == "linear":
            return [z2 - self.anchor_ratio * z1 for z1, z2 in points]
        first_ratio = self._check_point(*points[0])
        logs = [cmath.log(first_ratio - u) for u in self.roots]
        log_z1 = cmath.log(points[0][0])
        base_logs = [cmath.log(self.anchor_ratio - u) for u in self.roots]
        base_z1 = cmath.log(self.z1_0)
        out = []
        prev_ratio, prev_z1 = first_ratio, points[0][0]
        for idx, (z1, z2) in enumerate(points):
            ratio = self._check_point(z1, z2)
            if idx > 0:
                for j, u in enumerate(self.roots):
                    logs[j] += cmath.log((ratio - u) / (prev_ratio - u))
                log_z1 += cmath.log(z1 / prev_z1)
                prev_ratio, prev_z1 = ratio, z1
            value = self._poly_term(ratio) - self._poly_term(self.anchor_ratio)
            for j in range(len(self.roots)):
                value += self.residues[j] * (logs[j] - base_logs[j])
            value -= log_z1 - base_z1
            out.append(value)
        return out

    def value(self, z1: Scalar, z2: Scalar) -> complex:
        """Phi at one point; branches anchored at the nearest seed state."""
        z1, z2 = as_complex(z1), as_complex(z2)
        if self.kind == "linear":
            return z2 - self.anchor_ratio * z1
        ratio = self._check_point(z1, z2)
        idx = min(
            range(len(self._states)),
            key=lambda i: abs(z1 - self._states[i][0]) + abs(z2 - self._states[i][1]),
        )
        anchor_value = self._seed_phi[idx]
        s_z1, s_z2 = self._states[idx]
        s_ratio = s_z2 / s_z1
        value = anchor_value + self._poly_term(ratio) - self._poly_term(s_ratio)
        for j, u in enumerate(self.roots):
            value += self.residues[j] * cmath.log((ratio - u) / (s_ratio - u))
        value -= cmath.log(z1 / s_z1)
        return value


def reduce_homogeneous(
    pair: HomogeneousPair,
    initial: tuple[Scalar, Scalar],
    seed_horizon: tuple[float, float] = (-2.0, 2.0),
    seed_points: int = 400,
) -> FirstIntegral:
    """Partial-fraction first integral of the ratio equation.

    Raises :class:`UnsupportedDegeneracyError` for repeated denominator
    roots; an identically zero denominator means the ratio itself is
    conserved and yields the linear first integral z2 - (z2(0)/z1(0)) z1.
    """
    a, b, c = (as_complex(v) for v in pair.first)
    aa, bb, cc = (as_complex(v) for v in pair.second)
    numerator = _trim([a, b, c])
    denominator = _trim([aa, bb - a, cc - b, -c])
    if not denominator:
        return FirstIntegral(pair, initial, "linear")
    if len(denominator) == 1:
        # constant denominator: F is a plain polynomial, no logs at all
        quot = [v / denominator[0] for v in numerator]
        poly_part = tuple(quot[k] / (k + 1) for k in range(len(quot)))
        return FirstIntegral(pair, initial, "log-sum", (), (), poly_part, seed_horizon, seed_points)
    roots = _poly_roots(denominator)
    scale = max([1.0] + [abs(r) for r in roots])
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) < 1e-9 * scale:
                raise UnsupportedDegeneracyError(
                    f"repeated denominator root near {roots[i]}; the reduction needs distinct roots"
                )
    # improper part: possible only with a degree-1 denominator (then c = 0,
    # so the numerator has degree <= 1 and the quotient is a constant)
    poly_part: tuple[complex, ...] = ()
    if len(numerator) >= len(denominator):
        lead_quot = numerator[-1] / denominator[-1]
        if len(numerator) - len(denominator) > 0:  # pragma: no cover - impossible by degrees
            raise AssertionError("unexpected quotient degree in the ratio reduction")
        poly_part = (lead_quot,)
    dprime = [k * denominator[k] for k in range(1, len(denominator))]
    residues = tuple(_poly_eval(numerator, u) / _poly_eval(dprime, u) for u in roots)
    return FirstIntegral(pair, initial, "log-sum", tuple(roots), residues, poly_part, seed_horizon, seed_points)


def first_integral_value(integral: FirstIntegral, z1: Scalar, z2: Scalar) -> complex:
    """Branch-tracked Phi(z1, z2); singular arguments raise."""
    return integral.value(z1, z2)
