"""Cauchy-Riemann structure checks for planar and 2n-variable systems.

A planar system (dx/dt, dy/dt) = (u(x,y), v(x,y)) is holomorphically
structured (an Erugin system) when du/dx = dv/dy and du/dy = -dv/dx as
polynomial identities.  When that holds, the whole pair is determined by
one constant per equation plus two coefficients per degree of the first
equation; :func:`cr_parameterize` rebuilds the pair from those numbers and
:func:`check_cr_2var` recovers them.

Two independent verification routes are provided: polynomial identities on
formal partial derivatives, and direct coefficient-ratio relations between
the two equations.  They must always agree; disagreement flags a bug.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .polynomials import (
    ExponentVector,
    RationalLike,
    RealPoly,
    RealPolySystem,
    as_fraction,
)

Pairing = tuple[tuple[int, int], ...]


class NotCauchyRiemannError(ValueError):
    """Raised when an operation requires a verified Cauchy-Riemann system."""


@dataclass(frozen=True)
class CRViolation:
    """One broken coefficient relation: ``left`` should equal ``right``."""

    relation: str
    left: Fraction
    right: Fraction

    @property
    def residual(self) -> Fraction:
        return self.left - self.right


@dataclass(frozen=True)
class CRParameters:
    """Free parameters of a planar Cauchy-Riemann system.

    ``const_x`` and ``const_y`` are the constant terms of the two equations.
    ``pairs[r-1] = (p_r, q_r)`` holds, for each degree r >= 1, the coefficient
    of x^r and of x^(r-1)*y in the first equation; every other coefficient of
    both equations is forced by the structure.
    """

    const_x: Fraction
    const_y: Fraction
    pairs: tuple[tuple[Fraction, Fraction], ...] = ()

    @classmethod
    def of(cls, const_x: RationalLike, const_y: RationalLike, pairs: Sequence[tuple]) -> "CRParameters":
        return cls(
            as_fraction(const_x),
            as_fraction(const_y),
            tuple((as_fraction(p), as_fraction(q)) for p, q in pairs),
        )

    @property
    def degree(self) -> int:
        return len(self.pairs)

    def pair(self, r: int) -> tuple[Fraction, Fraction]:
        if not 1 <= r <= len(self.pairs):
            raise ValueError(f"no degree-{r} pair stored")
        return self.pairs[r - 1]

    @property
    def count(self) -> int:
        """Number of parameters pinning down the first equation: 2R + 1.

        The second equation adds exactly one more free number, its constant
        term ``const_y``, which is reported separately.
        """
        return 1 + 2 * len(self.pairs)


@dataclass(frozen=True)
class CRReport:
    satisfied: bool
    violations: tuple[CRViolation, ...]
    degree: int
    parameters: CRParameters | None = None

    @property
    def free_parameter_count(self) -> int:
        if self.parameters is None:
            raise ValueError("no parameters extracted (unsatisfied or multivariate report)")
        return self.parameters.count


@dataclass(frozen=True)
class CPReport:
    """Verdict on the four quadratic coupling conditions of Calogero-Payandeh type."""

    satisfied: bool
    residuals: tuple[Fraction, Fraction, Fraction, Fraction]


def _poly_identity_violations(
    label: str, lhs: RealPoly, rhs: RealPoly, names: Sequence[str], tolerance: float | None
) -> list[CRViolation]:
    """Violations of the identity lhs == rhs, one per differing monomial."""
    keys = set(lhs.terms) | set(rhs.terms)
    if tolerance is not None:
        scale = max(
            [1.0]
            + [abs(float(c)) for c in lhs.terms.values()]
            + [abs(float(c)) for c in rhs.terms.values()]
        )
    out = []
    for exps in sorted(keys):
        left = lhs.coefficient(exps)
        right = rhs.coefficient(exps)
        if left == right:
            continue
        if tolerance is not None and abs(float(left - right)) <= tolerance * scale:
            continue
        mono = "*".join(f"{n}^{e}" for n, e in zip(names, exps) if e) or "1"
        out.append(CRViolation(f"{label} at {mono}", left, right))
    return out


def _extract_parameters(system: RealPolySystem) -> CRParameters:
    u, v = system.equations
    degree = system.total_degree()
    pairs = []
    for r in range(1, degree + 1):
        pure_x = u.coefficient((r, 0))
        mixed = u.coefficient((r - 1, 1))
        pairs.append((pure_x, mixed))
    return CRParameters(u.coefficient((0, 0)), v.coefficient((0, 0)), tuple(pairs))


def check_cr_2var(system: RealPolySystem, tolerance: float | None = None) -> CRReport:
    """Exact Cauchy-Riemann verdict for a two-variable system.

    With ``tolerance`` set, relations whose residual is below
    ``tolerance * scale`` are accepted; use this only for measured/float
    data, never for exact claims.
    """
    if system.nvars != 2:
        raise ValueError(f"expected a 2-variable system, got {system.nvars} variables")
    u, v = system.equations
    names = system.variables
    violations = _poly_identity_violations(
        f"d{names[0]}'/d{names[0]} = d{names[1]}'/d{names[1]}",
        u.partial_derivative(0),
        v.partial_derivative(1),
        names,
        tolerance,
    )
    violations += _poly_identity_violations(
        f"d{names[0]}'/d{names[1]} = -d{names[1]}'/d{names[0]}",
        u.partial_derivative(1),
        -v.partial_derivative(0),
        names,
        tolerance,
    )
    satisfied = not violations
    params = _extract_parameters(system) if satisfied else None
    return CRReport(satisfied, tuple(violations), system.total_degree(), params)


def check_cr_2var_via_recursions(system: RealPolySystem) -> CRReport:
    """Second, independent route: per-degree coefficient ratio relations.

    For every degree r and slot s, the second equation's coefficient of
    x^(r-s)*y^s must equal ((r-s+1)/s) times the first equation's (s-1) slot
    and -(s+1)/(r-s) times its (s+1) slot.  Used as a cross-check against
    :func:`check_cr_2var`; the two verdicts must agree on every input.
    """
    if system.nvars != 2:
        raise ValueError(f"expected a 2-variable system, got {system.nvars} variables")
    u, v = system.equations
    degree = system.total_degree()
    violations: list[CRViolation] = []
    for r in range(1, degree + 1):
        for s in range(1, r + 1):
            left = v.coefficient((r - s, s))
            right = Fraction(r - s + 1, s) * u.coefficient((r - s + 1, s - 1))
            if left != right:
                violations.append(CRViolation(f"degree {r}, slot {s}: second-equation coefficient", left, right))
        for s in range(0, r):
            left = v.coefficient((r - s, s))
            right = Fraction(-(s + 1), r - s) * u.coefficient((r - s - 1, s + 1))
            if left != right:
                violations.append(CRViolation(f"degree {r}, slot {s}: cross relation", left, right))
    satisfied = not violations
    params = _extract_parameters(system) if satisfied else None
    return CRReport(satisfied, tuple(violations), degree, params)


def _power_re_im(r: int) -> tuple[RealPoly, RealPoly]:
    """Exact expansions of Re (x+iy)^r and Im (x+iy)^r as 2-variable polys."""
    re_terms: dict[ExponentVector, Fraction] = {}
    im_terms: dict[ExponentVector, Fraction] = {}
    for s in range(r + 1):
        coeff = Fraction(comb(r, s))
        if s % 4 in (2, 3):
            coeff = -coeff
        if s % 2 == 0:
            re_terms[(r - s, s)] = coeff
        else:
            im_terms[(r - s, s)] = coeff
    return RealPoly(2, re_terms), RealPoly(2, im_terms)


def cr_parameterize(params: CRParameters, variables: Sequence[str] = ("x", "y")) -> RealPolySystem:
    """Build the planar system determined by the given free parameters.

    The result always satisfies :func:`check_cr_2var`, and the check recovers
    exactly the parameters that were supplied (provided the top-degree pair is
    nonzero, otherwise the degree collapses).
    """
    u = RealPoly.constant(2, params.const_x)
    v = RealPoly.constant(2, params.const_y)
    for r, (p, q) in enumerate(params.pairs, start=1):
        re_r, im_r = _power_re_im(r)
        u = u + re_r.scale(p) + im_r.scale(Fraction(q, r))
        v = v + im_r.scale(p) - re_r.scale(Fraction(q, r))
    return RealPolySystem(tuple(variables), (u, v))


def validate_pairing(pairing: Sequence[Sequence[int]], nvars: int) -> Pairing:
    pairs = tuple((int(a), int(b)) for a, b in pairing)
    seen = [i for pair in pairs for i in pair]
    if sorted(seen) != list(range(nvars)):
        raise ValueError(f"pairing {pairs} is not a perfect matching of {nvars} variables")
    return pairs


def check_cr_multivar(
    system: RealPolySystem,
    pairing: Sequence[Sequence[int]],
    tolerance: float | None = None,
) -> CRReport:
    """Cauchy-Riemann verdict for a 2n-variable system under a given pairing.

    ``pairing`` lists which variable indices form each (real, imaginary)
    couple.  All cross partial-derivative identities between every equation
    pair and every variable pair are checked exactly.
    """
    if system.nvars % 2 != 0:
        raise ValueError("a paired check needs an even number of variables")
    pairs = validate_pairing(pairing, system.nvars)
    names = system.variables
    violations: list[CRViolation] = []
    for xk, yk in pairs:
        u = system.equations[xk]
        v = system.equations[yk]
        for xj, yj in pairs:
            violations += _poly_identity_violations(
                f"d{names[xk]}'/d{names[xj]} = d{names[yk]}'/d{names[yj]}",
                u.partial_derivative(xj),
                v.partial_derivative(yj),
                names,
                tolerance,
            )
            violations += _poly_identity_violations(
                f"d{names[xk]}'/d{names[yj]} = -d{names[yk]}'/d{names[xj]}",
                u.partial_derivative(yj),
                -v.partial_derivative(xj),
                names,
                tolerance,
            )
    return CRReport(not violations, tuple(violations), system.total_degree(), None)


# ---- quadratic coupling conditions -------------------------------------


def check_calogero_payandeh(system: RealPolySystem) -> CPReport:
    """Exact residuals of the four quadratic solvability conditions.

    The coefficients are read off the standard quadratic layout
    c1 x^2 + c2 x*y + c3 y^2 + c4 x + c5 y + c6 per equation.  Every planar
    Cauchy-Riemann quadratic satisfies all four conditions; the converse
    fails.
    """
    if system.nvars != 2:
        raise ValueError("the quadratic coupling conditions apply to 2-variable systems")
    if system.total_degree() > 2:
        raise ValueError("the quadratic coupling conditions apply to systems of degree <= 2")
    u, v = system.equations
    c11, c12, c13 = u.coefficient((2, 0)), u.coefficient((1, 1)), u.coefficient((0, 2))
    c14, c15 = u.coefficient((1, 0)), u.coefficient((0, 1))
    c21, c22, c23 = v.coefficient((2, 0)), v.coefficient((1, 1)), v.coefficient((0, 2))
    c24, c25 = v.coefficient((1, 0)), v.coefficient((0, 1))
    residuals = (
        4 * c13 * c21 - c12 * c22,
        2 * (-c12 + 2 * c23) * c21 + (2 * c11 - c22) * c22,
        c24 * (2 * c11 - c22) + 2 * c21 * (c25 - c14),
        c12 * c24 - 2 * c15 * c21,
    )
    return CPReport(all(r == 0 for r in residuals), residuals)


# ---- linear-relation rank computation -----------------------------------


def _nullity(rows: list[dict[int, Fraction]], ncols: int) -> int:
    """Dimension of the nullspace of a sparse rational matrix."""
    dense = [[row.get(j, Fraction(0)) for j in range(ncols)] for row in rows]
    rank = 0
    col = 0
    nrows = len(dense)
    while rank < nrows and col < ncols:
        pivot = next((i for i in range(rank, nrows) if dense[i][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        dense[rank], dense[pivot] = dense[pivot], dense[rank]
        inv = 1 / dense[rank][col]
        dense[rank] = [c * inv for c in dense[rank]]
        for i in range(nrows):
            if i != rank and dense[i][col] != 0:
                f = dense[i][col]
                dense[i] = [a - f * b for a, b in zip(dense[i], dense[rank])]
        rank += 1
        col += 1
    return ncols - rank


def cr_solution_dimensions(degree: int) -> tuple[int, int]:
    """Dimensions of the space of degree-R pairs satisfying the structure.

    Treats every coefficient of both equations as an unknown, imposes the
    partial-derivative identities as linear relations, and returns

    * the dimension of the full solution space (2R + 2: the second equation
      keeps its own free constant), and
    * the dimension of its projection onto the first equation's coefficients
      (2R + 1), which is the usual way of counting the free parameters.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    index: dict[tuple[int, int, int], int] = {}
    for side in (0, 1):
        for r in range(degree + 1):
            for s in range(r + 1):
                index[(side, r - s, s)] = len(index)
    ncols = len(index)
    rows: list[dict[int, Fraction]] = []
    for total in range(degree):
        for a in range(total + 1):
            b = total - a
            # d(first)/dx = d(second)/dy at monomial x^a y^b
            rows.append(
                {
                    index[(0, a + 1, b)]: Fraction(a + 1),
                    index[(1, a, b + 1)]: Fraction(-(b + 1)),
                }
            )
            # d(first)/dy = -d(second)/dx at monomial x^a y^b
            rows.append(
                {
                    index[(0, a, b + 1)]: Fraction(b + 1),
                    index[(1, a + 1, b)]: Fraction(a + 1),
                }
            )
    full_dim = _nullity(rows, ncols)
    # Solutions whose first equation vanishes identically: restrict the same
    # relations to the second equation's coefficients.
    v_index = {key: j for key, j in index.items() if key[0] == 1}
    remap = {j: k for k, j in enumerate(v_index.values())}
    v_rows = []
    for row in rows:
        restricted = {remap[j]: c for j, c in row.items() if j in remap}
        if restricted:
            v_rows.append(restricted)
    hidden_dim = _nullity(v_rows, len(v_index))
    return full_dim, full_dim - hidden_dim


# ---- random instances ----------------------------------------------------


def random_cr_parameters(
    degree: int,
    rng: random.Random,
    numerator_bound: int = 6,
    denominator_bound: int = 3,
) -> CRParameters:
    """Random exact parameters with a guaranteed nonzero top-degree pair."""

    def draw() -> Fraction:
        return Fraction(rng.randint(-numerator_bound, numerator_bound), rng.randint(1, denominator_bound))

    pairs = [(draw(), draw()) for _ in range(degree)]
    while degree and pairs[-1] == (0, 0):
        pairs[-1] = (draw(), draw())
    return CRParameters(draw(), draw(), tuple(pairs))


def random_cr_system(degree: int, rng: random.Random, **kwargs) -> tuple[CRParameters, RealPolySystem]:
    params = random_cr_parameters(degree, rng, **kwargs)
    return params, cr_parameterize(params)
