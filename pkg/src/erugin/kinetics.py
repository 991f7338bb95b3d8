"""Kineticity, kinetic parameter constraints, and reaction-network realization.

A polynomial system is kinetic (realizable by a mass-action reaction network)
exactly when it has no negative cross-effect: every negative-coefficient
monomial in the equation for species i must contain species i.  The canonic
realization turns each monomial kappa * x^alpha of equation i into the
reaction alpha -> alpha +/- e_i with rate |kappa|; :func:`induced_ode` is its
exact inverse, and the round trip is the correctness check for both.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .cauchy_riemann import CRParameters, cr_parameterize
from .polynomials import ExponentVector, RealPoly, RealPolySystem, validate_exponents


class NotKineticError(ValueError):
    """Raised when an operation requires a kinetic system."""


@dataclass(frozen=True)
class KineticityOffender:
    """A negative cross-effect: where, which monomial, which coefficient."""

    equation: int
    exponents: ExponentVector
    coefficient: Fraction


@dataclass(frozen=True)
class KineticityReport:
    kinetic: bool
    offenders: tuple[KineticityOffender, ...]


def check_kinetic(system: RealPolySystem) -> KineticityReport:
    """Scan for negative cross-effects; exact."""
    offenders = []
    for i, eq in enumerate(system.equations):
        for exps, coeff in eq:
            if coeff < 0 and exps[i] == 0:
                offenders.append(KineticityOffender(i, exps, coeff))
    return KineticityReport(not offenders, tuple(offenders))


# ---------------------------------------------------------------------------
# sign constraints on the free parameters of planar Cauchy-Riemann systems

NONNEG = "nonneg"
NONPOS = "nonpos"
ZERO = "zero"
FREE = "free"


@dataclass(frozen=True)
class KineticConstraints:
    """Per-parameter sign requirements making the parameterized pair kinetic.

    Keys are ``const_x``, ``const_y`` and, per degree r, ``deg{r}_x`` (the
    coefficient of x^r in the first equation) and ``deg{r}_xy`` (the
    coefficient of x^(r-1)*y).  The parameterized system is kinetic if and
    only if every parameter satisfies its sign.
    """

    degree: int
    signs: Mapping[str, str]

    def holds(self, params: CRParameters) -> bool:
        if params.degree != self.degree:
            raise ValueError(f"parameters have degree {params.degree}, constraints expect {self.degree}")
        values = {"const_x": params.const_x, "const_y": params.const_y}
        for r, (p, q) in enumerate(params.pairs, start=1):
            values[f"deg{r}_x"] = p
            values[f"deg{r}_xy"] = q
        for key, sign in self.signs.items():
            v = values[key]
            if sign == NONNEG and v < 0:
                return False
            if sign == NONPOS and v > 0:
                return False
            if sign == ZERO and v != 0:
                return False
        return True


def _parameter_labels(degree: int) -> list[str]:
    labels = ["const_x", "const_y"]
    for r in range(1, degree + 1):
        labels += [f"deg{r}_x", f"deg{r}_xy"]
    return labels


def _unit_parameters(degree: int, label: str) -> CRParameters:
    one = Fraction(1)
    zero = Fraction(0)
    pairs = []
    for r in range(1, degree + 1):
        pairs.append(
            (
                one if label == f"deg{r}_x" else zero,
                one if label == f"deg{r}_xy" else zero,
            )
        )
    return CRParameters(
        one if label == "const_x" else zero,
        one if label == "const_y" else zero,
        tuple(pairs),
    )


def kinetic_cr_constraints(degree: int) -> KineticConstraints:
    """Derive the sign constraints by monomial sign analysis, not transcription.

    The parameterized family is linear in its parameters, and every
    cross-effect coefficient turns out to be a rational multiple of a single
    parameter (asserted at runtime); each one therefore pins that parameter's
    sign, and conflicting pins force it to zero.
    """
    if degree not in (1, 2, 3):
        raise ValueError(f"kinetic constraints are derived for degrees 1..3, got {degree}")
    labels = _parameter_labels(degree)
    basis = {label: cr_parameterize(_unit_parameters(degree, label)) for label in labels}
    # position -> {label: contribution}
    contributions: dict[tuple[int, ExponentVector], dict[str, Fraction]] = {}
    for label, system in basis.items():
        for i, eq in enumerate(system.equations):
            for exps, coeff in eq:
                if exps[i] != 0:
                    continue  # contains species i: never a cross-effect
                contributions.setdefault((i, exps), {})[label] = coeff
    requirements: dict[str, set[str]] = {label: set() for label in labels}
    for position, contrib in contributions.items():
        nonzero = [(label, c) for label, c in contrib.items() if c != 0]
        if len(nonzero) > 1:
            raise AssertionError(f"cross-effect at {position} mixes parameters: {nonzero}")
        if nonzero:
            label, c = nonzero[0]
            requirements[label].add(NONNEG if c > 0 else NONPOS)
    signs = {}
    for label in labels:
        req = requirements[label]
        if req == {NONNEG, NONPOS}:
            signs[label] = ZERO
        elif req == {NONNEG}:
            signs[label] = NONNEG
        elif req == {NONPOS}:
            signs[label] = NONPOS
        else:
            signs[label] = FREE
    return KineticConstraints(degree, signs)


# ---------------------------------------------------------------------------
# reaction networks


@dataclass(frozen=True)
class Reaction:
    reactant: ExponentVector
    product: ExponentVector
    rate: Fraction

    def __post_init__(self):
        if self.rate <= 0:
            raise ValueError(f"reaction rate must be positive, got {self.rate}")
        if len(self.reactant) != len(self.product):
            raise ValueError("reactant and product must involve the same species count")


@dataclass(frozen=True)
class ReactionNetwork:
    species: tuple[str, ...]
    reactions: tuple[Reaction, ...]

    def __post_init__(self):
        object.__setattr__(self, "species", tuple(self.species))
        object.__setattr__(self, "reactions", tuple(self.reactions))
        n = len(self.species)
        for r in self.reactions:
            if len(r.reactant) != n:
                raise ValueError("reaction arity does not match the species list")

    def complexes(self) -> list[ExponentVector]:
        """All distinct complexes (reactant or product side), sorted."""
        seen = {r.reactant for r in self.reactions} | {r.product for r in self.reactions}
        return sorted(seen)


def canonic_realization(system: RealPolySystem, report: KineticityReport | None = None) -> ReactionNetwork:
    """The canonic mass-action realization of a kinetic system.

    Monomial kappa * x^alpha of equation i becomes alpha -> alpha + e_i at
    rate kappa when kappa > 0, and alpha -> alpha - e_i at rate -kappa when
    kappa < 0 (well defined: kineticity forces alpha_i >= 1 there).
    """
    if report is None:
        report = check_kinetic(system)
    if not report.kinetic:
        raise NotKineticError(f"system has negative cross-effects: {report.offenders}")
    reactions = []
    for i, eq in enumerate(system.equations):
        for exps, coeff in eq:
            shift = 1 if coeff > 0 else -1
            product = list(exps)
            product[i] += shift
            if product[i] < 0:  # pragma: no cover - excluded by kineticity
                raise NotKineticError(f"negative product stoichiometry at equation {i}, {exps}")
            reactions.append(Reaction(exps, tuple(product), abs(coeff)))
    return ReactionNetwork(system.variables, tuple(reactions))


def induced_ode(network: ReactionNetwork) -> RealPolySystem:
    """Mass-action ODE of a network: dx/dt = sum rate * x^reactant * (product - reactant)."""
    n = len(network.species)
    if n == 0:
        return RealPolySystem((), ())
    terms: list[dict[ExponentVector, Fraction]] = [dict() for _ in range(n)]
    for reaction in network.reactions:
        key = validate_exponents(reaction.reactant, n)
        for i in range(n):
            change = reaction.product[i] - reaction.reactant[i]
            if change:
                acc = terms[i].get(key, Fraction(0)) + reaction.rate * change
                if acc == 0:
                    terms[i].pop(key, None)
                else:
                    terms[i][key] = acc
    return RealPolySystem(network.species, tuple(RealPoly(n, t) for t in terms))


def realization_stats(network: ReactionNetwork) -> dict[str, int]:
    """Size summary used when comparing realizations (not optimized over)."""
    return {
        "species": len(network.species),
        "complexes": len(network.complexes()),
        "reactions": len(network.reactions),
    }
