"""Exact multivariate polynomials over the rationals.

A polynomial is a map from exponent tuples to nonzero Fraction coefficients;
the zero polynomial stores no terms.  Everything here is exact: the structure
checks built on top (Cauchy-Riemann, kineticity, realization round trips) are
equality constraints, and float slack would turn their verdicts into guesses.
Floats only enter downstream, in root finding and numeric integration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

ExponentVector = tuple[int, ...]
RationalLike = Union[int, Fraction, str]


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and rational strings ("-3/2", "0.5") exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def validate_exponents(exponents: Sequence[int], nvars: int) -> ExponentVector:
    exps = tuple(exponents)
    if len(exps) != nvars:
        raise ValueError(f"exponent vector {exps} has length {len(exps)}, expected {nvars}")
    for e in exps:
        if not isinstance(e, int) or e < 0:
            raise ValueError(f"exponents must be nonnegative integers, got {exps}")
    return exps


class RealPoly:
    """Sparse polynomial in ``nvars`` variables with exact rational coefficients.

    Immutable; zero coefficients are never stored.  Supports +, -, * (with
    polynomials and rational scalars), exact partial derivatives and exact or
    float evaluation.
    """

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], RationalLike] | None = None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        object.__setattr__(self, "nvars", nvars)
        normalized: dict[ExponentVector, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            c = as_fraction(coeff)
            if c == 0:
                continue
            key = validate_exponents(exps, nvars)
            acc = normalized.get(key, Fraction(0)) + c
            if acc == 0:
                normalized.pop(key, None)
            else:
                normalized[key] = acc
        object.__setattr__(self, "_terms", normalized)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("RealPoly is immutable")

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "RealPoly":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, value: RationalLike) -> "RealPoly":
        return cls(nvars, {(0,) * nvars: as_fraction(value)})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "RealPoly":
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): 1})

    @classmethod
    def from_terms(cls, nvars: int, terms: Iterable[tuple[Sequence[int], RationalLike]]) -> "RealPoly":
        out: dict[ExponentVector, Fraction] = {}
        for exps, coeff in terms:
            key = validate_exponents(exps, nvars)
            out[key] = out.get(key, Fraction(0)) + as_fraction(coeff)
        return cls(nvars, out)

    # ---- queries -------------------------------------------------------

    @property
    def terms(self) -> dict[ExponentVector, Fraction]:
        return dict(self._terms)

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        return self._terms.get(validate_exponents(exponents, self.nvars), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        """Maximum monomial degree; 0 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=0)

    def __iter__(self):
        return iter(sorted(self._terms.items(), key=lambda kv: (sum(kv[0]), kv[0])))

    def __len__(self) -> int:
        return len(self._terms)

    # ---- arithmetic ----------------------------------------------------

    def _check_compatible(self, other: "RealPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "RealPoly") -> "RealPoly":
        if not isinstance(other, RealPoly):
            return NotImplemented
        self._check_compatible(other)
        out = dict(self._terms)
        for exps, coeff in other._terms.items():
            out[exps] = out.get(exps, Fraction(0)) + coeff
        return RealPoly(self.nvars, out)

    def __sub__(self, other: "RealPoly") -> "RealPoly":
        if not isinstance(other, RealPoly):
            return NotImplemented
        self._check_compatible(other)
        out = dict(self._terms)
        for exps, coeff in other._terms.items():
            out[exps] = out.get(exps, Fraction(0)) - coeff
        return RealPoly(self.nvars, out)

    def __neg__(self) -> "RealPoly":
        return RealPoly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, RealPoly):
            self._check_compatible(other)
            out: dict[ExponentVector, Fraction] = {}
            for ea, ca in self._terms.items():
                for eb, cb in other._terms.items():
                    key = tuple(x + y for x, y in zip(ea, eb))
                    out[key] = out.get(key, Fraction(0)) + ca * cb
            return RealPoly(self.nvars, out)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def scale(self, factor: RationalLike) -> "RealPoly":
        f = as_fraction(factor)
        return RealPoly(self.nvars, {e: c * f for e, c in self._terms.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RealPoly)
            and self.nvars == other.nvars
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self._terms.items())))

    # ---- calculus ------------------------------------------------------

    def partial_derivative(self, index: int) -> "RealPoly":
        if not 0 <= index < self.nvars:
            raise ValueError(f"variable index {index} out of range for {self.nvars} variables")
        out: dict[ExponentVector, Fraction] = {}
        for exps, coeff in self._terms.items():
            e = exps[index]
            if e == 0:
                continue
            key = exps[:index] + (e - 1,) + exps[index + 1 :]
            out[key] = out.get(key, Fraction(0)) + coeff * e
        return RealPoly(self.nvars, out)

    def evaluate(self, point: Sequence) -> Fraction | float:
        """Evaluate at a point; exact when all coordinates are exact."""
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        total = None
        for exps, coeff in self._terms.items():
            term = coeff
            for value, e in zip(point, exps):
                if e:
                    term = term * value**e
            total = term if total is None else total + term
        if total is None:
            return Fraction(0) if all(isinstance(v, (int, Fraction)) for v in point) else 0.0
        return total

    # ---- formatting ----------------------------------------------------

    def to_string(self, names: Sequence[str]) -> str:
        if len(names) != self.nvars:
            raise ValueError("one name per variable required")
        if not self._terms:
            return "0"
        parts = []
        for exps, coeff in self:
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            if not mono:
                body = str(abs(coeff))
            elif abs(coeff) == 1:
                body = mono
            else:
                body = f"{abs(coeff)}*{mono}"
            parts.append(("- " if coeff < 0 else "+ ") + body)
        joined = " ".join(parts)
        return joined[2:] if joined.startswith("+ ") else "-" + joined[2:]

    def __repr__(self) -> str:
        names = [f"x{i}" for i in range(self.nvars)]
        return f"RealPoly({self.to_string(names)})"


def partial_derivative(poly: RealPoly, index: int) -> RealPoly:
    """Exact formal partial derivative with respect to variable ``index``."""
    return poly.partial_derivative(index)


@dataclass(frozen=True)
class RealPolySystem:
    """Autonomous polynomial ODE system: one equation per state variable."""

    variables: tuple[str, ...]
    equations: tuple[RealPoly, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "equations", tuple(self.equations))
        n = len(self.variables)
        if n == 0:
            if self.equations:
                raise ValueError("equations given for an empty variable list")
            return
        if len(self.equations) != n:
            raise ValueError(f"{len(self.equations)} equations for {n} variables")
        for eq in self.equations:
            if eq.nvars != n:
                raise ValueError(f"equation in {eq.nvars} variables inside a {n}-variable system")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def total_degree(self) -> int:
        return max((eq.total_degree() for eq in self.equations), default=0)

    def scale(self, factor: RationalLike) -> "RealPolySystem":
        return RealPolySystem(self.variables, tuple(eq.scale(factor) for eq in self.equations))

    def to_strings(self) -> list[str]:
        return [
            f"d{name}/dt = {eq.to_string(self.variables)}"
            for name, eq in zip(self.variables, self.equations)
        ]


def eval_system(system: RealPolySystem, point: Sequence) -> tuple:
    """Right-hand side of the system at a point, exact when inputs are exact."""
    if len(point) != system.nvars:
        raise ValueError(f"point has {len(point)} coordinates, expected {system.nvars}")
    return tuple(eq.evaluate(point) for eq in system.equations)
