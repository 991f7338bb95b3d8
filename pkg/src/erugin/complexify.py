"""Conversion between real Cauchy-Riemann systems and complex ODEs.

A verified 2n-variable system collapses to n complex equations: pair each
(x_j, y_j) into z_j = x_j + i*y_j, and the complex coefficient of a monomial
z^m is read off the real system as (pure-x coefficient of the first paired
equation) + i * (same coefficient of the second).  The conversion is checked
by re-expanding the complex polynomial over the real variables and demanding
exact equality, so transcription of coefficient tables is never trusted.

``realify`` / ``realify_multivar`` perform the inverse expansion; both round
trips are exact identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .cauchy_riemann import CRReport, NotCauchyRiemannError, Pairing, validate_pairing
from .complex_numbers import ComplexRational, Scalar, as_complex, to_exact
from .polynomials import ExponentVector, RealPoly, RealPolySystem

# A complex-coefficient polynomial over real variables, used internally for
# exact expansion: exponent tuple (over the 2n real variables) -> coefficient.
_CTerms = dict[ExponentVector, ComplexRational]


def _cterms_add(acc: _CTerms, other: _CTerms, scale: ComplexRational) -> None:
    for exps, coeff in other.items():
        value = acc.get(exps, ComplexRational(0)) + coeff * scale
        if value.is_zero():
            acc.pop(exps, None)
        else:
            acc[exps] = value


def _cterms_mul(a: _CTerms, b: _CTerms) -> _CTerms:
    out: _CTerms = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            value = out.get(key, ComplexRational(0)) + ca * cb
            if value.is_zero():
                out.pop(key, None)
            else:
                out[key] = value
    return out


def _expand_complex_monomial(nreal: int, pairing: Pairing, exponents: Sequence[int]) -> _CTerms:
    """Exact expansion of prod_j (x_j + i*y_j)^(m_j) over the real variables."""
    result: _CTerms = {(0,) * nreal: ComplexRational(1)}
    for (x_idx, y_idx), power in zip(pairing, exponents):
        if power == 0:
            continue
        unit = [0] * nreal
        unit[x_idx] = 1
        base: _CTerms = {tuple(unit): ComplexRational(1)}
        unit[x_idx] = 0
        unit[y_idx] = 1
        base[tuple(unit)] = ComplexRational(0, 1)
        for _ in range(power):
            result = _cterms_mul(result, base)
    return result


@dataclass(frozen=True)
class ComplexPoly:
    """Univariate complex polynomial, ascending coefficients (c0, c1, ...).

    Exact-zero leading coefficients are trimmed, so ``degree`` is effective.
    Coefficients may be exact (:class:`ComplexRational`) or floats.
    """

    coefficients: tuple[Scalar, ...]

    def __post_init__(self):
        coeffs = list(self.coefficients)
        while len(coeffs) > 1 and _scalar_exact_zero(coeffs[-1]):
            coeffs.pop()
        if not coeffs:
            coeffs = [ComplexRational(0)]
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_exact(self) -> bool:
        return all(to_exact(c) is not None for c in self.coefficients)

    def exact_coefficients(self) -> tuple[ComplexRational, ...]:
        out = []
        for c in self.coefficients:
            exact = to_exact(c)
            if exact is None:
                raise ValueError("polynomial has float coefficients; exact form unavailable")
            out.append(exact)
        return tuple(out)

    def float_coefficients(self) -> tuple[complex, ...]:
        return tuple(as_complex(c) for c in self.coefficients)

    def __call__(self, z: complex) -> complex:
        result = complex(0)
        for c in reversed(self.float_coefficients()):
            result = result * z + c
        return result

    def derivative_at(self, z: complex) -> complex:
        result = complex(0)
        coeffs = self.float_coefficients()
        for k in range(len(coeffs) - 1, 0, -1):
            result = result * z + k * coeffs[k]
        return result


def _scalar_exact_zero(value: Scalar) -> bool:
    exact = to_exact(value)
    if exact is not None:
        return exact.is_zero()
    return as_complex(value) == 0


@dataclass(frozen=True)
class ComplexScalarODE:
    """dz/dt = P(z) with an initial value z(0)."""

    poly: ComplexPoly
    z0: Scalar

    @property
    def degree(self) -> int:
        return self.poly.degree


@dataclass(frozen=True)
class ComplexMultiPoly:
    """Polynomial in n complex variables: exponent tuple -> coefficient."""

    nvars: int
    terms: Mapping[ExponentVector, Scalar]

    def __post_init__(self):
        cleaned = {}
        for exps, coeff in self.terms.items():
            key = tuple(exps)
            if len(key) != self.nvars:
                raise ValueError(f"exponent vector {key} in {self.nvars}-variable polynomial")
            if not _scalar_exact_zero(coeff):
                cleaned[key] = coeff
        object.__setattr__(self, "terms", cleaned)

    def __call__(self, zs: Sequence[complex]) -> complex:
        total = complex(0)
        for exps, coeff in self.terms.items():
            term = as_complex(coeff)
            for z, e in zip(zs, exps):
                if e:
                    term *= z**e
            total += term
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexMultiPoly) or self.nvars != other.nvars:
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        for key in keys:
            a = self.terms.get(key, ComplexRational(0))
            b = other.terms.get(key, ComplexRational(0))
            ea, eb = to_exact(a), to_exact(b)
            if ea is not None and eb is not None:
                if ea != eb:
                    return False
            elif as_complex(a) != as_complex(b):
                return False
        return True

    def __hash__(self):  # dataclass eq=False replacement; terms dict unhashable
        return hash((self.nvars, frozenset(self.terms.keys())))


@dataclass(frozen=True)
class ComplexODESystem:
    """dz_k/dt = F_k(z_1..z_n) with initial vector z(0)."""

    variables: tuple[str, ...]
    equations: tuple[ComplexMultiPoly, ...]
    z0: tuple[Scalar, ...]

    def __post_init__(self):
        n = len(self.variables)
        if len(self.equations) != n or len(self.z0) != n:
            raise ValueError("variable, equation and initial-value counts must agree")
        for eq in self.equations:
            if eq.nvars != n:
                raise ValueError("equation arity does not match the system")

    @property
    def nvars(self) -> int:
        return len(self.variables)


def _pack_initial(x0, y0) -> Scalar:
    if isinstance(x0, (int, Fraction)) and isinstance(y0, (int, Fraction)):
        return ComplexRational(x0, y0)
    return complex(float(x0), float(y0))


def _extract_equation(
    system: RealPolySystem, pairing: Pairing, x_idx: int, y_idx: int
) -> dict[ExponentVector, ComplexRational]:
    """Complex coefficients of one paired equation, verified by re-expansion."""
    u = system.equations[x_idx]
    v = system.equations[y_idx]
    x_slots = tuple(p[0] for p in pairing)
    y_slots = tuple(p[1] for p in pairing)

    def pure_x_exponent(real_exps: ExponentVector) -> ExponentVector | None:
        if any(real_exps[y] for y in y_slots):
            return None
        return tuple(real_exps[x] for x in x_slots)

    coefficients: dict[ExponentVector, ComplexRational] = {}
    for poly in (u, v):
        for exps in poly.terms:
            m = pure_x_exponent(exps)
            if m is not None:
                coefficients.setdefault(m, ComplexRational(0))
    for m in list(coefficients):
        real_exps = [0] * system.nvars
        for slot, e in zip(x_slots, m):
            real_exps[slot] = e
        key = tuple(real_exps)
        coefficients[m] = ComplexRational(u.coefficient(key), v.coefficient(key))

    expansion: _CTerms = {}
    for m, coeff in coefficients.items():
        _cterms_add(expansion, _expand_complex_monomial(system.nvars, pairing, m), coeff)
    expected: _CTerms = {}
    for exps, coeff in u.terms.items():
        expected[exps] = ComplexRational(coeff, 0)
    for exps, coeff in v.terms.items():
        value = expected.get(exps, ComplexRational(0)) + ComplexRational(0, coeff)
        if value.is_zero():
            expected.pop(exps, None)
        else:
            expected[exps] = value
    if expansion != expected:
        raise NotCauchyRiemannError(
            "the paired equations are not the real and imaginary parts of one complex polynomial"
        )
    return {m: c for m, c in coefficients.items() if not c.is_zero()}


def complexify_multivar(
    system: RealPolySystem,
    report: CRReport,
    pairing: Sequence[Sequence[int]],
    initial: Sequence,
) -> ComplexODESystem:
    """Collapse a verified 2n-variable system to n complex equations."""
    if not report.satisfied:
        raise NotCauchyRiemannError("refusing to complexify: the structure check failed")
    pairs = validate_pairing(pairing, system.nvars)
    if len(initial) != system.nvars:
        raise ValueError(f"initial vector has {len(initial)} entries, expected {system.nvars}")
    equations = []
    names = []
    z0 = []
    for x_idx, y_idx in pairs:
        terms = _extract_equation(system, pairs, x_idx, y_idx)
        equations.append(ComplexMultiPoly(len(pairs), terms))
        names.append(f"{system.variables[x_idx]}+i*{system.variables[y_idx]}")
        z0.append(_pack_initial(initial[x_idx], initial[y_idx]))
    return ComplexODESystem(tuple(names), tuple(equations), tuple(z0))


def complexify_2var(system: RealPolySystem, report: CRReport, x0, y0) -> ComplexScalarODE:
    """Collapse a verified planar system to a single scalar complex ODE."""
    if system.nvars != 2:
        raise ValueError("expected a 2-variable system")
    if not report.satisfied:
        raise NotCauchyRiemannError("refusing to complexify: the structure check failed")
    terms = _extract_equation(system, ((0, 1),), 0, 1)
    degree = max((m[0] for m in terms), default=0)
    coeffs = [terms.get((r,), ComplexRational(0)) for r in range(degree + 1)]
    return ComplexScalarODE(ComplexPoly(tuple(coeffs)), _pack_initial(x0, y0))


def realify_multivar(
    ode_system: ComplexODESystem,
    pairing: Sequence[Sequence[int]] | None = None,
    variables: Sequence[str] | None = None,
) -> RealPolySystem:
    """Expand n complex equations back into a 2n-variable real system.

    By default variable k of the complex system becomes the adjacent real
    pair (x{k+1}, y{k+1}); pass ``pairing``/``variables`` to restore another
    layout.  Requires exact coefficients.
    """
    n = ode_system.nvars
    nreal = 2 * n
    if pairing is None:
        pairs = tuple((2 * k, 2 * k + 1) for k in range(n))
    else:
        pairs = validate_pairing(pairing, nreal)
    if variables is None:
        names = [""] * nreal
        for k, (x_idx, y_idx) in enumerate(pairs):
            names[x_idx] = f"x{k + 1}"
            names[y_idx] = f"y{k + 1}"
    else:
        names = list(variables)
        if len(names) != nreal:
            raise ValueError(f"{len(names)} names for {nreal} real variables")
    equations: list[RealPoly | None] = [None] * nreal
    for k, (x_idx, y_idx) in enumerate(pairs):
        expansion: _CTerms = {}
        for m, coeff in ode_system.equations[k].terms.items():
            exact = to_exact(coeff)
            if exact is None:
                raise ValueError("realification needs exact coefficients")
            _cterms_add(expansion, _expand_complex_monomial(nreal, pairs, m), exact)
        u_terms = {exps: c.re for exps, c in expansion.items() if c.re != 0}
        v_terms = {exps: c.im for exps, c in expansion.items() if c.im != 0}
        equations[x_idx] = RealPoly(nreal, u_terms)
        equations[y_idx] = RealPoly(nreal, v_terms)
    return RealPolySystem(tuple(names), tuple(equations))


def realify(ode: ComplexScalarODE, variables: Sequence[str] = ("x", "y")) -> RealPolySystem:
    """Expand dz/dt = P(z) into the planar real system it encodes.

    The result always satisfies the Cauchy-Riemann check, and complexifying
    it again restores ``ode`` exactly.
    """
    coeffs = ode.poly.exact_coefficients()
    terms = {(r,): c for r, c in enumerate(coeffs) if not c.is_zero()}
    wrapped = ComplexODESystem(
        ("z",),
        (ComplexMultiPoly(1, terms),),
        (ode.z0,),
    )
    return realify_multivar(wrapped, pairing=((0, 1),), variables=variables)


def initial_components(ode: ComplexScalarODE) -> tuple[float, float]:
    z = as_complex(ode.z0)
    return z.real, z.imag
