"""Complex arithmetic on exact rational pairs, plus low-degree root solvers.

Two parallel representations are used throughout the package:

* :class:`ComplexRational` - a pair of Fractions, closed under field
  operations.  Preferred wherever the inputs are exact, because degeneracy
  decisions (double roots, vanishing discriminants, initial values sitting on
  a root) are equality questions.
* built-in ``complex`` - used by the root solvers and everything downstream
  of them (closed-form evaluation, integration).

``complex_sqrt``, ``quadratic_roots`` and ``cubic_roots`` return exact values
when they can be represented exactly and floats otherwise; root tuples are
sorted lexicographically by (re, im) so solver output is deterministic.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Union

from .polynomials import as_fraction

_OMEGA = complex(-0.5, math.sqrt(3.0) / 2.0)  # primitive cube root of unity


class ComplexRational:
    """Exact complex number with Fraction real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", as_fraction(re))
        object.__setattr__(self, "im", as_fraction(im))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("ComplexRational is immutable")

    # ---- conversions ----------------------------------------------------

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    # ---- arithmetic ------------------------------------------------------

    @staticmethod
    def _coerce(value):
        if isinstance(value, ComplexRational):
            return value
        if isinstance(value, (int, Fraction)):
            return ComplexRational(value)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) + other
        return ComplexRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) - other
        return ComplexRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return other - complex(self)
        return ComplexRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) * other
        return ComplexRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) / other
        denom = o.re * o.re + o.im * o.im
        if denom == 0:
            raise ZeroDivisionError("division by exact complex zero")
        return ComplexRational(
            (self.re * o.re + self.im * o.im) / denom,
            (self.im * o.re - self.re * o.im) / denom,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return other / complex(self)
        return o / self

    def __neg__(self) -> "ComplexRational":
        return ComplexRational(-self.re, -self.im)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            return complex(self) ** exponent
        result = ComplexRational(1)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"ComplexRational({self.re!s}, {self.im!s})"


Scalar = Union[ComplexRational, complex, float, int, Fraction]


def as_complex(value: Scalar) -> complex:
    """Any supported scalar as a built-in complex."""
    if isinstance(value, ComplexRational):
        return complex(value)
    return complex(value)


def to_exact(value: Scalar) -> ComplexRational | None:
    """The exact representation of ``value``, or None for floats."""
    if isinstance(value, ComplexRational):
        return value
    if isinstance(value, (int, Fraction)):
        return ComplexRational(value)
    return None


def scalar_is_zero(value: Scalar) -> bool:
    exact = to_exact(value)
    if exact is not None:
        return exact.is_zero()
    return as_complex(value) == 0


def fraction_sqrt(value: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if value < 0:
        raise ValueError("fraction_sqrt needs a nonnegative argument")
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    return Fraction(rn, rd)


def _exact_complex_sqrt(w: ComplexRational) -> ComplexRational | None:
    if w.im == 0:
        if w.re >= 0:
            r = fraction_sqrt(w.re)
            return None if r is None else ComplexRational(r, 0)
        r = fraction_sqrt(-w.re)
        return None if r is None else ComplexRational(0, r)
    modulus = fraction_sqrt(w.re * w.re + w.im * w.im)
    if modulus is None:
        return None
    p = fraction_sqrt((modulus + w.re) / 2)
    q = fraction_sqrt((modulus - w.re) / 2)
    if p is None or q is None:
        return None
    s = ComplexRational(p, q if w.im > 0 else -q)
    if s * s != w:  # pragma: no cover - all branches above guarantee this
        return None
    return s


def complex_sqrt(w: Scalar):
    """Principal square root: re >= 0, and im >= 0 on the imaginary axis.

    Returns a :class:`ComplexRational` when the input is exact and the root is
    representable, a ``complex`` otherwise.
    """
    exact = to_exact(w)
    if exact is not None:
        s = _exact_complex_sqrt(exact)
        if s is not None:
            if s.re < 0 or (s.re == 0 and s.im < 0):
                s = -s
            return s
    s = cmath.sqrt(as_complex(w))
    if s.real < 0 or (s.real == 0 and s.imag < 0):
        s = -s
    return s


def _sort_key(z) -> tuple:
    if isinstance(z, ComplexRational):
        return (z.re, z.im)
    return (z.real, z.imag)


def _sorted_roots(roots):
    return tuple(sorted(roots, key=_sort_key))


def quadratic_roots(c2: Scalar, c1: Scalar, c0: Scalar):
    """Both roots of ``c2 z^2 + c1 z + c0``, sorted by (re, im).

    Exact when the coefficients are exact and the discriminant has an exact
    square root; floats otherwise.  Raises ValueError for ``c2 == 0``.
    """
    if scalar_is_zero(c2):
        raise ValueError("leading coefficient is zero; solve the linear equation instead")
    e2, e1, e0 = to_exact(c2), to_exact(c1), to_exact(c0)
    if e2 is not None and e1 is not None and e0 is not None:
        disc = e1 * e1 - ComplexRational(4) * e2 * e0
        sq = _exact_complex_sqrt(disc)
        if sq is not None:
            r1 = (-e1 + sq) / (ComplexRational(2) * e2)
            r2 = (-e1 - sq) / (ComplexRational(2) * e2)
            return _sorted_roots((r1, r2))
    f2, f1, f0 = as_complex(c2), as_complex(c1), as_complex(c0)
    disc = f1 * f1 - 4.0 * f2 * f0
    s = cmath.sqrt(disc)
    # pick the sign that avoids cancellation in c1 + s
    if abs(f1 + s) < abs(f1 - s):
        s = -s
    q = -(f1 + s) / 2.0
    if q == 0:
        return _sorted_roots((complex(0), -f1 / f2))
    return _sorted_roots((q / f2, f0 / q))


def _newton_polish(z: complex, coeffs: tuple[complex, ...]) -> complex:
    """Up to five Newton steps on the polynomial with ascending ``coeffs``."""

    def horner(x: complex) -> tuple[complex, complex]:
        p = coeffs[-1]
        dp = complex(0)
        for c in reversed(coeffs[:-1]):
            dp = dp * x + p
            p = p * x + c
        return p, dp

    best = z
    best_val = abs(horner(z)[0])
    for _ in range(5):
        p, dp = horner(best)
        if abs(p) == 0 or abs(dp) <= 1e-300:
            break
        step = best - p / dp
        val = abs(horner(step)[0])
        if not math.isfinite(val) or val >= best_val:
            break
        best, best_val = step, val
    return best


def cubic_roots(c3: Scalar, c2: Scalar, c1: Scalar, c0: Scalar):
    """All three roots of ``c3 z^3 + c2 z^2 + c1 z + c0``, sorted by (re, im).

    Exact coefficients get an exact degeneracy classification (triple and
    double roots are rational functions of the coefficients); the generic
    case goes through the Cardano formula with a short Newton polish, which
    recovers the digits Cardano loses near multiple roots.
    """
    if scalar_is_zero(c3):
        raise ValueError("leading coefficient is zero; solve the quadratic instead")
    e3, e2, e1, e0 = to_exact(c3), to_exact(c2), to_exact(c1), to_exact(c0)
    if None not in (e3, e2, e1, e0):
        three = ComplexRational(3)
        d0 = e2 * e2 - three * e3 * e1
        disc = (
            ComplexRational(18) * e3 * e2 * e1 * e0
            - ComplexRational(4) * e2**3 * e0
            + e2 * e2 * e1 * e1
            - ComplexRational(4) * e3 * e1**3
            - ComplexRational(27) * e3 * e3 * e0 * e0
        )
        if disc.is_zero():
            if d0.is_zero():
                rho = -e2 / (three * e3)
                return (rho, rho, rho)
            double = (ComplexRational(9) * e3 * e0 - e2 * e1) / (ComplexRational(2) * d0)
            simple = (
                ComplexRational(4) * e3 * e2 * e1
                - ComplexRational(9) * e3 * e3 * e0
                - e2**3
            ) / (e3 * d0)
            return _sorted_roots((double, double, simple))
    a3, a2, a1, a0 = (as_complex(v) for v in (c3, c2, c1, c0))
    b = a2 / a3
    c = a1 / a3
    d = a0 / a3
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    shift = -b / 3.0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    s = cmath.sqrt(disc)
    if abs(-q / 2.0 + s) < abs(-q / 2.0 - s):
        s = -s
    big = -q / 2.0 + s
    if big == 0:  # p == q == 0: triple root of the depressed cubic
        roots = (shift, shift, shift)
    else:
        u = big ** (1.0 / 3.0)
        roots = []
        for k in range(3):
            uk = u * _OMEGA**k
            roots.append(uk - p / (3.0 * uk) + shift)
    coeffs = (a0, a1, a2, a3)
    polished = tuple(_newton_polish(z, coeffs) for z in roots)
    return _sorted_roots(polished)


def root_multiplicities(roots, rel_tol: float = 1e-9) -> list[tuple[complex, int]]:
    """Cluster near-equal roots; returns (representative, multiplicity) pairs.

    Two roots belong to the same cluster when their distance is below
    ``rel_tol * max(1, |roots|)``.
    """
    values = [as_complex(r) for r in roots]
    scale = max(1.0, max((abs(v) for v in values), default=0.0))
    clusters: list[list[complex]] = []
    for v in sorted(values, key=lambda z: (z.real, z.imag)):
        for cluster in clusters:
            if abs(v - cluster[0]) < rel_tol * scale:
                cluster.append(v)
                break
        else:
            clusters.append([v])
    out = []
    for cluster in clusters:
        mean = sum(cluster) / len(cluster)
        out.append((mean, len(cluster)))
    return out
