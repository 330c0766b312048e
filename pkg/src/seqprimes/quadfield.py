"""Exact arithmetic in Q(sqrt(D)).

Elements are a0 + a1*sqrt(D) with reduced Fraction coordinates and a fixed
nonzero integer discriminant D per field context. D is stored as given
(r^2+4s, not squarefree-reduced); squarefree_kernel() recognizes when the
field is actually Q(i) or Q(zeta_3) for the cyclotomic case split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import intervals
from .errors import PreconditionError

ROOT_OF_UNITY_ORDERS = (1, 2, 3, 4, 6)


@dataclass(frozen=True)
class QuadElem:
    """a0 + a1*sqrt(disc), exact."""

    a0: Fraction
    a1: Fraction
    disc: int

    def __post_init__(self):
        if self.disc == 0:
            raise PreconditionError("discriminant must be nonzero")
        object.__setattr__(self, "a0", Fraction(self.a0))
        object.__setattr__(self, "a1", Fraction(self.a1))

    # -- ring structure -------------------------------------------------

    def _coerce(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            if other.disc != self.disc:
                raise PreconditionError(
                    f"mixed discriminants {self.disc} and {other.disc}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem(Fraction(other), Fraction(0), self.disc)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.a0 + o.a0, self.a1 + o.a1, self.disc)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.a0, -self.a1, self.disc)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(
            self.a0 * o.a0 + self.a1 * o.a1 * self.disc,
            self.a0 * o.a1 + self.a1 * o.a0,
            self.disc,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero or zero-norm element")
        c = self.conj()
        return QuadElem(c.a0 / n, c.a1 / n, self.disc)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int) -> "QuadElem":
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadElem(Fraction(1), Fraction(0), self.disc)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- field maps ------------------------------------------------------

    def conj(self) -> "QuadElem":
        return QuadElem(self.a0, -self.a1, self.disc)

    def norm(self) -> Fraction:
        """x * conj(x); a rational."""
        return self.a0 * self.a0 - self.a1 * self.a1 * self.disc

    def trace(self) -> Fraction:
        return 2 * self.a0

    def is_zero(self) -> bool:
        return self.a0 == 0 and self.a1 == 0

    def is_rational(self) -> bool:
        return self.a1 == 0

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise PreconditionError(f"{self} has a sqrt component")
        return self.a0

    def as_int(self) -> int:
        q = self.as_rational()
        if q.denominator != 1:
            raise PreconditionError(f"{self} is not a rational integer")
        return q.numerator

    def is_algebraic_integer(self) -> bool:
        """Monic integer minimal polynomial: integer trace and norm."""
        return self.trace().denominator == 1 and self.norm().denominator == 1

    # -- misc -------------------------------------------------------------

    def abs_squared(self) -> Fraction:
        """|x|^2 under the complex embedding (disc < 0) or (Re + Im*sqrt(D))^2 decomposition."""
        if self.disc < 0:
            return self.a0 * self.a0 + self.a1 * self.a1 * (-self.disc)
        raise PreconditionError("abs_squared is the complex modulus; disc must be negative")

    def __repr__(self):
        return f"({self.a0}+{self.a1}*sqrt({self.disc}))"


def rational(q, disc: int) -> QuadElem:
    return QuadElem(Fraction(q), Fraction(0), disc)


def roots_of(spec_or_r, s: int | None = None) -> tuple[QuadElem, QuadElem]:
    """alpha, beta = (r +- sqrt(r^2+4s))/2 as elements of Q(sqrt(r^2+4s)).

    Accepts either (r, s) integers or anything with .r and .s fields.
    """
    if s is None:
        r, s = spec_or_r.r, spec_or_r.s
    else:
        r = spec_or_r
    disc = r * r + 4 * s
    if disc == 0:
        raise PreconditionError(f"degenerate discriminant: r^2+4s = 0 for (r,s)=({r},{s})")
    alpha = QuadElem(Fraction(r, 2), Fraction(1, 2), disc)
    return alpha, alpha.conj()


def squarefree_kernel(disc: int) -> int:
    """Squarefree part of disc (same sign)."""
    if disc == 0:
        raise PreconditionError("kernel of zero discriminant")
    from . import arith  # deferred: arith has no dependency on this module

    kern = 1
    for p, e in arith.factorize(abs(disc)).factors:
        if e % 2:
            kern *= p
    return kern if disc > 0 else -kern


def cyclotomic_ring_tag(disc: int) -> int | None:
    """4 when Q(sqrt(disc)) = Q(i), 3 when = Q(zeta_3), else None."""
    k = squarefree_kernel(disc)
    if k == -1:
        return 4
    if k == -3:
        return 3
    return None


def is_root_of_unity(x: QuadElem) -> tuple[bool, int | None]:
    """(True, least k in {1,2,3,4,6} with x^k = 1) or (False, None).

    Exact power computation only. Quadratic-field roots of unity have
    order in {1,2,3,4,6} (phi(k) <= 2), so the scan is complete; 5 is
    skipped since phi(5)=4 cannot occur.
    """
    if x.is_zero():
        raise PreconditionError("zero is not a root of unity candidate")
    one = rational(1, x.disc)
    power = one
    for k in range(1, 7):
        power = power * x
        if k == 5:
            continue
        if power == one:
            return True, k
    return False, None


def embed_abs(x: QuadElem, precision_bits: int = 53):
    """Certified interval containing |x| (complex modulus when disc < 0).

    Width <= 2^-precision_bits * max(1, |x|).
    """
    def attempt(bits):
        with intervals.precision(bits):
            if x.is_zero():
                return intervals.rational(0, bits)
            if x.disc < 0:
                out = intervals.sqrt_rational(x.abs_squared(), bits)
            else:
                rt = intervals.sqrt_rational(x.disc, bits)
                val = intervals.rational(x.a0, bits) + intervals.rational(x.a1, bits) * rt
                out = abs(val)
            # outward-certified width check: 2^-precision_bits * max(1, |x|),
            # conservatively using the lower endpoint of |x|
            wd, lo = intervals.width(out), intervals.endpoints(out)[0]
            if wd <= 2**-precision_bits * max(1.0, lo):
                return out
            return None

    return intervals.resolve(attempt, start_bits=max(64, precision_bits + 16),
                             what=f"embed_abs({x})")
