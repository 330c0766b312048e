"""Evaluation of homogeneous cyclotomic polynomials at exact ring points.

Phi_n(x,y) and the partial products Phi_{n,e}^{(i)} / complements
Psi_{n,e}^{(i)} are evaluated via the Moebius product

    Phi_n(x,y) = prod_{d|n} (x^{n/d} - y^{n/d})^{mu(d)}

fraction-free: all mu=+1 factors are multiplied first, then each mu=-1
factor is divided out with an exactness assertion, so the computation
never leaves the ring. Coefficient vectors are never materialized --
degrees reach thousands in sweeps and only values are ever needed.

For the partial products (Eq.-(17)-style), the factor for each m | n
with gcd(m,e)=1 carries zeta_e^{mbar} where mbar is the unique residue
with m*mbar = i (mod e). Everything works over plain integers, QuadElem
and CycloInt points.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import arith, cycloring
from .cycloring import CycloInt, zeta
from .errors import IdentityFailure, PreconditionError
from .quadfield import QuadElem


class DegenerateRatio(PreconditionError):
    """x/y is a root of unity making a Moebius factor vanish; the
    operation refuses rather than returning a limit value."""


def _one_like(x):
    if isinstance(x, QuadElem):
        return QuadElem(Fraction(1), Fraction(0), x.disc)
    if isinstance(x, CycloInt):
        return CycloInt(x.e, 1, 0)
    return 1


def _is_zero(t) -> bool:
    if isinstance(t, (QuadElem, CycloInt)):
        return t.is_zero()
    return t == 0


def _divide(num, den):
    if isinstance(num, CycloInt) or isinstance(den, CycloInt):
        return cycloring.divide_exact(num, den)
    if isinstance(num, QuadElem) or isinstance(den, QuadElem):
        return num / den
    q, rem = divmod(num, den)
    if rem:
        raise IdentityFailure(f"inexact integer division {num} / {den}")
    return q


def phi_eval(n: int, x, y):
    """Phi_n(x, y) over int, QuadElem, or CycloInt points."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    num = _one_like(x)
    den = _one_like(x)
    for d in arith.divisors(n):
        mu = arith.moebius(d)
        if mu == 0:
            continue
        t = x ** (n // d) - y ** (n // d)
        if _is_zero(t):
            raise DegenerateRatio(
                f"x^{n // d} = y^{n // d}: x/y is a root of unity; Phi_{n} undefined here"
            )
        if mu > 0:
            num = num * t
        else:
            den = den * t
    return _divide(num, den)


def phi_ie_eval(n: int, e: int, i: int, x, y) -> CycloInt:
    """Partial cyclotomic product Phi_{n,e}^{(i)}(x, y) in Z[zeta_e].

    Returns the ring unit 1 when gcd(i, e) > 1. The degree bookkeeping
    sum_{m|n,(m,e)=1} mu(m) n/m = phi(ne)/phi(e) is asserted.
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    cycloring.ring_kind(e)
    one = CycloInt(e, 1, 0)
    if math.gcd(i, e) > 1:
        return one
    x = x if isinstance(x, CycloInt) else CycloInt(e, x, 0)
    y = y if isinstance(y, CycloInt) else CycloInt(e, y, 0)
    num, den = one, one
    degree = 0
    for m in arith.divisors(n):
        if math.gcd(m, e) > 1:
            continue
        mu = arith.moebius(m)
        degree += mu * (n // m)
        if mu == 0:
            continue
        mbar = (i * pow(m, -1, e)) % e if e > 1 else 0
        t = x ** (n // m) - zeta(e, mbar) * y ** (n // m)
        if t.is_zero():
            raise DegenerateRatio(
                f"degenerate point for Phi_({n},{e})^({i}): factor m={m} vanishes"
            )
        if mu > 0:
            num = num * t
        else:
            den = den * t
    if degree != arith.euler_phi(n * e) // arith.euler_phi(e):
        raise IdentityFailure(
            f"degree bookkeeping failed for Phi_({n},{e})^({i})"
        )
    return cycloring.divide_exact(num, den)


def psi_ie_eval(n: int, e: int, i: int, x, y) -> CycloInt:
    """Complement Psi with Phi_{n,e}^{(i)} * Psi_{n,e}^{(i)} = x^n - zeta_e^i y^n.

    Computed as the exact quotient; the product identity is re-asserted.
    """
    if math.gcd(i, e) > 1:
        raise PreconditionError("psi requires gcd(i, e) = 1")
    x = x if isinstance(x, CycloInt) else CycloInt(e, x, 0)
    y = y if isinstance(y, CycloInt) else CycloInt(e, y, 0)
    phi = phi_ie_eval(n, e, i, x, y)
    if phi.is_zero():
        raise PreconditionError("Phi vanishes at this point")
    full = x**n - zeta(e, i) * y**n
    psi = cycloring.divide_exact(full, phi)
    if phi * psi != full:
        raise IdentityFailure(
            f"Phi*Psi product identity failed at n={n}, e={e}, i={i}"
        )
    return psi
