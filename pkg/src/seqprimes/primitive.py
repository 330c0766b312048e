"""Search for irreducible divisors of theta1^m - zeta_e^i theta2^m.

Factors v = Phi_{m,e}^{(i)}(theta1, theta2) in Z[zeta_e] (v divides the
binomial by the Phi*Psi identity), reports the largest rational prime
attached to an irreducible factor together with its witness and
inert/split tag, and the Lemma-13-style reference bound
m exp(log m / 103.95 loglog m) as a reported (never asserted) column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import arith, cyclotomic, cycloring, intervals
from .cycloring import CycloFactorization, CycloInt
from .errors import IdentityFailure, PreconditionError
from .muldep import ThetaData


@dataclass(frozen=True)
class PrimitiveSearchResult:
    m: int
    e: int
    i: int
    p: int | None                 # largest associated rational prime
    pi: CycloInt | None           # its canonical irreducible witness
    tag: str                      # "inert" | "split" | "no-primitive-divisor"
    factorization: CycloFactorization | None
    bound: float                  # m exp(log m/103.95 loglog m), midpoint
    exceeds_bound: bool | None

    def row(self) -> dict:
        return {"m": self.m, "p": self.p,
                "pi": cycloring.render(self.pi) if self.pi else None,
                "tag": self.tag, "bound": self.bound,
                "exceeds_bound": self.exceeds_bound}


def reference_bound(m: int, bits: int = 128):
    """Certified interval for m exp(log m / (103.95 log log m)); m >= 3."""
    if m < 3:
        raise PreconditionError("bound needs m >= 3 (log log m > 0)")
    with intervals.precision(bits):
        logm = intervals.log_rational(m, bits)
        c = intervals.rational(Fraction(10395, 100), bits)
        return intervals.rational(m, bits) * intervals.iv.exp(
            logm / (c * intervals.iv.log(logm)))


def primitive_prime_search(theta: ThetaData, e: int, i: int, m: int, *,
                           budget: int = arith.DEFAULT_BUDGET,
                           ecm: bool = True) -> PrimitiveSearchResult:
    """Largest rational prime attached to an irreducible divisor of
    theta1^m - zeta_e^i theta2^m, via the canonical factorization of
    Phi_{m,e}^{(i)}(theta1, theta2).

    Premises: i in {1, -1} (mapped to e-1), theta1 = conj(theta2) in
    Z[zeta_e], and m*e > 12 (the structure-law applicability window).
    Divisibility of the binomial by the returned pi is asserted by exact
    division; a unit Phi value reports no-primitive-divisor.
    """
    if i not in (1, -1):
        raise PreconditionError("i must be 1 or -1")
    if not theta.conjugate_branch or theta.e is None:
        raise PreconditionError("search needs the cyclotomic conjugate branch")
    if e == 4 and theta.e != 4 or e in (3, 6) and theta.e != 3:
        raise PreconditionError(f"theta ring (e={theta.e}) does not contain zeta_{e}")
    if m * e <= 12:
        raise PreconditionError(f"need m*e > 12, got {m}*{e}")
    iexp = i % e
    if math.gcd(iexp, e) != 1:
        raise PreconditionError(f"gcd(i, e) > 1: Phi is identically 1")

    th1, th2 = theta.theta1, theta.theta2  # tag mixing {3,6} is handled ring-side
    v = cyclotomic.phi_ie_eval(m, e, iexp, th1, th2)
    bound_iv = reference_bound(m)
    bound_mid = intervals.midpoint(bound_iv)
    if v.is_unit():
        return PrimitiveSearchResult(m, e, i, None, None, "no-primitive-divisor",
                                     None, bound_mid, None)

    fac = cycloring.factor_element(v, budget=budget, ecm=ecm)
    best_p, best_pi, best_tag = -1, None, ""
    for pi, _ in fac.factors:
        p, tag = cycloring.rational_prime_of(pi)
        if p > best_p:
            best_p, best_pi, best_tag = p, pi, tag

    binom = th1**m - cycloring.zeta(e, iexp) * th2**m
    if not cycloring.divides(binom, best_pi):
        raise IdentityFailure(
            f"pi={cycloring.render(best_pi)} fails to divide theta1^{m} - zeta^{i} theta2^{m}"
        )
    if fac.remultiply() != v:
        raise IdentityFailure("factorization reassembly mismatch")

    exceeds = intervals.resolve(
        lambda bits: intervals.certified_gt(reference_bound(m, bits), best_p),
        what=f"bound comparison at m={m}")
    return PrimitiveSearchResult(m, e, i, best_p, best_pi, best_tag, fac,
                                 bound_mid, exceeds)
