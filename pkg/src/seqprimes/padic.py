"""Rank of apparition, the exact Lucas valuation law, and the prime
structure of Phi_n(alpha, beta).

The valuation law is asserted exactly (it is a theorem under its
premises); the asymptotic ord_p bounds only ever produce measured-margin
reports, since they hold beyond effectively-computable-but-uncomputed
constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import arith, cyclotomic, intervals, muldep, quadfield, sequences
from .errors import IdentityFailure, PreconditionError
from .sequences import RecurrenceSpec


@dataclass(frozen=True)
class RankRecord:
    """l is minimal with p | t_l; p=2 bookkeeping keeps ord(t_2l) too."""

    p: int
    l: int
    ord_t_l: int
    ord_t_2l: int


_rank_cache: dict[tuple[RecurrenceSpec, int], RankRecord] = {}


def rank_of_apparition(spec: RecurrenceSpec, p: int) -> RankRecord:
    """Scan t_n mod p (n <= p+1 suffices when p does not divide alpha*beta)."""
    if not arith.is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if spec.s % p == 0:
        raise PreconditionError(
            f"rank of apparition needs p coprime to alpha*beta; {p} divides s={spec.s}"
        )
    key = (spec.companion(), p)
    hit = _rank_cache.get(key)
    if hit is not None:
        return hit
    r, s = spec.r % p, spec.s % p
    a, b = 0, 1  # t_0, t_1 mod p
    l = None
    for n in range(1, p + 2):
        a, b = b, (r * b + s * a) % p
        if a == 0:
            l = n
            break
    if l is None:
        raise IdentityFailure(
            f"no rank of apparition <= p+1 for p={p}, spec={spec}"
        )
    ord_l = arith.ord_p(sequences.lucas_term(spec, l), p)
    ord_2l = arith.ord_p(sequences.lucas_term(spec, 2 * l), p)
    rec = RankRecord(p, l, ord_l, ord_2l)
    _rank_cache[key] = rec
    return rec


def lucas_valuation(spec: RecurrenceSpec, n: int, p: int) -> int:
    """ord_p(t_n) from the closed law (never from the full term).

    Premises: gcd(r, s) = 1 and p coprime to s. Law: 0 when l does not
    divide n; for n = l*k and p > 2, ord(t_l) + ord(k); for p = 2,
    ord(t_l) when k is odd and ord(t_2l) + ord(k) - 1 when k is even.
    """
    if n < 1:
        raise PreconditionError("n must be positive")
    if math.gcd(spec.r, spec.s) != 1:
        raise PreconditionError(
            f"valuation law needs gcd(r, s) = 1, got gcd({spec.r},{spec.s})"
        )
    rec = rank_of_apparition(spec, p)
    if n % rec.l:
        return 0
    k = n // rec.l
    if p > 2:
        return rec.ord_t_l + arith.ord_p(k, p)
    if k % 2:
        return rec.ord_t_l
    return rec.ord_t_2l + arith.ord_p(k, 2) - 1


@dataclass(frozen=True)
class PhiPrimeEntry:
    prime: int
    exponent: int
    kind: str  # "special" | "plus-minus-one" | "unclassified"


@dataclass(frozen=True)
class PhiStructureReport:
    n: int
    value: int
    special_prime: int
    entries: tuple[PhiPrimeEntry, ...]

    @property
    def all_classified(self) -> bool:
        return all(e.kind != "unclassified" for e in self.entries)


def phi_prime_structure(spec: RecurrenceSpec, n: int, *,
                        budget: int = arith.DEFAULT_BUDGET,
                        report_only: bool = False) -> PhiStructureReport:
    """Factor Phi_n(alpha, beta) and classify each prime per the structure
    law: P(n/(3,n)) may appear at most to the first power, every other
    prime must be +-1 mod n.

    Premises: gcd(r^2, s) = 1 (bypass with report_only to survey the
    non-coprime case without asserting), alpha/beta not a root of unity,
    n > 4 and n not in {6, 12}. Classification failure raises
    IdentityFailure unless report_only.
    """
    if n <= 4 or n in (6, 12):
        raise PreconditionError("structure law needs n > 4, n not in {6, 12}")
    if math.gcd(spec.r * spec.r, spec.s) != 1 and not report_only:
        raise PreconditionError(
            "structure law needs gcd(r^2, s) = 1; pass report_only=True to survey anyway"
        )
    nd = sequences.is_nondegenerate(spec.companion())
    if not nd.ok:
        raise PreconditionError(f"degenerate companion sequence: {nd.reason}")
    cf = sequences.closed_form(spec)
    value = cyclotomic.phi_eval(n, cf.alpha, cf.beta).as_int()
    special = arith.greatest_prime_factor(n // math.gcd(3, n))
    entries = []
    for p, e in arith.factorize(value, budget=budget).factors:
        if p == special and e == 1:
            kind = "special"
        elif p % n in (1, n - 1):
            kind = "plus-minus-one"
        else:
            kind = "unclassified"
        entries.append(PhiPrimeEntry(p, e, kind))
    report = PhiStructureReport(n, value, special, tuple(entries))
    if not report.all_classified and not report_only:
        bad = [e for e in report.entries if e.kind == "unclassified"]
        raise IdentityFailure(
            f"prime structure law violated at n={n}: unclassified {bad} in {value}"
        )
    return report


@dataclass(frozen=True)
class MarginReport:
    kind: str
    n: int
    p: int
    observed: int
    bound: float
    ratio: float

    def row(self) -> dict:
        return {"kind": self.kind, "p": self.p, "n": self.n,
                "ord": self.observed, "bound": self.bound, "ratio": self.ratio}


def _decay_factor(p: int, bits: int):
    """Certified interval for p * exp(-log p / (51.9 loglog p))."""
    logp = intervals.log_rational(p, bits)
    loglogp = intervals.iv.log(logp)
    c = intervals.rational(Fraction(519, 10), bits)
    return intervals.rational(p, bits) * intervals.iv.exp(-logp / (c * loglogp))


def _log_dominant_root(spec: RecurrenceSpec, bits: int):
    """Certified interval for log max(|alpha|, |beta|)."""
    alpha, beta = quadfield.roots_of(spec)
    if spec.disc < 0:
        return intervals.log_rational(alpha.abs_squared(), bits) / 2
    ia = quadfield.embed_abs(alpha, bits // 2)
    ib = quadfield.embed_abs(beta, bits // 2)
    # interval max via (x + y + |x - y|) / 2
    return intervals.iv.log((ia + ib + abs(ia - ib)) / 2)


def ordp_bound_margin(kind: str, spec_or_theta, n: int, p: int, *,
                      dep_bound: int = 16, bits: int = 128) -> MarginReport:
    """Measured margin (observed ord, bound value, ratio) for the
    asymptotic ord_p bounds; never asserts (the bounds hold only beyond
    an uncomputed constant).

    kind "general-term": bound p exp(-log p/51.9 loglog p) log n; needs
    a/b and alpha/beta multiplicatively independent, enforced by a
    bounded dependence search (bound dep_bound -- a heuristic stand-in
    for an undecidable premise, see docs).
    kind "lucas-term": the same with an extra log max(|alpha|,|beta|).
    kind "phi-value": theta context; observed ord_p Phi_{ne}(lambda1,
    lambda2) with the extra factor log|lambda1| log(ne).
    """
    if p <= 2 or not arith.is_prime(p):
        raise PreconditionError("margin reports need an odd prime p > 2")
    if n < 2:
        raise PreconditionError("n must be at least 2")

    with intervals.precision(bits):
        if kind == "general-term":
            spec = spec_or_theta
            cf = sequences.closed_form(spec)
            if muldep.find_dependence(cf, bound=dep_bound) is not None:
                raise PreconditionError(
                    "a/b and alpha/beta are multiplicatively dependent; "
                    "the general-term bound does not apply"
                )
            u = sequences.term(spec, n)
            if u == 0:
                raise PreconditionError(f"u_{n} = 0; ord_p undefined for the margin")
            observed = arith.ord_p(u, p)
            bound_iv = _decay_factor(p, bits) * intervals.log_rational(n, bits)
        elif kind == "lucas-term":
            spec = spec_or_theta
            if spec.s % p == 0:
                raise PreconditionError(f"{p} divides s={spec.s}")
            observed = lucas_valuation(spec.companion(), n, p)
            bound_iv = (_decay_factor(p, bits) * _log_dominant_root(spec, bits)
                        * intervals.log_rational(n, bits))
        elif kind == "phi-value":
            theta = spec_or_theta
            if theta.e is None or theta.N is None:
                raise PreconditionError(
                    "phi-value margins need the conjugate cyclotomic branch"
                )
            ne = n * theta.e
            val = cyclotomic.phi_eval(ne, theta.theta1_quad, theta.theta2_quad).as_int()
            halfdeg = Fraction(arith.euler_phi(ne), 2)
            ord_lambda = Fraction(arith.ord_p(val, p)) - halfdeg * arith.ord_p(theta.g, p)
            if ord_lambda < 0 or ord_lambda.denominator != 1:
                raise IdentityFailure(
                    f"Phi_ne(lambda) not integral at p={p}, n={n}: ord {ord_lambda}"
                )
            observed = int(ord_lambda)
            log_lambda1 = intervals.log_rational(Fraction(theta.N, theta.g), bits) / 2
            bound_iv = (_decay_factor(p, bits) * log_lambda1
                        * intervals.log_rational(ne, bits))
        else:
            raise PreconditionError(f"unknown margin kind {kind!r}")

        bound = intervals.midpoint(bound_iv)
    return MarginReport(kind, n, p, observed,
                        bound, observed / bound if bound else float("inf"))
