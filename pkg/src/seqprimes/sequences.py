"""Binary recurrence sequences.

Terms by memoized linear iteration (sweeps want every prefix term
anyway) with matrix fast-doubling for isolated large indices, the exact
closed form u_n = a*alpha^n + b*beta^n over Q(sqrt(r^2+4s)), the Lucas
companion t_n, non-degeneracy with reason codes, the even/odd index
splitting u_{2n} = g^n v_n / u_{2n+1} = g^n w_n with g = gcd(r^2, s),
and the exact shift identity u_m - beta^r u_{m-r} = a(alpha-beta)
alpha^{m-r} t_r.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from . import quadfield
from .errors import IdentityFailure, PreconditionError
from .quadfield import QuadElem

_FAST_DOUBLING_CUTOFF = 10_000


@dataclass(frozen=True)
class RecurrenceSpec:
    """u_n = r*u_{n-1} + s*u_{n-2} with the given initial terms."""

    r: int
    s: int
    u0: int
    u1: int

    @property
    def disc(self) -> int:
        return self.r * self.r + 4 * self.s

    def companion(self) -> "RecurrenceSpec":
        """The Lucas companion (same r,s with t0=0, t1=1)."""
        return RecurrenceSpec(self.r, self.s, 0, 1)

    def is_lucas(self) -> bool:
        return self.u0 == 0 and self.u1 == 1

    def to_json(self) -> str:
        return json.dumps({"r": str(self.r), "s": str(self.s),
                           "u0": str(self.u0), "u1": str(self.u1)})

    @classmethod
    def from_json(cls, text: str) -> "RecurrenceSpec":
        d = json.loads(text)
        return cls(int(d["r"]), int(d["s"]), int(d["u0"]), int(d["u1"]))

    @classmethod
    def parse(cls, text: str) -> "RecurrenceSpec":
        """Parse the CLI form "r,s,u0,u1"."""
        parts = [int(p) for p in text.split(",")]
        if len(parts) != 4:
            raise PreconditionError(f"expected r,s,u0,u1 -- got {text!r}")
        return cls(*parts)


FIBONACCI = RecurrenceSpec(1, 1, 0, 1)

_prefix_lock = threading.Lock()
_prefix_cache: dict[RecurrenceSpec, list[int]] = {}


def terms(spec: RecurrenceSpec, n: int) -> list[int]:
    """The prefix [u_0, ..., u_n] (memoized per spec)."""
    if n < 0:
        raise PreconditionError("n must be non-negative")
    with _prefix_lock:
        seq = _prefix_cache.setdefault(spec, [spec.u0, spec.u1])
        while len(seq) <= n:
            seq.append(spec.r * seq[-1] + spec.s * seq[-2])
        return seq[: n + 1]


def term(spec: RecurrenceSpec, n: int) -> int:
    """u_n. Iterates the cached prefix; fast-doubles for large isolated n."""
    if n < 0:
        raise PreconditionError("n must be non-negative")
    cached = _prefix_cache.get(spec)
    if n >= _FAST_DOUBLING_CUTOFF and (cached is None or len(cached) <= n):
        return _term_by_doubling(spec, n)
    return terms(spec, n)[n]


def _lucas_pair(r: int, s: int, n: int) -> tuple[int, int]:
    # (t_n, t_{n+1}) by fast doubling:
    #   t_{2k} = t_k (2 t_{k+1} - r t_k),  t_{2k+1} = t_{k+1}^2 + s t_k^2
    if n == 0:
        return 0, 1
    a, b = _lucas_pair(r, s, n >> 1)
    c = a * (2 * b - r * a)
    d = b * b + s * a * a
    if n & 1:
        return d, r * d + s * c
    return c, d


def _term_by_doubling(spec: RecurrenceSpec, n: int) -> int:
    # u_n = u_1 t_n + s u_0 t_{n-1}; shift the pair once to avoid n-1 < 0
    t_n, t_n1 = _lucas_pair(spec.r, spec.s, n)
    if n == 0:
        return spec.u0
    t_prev = (t_n1 - spec.r * t_n) // spec.s if spec.s else _lucas_pair(spec.r, spec.s, n - 1)[0]
    return spec.u1 * t_n + spec.s * spec.u0 * t_prev


def lucas_term(spec: RecurrenceSpec, n: int) -> int:
    """Companion Lucas term t_n = (alpha^n - beta^n)/(alpha - beta)."""
    if spec.disc == 0:
        raise PreconditionError("degenerate discriminant r^2+4s = 0")
    return term(spec.companion(), n)


@dataclass(frozen=True)
class ClosedForm:
    """u_n = a alpha^n + b beta^n; w is the least positive integer making
    w*a and w*b algebraic integers."""

    spec: RecurrenceSpec
    alpha: QuadElem
    beta: QuadElem
    a: QuadElem
    b: QuadElem
    w: int

    @property
    def scaled_a(self) -> QuadElem:
        return self.a * self.w

    @property
    def scaled_b(self) -> QuadElem:
        return self.b * self.w

    def evaluate(self, n: int) -> int:
        """Closed-form u_n (exact; must agree with term())."""
        val = self.a * self.alpha**n + self.b * self.beta**n
        return val.as_int()


def _integrality_scale(x: QuadElem) -> int:
    # least w > 0 with w*x an algebraic integer, i.e. w*trace(x) in Z and
    # w^2*norm(x) in Z: lcm of den(trace) with prod p^ceil(k/2) over
    # p^k || den(norm)
    from . import arith  # deferred; arith does not import sequences

    w2 = 1
    for p, k in arith.factorize(x.norm().denominator).factors:
        w2 *= p ** ((k + 1) // 2)
    return math.lcm(x.trace().denominator, w2)


def closed_form(spec: RecurrenceSpec) -> ClosedForm:
    """Exact a, b, alpha, beta and the integrality scale w."""
    alpha, beta = quadfield.roots_of(spec)
    root = alpha - beta  # sqrt(disc)
    a = (quadfield.rational(spec.u1, spec.disc) - spec.u0 * beta) / root
    b = (spec.u0 * alpha - quadfield.rational(spec.u1, spec.disc)) / root
    w = max(_integrality_scale(a), _integrality_scale(b))
    cf = ClosedForm(spec, alpha, beta, a, b, w)
    for n in (0, 1):
        if cf.evaluate(n) != term(spec, n):
            raise IdentityFailure(f"closed form mismatch at n={n} for {spec}")
    if not (cf.scaled_a.is_algebraic_integer() and cf.scaled_b.is_algebraic_integer()):
        raise IdentityFailure(f"scale w={w} does not clear denominators for {spec}")
    return cf


@dataclass(frozen=True)
class NondegeneracyReport:
    ok: bool
    reason: str | None = None  # degenerate-discriminant | alpha-beta-zero |
    #                            ab-zero | root-of-unity


def is_nondegenerate(spec: RecurrenceSpec) -> NondegeneracyReport:
    """ab*alpha*beta != 0 and alpha/beta not a root of unity.

    The root-of-unity condition is checked both ways the spec offers:
    t_k = 0 for some k in 1..6, and the exact power test on alpha/beta.
    """
    if spec.disc == 0:
        return NondegeneracyReport(False, "degenerate-discriminant")
    if spec.s == 0:
        return NondegeneracyReport(False, "alpha-beta-zero")
    cf = closed_form(spec)
    if cf.a.is_zero() or cf.b.is_zero():
        return NondegeneracyReport(False, "ab-zero")
    ratio = cf.alpha / cf.beta
    rou, order = quadfield.is_root_of_unity(ratio)
    zero_t = any(lucas_term(spec, k) == 0 for k in range(1, 7))
    if rou != zero_t:
        raise IdentityFailure(
            f"root-of-unity tests disagree for {spec}: power={rou} t_k-zero={zero_t}"
        )
    if rou:
        return NondegeneracyReport(False, "root-of-unity")
    return NondegeneracyReport(True)


def split_even_odd(spec: RecurrenceSpec) -> tuple[int, RecurrenceSpec, RecurrenceSpec]:
    """(g, v-spec, w-spec) with v_n = g^-n u_{2n}, w_n = g^-n u_{2n+1}.

    Both derived sequences satisfy x^2 - ((r^2+2s)/g) x + (s/g)^2.
    Raises PreconditionError when the derived initial terms are not
    integers (possible when g > 1; the first 50 terms are re-verified).
    """
    if spec.disc == 0:
        raise PreconditionError("degenerate discriminant r^2+4s = 0")
    g = math.gcd(spec.r * spec.r, spec.s)
    r2 = (spec.r * spec.r + 2 * spec.s) // g
    s2 = -((spec.s // g) ** 2)
    u = terms(spec, 3)
    if u[2] % g or u[3] % g:
        raise PreconditionError(
            f"derived sequence not integral: g={g} does not divide u2={u[2]} or u3={u[3]}"
        )
    spec_v = RecurrenceSpec(r2, s2, spec.u0, u[2] // g)
    spec_w = RecurrenceSpec(r2, s2, spec.u1, u[3] // g)
    full = terms(spec, 101)
    for n in range(51):
        gn = g**n
        if term(spec_v, n) * gn != full[2 * n] or term(spec_w, n) * gn != full[2 * n + 1]:
            raise PreconditionError(
                f"derived sequence not integral at n={n} for {spec} (g={g})"
            )
    return g, spec_v, spec_w


def identity48_check(spec: RecurrenceSpec, m: int, r_shift: int) -> bool:
    """Exact check of u_m - beta^r u_{m-r} = a (alpha-beta) alpha^{m-r} t_r.

    (The shift identity; the sign convention follows the exact expansion,
    see the ledger note on the printed form.)
    """
    if spec.disc == 0:
        raise PreconditionError("degenerate discriminant")
    if m < r_shift or r_shift < 0:
        raise PreconditionError("need m >= r_shift >= 0")
    cf = closed_form(spec)
    lhs = quadfield.rational(term(spec, m), spec.disc) - cf.beta**r_shift * term(spec, m - r_shift)
    rhs = cf.a * (cf.alpha - cf.beta) * cf.alpha ** (m - r_shift) * lucas_term(spec, r_shift)
    return lhs == rhs
