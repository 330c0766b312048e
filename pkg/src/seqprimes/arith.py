"""Arbitrary-precision integer number theory.

Factorization, the greatest-prime-factor convention P(0)=P(±1)=1,
Moebius mu, Euler phi, omega / q(n)=2^omega(n), and p-adic valuations.

Primality testing is deterministic Miller-Rabin (13 fixed bases) below
3.3e24 and Baillie-PSW beyond, with probable primes flagged in the
output. Factorization runs trial division by sieved primes up to 10^6,
a perfect-power check, then Brent-cycle Pollard rho with a fixed seed
sequence so results are bit-for-bit reproducible. A work budget caps
the search; an optional ECM fallback (sympy's implementation, seeded
from the cofactor) rescues composites whose least prime factor is out
of rho range. All functions here are pure.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpz

from .errors import FactorBudgetError, IdentityFailure, PreconditionError

TRIAL_BOUND = 10**6
DEFAULT_BUDGET = 10**8
# Largest n for which Miller-Rabin with the first 13 prime bases is a proof
# (Sorenson-Webster): 3.317...e24.
DETERMINISTIC_MR_BOUND = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

# Work units charged per rho iteration (1) and per ECM curve (B1).
_RHO_STAGE_CAP = 400_000  # rho's sweet spot ends near sqrt(cap)^2 ~ 1e11
_ECM_LADDER = ((10_000, 1_000_000, 60), (50_000, 5_000_000, 100),
               (250_000, 25_000_000, 200), (1_000_000, 100_000_000, 300))

_sieve_lock = threading.Lock()
_trial_blocks: list[tuple[mpz, list[int]]] | None = None


def primes_up_to(n: int) -> list[int]:
    """Primes <= n by a byte sieve."""
    if n < 2:
        return []
    flags = bytearray([1]) * (n + 1)
    flags[0] = flags[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if flags[i]:
            flags[i * i:: i] = bytearray(len(flags[i * i:: i]))
    return [i for i, f in enumerate(flags) if f]


def _trial_division_blocks() -> list[tuple[mpz, list[int]]]:
    # (product, primes) per ~1000 sieved primes; one gcd against the product
    # tells whether the block contributes, far cheaper than 78498 divisions.
    global _trial_blocks
    if _trial_blocks is None:
        with _sieve_lock:
            if _trial_blocks is None:
                ps = primes_up_to(TRIAL_BOUND)
                blocks = []
                for i in range(0, len(ps), 1000):
                    chunk = ps[i: i + 1000]
                    prod = mpz(1)
                    for p in chunk:
                        prod *= p
                    blocks.append((prod, chunk))
                _trial_blocks = blocks
    return _trial_blocks


def _mr_witness(a: int, n: mpz) -> bool:
    # True when a proves n composite.
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    x = gmpy2.powmod(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def is_prime(n: int) -> bool:
    """Primality test; deterministic below 3.3e24, Baillie-PSW above.

    Use primality() when the certificate kind matters.
    """
    return primality(n) != "composite"


def primality(n: int) -> str:
    """Classify n as 'prime', 'probable-prime' (BPSW only), or 'composite'."""
    n = mpz(n)
    if n < 2:
        return "composite"
    for p in _MR_BASES:
        if n % p == 0:
            return "prime" if n == p else "composite"
    if n < DETERMINISTIC_MR_BOUND:
        for a in _MR_BASES:
            if _mr_witness(a, n):
                return "composite"
        return "prime"
    # Baillie-PSW: strong base-2 MR plus strong Lucas-Selfridge.
    if _mr_witness(2, n):
        return "composite"
    if not gmpy2.is_strong_selfridge_prp(n):
        return "composite"
    return "probable-prime"


@dataclass(frozen=True)
class Factorization:
    """sign * prod(p^e) == value, primes strictly increasing.

    0 is represented as sign 0 with no factors. Primes certified only by
    Baillie-PSW (beyond the deterministic Miller-Rabin range) are listed
    in probable_primes.
    """

    value: int
    sign: int
    factors: tuple[tuple[int, int], ...]
    probable_primes: tuple[int, ...] = ()

    def __post_init__(self):
        prod = self.sign
        for p, e in self.factors:
            prod *= p**e
        if prod != self.value:
            raise IdentityFailure(f"inconsistent factorization of {self.value}")

    def greatest_prime(self) -> int:
        """P(value) with the convention P(0)=P(+-1)=1."""
        return self.factors[-1][0] if self.factors else 1

    def radical_exponents(self) -> dict[int, int]:
        return dict(self.factors)


class _Budget:
    __slots__ = ("remaining",)

    def __init__(self, total: int):
        self.remaining = total

    def charge(self, units: int) -> bool:
        self.remaining -= units
        return self.remaining >= 0


def _brent_rho(n: mpz, budget: _Budget) -> mpz | None:
    # Brent's cycle variant, fixed x0=2 and c=1,2,3,... so the factor found
    # for a given n never depends on anything but n and the budget.
    for c in range(1, 64):
        if budget.remaining <= 0:
            return None
        y = mpz(2)
        r, q, g = 1, mpz(1), mpz(1)
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                m = min(256, r - k)
                for _ in range(m):
                    y = (y * y + c) % n
                    q = q * (x - y) % n
                g = gmpy2.gcd(q, n)
                k += m
                if not budget.charge(m):
                    return None
            r *= 2
        if g == n:
            # backtrack: the batch overshot a factor
            g = mpz(1)
            while g == 1:
                ys = (ys * ys + c) % n
                g = gmpy2.gcd(x - ys, n)
        if 1 < g < n:
            return g
        # g == n: cycle degenerate for this c, try the next one
    return None


def _ecm_factor(n: mpz, budget: _Budget) -> mpz | None:
    try:
        from sympy.ntheory.ecm import _ecm_one_factor
    except ImportError:  # pragma: no cover - sympy is a declared dependency
        return None
    seed = int(n % (2**32)) | 1
    for b1, b2, curves in _ECM_LADDER:
        max_curves = min(curves, budget.remaining // b1)
        if max_curves <= 0:
            return None
        budget.charge(max_curves * b1)
        try:
            f = _ecm_one_factor(int(n), b1, b2, max_curves, seed=seed)
        except ValueError:
            f = None
        if f and 1 < f < n:
            return mpz(f)
    return None


def _split_perfect_power(n: mpz) -> tuple[mpz, int]:
    # Returns (root, k) with root^k == n, k maximal (k=1 when not a power).
    if n < 4 or not gmpy2.is_power(n):
        return n, 1
    for k in range(int(n).bit_length(), 1, -1):
        root, exact = gmpy2.iroot(n, k)
        if exact:
            return root, k
    return n, 1


def factorize(m: int, *, budget: int = DEFAULT_BUDGET, ecm: bool = True) -> Factorization:
    """Fully factor m. Deterministic for given (m, budget, ecm).

    Raises FactorBudgetError (carrying the offending cofactor and the
    factors found so far) when the budget runs out on a composite.
    """
    if m == 0:
        return Factorization(0, 0, ())
    sign = -1 if m < 0 else 1
    n = mpz(abs(m))
    found: dict[int, int] = {}
    probable: set[int] = set()

    if n > 1:
        for block, chunk in _trial_division_blocks():
            if gmpy2.gcd(n, block) == 1:
                continue
            for p in chunk:
                if n % p == 0:
                    e = 1
                    n //= p
                    while n % p == 0:
                        n //= p
                        e += 1
                    found[p] = e
            if n == 1:
                break

    pool = _Budget(budget)
    stack: list[tuple[mpz, int]] = [(n, 1)] if n > 1 else []
    while stack:
        comp, mult = stack.pop()
        root, k = _split_perfect_power(comp)
        comp, mult = root, mult * k
        cls = primality(int(comp))
        if cls != "composite":
            found[int(comp)] = found.get(int(comp), 0) + mult
            if cls == "probable-prime":
                probable.add(int(comp))
            continue
        rho_allow = min(pool.remaining, _RHO_STAGE_CAP) if ecm else pool.remaining
        rho_pool = _Budget(rho_allow)
        g = _brent_rho(comp, rho_pool)
        pool.remaining -= rho_allow - max(rho_pool.remaining, 0)
        if g is None and ecm:
            g = _ecm_factor(comp, pool)
        if g is None:
            partial = tuple(sorted(found.items()))
            raise FactorBudgetError(budget, int(comp) ** mult, partial)
        stack.append((g, mult))
        stack.append((comp // g, mult))

    factors = tuple(sorted(found.items()))
    return Factorization(m, sign, factors, tuple(sorted(probable)))


def greatest_prime_factor(m: int, *, budget: int = DEFAULT_BUDGET, ecm: bool = True) -> int:
    """P(m): the largest prime dividing m, with P(0)=P(+-1)=1."""
    return factorize(m, budget=budget, ecm=ecm).greatest_prime()


def moebius(n: int) -> int:
    """Moebius mu(n)."""
    if n < 1:
        raise PreconditionError("moebius requires n >= 1")
    f = factorize(n)
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def euler_phi(n: int) -> int:
    """Euler's totient."""
    if n < 1:
        raise PreconditionError("euler_phi requires n >= 1")
    out = n
    for p, _ in factorize(n).factors:
        out -= out // p
    return out


def omega(n: int) -> int:
    """Number of distinct prime factors."""
    if n < 1:
        raise PreconditionError("omega requires n >= 1")
    return len(factorize(n).factors)


def q_omega(n: int) -> int:
    """q(n) = 2^omega(n)."""
    return 2 ** omega(n)


def ord_p(m: int, p: int) -> int | float:
    """Exponent of the prime p in m; math.inf for m = 0."""
    if not is_prime(p):
        raise PreconditionError(f"ord_p requires a prime, got {p}")
    if m == 0:
        return math.inf
    m = mpz(abs(m))
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    return e


def divisors(n: int) -> list[int]:
    """All positive divisors of n >= 1, ascending."""
    if n < 1:
        raise PreconditionError("divisors requires n >= 1")
    out = [1]
    for p, e in factorize(n).factors:
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)
