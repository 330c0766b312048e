"""Multiplicative dependence between a/b and alpha/beta and its
consequences: the (k, l, l1, k1, x, y, rho, zeta) construction, the
theta pair with its gcd normalization g = gcd((th1+th2)^2, th1*th2),
the exact sequence identities, the divisibility consequences, and the
measured-margin reports for the log-size estimates.

lambda_i = theta_i / sqrt(g) are never materialized: every lambda
expression reduces to an exact ring element times a symbolic half-power
of g, and comparisons are squared into exact integer form first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import cyclotomic, cycloring, intervals, quadfield, sequences
from .cycloring import CycloInt
from .errors import IdentityFailure, PreconditionError
from .quadfield import QuadElem
from .sequences import ClosedForm


# -- roots of unity as (e, exponent) descriptors ---------------------------

_LCM_OK = {1, 2, 3, 4, 6}


@dataclass(frozen=True)
class RootOfUnity:
    """zeta_e^k with e in {1,2,3,4,6}; exponents live mod e."""

    e: int
    k: int

    def __post_init__(self):
        if self.e not in _LCM_OK:
            raise PreconditionError(f"unsupported root-of-unity order {self.e}")
        object.__setattr__(self, "k", self.k % self.e)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        e = math.lcm(self.e, other.e)
        if e not in _LCM_OK:
            raise IdentityFailure(
                f"incompatible root-of-unity orders {self.e}, {other.e} in one field"
            )
        return RootOfUnity(e, self.k * (e // self.e) + other.k * (e // other.e))

    def pow(self, n: int) -> "RootOfUnity":
        return RootOfUnity(self.e, self.k * n)

    def neg(self) -> "RootOfUnity":
        return self * RootOfUnity(2, 1)

    @property
    def order(self) -> int:
        return self.e // math.gcd(self.e, self.k)

    def is_one(self) -> bool:
        return self.k == 0

    def primitive(self) -> "RootOfUnity":
        """Same value written as zeta_d^j with d = order, gcd(j, d) = 1."""
        g = math.gcd(self.k, self.e)
        return RootOfUnity(self.e // g, self.k // g) if self.k else RootOfUnity(1, 0)

    def to_quad(self, disc: int) -> QuadElem:
        if self.e in (1, 2):
            return quadfield.rational((-1) ** self.k if self.e == 2 else 1, disc)
        gen = _primitive_root_in(disc, self.e)
        out = quadfield.rational(1, disc)
        for _ in range(self.k):
            out = out * gen
        return out

    def to_cyclo(self) -> CycloInt:
        return cycloring.zeta(self.e, self.k)

    def __repr__(self):
        return f"zeta_{self.e}^{self.k}"


def _primitive_root_in(disc: int, e: int) -> QuadElem:
    """The canonical primitive e-th root of unity in Q(sqrt(disc))."""
    kern = quadfield.squarefree_kernel(disc)
    if e == 4:
        if kern != -1:
            raise PreconditionError(f"Q(sqrt({disc})) contains no 4th roots of unity")
        m = math.isqrt(-disc)
        return QuadElem(Fraction(0), Fraction(1, m), disc)
    if e in (3, 6):
        if kern != -3:
            raise PreconditionError(f"Q(sqrt({disc})) contains no {e}th roots of unity")
        m = math.isqrt(-disc // 3)
        half = Fraction(-1, 2) if e == 3 else Fraction(1, 2)
        return QuadElem(half, Fraction(1, 2 * m), disc)
    raise PreconditionError(f"no primitive root needed for e={e}")


def identify_root_of_unity(x: QuadElem) -> RootOfUnity:
    """The (e, exponent) descriptor of a root of unity in its field."""
    ok, order = quadfield.is_root_of_unity(x)
    if not ok:
        raise PreconditionError(f"{x} is not a root of unity")
    if order == 1:
        return RootOfUnity(1, 0)
    if order == 2:
        return RootOfUnity(2, 1)
    gen = _primitive_root_in(x.disc, order)
    power = gen
    for j in range(1, order + 1):
        if power == x:
            return RootOfUnity(order, j)
        power = power * gen
    raise IdentityFailure(f"{x} has order {order} but matches no power of the generator")


# -- the dependence witness -------------------------------------------------

@dataclass(frozen=True)
class DependenceWitness:
    """(a/b)^k = (alpha/beta)^l, plus the derived l1, k1, (x, y), rho,
    zeta data when l != 0 (Eqs.-(32)-(35) structure)."""

    k: int
    l: int
    zeta: RootOfUnity
    case: str  # "l-zero" | "x-nonneg" | "x-neg"
    l1: int | None = None
    k1: int | None = None
    x: int | None = None
    y: int | None = None
    rho: QuadElem | None = None

    def phi_index(self, n: int) -> int:
        """The base cyclotomic index: n itself (l = 0) or k1*n + l1."""
        if self.case == "l-zero":
            return n
        return self.k1 * n + self.l1

    def unit_at(self, n: int) -> RootOfUnity:
        """The root of unity u with theta1^m - u*theta2^m dividing the
        scaled term: zeta itself (l = 0), else -zeta^(xn-y)."""
        if self.case == "l-zero":
            return self.zeta
        return self.zeta.pow(self.x * n - self.y).neg()


def _exponent_vector(q: Fraction) -> dict[int, int]:
    from . import arith

    out: dict[int, int] = {}
    for p, e in arith.factorize(q.numerator).factors:
        out[p] = e
    for p, e in arith.factorize(q.denominator).factors:
        out[p] = out.get(p, 0) - e
    return out


def find_dependence(cf: ClosedForm, bound: int = 64) -> DependenceWitness | None:
    """Search for (a/b)^k = (alpha/beta)^l with 0 < k <= bound, |l| <= bound.

    Root-of-unity a/b short-circuits to the l = 0 witness. Otherwise,
    when |norm(a/b)| != 1 or |norm(alpha/beta)| != 1 the candidate ratio
    k : l is pinned exactly by prime-exponent matching of the norms and
    only the residual unit needs a root-of-unity test; when both norms
    are +-1 a full bounded search runs. None means no dependence within
    the bound -- not a proof of independence.
    """
    ab = cf.a / cf.b
    ratio = cf.alpha / cf.beta

    rou, order = quadfield.is_root_of_unity(ab)
    if rou:
        zeta = identify_root_of_unity(-cf.b / cf.a)
        return DependenceWitness(k=order, l=0, zeta=zeta, case="l-zero")

    q1 = ab.norm()
    q2 = ratio.norm()
    if abs(q1) == 1 and abs(q2) == 1:
        kl = _bounded_search(ab, ratio, bound)
    elif abs(q1) == 1 or abs(q2) == 1:
        return None  # forces k = 0 or a/b a root of unity; neither applies
    else:
        kl = _norm_matched_candidate(ab, ratio, q1, q2, bound)
    if kl is None:
        return None
    k, l = kl
    if ab**k != ratio**l:
        raise IdentityFailure(f"candidate ({k},{l}) failed exact verification")
    return _build_witness(cf, ab, ratio, k, l)


def _bounded_search(ab: QuadElem, ratio: QuadElem, bound: int) -> tuple[int, int] | None:
    table: dict[QuadElem, int] = {}
    inv = ratio.inverse()
    pos, neg = ratio, inv
    for l in range(1, bound + 1):
        table.setdefault(pos, l)
        table.setdefault(neg, -l)
        pos = pos * ratio
        neg = neg * inv
    acc = ab
    for k in range(1, bound + 1):
        hit = table.get(acc)
        if hit is not None:
            return k, hit
        acc = acc * ab
    return None


def _norm_matched_candidate(ab, ratio, q1: Fraction, q2: Fraction,
                            bound: int) -> tuple[int, int] | None:
    v1 = _exponent_vector(abs(q1))
    v2 = _exponent_vector(abs(q2))
    if set(v1) != set(v2):
        return None
    p0 = next(iter(v1))
    e0, f0 = v1[p0], v2[p0]
    g = math.gcd(abs(e0), abs(f0))
    k0 = abs(f0) // g
    l0 = (e0 if f0 > 0 else -e0) // g
    if any(k0 * v1[p] != l0 * v2[p] for p in v1):
        return None
    chi = ab**k0 / ratio**l0
    ok, t = quadfield.is_root_of_unity(chi)
    if not ok:
        return None
    k, l = t * k0, t * l0
    if k > bound or abs(l) > bound:
        return None
    return k, l


def _build_witness(cf: ClosedForm, ab: QuadElem, ratio: QuadElem,
                   k: int, l: int) -> DependenceWitness:
    g = math.gcd(k, abs(l))
    k1, l1 = k // g, l // g
    zeta = identify_root_of_unity(ab**k1 / ratio**l1)
    # unique (x, y): x*l1 + y*k1 = 1 with 0 < y <= |l1|
    al1 = abs(l1)
    y = pow(k1, -1, al1) if al1 > 1 else 0
    if y == 0:
        y = al1
    x, rem = divmod(1 - y * k1, l1)
    if rem:
        raise IdentityFailure(f"Bezout solution failed for (l1,k1)=({l1},{k1})")
    rho = ab**x * ratio**y
    disc = cf.alpha.disc
    if rho**l1 != ab * zeta.pow(-y).to_quad(disc):
        raise IdentityFailure("rho^l1 = (a/b) zeta^-y failed")
    if rho**k1 != ratio * zeta.pow(x).to_quad(disc):
        raise IdentityFailure("rho^k1 = (alpha/beta) zeta^x failed")
    case = "x-nonneg" if x >= 0 else "x-neg"
    return DependenceWitness(k=k, l=l, zeta=zeta, case=case,
                             l1=l1, k1=k1, x=x, y=y, rho=rho)


# -- theta -------------------------------------------------------------------

@dataclass(frozen=True)
class ThetaData:
    """theta pair with trace/product integers, g = gcd(trace^2, prod),
    N = theta1*theta2 and ring tag e on the complex-conjugate branch.

    lambda bookkeeping: |lambda1|^2 = N/g exactly; any lambda power
    carries a symbolic half-exponent of g, squared away before exact use.
    """

    theta1_quad: QuadElem
    theta2_quad: QuadElem
    trace: int
    prod: int
    g: int
    N: int | None  # prod, on the conjugate branch
    e: int | None  # 3 or 4 when the field is cyclotomic, else None
    theta1: CycloInt | None = None
    theta2: CycloInt | None = None

    @property
    def conjugate_branch(self) -> bool:
        return self.N is not None

    def lambda_abs_squared(self) -> Fraction:
        if self.N is None:
            raise PreconditionError("lambda normalization needs the conjugate branch")
        return Fraction(self.N, self.g)


def quad_to_cyclo(x: QuadElem, e: int) -> CycloInt:
    """Exact change of basis from a0+a1*sqrt(disc) into Z[zeta_e]."""
    if e == 4:
        m = math.isqrt(-x.disc)
        u, v = Fraction(x.a0), Fraction(x.a1 * m)
    elif e in (3, 6):
        m = math.isqrt(-x.disc // 3)
        # sqrt(-3) = 1 + 2w
        u, v = Fraction(x.a0 + x.a1 * m), Fraction(2 * x.a1 * m)
    else:
        raise PreconditionError(f"no cyclotomic basis for e={e}")
    if u.denominator != 1 or v.denominator != 1:
        raise PreconditionError(f"{x} is not integral in Z[zeta_{e}]")
    z = CycloInt(e, int(u), int(v))
    if z.norm() != x.norm():
        raise IdentityFailure(f"basis change broke the norm of {x}")
    return z


def _assemble_theta(th1: QuadElem, th2: QuadElem) -> ThetaData:
    ratio = th1 / th2
    rou, _ = quadfield.is_root_of_unity(ratio)
    if rou:
        raise PreconditionError("degenerate: theta1/theta2 is a root of unity")

    try:
        trace = (th1 + th2).as_int()
        prod = (th1 * th2).as_int()
    except PreconditionError as exc:
        raise IdentityFailure(
            f"theta trace/product not rational integers (scaling bug): {exc}"
        ) from None
    if trace == 0 or prod == 0:
        raise IdentityFailure("theta trace/product vanished despite non-degeneracy")

    g = math.gcd(trace * trace, prod)
    # quartic satisfied by the lambdas has integer coefficients:
    #   x^4 - ((trace^2 - 2 prod)/g) x^2 + (prod/g)^2
    if (trace * trace - 2 * prod) % g or prod % g:
        raise IdentityFailure("g = gcd(trace^2, prod) failed to divide the quartic coefficients")
    if th1**4 - (trace * trace - 2 * prod) * th1**2 + prod * prod != quadfield.rational(0, th1.disc):
        raise IdentityFailure("lambda quartic identity failed")

    conj = th1.disc < 0
    if conj and th2 != th1.conj():
        raise IdentityFailure("complex branch without conjugate thetas")
    N = prod if conj else None
    if conj and not (N * N >= 2 * g * g):
        raise IdentityFailure(f"|lambda1| >= 2^(1/4) guard failed: N={N}, g={g}")

    e = quadfield.cyclotomic_ring_tag(th1.disc) if conj else None
    th1c = quad_to_cyclo(th1, e) if e else None
    th2c = quad_to_cyclo(th2, e) if e else None
    return ThetaData(th1, th2, trace, prod, g, N, e, th1c, th2c)


def build_theta(witness: DependenceWitness, cf: ClosedForm) -> ThetaData:
    """theta = (alpha, beta) in the l = 0 case, (a^x alpha^y, b^x beta^y)
    for x >= 0 and (b^-x alpha^y, a^-x beta^y) for x < 0, using the
    w-scaled a, b so everything is an algebraic integer."""
    sa, sb = cf.scaled_a, cf.scaled_b
    if witness.case == "l-zero":
        th1, th2 = cf.alpha, cf.beta
    elif witness.x >= 0:
        th1 = sa**witness.x * cf.alpha**witness.y
        th2 = sb**witness.x * cf.beta**witness.y
    else:
        th1 = sb ** (-witness.x) * cf.alpha**witness.y
        th2 = sa ** (-witness.x) * cf.beta**witness.y
    return _assemble_theta(th1, th2)


def theta_from_cyclo(z: CycloInt) -> ThetaData:
    """ThetaData for an explicit theta1 in Z[zeta_e], theta2 = conj(theta1)."""
    if z.kind == "Zi":
        th1 = QuadElem(Fraction(z.u), Fraction(z.v, 2), -4)
    elif z.kind == "Zw":
        # u + v*w = (2u - v)/2 + (v/2) sqrt(-3)
        th1 = QuadElem(Fraction(2 * z.u - z.v, 2), Fraction(z.v, 2), -3)
    else:
        raise PreconditionError("theta must lie in Z[i] or Z[w]")
    return _assemble_theta(th1, th1.conj())


def _require_field_membership(theta: ThetaData, e: int):
    if e in (1, 2):
        return
    if e == 4 and theta.e == 4:
        return
    if e in (3, 6) and theta.e == 3:
        return
    raise PreconditionError(
        f"zeta_{e} does not lie in the theta field (ring tag {theta.e})"
    )


# -- the exact identities ----------------------------------------------------

def verify_theta_identity(theta: ThetaData, witness: DependenceWitness,
                          cf: ClosedForm, n: int) -> bool:
    """Exact check of the scaled-term identity at index n: the l = 0 form
    w u_n = (w a)(theta1^n - zeta theta2^n), or the l != 0 form
    theta2^m (w u_n) = (w b) beta^n zeta^(y-xn) (theta1^m - (-zeta^(xn-y)) theta2^m)
    with m = l1 + k1 n."""
    disc = cf.alpha.disc
    vn = quadfield.rational(cf.w * sequences.term(cf.spec, n), disc)
    if witness.case == "l-zero":
        zq = witness.zeta.to_quad(disc)
        rhs = cf.scaled_a * (theta.theta1_quad**n - zq * theta.theta2_quad**n)
        return vn == rhs
    m = witness.l1 + witness.k1 * n
    zy = witness.zeta.pow(witness.y - witness.x * n).to_quad(disc)
    unit = witness.unit_at(n).to_quad(disc)
    lhs = theta.theta2_quad**m * vn
    rhs = (cf.scaled_b * cf.beta**n * zy
           * (theta.theta1_quad**m - unit * theta.theta2_quad**m))
    return lhs == rhs


@dataclass(frozen=True)
class DivisibilityResult:
    index: int              # the cyclotomic index that divides
    tag: str                # "one" | "minus-one" | "primitive"
    unit: RootOfUnity
    divisor: str
    dividend: str
    quotient: str


def divisibility_consequence(theta: ThetaData, witness: DependenceWitness,
                             cf: ClosedForm, n: int) -> DivisibilityResult:
    """Exact-division check of the consequence: Phi_m | theta1^m - theta2^m
    when the unit is 1 (index m), Phi_2m | theta1^m + theta2^m when it is
    -1 (index 2m), and Phi_{m,e}^{(j)} | theta1^m - zeta_e^j theta2^m in
    Z[zeta_e] when it is a primitive e-th root (e in {3,4,6})."""
    m = witness.phi_index(n)
    if m < 1:
        raise PreconditionError(f"cyclotomic index {m} not positive at n={n}")
    unit = witness.unit_at(n).primitive()
    d = unit.order

    if d in (1, 2):
        th1, th2 = theta.theta1_quad, theta.theta2_quad
        if d == 1:
            dividend = th1**m - th2**m
            index, tag = m, "one"
        else:
            dividend = th1**m + th2**m
            index, tag = 2 * m, "minus-one"
        divisor = cyclotomic.phi_eval(index, th1, th2)
        quotient = dividend / divisor
        if not quotient.is_algebraic_integer():
            raise IdentityFailure(
                f"Phi_{index}(theta) does not divide theta1^{m} -+ theta2^{m}"
            )
        return DivisibilityResult(index, tag, unit, repr(divisor),
                                  repr(dividend), repr(quotient))

    if d not in (3, 4, 6):
        raise IdentityFailure(f"root of unity of impossible order {d}")
    _require_field_membership(theta, d)
    th1, th2 = theta.theta1, theta.theta2
    j = unit.k
    dividend = th1**m - cycloring.zeta(d, j) * th2**m
    divisor = cyclotomic.phi_ie_eval(m, d, j, th1, th2)
    quotient = cycloring.divide_exact(dividend, divisor)  # raises if inexact
    return DivisibilityResult(m, "primitive", unit, cycloring.render(divisor),
                              cycloring.render(dividend), cycloring.render(quotient))


def mahler_lambda(theta: ThetaData) -> Fraction:
    """Mahler measure of lambda1/lambda2 = |lambda1|^2 = N/g, exact."""
    if not theta.conjugate_branch:
        raise PreconditionError("Mahler measure formula needs theta1 = conj(theta2)")
    return theta.lambda_abs_squared()


# -- measured margins ---------------------------------------------------------

@dataclass(frozen=True)
class Lemma9Report:
    n: int
    zeta: RootOfUnity
    log_value: float        # log |lambda1^n - zeta lambda2^n|
    upper_bound: float      # n log|lambda1| + log 2
    c1_observed: float      # (n log|lambda1| - log value) / (log(n+1) log|lambda1|)
    near_equality: bool
    upper_ok: bool

    def row(self) -> dict:
        return {"n": self.n, "zeta": repr(self.zeta), "log_value": self.log_value,
                "upper_bound": self.upper_bound, "c1": self.c1_observed,
                "near_equality": self.near_equality}


def lemma9_margins(theta: ThetaData, e: int, zeta_exp: int, n: int,
                   precision_bits: int = 128) -> Lemma9Report:
    """Asserts the upper bound exactly (squared integer form
    norm(theta1^n - zeta theta2^n) <= 4 N^n) and reports the observed
    lower-bound constant c1."""
    if not theta.conjugate_branch:
        raise PreconditionError("lemma 9 margins need the conjugate branch")
    _require_field_membership(theta, e)
    zeta = RootOfUnity(e, zeta_exp)
    disc = theta.theta1_quad.disc
    V = theta.theta1_quad**n - zeta.to_quad(disc) * theta.theta2_quad**n
    nrm = V.norm()
    if nrm == 0:
        raise IdentityFailure("theta1^n = zeta theta2^n: ratio was a root of unity")
    nrm = Fraction(nrm)
    if nrm > 4 * Fraction(theta.N) ** n:
        raise IdentityFailure(
            f"lemma 9 upper bound violated at n={n} (impossible): {nrm} > 4 N^n"
        )
    near = nrm * 2**20 >= 4 * Fraction(theta.N) ** n * (2**20 - 1)
    with intervals.precision(precision_bits):
        log_v = (intervals.log_rational(nrm, precision_bits)
                 - n * intervals.log_rational(theta.g, precision_bits)) / 2
        log_lam = intervals.log_rational(theta.lambda_abs_squared(), precision_bits) / 2
        upper = n * log_lam + intervals.iv.log(intervals.rational(2, precision_bits))
        c1 = (n * log_lam - log_v) / (intervals.iv.log(
            intervals.rational(n + 1, precision_bits)) * log_lam)
        return Lemma9Report(n, zeta, intervals.midpoint(log_v),
                            intervals.midpoint(upper), intervals.midpoint(c1),
                            near, True)


@dataclass(frozen=True)
class Lemma10Report:
    n: int
    e: int
    i: int
    degree: int                  # phi(ne)/phi(e)
    g_half_exponent: Fraction    # phi(ne)/(2 phi(e)), the symbolic sqrt(g) power
    log_phi_lambda: float
    deviation_c: float | None    # |log - deg log|lambda1|| / (q(n) log n log|lambda1|)
    half_degree_ok: bool         # exact: norm(Phi(theta))^2 > (N g)^deg

    def row(self) -> dict:
        return {"n": self.n, "e": self.e, "i": self.i, "degree": self.degree,
                "log_phi_lambda": self.log_phi_lambda, "c": self.deviation_c,
                "half_degree_ok": self.half_degree_ok}


def lemma10_11_margins(theta: ThetaData, e: int, i: int, n: int,
                       precision_bits: int = 128) -> Lemma10Report:
    """log |Phi_{n,e}^{(i)}(lambda1, lambda2)| via the exact g-power
    bookkeeping log|Phi(theta)| - (phi(ne)/2phi(e)) log g; reports the
    Lemma-10 deviation constant and decides Lemma 11's half-degree
    threshold by exact integer comparison."""
    from . import arith

    if math.gcd(i, e) != 1:
        raise PreconditionError("need gcd(i, e) = 1")
    if not theta.conjugate_branch or theta.e is None:
        raise PreconditionError("lemma 10/11 margins need the cyclotomic conjugate branch")
    _require_field_membership(theta, e)
    phi_val = cyclotomic.phi_ie_eval(n, e, i, theta.theta1, theta.theta2)
    nrm = phi_val.norm()
    if nrm == 0:
        raise IdentityFailure("Phi value vanished")
    deg = arith.euler_phi(n * e) // arith.euler_phi(e)
    halfexp = Fraction(deg, 2)
    # Lemma 11 threshold, squared twice into integers:
    # log|Phi(lambda)| > (deg/2) log|lambda1|  <=>  nrm^2 > (N g)^deg
    half_ok = nrm * nrm > (theta.N * theta.g) ** deg
    with intervals.precision(precision_bits):
        log_phi = (intervals.log_rational(nrm, precision_bits)
                   - deg * intervals.log_rational(theta.g, precision_bits)) / 2
        log_lam = intervals.log_rational(theta.lambda_abs_squared(), precision_bits) / 2
        if n >= 3:
            denom = (intervals.rational(arith.q_omega(n), precision_bits)
                     * intervals.iv.log(intervals.rational(n, precision_bits)) * log_lam)
            dev = abs(log_phi - deg * log_lam) / denom
            deviation = intervals.midpoint(dev)
        else:
            deviation = None
        return Lemma10Report(n, e, i, deg, halfexp,
                             intervals.midpoint(log_phi), deviation, half_ok)
