"""Exact arithmetic and factorization into irreducibles in Z[zeta_e].

Supported ring tags: e in {1,2} (plain integers), e = 4 (Gaussian
integers, basis {1, i}), e in {3,6} (Eisenstein integers, basis {1, w}
with w = zeta_3; a tag of 6 is the same ring, the tag only matters for
root-of-unity exponent bookkeeping). Both quadratic rings are
norm-Euclidean UFDs; gcds use nearest-lattice-point division and
factorization reduces to factoring the rational norm and splitting each
prime, so it is canonical and reproducible.

Canonical associate convention (makes golden-file tests stable): among
the unit multiples of z, the one whose complex argument lies in
[0, 2*pi/#units) -- for Z[i]: u > 0, v >= 0; for Z[w]: v >= 0 and u > v.
The ramified primes then read 1+i (above 2) and 2+w (above 3).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import arith
from .errors import PreconditionError

_KIND = {1: "Z", 2: "Z", 3: "Zw", 4: "Zi", 6: "Zw"}
SUPPORTED_TAGS = (1, 2, 3, 4, 6)


def ring_kind(e: int) -> str:
    if e not in _KIND:
        raise PreconditionError(f"unsupported ring tag {e}")
    return _KIND[e]


@dataclass(frozen=True)
class CycloInt:
    """u + v*i (e=4), u + v*w (e=3,6), or plain u (e=1,2)."""

    e: int
    u: int
    v: int = 0

    def __post_init__(self):
        kind = ring_kind(self.e)
        if kind == "Z" and self.v != 0:
            raise PreconditionError("rational ring tag with nonzero imaginary part")

    @property
    def kind(self) -> str:
        return _KIND[self.e]

    # -- arithmetic ------------------------------------------------------

    def _pair(self, other):
        """Promote self/other into a common ring; (a, b, tag) or None."""
        if isinstance(other, int):
            other = CycloInt(self.e, other, 0)
        elif not isinstance(other, CycloInt):
            return None
        a, b = self, other
        if a.kind == b.kind:
            tag = a.e if a.e == b.e else (6 if a.kind == "Zw" else max(a.e, b.e))
        elif b.kind == "Z":
            tag = a.e
            b = CycloInt(tag, b.u, 0)
        elif a.kind == "Z":
            tag = b.e
            a = CycloInt(tag, a.u, 0)
        else:
            raise PreconditionError(f"mixed rings {a.e} and {b.e}")
        return a, b, tag

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b, tag = pair
        return CycloInt(tag, a.u + b.u, a.v + b.v)

    __radd__ = __add__

    def __neg__(self):
        return CycloInt(self.e, -self.u, -self.v)

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b, tag = pair
        return CycloInt(tag, a.u - b.u, a.v - b.v)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b, tag = pair
        if _KIND[tag] == "Zi":
            return CycloInt(tag, a.u * b.u - a.v * b.v,
                            a.u * b.v + a.v * b.u)
        if _KIND[tag] == "Zw":
            # w^2 = -1 - w
            return CycloInt(tag, a.u * b.u - a.v * b.v,
                            a.u * b.v + a.v * b.u - a.v * b.v)
        return CycloInt(tag, a.u * b.u, 0)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "CycloInt":
        if k < 0:
            raise PreconditionError("negative powers leave the ring")
        out = CycloInt(self.e, 1, 0)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- ring maps ---------------------------------------------------------

    def conj(self) -> "CycloInt":
        if self.kind == "Zi":
            return CycloInt(self.e, self.u, -self.v)
        if self.kind == "Zw":
            # conj(w) = w^2 = -1-w
            return CycloInt(self.e, self.u - self.v, -self.v)
        return self

    def norm(self) -> int:
        if self.kind == "Zi":
            return self.u * self.u + self.v * self.v
        if self.kind == "Zw":
            return self.u * self.u - self.u * self.v + self.v * self.v
        return self.u * self.u

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_rational(self) -> bool:
        return self.v == 0

    def retag(self, e: int) -> "CycloInt":
        """Same element, different root-of-unity bookkeeping tag (same ring)."""
        if _KIND[e] != self.kind and self.kind != "Z":
            raise PreconditionError(f"cannot retag {self.kind} element to e={e}")
        return CycloInt(e, self.u, self.v)

    def __repr__(self):
        return f"CycloInt(e={self.e}, {render(self)})"


def zeta(e: int, exponent: int = 1) -> CycloInt:
    """zeta_e^exponent as an exact ring element."""
    kind = ring_kind(e)
    k = exponent % e
    if kind == "Z":
        return CycloInt(e, 1 if (e == 1 or k == 0) else -1, 0)
    if e == 4:
        return CycloInt(4, *[(1, 0), (0, 1), (-1, 0), (0, -1)][k])
    if e == 3:
        return CycloInt(3, *[(1, 0), (0, 1), (-1, -1)][k])
    # e == 6: zeta_6 = 1 + w
    return CycloInt(6, *[(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)][k])


def units(e: int) -> tuple[CycloInt, ...]:
    kind = ring_kind(e)
    if kind == "Z":
        return (CycloInt(e, 1), CycloInt(e, -1))
    if kind == "Zi":
        return tuple(zeta(4, k).retag(e) for k in range(4))
    return tuple(zeta(6, k).retag(e) for k in range(6))


def divide_exact(z: CycloInt, w: CycloInt) -> CycloInt:
    """Quotient q with q*w == z, or PreconditionError when w does not divide z."""
    if w.is_zero():
        raise PreconditionError("division by zero")
    if isinstance(z, int):
        z = CycloInt(w.e, z, 0)
    num = z * w.conj()
    n = w.norm()
    if num.u % n or num.v % n:
        raise PreconditionError(f"{w!r} does not divide {z!r}")
    return CycloInt(num.e, num.u // n, num.v // n)


def divides(z: CycloInt, w: CycloInt) -> bool:
    """True when w divides z."""
    num = z * w.conj()
    n = w.norm()
    return n != 0 and num.u % n == 0 and num.v % n == 0


def _divmod_nearest(z: CycloInt, w: CycloInt) -> tuple[CycloInt, CycloInt]:
    n = w.norm()
    num = z * w.conj()
    qu = _round_nearest(num.u, n)
    qv = _round_nearest(num.v, n)
    q = CycloInt(num.e, qu, qv)
    return q, z - q * w


def _round_nearest(a: int, b: int) -> int:
    # nearest integer to a/b, b > 0; ties toward +inf (any fixed rule works)
    return (2 * a + b) // (2 * b)


def gcd(z: CycloInt, w: CycloInt) -> CycloInt:
    """Euclidean gcd, canonically normalized (1 for coprime inputs)."""
    while not w.is_zero():
        _, rem = _divmod_nearest(z, w)
        z, w = w, rem
    if z.is_zero():
        return z
    canon, _ = canonical_associate(z)
    return canon


def canonical_associate(z: CycloInt) -> tuple[CycloInt, CycloInt]:
    """(canonical, unit) with canonical == z * unit.

    Sector: Z[i]: u > 0, v >= 0; Z[w]: v >= 0 and u > v; Z: positive.
    """
    if z.is_zero():
        raise PreconditionError("zero has no canonical associate")
    for un in units(z.e):
        cand = z * un
        if cand.kind == "Z":
            ok = cand.u > 0
        elif cand.kind == "Zi":
            ok = cand.u > 0 and cand.v >= 0
        else:
            ok = cand.v >= 0 and cand.u > cand.v
        if ok:
            return cand, un
    raise AssertionError(f"no canonical associate found for {z!r}")


@dataclass(frozen=True)
class CycloFactorization:
    """unit * prod(pi^e) == value; each pi canonical, order deterministic."""

    value: CycloInt
    unit: CycloInt
    factors: tuple[tuple[CycloInt, int], ...]

    def remultiply(self) -> CycloInt:
        out = self.unit
        for pi, e in self.factors:
            out = out * pi**e
        return out


def _nonresidue(p: int) -> int:
    for a in range(2, p):
        if pow(a, (p - 1) // 2, p) == p - 1:
            return a
    raise AssertionError(f"no quadratic non-residue mod {p}")


def primes_above(p: int, e: int) -> list[CycloInt]:
    """Canonical ring primes above the rational prime p (1 entry when
    inert or ramified, 2 conjugate entries when split)."""
    kind = ring_kind(e)
    if kind == "Z":
        return [CycloInt(e, p)]
    if kind == "Zi":
        if p == 2:
            return [CycloInt(e, 1, 1)]
        if p % 4 == 3:
            return [CycloInt(e, p)]
        x = pow(_nonresidue(p), (p - 1) // 4, p)
        pi = gcd(CycloInt(e, p), CycloInt(e, x, -1))
        return [pi, canonical_associate(pi.conj())[0]]
    if p == 3:
        return [CycloInt(e, 2, 1)]
    if p % 3 == 2:
        return [CycloInt(e, p)]
    a = 2
    while (w := pow(a, (p - 1) // 3, p)) == 1:
        a += 1
    pi = gcd(CycloInt(e, p), CycloInt(e, w, -1))
    return [pi, canonical_associate(pi.conj())[0]]


def factor_element(z: CycloInt, *, budget: int = arith.DEFAULT_BUDGET,
                   ecm: bool = True) -> CycloFactorization:
    """Canonical factorization into irreducibles (reduces to factoring norm(z))."""
    if z.is_zero():
        raise PreconditionError("cannot factor zero")
    nrm = arith.factorize(z.norm(), budget=budget, ecm=ecm)
    rest = z
    out: list[tuple[CycloInt, int]] = []
    for p, _ in nrm.factors:
        for pi in primes_above(p, z.e):
            exp = 0
            while divides(rest, pi):
                rest = divide_exact(rest, pi)
                exp += 1
            if exp:
                out.append((pi, exp))
    if not rest.is_unit():
        raise AssertionError(f"factorization left non-unit {rest!r}")
    out.sort(key=lambda t: (t[0].norm(), t[0].u, t[0].v))
    fac = CycloFactorization(z, rest, tuple(out))
    if fac.remultiply() != z:
        raise AssertionError(f"factorization of {z!r} does not remultiply")
    return fac


def rational_prime_of(pi: CycloInt) -> tuple[int, str]:
    """(p, tag) for an irreducible pi: inert rational primes give
    (p, 'inert'); split and ramified primes satisfy pi*conj(pi) = p."""
    n = pi.norm()
    if pi.is_rational() and abs(pi.u) > 1 and arith.is_prime(abs(pi.u)):
        return abs(pi.u), "inert"
    if arith.is_prime(n):
        return n, "split"
    raise PreconditionError(f"{pi!r} is not irreducible")


# -- text round-trip ------------------------------------------------------

_SYMBOL = {"Zi": "i", "Zw": "w"}


def render(z: CycloInt) -> str:
    """"u+v*i" / "u+v*w" textual form (also used in report rows)."""
    if z.kind == "Z" or z.v == 0:
        return str(z.u)
    sym = _SYMBOL[z.kind]
    if z.u == 0:
        return f"{z.v}*{sym}"
    op = "+" if z.v >= 0 else "-"
    return f"{z.u}{op}{abs(z.v)}*{sym}"


def parse(text: str, e: int) -> CycloInt:
    """Parse the render() forms, e.g. "13-6*i", "2", "-1*w"."""
    s = text.replace(" ", "").replace("*", "")
    kind = ring_kind(e)
    sym = _SYMBOL.get(kind)
    if sym is None or sym not in s:
        try:
            return CycloInt(e, int(s), 0)
        except ValueError:
            raise PreconditionError(f"cannot parse {text!r} in ring e={e}") from None
    head, _, _ = s.partition(sym)
    # split off the trailing signed coefficient of the symbol
    cut = max(head.rfind("+"), head.rfind("-"))
    if cut <= 0:
        u_text, v_text = "0", head
    else:
        u_text, v_text = head[:cut], head[cut:]
    if v_text in ("", "+"):
        v = 1
    elif v_text == "-":
        v = -1
    else:
        v = int(v_text)
    u = int(u_text) if u_text not in ("", "+", "-") else 0
    return CycloInt(e, u, v)
