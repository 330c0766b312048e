"""Certified interval evaluation on top of mpmath's interval context.

Every numeric report figure in this package is derived from an outward-
rounded interval; comparisons that straddle a threshold are retried at
doubled precision up to PRECISION_CAP bits and then raise, so nothing is
ever silently misclassified. mpmath's iv context has a global precision
knob, which we set and restore around each evaluation (worker processes
each own their interpreter, so sweeps stay deterministic).
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction

from mpmath import iv

from .errors import PrecisionExhausted

PRECISION_CAP = 4096


@contextmanager
def precision(bits: int):
    """Temporarily set the interval context's working precision."""
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


_prec = precision


def rational(q, bits: int = 128):
    """An interval certified to contain the rational (or int) q."""
    with _prec(bits):
        q = Fraction(q)
        return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def log_rational(q, bits: int = 128):
    """Certified interval for log(q), q a positive rational."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError(f"log of non-positive rational {q}")
    with _prec(bits):
        return iv.log(iv.mpf(q.numerator)) - iv.log(iv.mpf(q.denominator))


def sqrt_rational(q, bits: int = 128):
    q = Fraction(q)
    if q < 0:
        raise ValueError(f"sqrt of negative rational {q}")
    with _prec(bits):
        return iv.sqrt(iv.mpf(q.numerator) / iv.mpf(q.denominator))


def endpoints(x) -> tuple[float, float]:
    return float(x.a), float(x.b)


def midpoint(x) -> float:
    return float(x.mid)


def width(x) -> float:
    return float(x.delta)


def certified_gt(x, threshold) -> bool | None:
    """x > threshold, or None when the interval straddles it.

    threshold may be an exact int/Fraction or another interval.
    """
    if isinstance(threshold, (int, Fraction)):
        threshold = rational(threshold)
    if x.a > threshold.b:
        return True
    if x.b < threshold.a:
        return False
    return None


def resolve(evaluate, start_bits: int = 64, what: str = "comparison"):
    """Run evaluate(bits) at doubling precision until it returns not-None."""
    bits = start_bits
    while bits <= PRECISION_CAP:
        out = evaluate(bits)
        if out is not None:
            return out
        bits *= 2
    raise PrecisionExhausted(
        f"{what} unresolved at {PRECISION_CAP} bits"
    )
