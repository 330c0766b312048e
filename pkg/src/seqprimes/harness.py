"""Sweep engine: greatest-prime-factor records against the reference
bound B(n) = n exp(log n / (c log log n)), density summaries, and the
delimited serializations (JSON lines / CSV) used by the CLI.

Every bound value is a certified interval; a record whose greatest
prime factor lands inside the interval is re-evaluated at doubled
precision until the comparison resolves (always possible: P is an
integer, B is irrational-generic). Sweeps parallelize over n with
per-worker recomputation and a final sort, so output bytes never depend
on the worker count.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import arith, intervals, sequences
from .errors import FactorBudgetError, PreconditionError
from .sequences import RecurrenceSpec

CONSTANTS = {"104": Fraction(104), "103.95": Fraction(10395, 100)}


def bound_constant(text) -> Fraction:
    key = str(text)
    if key not in CONSTANTS:
        raise PreconditionError(f"constant must be one of {sorted(CONSTANTS)}, got {text}")
    return CONSTANTS[key]


def bound_B(n: int, constant=104, precision_bits: int = 64):
    """Certified interval for n exp(log n / (constant log log n)), n >= 3."""
    if n < 3:
        raise PreconditionError("bound needs n >= 3 (log log n > 0)")
    c = bound_constant(constant)
    with intervals.precision(precision_bits):
        logn = intervals.log_rational(n, precision_bits)
        civ = intervals.rational(c, precision_bits)
        return intervals.rational(n, precision_bits) * intervals.iv.exp(
            logn / (civ * intervals.iv.log(logn)))


@dataclass(frozen=True)
class SweepRecord:
    n: int
    digits: int            # decimal digits of |u_n|
    gpf: int               # greatest prime factor (largest *known* when flagged)
    bound_lo: float
    bound_hi: float
    satisfied: bool        # P(u_n) > B(n), certified
    zero_term: bool
    budget_exceeded: bool

    def row(self) -> dict:
        return {"n": self.n, "digits": self.digits, "gpf": str(self.gpf),
                "bound_lo": repr(self.bound_lo), "bound_hi": repr(self.bound_hi),
                "satisfied": self.satisfied, "zero_term": self.zero_term,
                "budget_exceeded": self.budget_exceeded}


_CSV_FIELDS = ["n", "digits", "gpf", "bound_lo", "bound_hi",
               "satisfied", "zero_term", "budget_exceeded"]


def _certified_satisfied(p: int, n: int, constant) -> tuple[bool, float, float]:
    """Resolve P > B(n) with precision escalation; returns (satisfied, lo, hi)."""
    def attempt(bits):
        b = bound_B(n, constant, bits)
        decision = intervals.certified_gt(intervals.rational(p, bits), b)
        if decision is None:
            return None
        lo, hi = intervals.endpoints(b)
        return decision, lo, hi

    return intervals.resolve(attempt, what=f"P(u_{n}) vs B({n})")


def _sweep_record(spec: RecurrenceSpec, n: int, u_n: int, constant,
                  budget: int, ecm: bool) -> SweepRecord:
    digits = len(str(abs(u_n))) if u_n else 1
    zero = u_n == 0
    exceeded = False
    if zero:
        gpf = 1
    else:
        try:
            gpf = arith.greatest_prime_factor(u_n, budget=budget, ecm=ecm)
        except FactorBudgetError as exc:
            # Largest confirmed prime; the unfactored cofactor survived
            # trial division, so its primes all exceed the trial bound.
            exceeded = True
            gpf = max((p for p, _ in exc.partial), default=1)
    if zero:
        satisfied, lo, hi = False, *intervals.endpoints(bound_B(n, constant))
    elif exceeded:
        # any prime of the remaining cofactor beats B(n) iff B(n) < 10^6
        hi_check = intervals.resolve(
            lambda bits: intervals.certified_gt(
                intervals.rational(arith.TRIAL_BOUND, bits), bound_B(n, constant, bits)),
            what=f"trial bound vs B({n})")
        if hi_check:
            satisfied = True
            lo, hi = intervals.endpoints(bound_B(n, constant))
        else:
            satisfied, lo, hi = _certified_satisfied(gpf, n, constant)
    else:
        satisfied, lo, hi = _certified_satisfied(gpf, n, constant)
    return SweepRecord(n, digits, gpf, lo, hi, satisfied, zero, exceeded)


def _sweep_chunk(args) -> list[SweepRecord]:
    spec, ns, terms_slice, constant, budget, ecm = args
    return [_sweep_record(spec, n, u, constant, budget, ecm)
            for n, u in zip(ns, terms_slice)]


def sweep_gpf(spec: RecurrenceSpec, limit: int, constant=104, *,
              budget: int = arith.DEFAULT_BUDGET, ecm: bool = True,
              jobs: int = 1) -> list[SweepRecord]:
    """Records for 3 <= n <= limit, sorted by n; byte-identical output
    for any worker count."""
    nd = sequences.is_nondegenerate(spec)
    if not nd.ok:
        raise PreconditionError(f"degenerate sequence ({nd.reason})")
    if limit < 3:
        raise PreconditionError("limit must be >= 3")
    prefix = sequences.terms(spec, limit)
    ns = list(range(3, limit + 1))
    if jobs <= 1:
        records = [_sweep_record(spec, n, prefix[n], constant, budget, ecm)
                   for n in ns]
    else:
        chunks = []
        step = max(1, math.ceil(len(ns) / (jobs * 4)))
        for at in range(0, len(ns), step):
            sub = ns[at: at + step]
            chunks.append((spec, sub, [prefix[n] for n in sub], constant, budget, ecm))
        records = []
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_sweep_chunk, chunks):
                records.extend(part)
    records.sort(key=lambda rec: rec.n)
    return records


def violations(records: list[SweepRecord]) -> list[int]:
    return [rec.n for rec in records if not rec.satisfied]


# -- density -----------------------------------------------------------------

@dataclass(frozen=True)
class DensityBlock:
    j: int
    lo: int
    hi: int            # block is [lo, hi) = [2^j, 2^(j+1))
    records: int
    violations: int
    cum_records: int
    cum_violations: int
    cum_density: float

    def row(self) -> dict:
        return {"j": self.j, "lo": self.lo, "hi": self.hi,
                "records": self.records, "violations": self.violations,
                "cum_records": self.cum_records,
                "cum_violations": self.cum_violations,
                "cum_density": self.cum_density}


def density_report(records: list[SweepRecord]) -> list[DensityBlock]:
    """Violation counts per dyadic block with cumulative density estimates."""
    if not records:
        return []
    blocks: dict[int, list[int]] = {}
    for rec in records:
        j = rec.n.bit_length() - 1
        tally = blocks.setdefault(j, [0, 0])
        tally[0] += 1
        tally[1] += 0 if rec.satisfied else 1
    out = []
    cum_r = cum_v = 0
    for j in sorted(blocks):
        total, bad = blocks[j]
        cum_r += total
        cum_v += bad
        out.append(DensityBlock(j, 2**j, 2 ** (j + 1), total, bad,
                                cum_r, cum_v, cum_v / cum_r))
    return out


# -- serialization -------------------------------------------------------------

def to_jsonl(rows: list[dict]) -> str:
    return "".join(json.dumps(row, sort_keys=True) + "\n" for row in rows)


def to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def serialize(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return to_jsonl(rows)
    if fmt == "csv":
        return to_csv(rows)
    raise PreconditionError(f"unknown format {fmt!r}")
