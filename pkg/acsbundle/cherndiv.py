"""
Divisibility of Chern classes of a complex bundle that is trivial over the (2q-1)-skeleton.

No cohomology is represented. With s_{q+t}/(q+t) = (q+t-1)!/phi(t) * z_{q+t} for integral
classes z_{q+t}, the expansion of c_k in the power sums becomes a sum over partitions of k
into parts >= q of

    multinomial(m) * (-1)^{sum m} / (sum m)! * prod_t ((q+t-1)!/phi(t))^{m_{q+t}} * prod_t z_{q+t}^{m_{q+t}}

and "c_k divisible by p^l modulo torsion" is read as: every rational factor
prod_t ((q+t-1)!/phi(t))^{m_{q+t}} / (sum m)! has p-adic valuation >= l. This module computes
those valuations exactly.
"""
import enum
import functools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

import numpy as np

from .padic import check_prime, digit_sum, vp_factorial, vp_phi
from .symfunc import PartitionVector, enumerate_partitions
from .utils import allow_long_int_strings

LOGGER = logging.getLogger(__name__)

# lemma ranges up to this length are walked term by term
WALK_LIMIT = 1 << 12


class Verdict(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    NOT_APPLICABLE = "not applicable"


NOT_APPLICABLE = Verdict.NOT_APPLICABLE


@dataclass(frozen=True)
class DivisibilityQuery:
    p: int
    q: int
    l: Optional[int] = None
    k: Optional[int] = None

    def __post_init__(self):
        check_prime(self.p)
        if self.q < 1:
            raise ValueError(f"q must be >= 1, got {self.q}")
        if self.l is not None and self.l < 1:
            raise ValueError(f"l must be >= 1, got {self.l}")
        if self.k is not None and self.k < self.q:
            raise ValueError(f"k must be >= q, got k={self.k}, q={self.q}")


@dataclass(frozen=True)
class TermValuationReport:
    """
    Valuation of the rational factor attached to one partition, with its breakdown:
    one (t, m_{q+t}, v_p((q+t-1)!/phi(t))) entry per part that occurs, and v_p((sum m)!) subtracted at the end.
    """

    p: int
    q: int
    partition: PartitionVector
    term_valuation: int
    factor_valuations: Tuple[Tuple[int, int, int], ...]
    parts_factorial_valuation: int

    def __post_init__(self):
        total = sum(m * v for _, m, v in self.factor_valuations) - self.parts_factorial_valuation
        assert total == self.term_valuation, "breakdown does not add up to the term valuation"

    def to_json(self) -> dict:
        breakdown = [{"t": t, "multiplicity": m, "valuation": v} for t, m, v in self.factor_valuations]
        breakdown.append({"parts_factorial": self.partition.part_count, "valuation": -self.parts_factorial_valuation})
        return {"partition": self.partition.to_json(), "valuation": self.term_valuation, "breakdown": breakdown}


@dataclass(frozen=True)
class DivisibilityRange:
    """
    k in [k_min, k_max), or [k_min, k_max] when boundary_inclusive, carries the guaranteed exponent.
    """

    exponent: int
    k_min: int
    k_max: int
    boundary_inclusive: bool

    def __post_init__(self):
        assert self.k_min <= self.k_max, "k_min must not exceed k_max"

    @property
    def last(self) -> int:
        return self.k_max if self.boundary_inclusive else self.k_max - 1

    @property
    def is_empty(self) -> bool:
        return self.last < self.k_min

    def covers(self, k: int) -> bool:
        return self.k_min <= k <= self.last

    def ks(self) -> range:
        return range(self.k_min, self.last + 1)

    def to_json(self) -> dict:
        allow_long_int_strings()
        return {
            "k_min": self.k_min,
            "k_max": self.k_max,
            "inclusive": self.boundary_inclusive,
            "exponent": self.exponent,
        }


def lemma_vp_lhs(p: int, q: int, t: int) -> int:
    """
    v_p((q+t-1)! / phi(t))
    """
    if q < 1 or t < 0:
        raise ValueError(f"need q >= 1 and t >= 0, got q={q}, t={t}")
    return vp_factorial(p, q + t - 1) - vp_phi(p, t)


def lemma_vp_lhs_closed(p: int, q: int, t: int) -> int:
    """
    The same valuation as lemma_vp_lhs, as ceil((q - 1 - S_p(q+t-1)) / (p-1)).

    Legendre's digit form gives (q+t-1 - S)/(p-1) - floor(t/(p-1)); since q+t-1 and S agree mod p-1
    the difference collapses to a function of S = S_p(q+t-1) alone, decreasing in S.
    """
    p = check_prime(p)
    if q < 1 or t < 0:
        raise ValueError(f"need q >= 1 and t >= 0, got q={q}, t={t}")
    return _valuation_at_digit_sum(p, q, digit_sum(p, q + t - 1))


def _valuation_at_digit_sum(p: int, q: int, s: int) -> int:
    return -((s - q + 1) // (p - 1))


def max_digit_sum(p: int, lo: int, hi: int) -> int:
    """
    max S_p(m) over lo <= m <= hi.

    The maximum is attained at hi or at some number obtained from hi by lowering one nonzero digit by one
    and filling every lower digit with p-1; any m < hi is dominated by the candidate at the first digit where it falls below hi.
    """
    assert 0 <= lo <= hi, "need 0 <= lo <= hi"
    digits = []
    rest = hi
    while rest:
        rest, digit = divmod(rest, p)
        digits.append(digit)

    best = digit_sum(p, hi)
    for position, digit in enumerate(digits):
        if digit == 0:
            continue
        candidate = (hi // p ** (position + 1)) * p ** (position + 1) + (digit - 1) * p**position + (p**position - 1)
        if candidate >= lo:
            best = max(best, digit_sum(p, candidate))
    return best


def lemma_vp1_check(p: int, q: int) -> bool:
    """
    For every 0 <= t < p-1: v_p((q+t-1)!/phi(t)) >= v_p((q-1)!).
    """
    p = check_prime(p)
    floor = vp_factorial(p, q - 1)
    return all(lemma_vp_lhs(p, q, t) >= floor for t in range(p - 1))


def lemma_exponent(p: int, q: int, l: int) -> int:
    """
    e = floor((q-1)/(p-1)) - l + 1
    """
    return (q - 1) // (p - 1) - l + 1


def lemma_range(p: int, q: int, l: int) -> Optional[Tuple[int, int]]:
    """
    Inclusive t-range [0, t_max] of the second estimate, or None when p^e > q fails.
    """
    p = check_prime(p)
    e = lemma_exponent(p, q, l)
    if e < 0 or p**e <= q:
        return None
    boundary_inclusive = (q - 1) % (p - 1) != 0
    t_max = p**e - q if boundary_inclusive else p**e - q - 1
    return 0, t_max


def lemma_vp2_check(p: int, q: int, l: int) -> Verdict:
    """
    Check v_p((q+t-1)!/phi(t)) >= l over 0 <= t < p^e - q (closed at p^e - q when p-1 does not divide q-1).

    Parameters:
    - p: prime
    - q, l: positive integers

    Returns: Verdict.HOLDS / Verdict.FAILS, or NOT_APPLICABLE when the hypothesis p^e > q fails (including e < 0).
    Short ranges are walked; long ones are decided by the minimum of the closed form, reached at the largest digit sum in range.
    """
    if q < 1 or l < 1:
        raise ValueError(f"q and l must be positive, got q={q}, l={l}")
    t_range = lemma_range(p, q, l)
    if t_range is None:
        return NOT_APPLICABLE

    _, t_max = t_range
    if t_max < WALK_LIMIT:
        holds = all(lemma_vp_lhs(p, q, t) >= l for t in range(t_max + 1))
    else:
        largest = max_digit_sum(p, q - 1, q + t_max - 1)
        holds = _valuation_at_digit_sum(p, q, largest) >= l
    return Verdict.HOLDS if holds else Verdict.FAILS


def boundary_fraction_sum(p: int, q: int, l: int) -> Optional[Fraction]:
    """
    {(q-1)/(p-1)} + {t/(p-1)} at the boundary t = p^e - q, in exact arithmetic ({x} the fractional part).
    None when the boundary case does not arise (hypothesis fails or p-1 divides q-1).
    """
    p = check_prime(p)
    if lemma_range(p, q, l) is None or (q - 1) % (p - 1) == 0:
        return None
    t = p ** lemma_exponent(p, q, l) - q
    a = Fraction(q - 1, p - 1)
    b = Fraction(t, p - 1)
    return (a - (q - 1) // (p - 1)) + (b - t // (p - 1))


def term_valuation(p: int, q: int, partition: PartitionVector) -> TermValuationReport:
    """
    sum_t m_{q+t} v_p((q+t-1)!/phi(t)) - v_p((sum m)!) for one partition with parts >= q.
    """
    p = check_prime(p)
    if partition.lowest_part != q:
        raise ValueError(f"partition lowest part {partition.lowest_part} does not match q={q}")

    factors = tuple((t, m, lemma_vp_lhs(p, q, t)) for t, m in enumerate(partition.multiplicities) if m)
    subtracted = vp_factorial(p, partition.part_count)
    total = sum(m * v for _, m, v in factors) - subtracted
    return TermValuationReport(p, q, partition, total, factors, subtracted)


def minimizing_term(p: int, q: int, k: int) -> TermValuationReport:
    """
    The term of least valuation in the expansion of c_k; ties go to the first partition in enumeration order.
    """
    if k < q:
        raise ValueError(f"k must be >= q, got k={k}, q={q}")
    best = None
    for partition in enumerate_partitions(k, q):
        report = term_valuation(p, q, partition)
        if best is None or report.term_valuation < best.term_valuation:
            best = report
    return best


def ck_divisibility_bound(p: int, q: int, k: int) -> int:
    """
    Minimum over all partitions of k into parts >= q of the term valuation, by exhaustive enumeration.
    """
    return minimizing_term(p, q, k).term_valuation


@functools.lru_cache(maxsize=64)
def _ck_bounds_table(p: int, q: int, k_max: int) -> Tuple[int, ...]:
    # best[N, w]: least sum of m_t * v_p((q+t-1)!/phi(t)) over partitions of w into exactly N parts >= q
    n_max = k_max // q
    unreachable = np.iinfo(np.int64).max // 4
    best = np.full((n_max + 1, k_max + 1), unreachable, dtype=np.int64)
    best[0, 0] = 0

    for part in range(q, k_max + 1):
        factor = lemma_vp_lhs(p, q, part - q)
        # a partition using `part` has at most (k_max - part) // q other parts
        for n in range(1, (k_max - part) // q + 2):
            np.minimum(best[n, part:], best[n - 1, : k_max + 1 - part] + factor, out=best[n, part:])

    parts_factorial = np.array([vp_factorial(p, n) for n in range(n_max + 1)], dtype=np.int64)
    totals = best - parts_factorial[:, None]
    totals[best >= unreachable // 2] = unreachable
    bounds = totals[1:, :].min(axis=0)
    return tuple(int(b) for b in bounds[q:])


def ck_divisibility_bounds(p: int, q: int, k_max: int) -> Dict[int, int]:
    """
    ck_divisibility_bound for every q <= k <= k_max at once.

    A min-plus dynamic programme over (number of parts, weight) replaces the enumeration, so full
    ranges (k in the thousands) stay cheap. The values coincide with the enumeration wherever both run.
    """
    p = check_prime(p)
    if q < 1 or k_max < q:
        raise ValueError(f"need 1 <= q <= k_max, got q={q}, k_max={k_max}")
    LOGGER.debug("min-plus table for p=%d, q=%d up to k=%d", p, q, k_max)
    return dict(zip(range(q, k_max + 1), _ck_bounds_table(p, q, k_max)))


def dchern_ranges(p: int, q: int, l: int) -> Tuple[DivisibilityRange, DivisibilityRange]:
    """
    The two guaranteed ranges for Chern class divisibility.

    Returns: (first, second) where
    - first: q <= k <= q+p-2 with exponent v_p((q-1)!)
    - second: q <= k < p^e (or <= p^e when p-1 does not divide q-1) with exponent l, e = floor((q-1)/(p-1)) - l + 1;
      empty (k_max = q, open) when p^e <= q
    """
    p = check_prime(p)
    if q < 1 or l < 1:
        raise ValueError(f"q and l must be positive, got q={q}, l={l}")

    first = DivisibilityRange(vp_factorial(p, q - 1), q, q + p - 2, True)

    e = lemma_exponent(p, q, l)
    if e < 0 or p**e <= q:
        second = DivisibilityRange(l, q, q, False)
    else:
        second = DivisibilityRange(l, q, p**e, (q - 1) % (p - 1) != 0)
    return first, second
