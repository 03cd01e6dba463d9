"""
Exact symmetric-function algebra over the rationals.

Monomials in the power sums are indexed by weighted partitions (m_q, ..., m_k) with
q*m_q + ... + k*m_k = k. The expansion of sigma_k stores, for each partition, the
coefficient of prod (s_i / i)^{m_i}; `to_raw_basis` moves to prod s_i^{m_i}.
"""
import functools
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from .utils import ResourceLimitError

LOGGER = logging.getLogger(__name__)

# refuse enumerations with k - lowest_part beyond this span
MAX_PARTITION_SPAN = 64


@dataclass(frozen=True)
class PartitionVector:
    """
    Multiplicities (m_q, m_{q+1}, ..., m_k) of the parts q, q+1, ..., k of a partition.
    """

    lowest_part: int
    multiplicities: Tuple[int, ...]

    def __post_init__(self):
        assert self.lowest_part >= 1, "lowest part must be positive"
        assert all(m >= 0 for m in self.multiplicities), "multiplicities must be non-negative"

    @staticmethod
    def from_parts(parts: Sequence[int], lowest_part: int, weight: int) -> "PartitionVector":
        """
        Build the vector of a partition given as a list of parts, e.g. [5, 3, 3] with lowest_part 3 and weight 11.
        """
        multiplicities = [0] * (weight - lowest_part + 1)
        for part in parts:
            assert lowest_part <= part <= weight, f"part {part} outside [{lowest_part}, {weight}]"
            multiplicities[part - lowest_part] += 1
        vector = PartitionVector(lowest_part, tuple(multiplicities))
        assert vector.weight == weight, "parts do not add up to the weight"
        return vector

    @property
    def weight(self) -> int:
        return sum((self.lowest_part + t) * m for t, m in enumerate(self.multiplicities))

    @property
    def part_count(self) -> int:
        return sum(self.multiplicities)

    def multiplicity(self, part: int) -> int:
        t = part - self.lowest_part
        if 0 <= t < len(self.multiplicities):
            return self.multiplicities[t]
        return 0

    def parts(self) -> Dict[int, int]:
        """
        Nonzero multiplicities keyed by part size.
        """
        return {self.lowest_part + t: m for t, m in enumerate(self.multiplicities) if m}

    def to_json(self) -> List[int]:
        return list(self.multiplicities)


def enumerate_partitions(k: int, lowest_part: int) -> List[PartitionVector]:
    """
    All partitions of k into parts >= lowest_part, each exactly once.

    Order: lexicographically decreasing on the parts listed largest first, so [k] comes first
    and the partition with the most parts comes last.

    Parameters:
    - k: the weight, k >= 1
    - lowest_part: smallest admissible part, >= 1

    Returns: list of PartitionVector with multiplicities (m_lowest_part, ..., m_k). Empty when lowest_part > k.
    """
    if k < 1 or lowest_part < 1:
        raise ValueError(f"k and lowest_part must be positive, got k={k}, lowest_part={lowest_part}")
    if lowest_part > k:
        return []
    if k - lowest_part > MAX_PARTITION_SPAN:
        raise ResourceLimitError(
            f"refusing to enumerate partitions of {k} into parts >= {lowest_part}: "
            f"k - lowest_part must not exceed {MAX_PARTITION_SPAN}"
        )
    return list(_enumerate_partitions(k, lowest_part))


@functools.lru_cache(maxsize=256)
def _enumerate_partitions(k: int, lowest_part: int) -> Tuple[PartitionVector, ...]:
    vectors = tuple(
        PartitionVector.from_parts(parts, lowest_part, k) for parts in _descending_parts(k, k, lowest_part)
    )
    LOGGER.debug("enumerated %d partitions of %d into parts >= %d", len(vectors), k, lowest_part)
    return vectors


def _descending_parts(remaining: int, largest: int, lowest_part: int):
    if remaining == 0:
        yield []
        return
    for part in range(min(largest, remaining), lowest_part - 1, -1):
        for rest in _descending_parts(remaining - part, part, lowest_part):
            yield [part] + rest


def partition_count(k: int) -> int:
    """
    Number of partitions p(k), from Euler's pentagonal number recurrence.
    """
    if k < 0:
        return 0
    counts = [1] + [0] * k
    for n in range(1, k + 1):
        total = 0
        j = 1
        while True:
            pentagonal = j * (3 * j - 1) // 2
            if pentagonal > n:
                break
            sign = 1 if j % 2 == 1 else -1
            total += sign * counts[n - pentagonal]
            second = pentagonal + j
            if second <= n:
                total += sign * counts[n - second]
            j += 1
        counts[n] = total
    return counts[k]


def multinomial(m: PartitionVector) -> int:
    """
    (sum m_i)! / prod(m_i!)
    """
    numerator = math.factorial(m.part_count)
    denominator = math.prod(math.factorial(mi) for mi in m.multiplicities)
    quotient, remainder = divmod(numerator, denominator)
    assert remainder == 0, f"multinomial of {m.multiplicities} is not an integer"
    return quotient


@dataclass(frozen=True)
class SymbolicCombination:
    """
    A rational combination of monomials prod (s_i / i)^{m_i} of one common weight.
    Terms are kept in enumeration order and never carry a zero coefficient.
    """

    weight: int
    terms: Tuple[Tuple[PartitionVector, Fraction], ...]

    def __post_init__(self):
        for vector, coefficient in self.terms:
            assert coefficient != 0, "zero coefficients are not stored"
            assert vector.weight == self.weight, "all monomials must share the weight"

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, parts: Mapping[int, int]) -> Fraction:
        for vector, coefficient in self.terms:
            if vector.parts() == dict(parts):
                return coefficient
        return Fraction(0)

    def evaluate(self, powersums: Mapping[int, Fraction]) -> Fraction:
        """
        Substitute values for s_1, ..., s_k. Missing power sums count as zero.
        """
        total = Fraction(0)
        for vector, coefficient in self.terms:
            term = coefficient
            for part, m in vector.parts().items():
                term *= (Fraction(powersums.get(part, 0)) / part) ** m
            total += term
        return total

    def to_raw_basis(self) -> List[Tuple[PartitionVector, Fraction]]:
        """
        Coefficients of prod s_i^{m_i}, i.e. each stored coefficient divided by prod i^{m_i}.
        """
        return [
            (vector, coefficient / math.prod(part**m for part, m in vector.parts().items()))
            for vector, coefficient in self.terms
        ]

    def restricted(self, lowest_part: int) -> "SymbolicCombination":
        """
        Drop every monomial that involves some s_i with i < lowest_part, re-indexing the survivors from lowest_part.
        """
        kept = []
        for vector, coefficient in self.terms:
            parts = vector.parts()
            if all(part >= lowest_part for part in parts):
                kept.append(
                    (
                        PartitionVector.from_parts(
                            [part for part, m in parts.items() for _ in range(m)], lowest_part, self.weight
                        ),
                        coefficient,
                    )
                )
        return SymbolicCombination(self.weight, tuple(kept))

    def to_json(self) -> List[dict]:
        return [
            {
                "multiplicities": vector.to_json(),
                "lowest_part": vector.lowest_part,
                "coefficient": format_rational(coefficient),
            }
            for vector, coefficient in self.terms
        ]


def format_rational(r: Fraction) -> str:
    return f"{r.numerator}/{r.denominator}"


@functools.lru_cache(maxsize=256)
def sigma_from_powersums(k: int, lowest_part: int) -> SymbolicCombination:
    """
    sigma_k expressed through the power sums s_lowest_part, ..., s_k.

    Each partition carries (-1)^k (-1)^{sum m_i} / prod(m_i!) as the coefficient of prod (s_i / i)^{m_i}.
    With lowest_part = q > 1 this is the expansion with s_1 = ... = s_{q-1} = 0 substituted.
    """
    terms = []
    for vector in enumerate_partitions(k, lowest_part):
        sign = -1 if (k + vector.part_count) % 2 else 1
        denominator = math.prod(math.factorial(m) for m in vector.multiplicities)
        terms.append((vector, Fraction(sign, denominator)))
    return SymbolicCombination(k, tuple(terms))


def powersum_sequence(k: int, sigma_values: Sequence[Fraction]) -> List[Fraction]:
    """
    [s_1, ..., s_k] from sigma_1, ..., sigma_k through Newton's recurrence

        s_j = sigma_1 s_{j-1} - sigma_2 s_{j-2} + ... + (-1)^{j-2} sigma_{j-1} s_1 + (-1)^{j-1} j sigma_j

    sigma values beyond the supplied list are zero.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")

    def sigma(i: int) -> Fraction:
        return Fraction(sigma_values[i - 1]) if i <= len(sigma_values) else Fraction(0)

    s: List[Fraction] = []
    for j in range(1, k + 1):
        value = Fraction(0)
        for i in range(1, j):
            sign = 1 if i % 2 == 1 else -1
            value += sign * sigma(i) * s[j - i - 1]
        value += (1 if j % 2 == 1 else -1) * j * sigma(j)
        s.append(value)
    return s


def powersums_from_sigma(k: int, sigma_values: Sequence[Fraction]) -> Fraction:
    return powersum_sequence(k, sigma_values)[-1]


@dataclass(frozen=True)
class RootMultiset:
    roots: Tuple[int, ...]

    def __post_init__(self):
        assert len(self.roots) >= 1, "a root multiset needs at least one root"

    def __len__(self) -> int:
        return len(self.roots)


def oracle_eval(roots: RootMultiset, k: int) -> Tuple[int, int]:
    """
    Brute-force (sigma_k, s_k) at integer roots: sigma_k sums the products over all k-subsets, s_k is sum t_i^k.
    No Newton identity is involved.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    sigma_k = sum(math.prod(subset) for subset in itertools.combinations(roots.roots, k))
    s_k = sum(t**k for t in roots.roots)
    return sigma_k, s_k
