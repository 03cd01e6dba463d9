"""
Exact p-adic valuation arithmetic on Python integers and fractions.

Valuations are plain ints. The valuation of zero is INFINITE (math.inf), which absorbs
addition with finite values and compares greater than every int, so divisibility
predicates such as `vp_int(p, m) >= e` stay total.
"""
import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Tuple, Union

import galois
import numpy as np

LOGGER = logging.getLogger(__name__)

INFINITE = math.inf

Valuation = Union[int, float]
ExactRational = Fraction


@functools.lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    """
    Deterministic primality check for the sizes used here.
    """
    return p >= 2 and bool(galois.is_prime(p))


def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool) or not is_prime(int(p)):
        raise ValueError(f"p must be a prime, got {p!r}")
    return int(p)


def delta(p: int) -> int:
    """
    v_p(2): 1 for p = 2 and 0 for odd primes.
    """
    return 1 if check_prime(p) == 2 else 0


def vp_int(p: int, m: int) -> Valuation:
    """
    Return the largest e such that p^e divides |m|, or INFINITE for m = 0.
    """
    p = check_prime(p)
    if m == 0:
        return INFINITE

    m = abs(m)
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    return e


def vp_rat(p: int, r: Union[ExactRational, int]) -> Valuation:
    """
    p-adic valuation of a rational number, v_p(a/b) = v_p(a) - v_p(b).
    """
    r = Fraction(r)
    if r == 0:
        check_prime(p)
        return INFINITE
    return vp_int(p, r.numerator) - vp_int(p, r.denominator)


def digit_sum(p: int, n: int) -> int:
    """
    Sum of the base-p digits of n. Any base >= 2 is accepted.
    """
    assert p >= 2, "base must be >= 2"
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")

    total = 0
    while n:
        n, digit = divmod(n, p)
        total += digit
    return total


def integer_log(p: int, n: int) -> int:
    """
    Largest e with p^e <= n, computed with integer comparisons only.
    """
    assert p >= 2, "base must be >= 2"
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")

    e = 0
    power = p
    while power <= n:
        power *= p
        e += 1
    return e


def legendre_floor_sum(p: int, n: int) -> int:
    """
    sum_{k >= 1} floor(n / p^k)
    """
    total = 0
    power = p
    while power <= n:
        total += n // power
        power *= p
    return total


def legendre_digit_form(p: int, n: int) -> int:
    """
    (n - S_p(n)) / (p - 1)
    """
    numerator = n - digit_sum(p, n)
    assert numerator % (p - 1) == 0, "n - S_p(n) must be divisible by p - 1"
    return numerator // (p - 1)


def vp_factorial(p: int, n: int) -> int:
    """
    v_p(n!) by Legendre's formula, evaluated in both of its forms.

    Parameters:
    - p: prime
    - n: non-negative integer

    Returns: v_p(n!). Disagreement between the floor sum and the digit-sum form is an arithmetic bug and fails hard.
    """
    p = check_prime(p)
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")

    floor_sum = legendre_floor_sum(p, n)
    digit_form = legendre_digit_form(p, n)
    assert floor_sum == digit_form, f"Legendre forms disagree for p={p}, n={n}: {floor_sum} != {digit_form}"
    return floor_sum


def vp_phi(p: int, t: int) -> int:
    """
    v_p(phi(t)) = floor(t / (p - 1)).
    """
    p = check_prime(p)
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    return t // (p - 1)


def primes_up_to(bound: int) -> List[int]:
    """
    All primes <= bound in increasing order, from a numpy sieve of Eratosthenes.
    """
    if bound < 2:
        return []

    LOGGER.debug("sieving primes up to %d", bound)
    is_composite = np.zeros(bound + 1, dtype=bool)
    is_composite[:2] = True
    for p in range(2, math.isqrt(bound) + 1):
        if not is_composite[p]:
            is_composite[p * p :: p] = True

    # tolist() hands back Python ints, so p**e stays arbitrary precision downstream
    return np.flatnonzero(~is_composite).tolist()


@dataclass(frozen=True)
class PrimeFactorization:
    """
    A positive integer held as its prime factorization, ((p1, e1), (p2, e2), ...) with increasing primes and positive exponents.
    The empty tuple is the integer 1.
    """

    factors: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        primes = [p for p, _ in self.factors]
        assert primes == sorted(set(primes)), "primes must be distinct and increasing"
        for p, e in self.factors:
            assert is_prime(p), f"{p} is not a prime"
            assert e > 0, "exponents must be positive"

    @staticmethod
    def from_mapping(factors: Mapping[int, int]) -> "PrimeFactorization":
        return PrimeFactorization(tuple(sorted((int(p), int(e)) for p, e in factors.items() if e != 0)))

    def exponent(self, p: int) -> int:
        for prime, e in self.factors:
            if prime == p:
                return e
        return 0

    def primes(self) -> List[int]:
        return [p for p, _ in self.factors]

    def value(self) -> int:
        """
        Expand to an integer. phi(t) grows super-exponentially, so keep this to small inputs.
        """
        result = 1
        for p, e in self.factors:
            result *= p**e
        return result

    def to_json(self) -> Dict[str, int]:
        return {str(p): e for p, e in self.factors}

    @staticmethod
    def from_json(data: Mapping[str, int]) -> "PrimeFactorization":
        return PrimeFactorization.from_mapping({int(p): e for p, e in data.items()})


def phi(t: int) -> PrimeFactorization:
    """
    phi(t) = prod_p p^floor(t/(p-1)). Only primes p <= t+1 carry a positive exponent.
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    return PrimeFactorization.from_mapping({p: t // (p - 1) for p in primes_up_to(t + 1)})


# Vectorised forms for the verification grids. Inputs are int64 arrays of non-negative values.


def digit_sums(p: int, ns: np.ndarray) -> np.ndarray:
    rest = np.array(ns, dtype=np.int64)
    total = np.zeros_like(rest)
    while rest.any():
        total += rest % p
        rest //= p
    return total


def digit_counts(p: int, ns: np.ndarray) -> np.ndarray:
    """
    Number of base-p digits of each entry, i.e. floor(log_p n) + 1 for n >= 1 (0 for n = 0).
    """
    rest = np.array(ns, dtype=np.int64)
    count = np.zeros_like(rest)
    while rest.any():
        count += rest > 0
        rest //= p
    return count


def legendre_floor_sums(p: int, ns: np.ndarray) -> np.ndarray:
    ns = np.array(ns, dtype=np.int64)
    total = np.zeros_like(ns)
    if ns.size == 0:
        return total
    power = p
    limit = int(ns.max())
    while power <= limit:
        total += ns // power
        power *= p
    return total

