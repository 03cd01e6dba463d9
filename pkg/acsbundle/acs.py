"""
Witness-prime criteria ruling out almost complex structures on the total space of an
S^{2q}-bundle with a cross section over a closed oriented 2n-manifold M.

A prime p witnesses non-existence when either
  (A) p > n+1 and v_p((q-1)!) >= v_p(chi(M)) + delta_p + 1, or
  (B) p^e - q > n (>= n when p-1 does not divide q-1), e = floor((q-1)/(p-1)) - v_p(chi(M)) - delta_p.
The criteria are sufficient only: no certificate never means an almost complex structure exists.
"""
import enum
import functools
import logging
from dataclasses import asdict, dataclass
from typing import List, Optional, Tuple

from .cherndiv import ck_divisibility_bounds
from .padic import check_prime, delta, primes_up_to, vp_factorial, vp_int
from .utils import allow_long_int_strings, parallel_map

LOGGER = logging.getLogger(__name__)


class Condition(str, enum.Enum):
    A = "A"
    B = "B"


@dataclass(frozen=True)
class BundleParams:
    """
    Parameters:
    - n: complex dimension of the base (real dimension 2n)
    - q: the fibre is S^{2q}
    - chi: Euler characteristic of the base, n+1 (complex projective space) when omitted
    - section_assumed: the bundle is taken to admit a cross section; recorded, never checked
    """

    n: int
    q: int
    chi: Optional[int] = None
    section_assumed: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.q < 1:
            raise ValueError(f"q must be >= 1, got {self.q}")
        if self.chi is None:
            object.__setattr__(self, "chi", self.n + 1)
        if self.chi == 0:
            raise ValueError("chi = 0 has no p-adic valuation; the criterion needs a nonzero Euler characteristic")
        if self.chi < 1:
            raise ValueError(f"chi must be >= 1, got {self.chi}")


@dataclass(frozen=True)
class WitnessCertificate:
    n: int
    q: int
    chi: int
    prime: int
    condition: Condition
    exponent: Optional[int]
    lhs: int
    rhs: int
    strict: bool
    delta_p: int
    section_assumed: bool = True

    def holds(self) -> bool:
        """
        Re-evaluate the recorded inequality from the stored fields alone.
        """
        if self.condition == Condition.A:
            return self.prime > self.n + 1 and self.lhs >= self.rhs
        return self.lhs > self.rhs if self.strict else self.lhs >= self.rhs

    def verify(self) -> bool:
        """
        holds(), plus agreement of every stored quantity with a fresh evaluation of the same prime and condition.
        """
        params = BundleParams(self.n, self.q, self.chi, self.section_assumed)
        check = condition_a if self.condition == Condition.A else condition_b
        return self.holds() and check(self.prime, params) == self

    def to_json(self) -> dict:
        allow_long_int_strings()
        data = asdict(self)
        data["condition"] = self.condition.value
        data["lhs"] = str(self.lhs)
        return {
            key: data[key]
            for key in (
                "n",
                "q",
                "chi",
                "prime",
                "condition",
                "exponent",
                "lhs",
                "rhs",
                "strict",
                "delta_p",
                "section_assumed",
            )
        }

    @staticmethod
    def from_json(data: dict) -> "WitnessCertificate":
        allow_long_int_strings()
        return WitnessCertificate(
            n=int(data["n"]),
            q=int(data["q"]),
            chi=int(data["chi"]),
            prime=int(data["prime"]),
            condition=Condition(data["condition"]),
            exponent=None if data["exponent"] is None else int(data["exponent"]),
            lhs=int(data["lhs"]),
            rhs=int(data["rhs"]),
            strict=bool(data["strict"]),
            delta_p=int(data["delta_p"]),
            section_assumed=bool(data.get("section_assumed", True)),
        )


@dataclass(frozen=True)
class ScanRow:
    """
    expected_by_theorem is q >= a(n) whatever chi is; the guarantee behind it holds for chi = n+1 only,
    so a missing witness under another chi is reported but says nothing about the threshold.
    """

    n: int
    q: int
    a_n: int
    witness: Optional[WitnessCertificate]
    expected_by_theorem: bool

    @property
    def violation(self) -> bool:
        return self.expected_by_theorem and self.witness is None

    def csv_fields(self) -> List[str]:
        return [
            str(self.n),
            str(self.q),
            str(self.a_n),
            "true" if self.expected_by_theorem else "false",
            str(self.witness.prime) if self.witness else "",
            self.witness.condition.value if self.witness else "",
        ]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "a_n": self.a_n,
            "expected": self.expected_by_theorem,
            "witness": self.witness.to_json() if self.witness else None,
        }


CSV_HEADER = ["n", "q", "a_n", "expected", "witness_prime", "condition"]


def a_of_n(n: int) -> int:
    """
    Threshold a(n): n+3 for n <= 2, n+2 for 3 <= n <= 5, n from 6 on.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n <= 2:
        return n + 3
    if n <= 5:
        return n + 2
    return n


def euler_total(chi_base: int) -> int:
    """
    Euler characteristic of the total space of an even-sphere bundle: chi(S^{2q}) * chi(M) = 2 chi(M).
    """
    return 2 * chi_base


def condition_a(p: int, params: BundleParams) -> Optional[WitnessCertificate]:
    p = check_prime(p)
    if p <= params.n + 1:
        return None

    delta_p = delta(p)
    lhs = vp_factorial(p, params.q - 1)
    rhs = vp_int(p, params.chi) + delta_p + 1
    if lhs < rhs:
        return None
    return WitnessCertificate(
        params.n, params.q, params.chi, p, Condition.A, None, lhs, rhs, False, delta_p, params.section_assumed
    )


def condition_b(p: int, params: BundleParams) -> Optional[WitnessCertificate]:
    """
    Condition (B) at the prime p. A negative exponent is a plain miss: p^e < 1 <= q.
    """
    p = check_prime(p)
    delta_p = delta(p)
    e = (params.q - 1) // (p - 1) - vp_int(p, params.chi) - delta_p
    if e < 0:
        return None

    strict = (params.q - 1) % (p - 1) == 0
    lhs = p**e - params.q
    fires = lhs > params.n if strict else lhs >= params.n
    if not fires:
        return None
    return WitnessCertificate(
        params.n, params.q, params.chi, p, Condition.B, e, lhs, params.n, strict, delta_p, params.section_assumed
    )


def find_witness(params: BundleParams, prime_bound: Optional[int] = None) -> Optional[WitnessCertificate]:
    """
    Scan primes in increasing order, trying (B) before (A) at each, and return the first certificate.

    No prime above q can witness: for p > q condition (B) has e <= 0 so p^e - q <= 1 - q < n,
    and condition (A) has v_p((q-1)!) = 0. The default bound max(q, 2) is therefore complete;
    `prime_bound` widens or narrows the scan for experiments.
    """
    bound = max(params.q, 2) if prime_bound is None else prime_bound
    for p in primes_up_to(bound):
        certificate = condition_b(p, params) or condition_a(p, params)
        if certificate is not None:
            return certificate
    return None


def canonical_check(n: int, q: int) -> Optional[WitnessCertificate]:
    """
    The criterion for the canonical-line-bundle family over CP^n, where chi = n+1.
    """
    return find_witness(BundleParams(n, q, n + 1))


def corollary_threshold(n: int) -> int:
    """
    floor(log2((n+1) / 2^nu)) + 2 nu + 4 with nu = v_2(n+1); (n+1)/2^nu is the odd part of n+1.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    nu = vp_int(2, n + 1)
    odd_part = (n + 1) >> nu
    return (odd_part.bit_length() - 1) + 2 * nu + 4


def theorem_main_check(n: int, q: int) -> ScanRow:
    a_n = a_of_n(n)
    return ScanRow(n, q, a_n, canonical_check(n, q), q >= a_n)


def _scan_row_block(n: int, q_max: int) -> List[ScanRow]:
    return [theorem_main_check(n, q) for q in range(1, q_max + 1)]


def scan_grid(n_max: int, q_max: int, workers: Optional[int] = None) -> List[ScanRow]:
    """
    One ScanRow per (n, q) in [1, n_max] x [1, q_max], in (n, q) order regardless of the worker count.
    """
    if n_max < 1 or q_max < 1:
        raise ValueError(f"scan bounds must be >= 1, got n_max={n_max}, q_max={q_max}")
    LOGGER.debug("scanning n <= %d, q <= %d", n_max, q_max)
    blocks = parallel_map(functools.partial(_scan_row_block, q_max=q_max), range(1, n_max + 1), workers)
    return [row for block in blocks for row in block]


@dataclass(frozen=True)
class ProofCase:
    n: int
    nu: int
    prime: int
    condition: Condition
    label: str


def n_nu_table() -> List[Tuple[int, int, int, int]]:
    """
    (nu, k_nu, n_nu, 2^(n_nu - nu - 2) - 2 n_nu) for nu = 0..3. Every last entry is positive.
    """
    rows = []
    for nu in range(4):
        k_nu = 3 - nu if nu <= 1 else 1
        n_nu = 2 ** (nu + 1) * k_nu + 2**nu - 1
        rows.append((nu, k_nu, n_nu, 2 ** (n_nu - nu - 2) - 2 * n_nu))
    return rows


def proof_case(n: int) -> ProofCase:
    """
    Which branch of the case analysis behind the a(n) threshold covers n, and the prime it relies on.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    nu = vp_int(2, n + 1)
    if nu >= 4:
        return ProofCase(n, nu, 2, Condition.B, "nu >= 4")
    n_nu = n_nu_table()[nu][2]
    if n >= n_nu:
        return ProofCase(n, nu, 2, Condition.B, f"nu = {nu}, n >= {n_nu}")
    if n in (2, 4, 5):
        return ProofCase(n, nu, 2, Condition.B, "small n, prime 2")
    if n == 1:
        return ProofCase(n, nu, 3, Condition.A, "n = 1, prime 3")
    assert n in (3, 7), f"n = {n} escapes the case analysis"
    return ProofCase(n, nu, 3, Condition.B, "small n, prime 3")


@dataclass(frozen=True)
class TopClassMargin:
    """
    required: v_p(chi(M)) + delta_p + 1, the exponent that rules out c_{n+q} = chi of the total space.
    computed: least coefficient valuation over c_q, ..., c_{n+q}, attained first at k_min.
    """

    prime: int
    required: int
    computed: int
    k_min: int

    @property
    def sufficient(self) -> bool:
        return self.computed >= self.required

    def to_json(self) -> dict:
        return asdict(self)


def top_class_margin(p: int, params: BundleParams) -> TopClassMargin:
    p = check_prime(p)
    required = vp_int(p, params.chi) + delta(p) + 1
    bounds = ck_divisibility_bounds(p, params.q, params.n + params.q)
    k_min = min(bounds, key=lambda k: (bounds[k], k))
    return TopClassMargin(p, required, bounds[k_min], k_min)
