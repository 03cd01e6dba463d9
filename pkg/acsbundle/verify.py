"""
Brute-force verification suites. Each suite sweeps a parameter grid, compares the library against an
independent evaluation and collects counterexamples into a VerifyReport.
"""
import functools
import inspect
import json
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .acs import (
    BundleParams,
    Condition,
    WitnessCertificate,
    a_of_n,
    condition_a,
    condition_b,
    corollary_threshold,
    find_witness,
    n_nu_table,
    proof_case,
    theorem_main_check,
    top_class_margin,
)
from .cherndiv import (
    Verdict,
    boundary_fraction_sum,
    ck_divisibility_bound,
    ck_divisibility_bounds,
    dchern_ranges,
    lemma_exponent,
    lemma_vp1_check,
    lemma_vp2_check,
    lemma_vp_lhs,
    lemma_vp_lhs_closed,
)
from .padic import digit_counts, digit_sums, legendre_floor_sums, primes_up_to, vp_factorial, vp_int
from .symfunc import (
    RootMultiset,
    enumerate_partitions,
    oracle_eval,
    partition_count,
    powersum_sequence,
    sigma_from_powersums,
)
from .utils import parallel_map

LOGGER = logging.getLogger(__name__)

# (cases, failures, anomalies) produced by one work item
Outcome = Tuple[int, List[dict], List[str]]


@dataclass
class VerifyReport:
    suite: str
    bounds: Dict[str, int]
    cases: int = 0
    failures: List[dict] = field(default_factory=list)
    anomalies: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def absorb(self, outcomes: List[Outcome]) -> "VerifyReport":
        for cases, failures, anomalies in outcomes:
            self.cases += cases
            self.failures.extend(failures)
            self.anomalies.extend(anomalies)
        return self

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "bounds": self.bounds,
            "cases": self.cases,
            "failures": self.failures,
            "anomalies": self.anomalies,
            "ok": self.ok,
        }

    def to_text(self) -> str:
        bounds = " ".join(f"{key}={value}" for key, value in self.bounds.items())
        lines = [f"suite {self.suite} ({bounds}): {self.cases} cases, {len(self.failures)} failures"]
        lines += [f"  FAIL {json.dumps(failure, sort_keys=True)}" for failure in self.failures]
        lines += [f"  NOTE {anomaly}" for anomaly in self.anomalies]
        return "\n".join(lines)


def _lemma_sp_for_prime(p: int, n_max: int) -> Outcome:
    ns = np.arange(1, n_max + 1, dtype=np.int64)
    sums = digit_sums(p, ns)
    digits = digit_counts(p, ns)
    bound = (p - 1) * digits

    failures = [{"check": "digit-sum bound", "p": p, "n": int(n)} for n in ns[sums > bound]]

    equality = sums == bound
    all_top_digits = ns == np.power(p, digits) - 1
    failures += [
        {"check": "equality set", "p": p, "n": int(n)} for n in ns[equality != all_top_digits]
    ]

    literal = ns == np.power(p, digits - 1) - 1
    anomalies = []
    if equality.any() and not (literal & equality).any():
        first = int(ns[equality][0])
        anomalies.append(
            f"p={p}: equality holds at the {int(equality.sum())} values n = p^(floor(log_p n)+1) - 1; "
            f"n = p^floor(log_p n) - 1 matches none of them (first equality case n={first})"
        )
    return len(ns), failures, anomalies


def suite_lemma_sp(p_max: int = 50, n_max: int = 100000, workers: Optional[int] = None) -> VerifyReport:
    report = VerifyReport("lemma-sp", {"p_max": p_max, "n_max": n_max})
    primes = primes_up_to(p_max)
    return report.absorb(parallel_map(functools.partial(_lemma_sp_for_prime, n_max=n_max), primes, workers))


def _legendre_for_prime(p: int, n_max: int) -> Outcome:
    ns = np.arange(0, n_max + 1, dtype=np.int64)
    floor_form = legendre_floor_sums(p, ns)
    numerator = ns - digit_sums(p, ns)
    failures = [{"check": "divisibility", "p": p, "n": int(n)} for n in ns[numerator % (p - 1) != 0]]
    failures += [
        {"check": "two forms", "p": p, "n": int(n)} for n in ns[floor_form != numerator // (p - 1)]
    ]

    # the scalar path asserts the same identity internally
    spot = range(0, n_max + 1, max(n_max // 97, 1))
    failures += [
        {"check": "scalar", "p": p, "n": n} for n in spot if vp_factorial(p, n) != int(floor_form[n])
    ]
    return len(ns), failures, []


def suite_legendre(p_max: int = 100, n_max: int = 100000, workers: Optional[int] = None) -> VerifyReport:
    report = VerifyReport("legendre", {"p_max": p_max, "n_max": n_max})
    primes = primes_up_to(p_max)
    return report.absorb(parallel_map(functools.partial(_legendre_for_prime, n_max=n_max), primes, workers))


def _newton_for_roots(roots: Tuple[int, ...], k_max: int) -> Outcome:
    multiset = RootMultiset(roots)
    sigmas, powersums = zip(*(oracle_eval(multiset, k) for k in range(1, k_max + 1)))

    failures = []
    newton = powersum_sequence(k_max, list(sigmas))
    for k in range(1, k_max + 1):
        if newton[k - 1] != powersums[k - 1]:
            failures.append({"check": "newton", "roots": list(roots), "k": k})
        expansion = sigma_from_powersums(k, 1).evaluate({j: powersums[j - 1] for j in range(1, k + 1)})
        if expansion != sigmas[k - 1]:
            failures.append({"check": "expansion", "roots": list(roots), "k": k})
    return 2 * k_max, failures, []


def suite_newton(
    k_max: int = 12,
    samples: int = 200,
    seed: int = 0,
    roots_max: int = 8,
    root_bound: int = 5,
    partitions_max: int = 30,
    workers: Optional[int] = None,
) -> VerifyReport:
    report = VerifyReport(
        "newton",
        {"k_max": k_max, "samples": samples, "seed": seed, "roots_max": roots_max, "partitions_max": partitions_max},
    )
    rng = np.random.default_rng(seed)
    corpus = []
    for _ in range(samples):
        size = int(rng.integers(1, roots_max + 1))
        corpus.append(tuple(int(r) for r in rng.integers(-root_bound, root_bound + 1, size=size)))
    report.absorb(parallel_map(functools.partial(_newton_for_roots, k_max=k_max), corpus, workers, chunksize=8))

    # vanishing of s_1, ..., s_{q-1} only deletes terms
    for k in range(1, k_max + 1):
        full = sigma_from_powersums(k, 1)
        for q in range(2, k + 1):
            report.cases += 1
            if sigma_from_powersums(k, q).terms != full.restricted(q).terms:
                report.failures.append({"check": "specialization", "k": k, "q": q})

    for k in range(1, partitions_max + 1):
        report.cases += 1
        if len(enumerate_partitions(k, 1)) != partition_count(k):
            report.failures.append({"check": "partition count", "k": k})
    return report


def _lemma_vp_for_prime(p: int, q_max: int, l_max: int) -> Outcome:
    cases = 0
    failures = []
    for q in range(1, q_max + 1):
        cases += 1
        if not lemma_vp1_check(p, q):
            failures.append({"check": "first estimate", "p": p, "q": q})

        for l in range(1, l_max + 1):
            cases += 1
            verdict = lemma_vp2_check(p, q, l)
            if verdict == Verdict.FAILS:
                failures.append({"check": "second estimate", "p": p, "q": q, "l": l})
            if verdict == Verdict.NOT_APPLICABLE or (q - 1) % (p - 1) == 0:
                continue

            cases += 1
            t = p ** lemma_exponent(p, q, l) - q
            if lemma_vp_lhs(p, q, t) != l:
                failures.append({"check": "boundary equality", "p": p, "q": q, "l": l, "t": str(t)})
            if lemma_vp_lhs_closed(p, q, t) != l:
                failures.append({"check": "closed form at boundary", "p": p, "q": q, "l": l, "t": str(t)})
            if boundary_fraction_sum(p, q, l) != 1:
                failures.append({"check": "fractional parts", "p": p, "q": q, "l": l})
    return cases, failures, []


def suite_lemma_vp(
    p_max: int = 13, q_max: int = 60, l_max: int = 6, workers: Optional[int] = None
) -> VerifyReport:
    report = VerifyReport("lemma-vp", {"p_max": p_max, "q_max": q_max, "l_max": l_max})
    worker = functools.partial(_lemma_vp_for_prime, q_max=q_max, l_max=l_max)
    return report.absorb(parallel_map(worker, primes_up_to(p_max), workers))


def _dchern_for_pair(pair: Tuple[int, int], l_max: int, enumeration_span: int) -> Outcome:
    p, q = pair
    ranges = [dchern_ranges(p, q, l) for l in range(1, l_max + 1)]
    claims = [ranges[0][0]] + [second for _, second in ranges]
    claims = [claim for claim in claims if not claim.is_empty]
    bounds = ck_divisibility_bounds(p, q, max(claim.last for claim in claims))

    cases = 0
    failures = []
    for claim in claims:
        for k in claim.ks():
            cases += 1
            if bounds[k] < claim.exponent:
                failures.append({"check": "guaranteed exponent", "p": p, "q": q, "k": k, **claim.to_json()})

    for k in range(q, min(q + enumeration_span, max(bounds)) + 1):
        cases += 1
        if ck_divisibility_bound(p, q, k) != bounds[k]:
            failures.append({"check": "enumeration agrees", "p": p, "q": q, "k": k})
    return cases, failures, []


def suite_dchern(
    p_max: int = 5, q_max: int = 12, l_max: int = 4, enumeration_span: int = 20, workers: Optional[int] = None
) -> VerifyReport:
    report = VerifyReport(
        "dchern", {"p_max": p_max, "q_max": q_max, "l_max": l_max, "enumeration_span": enumeration_span}
    )
    pairs = [(p, q) for p in primes_up_to(p_max) for q in range(1, q_max + 1)]
    # the largest tables sit at the end; hand them out first
    pairs.sort(key=lambda pair: -pair[0] ** lemma_exponent(pair[0], pair[1], 1))
    worker = functools.partial(_dchern_for_pair, l_max=l_max, enumeration_span=enumeration_span)
    outcomes = parallel_map(worker, pairs, workers)
    order = sorted(range(len(pairs)), key=lambda i: pairs[i])
    return report.absorb([outcomes[i] for i in order])


def suite_corollary(n_max: int = 10000, workers: Optional[int] = None) -> VerifyReport:
    report = VerifyReport("corollary", {"n_max": n_max})
    for n in range(1, n_max + 1):
        report.cases += 1
        q = corollary_threshold(n)
        nu = vp_int(2, n + 1)
        if not 2 ** (q - nu - 2) - q > n:
            report.failures.append({"check": "threshold inequality", "n": n, "q": q})
        elif condition_b(2, BundleParams(n, q)) is None:
            report.failures.append({"check": "condition B at 2", "n": n, "q": q})
    return report


def _main_theorem_for_n(n: int, q_span: int) -> Outcome:
    failures = []
    a_n = a_of_n(n)
    for q in range(a_n, a_n + q_span + 1):
        row = theorem_main_check(n, q)
        if row.violation:
            failures.append({"check": "witness exists", "n": n, "q": q})
        elif row.witness.prime not in (2, 3):
            failures.append({"check": "witness among 2, 3", "n": n, "q": q, "prime": row.witness.prime})
    return q_span + 1, failures, []


def suite_main_theorem(n_max: int = 50, q_span: int = 150, workers: Optional[int] = None) -> VerifyReport:
    report = VerifyReport("main-theorem", {"n_max": n_max, "q_span": q_span})
    worker = functools.partial(_main_theorem_for_n, q_span=q_span)
    return report.absorb(parallel_map(worker, range(1, n_max + 1), workers))


def suite_negative_control(n_max: int = 50, workers: Optional[int] = None) -> VerifyReport:
    report = VerifyReport("negative-control", {"n_max": n_max})
    for n in range(1, n_max + 1):
        for q in (1, 3):
            report.cases += 1
            certificate = find_witness(BundleParams(n, q))
            if certificate is not None:
                report.failures.append({"check": "no witness", "n": n, "q": q, "prime": certificate.prime})
    return report


def suite_monotonicity(n_max: int = 50, q_max: int = 300, workers: Optional[int] = None) -> VerifyReport:
    report = VerifyReport("monotonicity", {"n_max": n_max, "q_max": q_max})
    for n in range(1, n_max + 1):
        nu = vp_int(2, n + 1)
        first_hit = None
        for q in range(nu + 3, q_max + 1):
            report.cases += 1
            hit = condition_b(2, BundleParams(n, q)) is not None
            if first_hit is not None and not hit:
                report.failures.append({"check": "stays fired", "n": n, "q": q, "first": first_hit})
            if hit and first_hit is None:
                first_hit = q
    return report


def _witness_bound_for_n(n: int, q_max: int, prime_limit: int) -> Outcome:
    failures = []
    for q in range(1, q_max + 1):
        params = BundleParams(n, q)
        near = find_witness(params) is not None
        far = find_witness(params, prime_bound=prime_limit) is not None
        if near != far:
            failures.append({"check": "bound is complete", "n": n, "q": q})
    return q_max, failures, []


def suite_witness_bound(
    n_max: int = 20, q_max: int = 40, prime_limit: int = 1000, workers: Optional[int] = None
) -> VerifyReport:
    report = VerifyReport("witness-bound", {"n_max": n_max, "q_max": q_max, "prime_limit": prime_limit})
    worker = functools.partial(_witness_bound_for_n, q_max=q_max, prime_limit=prime_limit)
    return report.absorb(parallel_map(worker, range(1, n_max + 1), workers))


def suite_certificates(n_max: int = 20, q_max: int = 60, workers: Optional[int] = None) -> VerifyReport:
    report = VerifyReport("certificates", {"n_max": n_max, "q_max": q_max})
    for n in range(1, n_max + 1):
        for q in range(1, q_max + 1):
            params = BundleParams(n, q)
            for p in primes_up_to(q):
                for certificate in (condition_a(p, params), condition_b(p, params)):
                    if certificate is None:
                        continue
                    report.cases += 1
                    decoded = WitnessCertificate.from_json(json.loads(json.dumps(certificate.to_json())))
                    if not (certificate.verify() and decoded == certificate and decoded.verify()):
                        report.failures.append({"check": "self-verification", **certificate.to_json()})
    return report


def suite_case_analysis(n_max: int = 50, q_span: int = 150, workers: Optional[int] = None) -> VerifyReport:
    report = VerifyReport("case-analysis", {"n_max": n_max, "q_span": q_span})
    for nu, k_nu, n_nu, margin in n_nu_table():
        report.cases += 1
        if margin <= 0:
            report.failures.append({"check": "n_nu margin", "nu": nu, "k_nu": k_nu, "n_nu": n_nu})

    for n in range(1, n_max + 1):
        case = proof_case(n)
        check = condition_a if case.condition == Condition.A else condition_b
        for q in range(a_of_n(n), a_of_n(n) + q_span + 1):
            report.cases += 1
            if check(case.prime, BundleParams(n, q)) is None:
                report.failures.append({"check": case.label, "n": n, "q": q, "prime": case.prime})
    return report


def suite_obstruction(n_max: int = 12, q_max: int = 30, workers: Optional[int] = None) -> VerifyReport:
    report = VerifyReport("obstruction", {"n_max": n_max, "q_max": q_max})
    for n in range(1, n_max + 1):
        for q in range(1, q_max + 1):
            params = BundleParams(n, q)
            certificate = find_witness(params)
            if certificate is None:
                continue
            report.cases += 1
            margin = top_class_margin(certificate.prime, params)
            if not margin.sufficient:
                report.failures.append({"check": "top class divisibility", "n": n, "q": q, **margin.to_json()})
    return report


SUITES: Dict[str, Callable[..., VerifyReport]] = {
    "lemma-sp": suite_lemma_sp,
    "lemma-vp": suite_lemma_vp,
    "newton": suite_newton,
    "legendre": suite_legendre,
    "dchern": suite_dchern,
    "corollary": suite_corollary,
    "main-theorem": suite_main_theorem,
    "negative-control": suite_negative_control,
    "monotonicity": suite_monotonicity,
    "witness-bound": suite_witness_bound,
    "certificates": suite_certificates,
    "case-analysis": suite_case_analysis,
    "obstruction": suite_obstruction,
}


def run_suite(name: str, workers: Optional[int] = None, **bounds: Optional[int]) -> VerifyReport:
    """
    Run one suite by name. Bounds the suite does not take are ignored; None means the suite default.

    Parameters:
    - name: one of SUITES
    - workers: worker count, see utils.worker_count

    Returns: the suite's VerifyReport.
    """
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")

    suite = SUITES[name]
    accepted = inspect.signature(suite).parameters
    kwargs = {key: value for key, value in bounds.items() if value is not None and key in accepted}

    start_time = time.time()
    report = suite(workers=workers, **kwargs)
    LOGGER.info("Time to run suite %s: %.6f seconds", name, time.time() - start_time)
    return report
