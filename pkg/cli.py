import argparse
import json
import logging
import sys
import time

from acsbundle.acs import (
    CSV_HEADER,
    BundleParams,
    ScanRow,
    a_of_n,
    corollary_threshold,
    find_witness,
    scan_grid,
    top_class_margin,
)
from acsbundle.cherndiv import DivisibilityQuery, ck_divisibility_bounds, dchern_ranges, minimizing_term
from acsbundle.padic import delta, vp_int
from acsbundle.utils import ResourceLimitError, allow_long_int_strings
from acsbundle.verify import SUITES, run_suite

LOGGER = logging.getLogger("acsbundle.cli")

# resource caps
MAX_Q = 512
MAX_K = 1024


def emit_json(data) -> None:
    print(json.dumps(data, indent=2))


def emit_csv(header, rows) -> None:
    print(",".join(header))
    for row in rows:
        print(",".join(str(field) for field in row))


def describe_certificate(certificate) -> str:
    p = certificate.prime
    if certificate.condition.value == "A":
        return (
            f"prime {p}, condition A: {p} > n+1 = {certificate.n + 1} and "
            f"v_{p}(({certificate.q}-1)!) = {certificate.lhs} >= {certificate.rhs}"
        )
    relation = ">" if certificate.strict else ">="
    return (
        f"prime {p}, condition B: {p}^{certificate.exponent} - {certificate.q} = {certificate.lhs} "
        f"{relation} {certificate.rhs}"
    )


def check_q(q: int) -> None:
    if q > MAX_Q:
        raise ResourceLimitError(f"q must be <= {MAX_Q}, got {q}")


def cmd_check(args) -> int:
    check_q(args.q)
    params = BundleParams(args.n, args.q, args.chi)
    a_n = a_of_n(params.n)
    certificate = find_witness(params)
    row = ScanRow(params.n, params.q, a_n, certificate, params.q >= a_n)

    explain = None
    if args.explain:
        p = certificate.prime if certificate else 2
        l = vp_int(p, params.chi) + delta(p) + 1
        first, second = dchern_ranges(p, params.q, l)
        term = minimizing_term(p, params.q, params.n + params.q)
        explain = {
            "prime": p,
            "l": l,
            "ranges": [first.to_json(), second.to_json()],
            "top_class": top_class_margin(p, params).to_json(),
            "minimizing_term": term.to_json(),
        }

    if args.format == "json":
        data = row.to_json()
        data["chi"] = params.chi
        if explain is not None:
            data["explain"] = explain
        emit_json(data)
    else:
        print(f"n={params.n} q={params.q} chi={params.chi} a(n)={a_n} expected={str(row.expected_by_theorem).lower()}")
        if certificate:
            print(f"certificate: {describe_certificate(certificate)}")
        else:
            print("no certificate")
        if explain is not None:
            print(f"explain at p={explain['prime']}, l={explain['l']}:")
            for name, claim in zip(("first range", "second range"), explain["ranges"]):
                print(f"  {name}: {json.dumps(claim)}")
            print(f"  top class: {json.dumps(explain['top_class'])}")
            print(f"  minimizing term for k={params.n + params.q}: {json.dumps(explain['minimizing_term'])}")

    return 0 if certificate else 1


def cmd_scan(args) -> int:
    check_q(args.q_max)
    start_time = time.time()
    rows = scan_grid(args.n_max, args.q_max, args.workers)
    LOGGER.info("Time to scan %d rows: %.6f seconds", len(rows), time.time() - start_time)
    violations = sum(row.violation for row in rows)

    if args.format == "json":
        emit_json({"rows": [row.to_json() for row in rows], "violations": violations})
    elif args.format == "csv":
        emit_csv(CSV_HEADER, [row.csv_fields() for row in rows])
    else:
        print(f"{'n':>4} {'q':>4} {'a(n)':>5} {'expected':>8} {'prime':>6} {'cond':>4}")
        for row in rows:
            n, q, a_n, expected, prime, condition = row.csv_fields()
            print(f"{n:>4} {q:>4} {a_n:>5} {expected:>8} {prime or '-':>6} {condition or '-':>4}")

    summary = f"rows: {len(rows)}, expected without witness: {violations}"
    print(summary, file=sys.stderr if args.format != "text" else sys.stdout)
    return 0 if violations == 0 else 1


def cmd_divisibility(args) -> int:
    query = DivisibilityQuery(args.p, args.q, args.l, args.k)

    if query.l is not None:
        first, second = dchern_ranges(query.p, query.q, query.l)
        if args.format == "json":
            emit_json({"p": query.p, "q": query.q, "l": query.l, "ranges": [first.to_json(), second.to_json()]})
        else:
            for name, claim in (("first", first), ("second", second)):
                if claim.is_empty:
                    print(f"{name} range: empty")
                    continue
                closing = "]" if claim.boundary_inclusive else ")"
                print(f"{name} range: k in [{claim.k_min}, {claim.k_max}{closing}, exponent {claim.exponent}")
        return 0

    if query.k > MAX_K:
        raise ResourceLimitError(f"k must be <= {MAX_K}, got {query.k}")
    bound = ck_divisibility_bounds(query.p, query.q, query.k)[query.k]
    term = minimizing_term(query.p, query.q, query.k) if args.explain else None

    if args.format == "json":
        data = {"p": query.p, "q": query.q, "k": query.k, "bound": bound}
        if term is not None:
            data["minimizing_term"] = term.to_json()
        emit_json(data)
    else:
        print(f"c_{query.k} coefficient valuation bound at p={query.p}, q={query.q}: {bound}")
        if term is not None:
            print(f"minimizing term: {json.dumps(term.to_json())}")
    return 0


def cmd_verify(args) -> int:
    report = run_suite(
        args.suite,
        workers=args.workers,
        n_max=args.n_max,
        p_max=args.p_max,
        q_max=args.q_max,
        l_max=args.l_max,
        k_max=args.k_max,
        q_span=args.q_span,
        samples=args.samples,
        seed=args.seed,
    )
    if args.format == "json":
        emit_json(report.to_json())
    else:
        print(report.to_text())
    return 0 if report.ok else 1


def cmd_a_table(args) -> int:
    if args.n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {args.n_max}")
    rows = [(n, a_of_n(n), corollary_threshold(n)) for n in range(1, args.n_max + 1)]

    if args.format == "json":
        emit_json([{"n": n, "a_n": a_n, "corollary_threshold": threshold} for n, a_n, threshold in rows])
    elif args.format == "csv":
        emit_csv(["n", "a_n", "corollary_threshold"], rows)
    else:
        print(f"{'n':>6} {'a(n)':>6} {'threshold':>9}")
        for n, a_n, threshold in rows:
            print(f"{n:>6} {a_n:>6} {threshold:>9}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Witness-prime certificates against almost complex structures on even sphere bundles over CP^n"
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Log debug output to stderr.")
    parser.add_argument(
        "--workers", type=int, default=None, help="Worker processes for scans and suites (default: ACS_THREADS)."
    )
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="Search a witness prime for one (n, q).")
    check.add_argument("--n", type=int, required=True, help="Complex dimension of the base.")
    check.add_argument("--q", type=int, required=True, help="The fibre is S^{2q}.")
    check.add_argument("--chi", type=int, default=None, help="Euler characteristic of the base (default n+1).")
    check.add_argument("--explain", action="store_true", help="Add divisibility ranges and the minimizing term.")
    check.add_argument("--format", choices=["text", "json"], default="text")
    check.set_defaults(handler=cmd_check)

    scan = commands.add_parser("scan", help="Check every (n, q) in a rectangle.")
    scan.add_argument("--n-max", type=int, required=True)
    scan.add_argument("--q-max", type=int, required=True)
    scan.add_argument("--chi-mode", choices=["cpn"], default="cpn", help="Euler characteristic n+1.")
    scan.add_argument("--format", choices=["text", "json", "csv"], default="text")
    scan.set_defaults(handler=cmd_scan)

    divisibility = commands.add_parser("divisibility", help="Chern class divisibility ranges or bounds.")
    divisibility.add_argument("--p", type=int, required=True)
    divisibility.add_argument("--q", type=int, required=True)
    target = divisibility.add_mutually_exclusive_group(required=True)
    target.add_argument("--l", type=int, help="Target exponent: print the guaranteed ranges.")
    target.add_argument("--k", type=int, help="Chern class index: print the computed bound.")
    divisibility.add_argument("--explain", action="store_true", help="With --k, add the minimizing term.")
    divisibility.add_argument("--format", choices=["text", "json"], default="text")
    divisibility.set_defaults(handler=cmd_divisibility)

    verify = commands.add_parser("verify", help="Run a brute-force verification suite.")
    verify.add_argument("--suite", choices=list(SUITES), required=True)
    for flag in ("--n-max", "--p-max", "--q-max", "--l-max", "--k-max", "--q-span", "--samples", "--seed"):
        verify.add_argument(flag, type=int, default=None)
    verify.add_argument("--format", choices=["text", "json"], default="text")
    verify.set_defaults(handler=cmd_verify)

    a_table = commands.add_parser("a-table", help="Print n, a(n) and the p=2 threshold.")
    a_table.add_argument("--n-max", type=int, required=True)
    a_table.add_argument("--format", choices=["text", "json", "csv"], default="text")
    a_table.set_defaults(handler=cmd_a_table)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    allow_long_int_strings()
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.handler(args)
    except ValueError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
