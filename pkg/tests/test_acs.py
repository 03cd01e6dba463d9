import dataclasses
import json
import unittest

from acsbundle.acs import (
    CSV_HEADER,
    BundleParams,
    Condition,
    WitnessCertificate,
    a_of_n,
    canonical_check,
    condition_a,
    condition_b,
    corollary_threshold,
    euler_total,
    find_witness,
    n_nu_table,
    proof_case,
    scan_grid,
    theorem_main_check,
    top_class_margin,
)


class TestBundleParams(unittest.TestCase):
    def test_default_chi(self):
        self.assertEqual(BundleParams(3, 6).chi, 4)
        self.assertEqual(BundleParams(3, 6, 10).chi, 10)

    def test_invalid(self):
        with self.assertRaisesRegex(ValueError, "chi = 0"):
            BundleParams(1, 4, 0)
        with self.assertRaises(ValueError):
            BundleParams(1, 4, -2)
        with self.assertRaises(ValueError):
            BundleParams(0, 4)
        with self.assertRaises(ValueError):
            BundleParams(1, 0)


class TestThresholds(unittest.TestCase):
    def test_a_of_n(self):
        self.assertEqual([a_of_n(n) for n in range(1, 8)], [4, 5, 5, 6, 7, 6, 7])
        self.assertEqual(a_of_n(10), 10)
        with self.assertRaises(ValueError):
            a_of_n(0)

    def test_euler_total(self):
        self.assertEqual(euler_total(2), 4)
        self.assertEqual(euler_total(4), 8)
        self.assertEqual(euler_total(0), 0)

    def test_corollary_threshold(self):
        self.assertEqual(corollary_threshold(1), 6)
        self.assertEqual(corollary_threshold(2), 5)
        self.assertEqual(corollary_threshold(15), 12)

    def test_corollary_threshold_fires_at_two(self):
        for n in range(1, 500):
            q = corollary_threshold(n)
            certificate = condition_b(2, BundleParams(n, q))
            self.assertIsNotNone(certificate, n)
            self.assertTrue(certificate.holds())


class TestConditions(unittest.TestCase):
    def test_condition_a(self):
        certificate = condition_a(3, BundleParams(1, 4, 2))
        self.assertEqual((certificate.lhs, certificate.rhs, certificate.exponent), (1, 1, None))
        self.assertIsNone(condition_a(2, BundleParams(1, 4, 2)))

        certificate = condition_a(5, BundleParams(3, 11, 4))
        self.assertEqual((certificate.lhs, certificate.rhs), (2, 1))

    def test_condition_b(self):
        certificate = condition_b(3, BundleParams(3, 6, 4))
        self.assertEqual(certificate.exponent, 2)
        self.assertEqual((certificate.lhs, certificate.rhs, certificate.strict), (3, 3, False))

        certificate = condition_b(2, BundleParams(2, 5, 3))
        self.assertEqual(certificate.exponent, 3)
        self.assertEqual((certificate.lhs, certificate.rhs, certificate.strict), (3, 2, True))
        self.assertEqual(certificate.delta_p, 1)

    def test_condition_b_negative_exponent(self):
        self.assertIsNone(condition_b(2, BundleParams(1, 2, 2)))

    def test_non_prime(self):
        with self.assertRaises(ValueError):
            condition_b(9, BundleParams(3, 6))


class TestFindWitness(unittest.TestCase):
    def test_examples(self):
        certificate = canonical_check(3, 6)
        self.assertEqual((certificate.prime, certificate.condition), (3, Condition.B))

        certificate = canonical_check(1, 4)
        self.assertEqual((certificate.prime, certificate.condition), (3, Condition.A))

        certificate = canonical_check(7, 9)
        self.assertEqual((certificate.prime, certificate.condition), (3, Condition.B))
        self.assertEqual((certificate.exponent, certificate.lhs), (4, 72))

        certificate = canonical_check(6, 6)
        self.assertEqual((certificate.prime, certificate.exponent, certificate.lhs), (2, 4, 10))

    def test_no_witness(self):
        self.assertIsNone(canonical_check(1, 1))
        self.assertIsNone(canonical_check(1, 3))

    def test_b_before_a(self):
        # prime 3 fires under both conditions here; B is reported
        params = BundleParams(1, 7, 64)
        self.assertIsNotNone(condition_a(3, params))
        self.assertIsNotNone(condition_b(3, params))
        self.assertIsNone(condition_b(2, params))
        self.assertEqual(find_witness(params).condition, Condition.B)

    def test_prime_bound(self):
        params = BundleParams(2, 9)
        self.assertEqual(find_witness(params), find_witness(params, prime_bound=500))
        self.assertIsNone(find_witness(params, prime_bound=1))

    def test_large_exponent_stays_exact(self):
        certificate = canonical_check(1, 200)
        self.assertEqual(certificate.prime, 2)
        self.assertEqual(certificate.lhs, 2**certificate.exponent - 200)
        self.assertTrue(certificate.verify())


class TestMainCheck(unittest.TestCase):
    def test_rows(self):
        row = theorem_main_check(2, 5)
        self.assertTrue(row.expected_by_theorem)
        self.assertEqual(row.witness.prime, 2)
        self.assertFalse(row.violation)

        row = theorem_main_check(1, 3)
        self.assertFalse(row.expected_by_theorem)
        self.assertIsNone(row.witness)
        self.assertEqual(row.csv_fields(), ["1", "3", "4", "false", "", ""])

    def test_threshold_region(self):
        for n in range(1, 21):
            for q in range(a_of_n(n), a_of_n(n) + 40):
                row = theorem_main_check(n, q)
                self.assertFalse(row.violation, (n, q))
                self.assertIn(row.witness.prime, (2, 3))

    def test_negative_control(self):
        for n in range(1, 51):
            for q in (1, 3):
                self.assertIsNone(canonical_check(n, q), (n, q))

    def test_scan_grid(self):
        rows = scan_grid(2, 4, workers=1)
        self.assertEqual([(row.n, row.q) for row in rows], [(n, q) for n in (1, 2) for q in range(1, 5)])
        self.assertEqual(sum(row.violation for row in rows), 0)
        self.assertEqual(len(CSV_HEADER), len(rows[0].csv_fields()))
        with self.assertRaises(ValueError):
            scan_grid(0, 4, workers=1)


class TestCertificates(unittest.TestCase):
    def test_json(self):
        certificate = canonical_check(7, 9)
        data = json.loads(json.dumps(certificate.to_json()))
        self.assertEqual(data["lhs"], "72")
        self.assertEqual(data["condition"], "B")
        decoded = WitnessCertificate.from_json(data)
        self.assertEqual(decoded, certificate)
        self.assertTrue(decoded.verify())

    def test_json_with_huge_lhs(self):
        certificate = canonical_check(1, 20000)
        self.assertEqual((certificate.prime, certificate.exponent), (2, 19997))
        text = json.dumps(certificate.to_json())
        data = json.loads(text)
        self.assertGreater(len(data["lhs"]), 4300)
        self.assertEqual(int(data["lhs"]), 2**19997 - 20000)
        decoded = WitnessCertificate.from_json(data)
        self.assertEqual(decoded, certificate)

    def test_tampered(self):
        certificate = canonical_check(7, 9)
        self.assertFalse(dataclasses.replace(certificate, lhs=73).verify())
        self.assertFalse(dataclasses.replace(certificate, lhs=5).holds())
        self.assertFalse(dataclasses.replace(certificate, prime=2).verify())


class TestCaseAnalysis(unittest.TestCase):
    def test_n_nu_table(self):
        self.assertEqual(n_nu_table(), [(0, 3, 6, 4), (1, 2, 9, 46), (2, 1, 11, 106), (3, 1, 23, 262098)])

    def test_proof_case(self):
        self.assertEqual((proof_case(1).prime, proof_case(1).condition), (3, Condition.A))
        self.assertEqual((proof_case(3).prime, proof_case(3).condition), (3, Condition.B))
        self.assertEqual((proof_case(7).prime, proof_case(7).condition), (3, Condition.B))
        self.assertEqual(proof_case(2).prime, 2)
        self.assertEqual(proof_case(6).label, "nu = 0, n >= 6")
        self.assertEqual(proof_case(15).nu, 4)

    def test_every_n_has_a_case(self):
        for n in range(1, 300):
            case = proof_case(n)
            self.assertIn(case.prime, (2, 3))

    def test_top_class_margin(self):
        margin = top_class_margin(3, BundleParams(3, 6))
        self.assertEqual(margin.required, 1)
        self.assertEqual((margin.computed, margin.k_min), (1, 6))
        self.assertTrue(margin.sufficient)
        self.assertEqual(margin.to_json(), {"prime": 3, "required": 1, "computed": 1, "k_min": 6})
