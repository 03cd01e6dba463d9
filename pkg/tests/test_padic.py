import math
import random
import unittest
from fractions import Fraction

import galois
import numpy as np
import sympy

from acsbundle.padic import (
    INFINITE,
    PrimeFactorization,
    delta,
    digit_counts,
    digit_sum,
    digit_sums,
    integer_log,
    is_prime,
    legendre_digit_form,
    legendre_floor_sum,
    legendre_floor_sums,
    phi,
    primes_up_to,
    vp_factorial,
    vp_int,
    vp_phi,
    vp_rat,
)


class TestValuations(unittest.TestCase):
    def test_vp_int(self):
        self.assertEqual(vp_int(2, 24), 3)
        self.assertEqual(vp_int(3, 1), 0)
        self.assertEqual(vp_int(5, -250), 3)

    def test_vp_int_zero_is_infinite(self):
        self.assertEqual(vp_int(2, 0), INFINITE)
        self.assertEqual(vp_int(7, 0) + 3, INFINITE)
        self.assertTrue(vp_int(3, 0) >= 10**9)

    def test_vp_int_rejects_non_prime(self):
        with self.assertRaisesRegex(ValueError, "p must be a prime"):
            vp_int(4, 8)
        with self.assertRaisesRegex(ValueError, "p must be a prime"):
            vp_int(1, 8)

    def test_vp_int_against_sympy(self):
        for _ in range(200):
            p = random.choice(primes_up_to(50))
            m = random.randint(1, 10**12) * random.choice([1, -1])
            self.assertEqual(vp_int(p, m), sympy.multiplicity(p, abs(m)))

    def test_vp_rat(self):
        self.assertEqual(vp_rat(2, Fraction(3, 8)), -3)
        self.assertEqual(vp_rat(3, Fraction(1)), 0)
        self.assertEqual(vp_rat(2, Fraction(3, 8) * Fraction(8, 3)), 0)
        self.assertEqual(vp_rat(5, Fraction(0)), INFINITE)

    def test_vp_rat_is_additive(self):
        for p in primes_up_to(50):
            for _ in range(30):
                r1 = Fraction(random.randint(1, 10**6), random.randint(1, 10**6)) * random.choice([1, -1])
                r2 = Fraction(random.randint(1, 10**6), random.randint(1, 10**6))
                self.assertEqual(vp_rat(p, r1 * r2), vp_rat(p, r1) + vp_rat(p, r2))
                self.assertEqual(vp_rat(p, r1 / r2), vp_rat(p, r1) - vp_rat(p, r2))

    def test_delta(self):
        self.assertEqual(delta(2), 1)
        self.assertEqual(delta(3), 0)
        self.assertEqual(delta(101), 0)


class TestDigitsAndFactorials(unittest.TestCase):
    def test_digit_sum(self):
        self.assertEqual(digit_sum(2, 7), 3)
        self.assertEqual(digit_sum(10, 0), 0)
        self.assertEqual(digit_sum(3, 8), 4)
        self.assertEqual(digit_sum(10, 9875), 29)

    def test_integer_log(self):
        self.assertEqual(integer_log(2, 1), 0)
        self.assertEqual(integer_log(2, 8), 3)
        self.assertEqual(integer_log(3, 8), 1)
        self.assertEqual(integer_log(10, 999), 2)
        self.assertEqual(integer_log(10, 1000), 3)
        with self.assertRaises(ValueError):
            integer_log(2, 0)

    def test_digit_sum_bound(self):
        for p in primes_up_to(50):
            for n in range(1, 3000):
                bound = (p - 1) * (integer_log(p, n) + 1)
                self.assertLessEqual(digit_sum(p, n), bound)
                # equality exactly when every digit is p-1
                self.assertEqual(digit_sum(p, n) == bound, n == p ** (integer_log(p, n) + 1) - 1)

    def test_vp_factorial(self):
        self.assertEqual(vp_factorial(2, 4), 3)
        self.assertEqual(vp_factorial(7, 6), 0)
        self.assertEqual(vp_factorial(3, 100), 48)
        self.assertEqual(vp_factorial(3, 100), vp_int(3, math.factorial(100)))

    def test_vp_factorial_two_forms(self):
        for p in primes_up_to(30):
            for _ in range(50):
                n = random.randint(0, 10**9)
                self.assertEqual(legendre_floor_sum(p, n), legendre_digit_form(p, n))
                self.assertEqual(vp_factorial(p, n), legendre_floor_sum(p, n))

    def test_vp_factorial_rejects_negative(self):
        with self.assertRaises(ValueError):
            vp_factorial(2, -1)

    def test_vp_phi(self):
        self.assertEqual(vp_phi(2, 3), 3)
        self.assertEqual(vp_phi(5, 3), 0)
        self.assertEqual(vp_phi(3, 7), 3)


class TestPhi(unittest.TestCase):
    def test_small_values(self):
        self.assertEqual(phi(0).factors, ())
        self.assertEqual(phi(0).value(), 1)
        self.assertEqual(phi(1).to_json(), {"2": 1})
        self.assertEqual(phi(2).to_json(), {"2": 2, "3": 1})
        self.assertEqual(phi(2).value(), 12)

    def test_only_small_primes(self):
        for t in range(60):
            self.assertTrue(all(p <= t + 1 for p in phi(t).primes()))

    def test_reconstruction(self):
        for t in range(201):
            value = phi(t).value()
            for p in primes_up_to(t + 1):
                self.assertEqual(vp_int(p, value), vp_phi(p, t))

    def test_json(self):
        factorization = phi(9)
        self.assertEqual(PrimeFactorization.from_json(factorization.to_json()), factorization)
        self.assertEqual(factorization.exponent(2), 9)
        self.assertEqual(factorization.exponent(11), 0)


class TestPrimes(unittest.TestCase):
    def test_primes_up_to(self):
        self.assertEqual(primes_up_to(1), [])
        self.assertEqual(primes_up_to(10), [2, 3, 5, 7])
        self.assertEqual(primes_up_to(30), [2, 3, 5, 7, 11, 13, 17, 19, 23, 29])

    def test_sieve_is_logged(self):
        with self.assertLogs("acsbundle.padic", level="DEBUG") as logs:
            primes_up_to(97)
        self.assertIn("sieving primes up to 97", logs.output[0])

    def test_against_oracles(self):
        primes = primes_up_to(5000)
        self.assertEqual(primes, [int(p) for p in galois.primes(5000)])
        self.assertEqual(primes, list(sympy.primerange(2, 5001)))
        self.assertTrue(all(isinstance(p, int) for p in primes))

    def test_is_prime(self):
        self.assertTrue(is_prime(2))
        self.assertFalse(is_prime(1))
        self.assertFalse(is_prime(91))
        self.assertTrue(is_prime(2**61 - 1))


class TestVectorised(unittest.TestCase):
    def test_against_scalar(self):
        ns = np.arange(0, 5000, dtype=np.int64)
        for p in [2, 3, 5, 7, 47]:
            sums = digit_sums(p, ns)
            floors = legendre_floor_sums(p, ns)
            counts = digit_counts(p, ns)
            for n in random.sample(range(5000), 200):
                self.assertEqual(sums[n], digit_sum(p, n))
                self.assertEqual(floors[n], legendre_floor_sum(p, n))
                self.assertEqual(counts[n], integer_log(p, n) + 1 if n else 0)
