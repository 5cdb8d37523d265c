import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heitmann.errors import InvalidArgument, UndefinedValuation
from heitmann.padic import (
    TauRational,
    check_epsilon_inequality,
    heitmann_binomial_valuation,
    sigma_digit_sum,
    tau,
    tau_difference,
    vp_binomial,
    vp_central_binomial_pL,
    vp_factorial,
    vp_int,
)


def vp_by_division(n, p):
    # independent oracle: repeated division on the absolute value
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


class TestSigma:
    def test_examples(self):
        assert sigma_digit_sum(0, 2) == 0
        assert sigma_digit_sum(5, 2) == 2
        assert sigma_digit_sum(9, 3) == 1

    def test_rejects_composite_p(self):
        for bad in (0, 1, 4, 6, 9):
            with pytest.raises(InvalidArgument):
                sigma_digit_sum(5, bad)

    def test_rejects_negative_n(self):
        with pytest.raises(InvalidArgument):
            sigma_digit_sum(-1, 2)

    @given(st.integers(min_value=0, max_value=10**9), st.sampled_from([2, 3, 5, 7]))
    def test_matches_string_expansion(self, n, p):
        digits = []
        m = n
        while m:
            m, r = divmod(m, p)
            digits.append(r)
        assert sigma_digit_sum(n, p) == sum(digits)


class TestTauRational:
    def test_arithmetic(self):
        a = TauRational(3, 3)  # 3/2
        b = TauRational(1, 3)  # 1/2
        assert (a + b) == 2
        assert (a - b) == 1
        assert (-a).value == Fraction(-3, 2)
        assert a + 1 == TauRational(5, 3)
        assert 1 + a == TauRational(5, 3)
        assert 2 - b == TauRational(3, 3)

    def test_comparisons(self):
        a = TauRational(3, 3)
        assert a > 1
        assert a < 2
        assert a >= TauRational(3, 3)
        assert not a.is_integer()
        assert TauRational(4, 3).as_int() == 2

    def test_cross_prime_mixing_is_an_error(self):
        a = TauRational(1, 3)
        b = TauRational(1, 5)
        with pytest.raises(InvalidArgument):
            a + b
        with pytest.raises(InvalidArgument):
            a < b
        assert a != b

    def test_value_based_equality_and_hash(self):
        assert TauRational(2, 3) == 1
        assert TauRational(2, 3) == Fraction(1)
        assert hash(TauRational(2, 3)) == hash(TauRational(2, 3))

    def test_str(self):
        assert str(TauRational(3, 3)) == "3/2"
        assert str(TauRational(4, 3)) == "2"
        assert str(TauRational(-3, 2)) == "-3"


class TestTau:
    def test_tau_of_one_is_zero(self):
        for p in (2, 3, 5, 7):
            assert tau(1, p) == 0

    def test_prime_powers(self):
        assert tau(8, 2) == 3
        assert tau(27, 3) == 3
        for p in (2, 3, 5):
            for n in range(1, 6):
                assert tau(p**n, p) == n
                assert tau(p**n + 1, p) == TauRational(1, p)

    def test_specific_fraction(self):
        assert tau(4, 3) == Fraction(1, 2)

    def test_rejects_n_below_one(self):
        with pytest.raises(InvalidArgument):
            tau(0, 2)


class TestTauDifference:
    def test_examples(self):
        for p in (2, 3, 5):
            assert tau_difference(2, p) == TauRational(1, p)
        assert tau_difference(5, 2) == -1
        assert tau_difference(10, 3) == Fraction(1, 2) - 2

    def test_rejects_small_n(self):
        with pytest.raises(InvalidArgument):
            tau_difference(1, 2)

    @given(st.integers(min_value=2, max_value=100000), st.sampled_from([2, 3, 5]))
    def test_matches_tau_increment(self, n, p):
        assert tau(n, p) - tau(n - 1, p) == tau_difference(n, p)


class TestVp:
    def test_vp_int_examples(self):
        assert vp_int(1, 2) == 0
        assert vp_int(24, 2) == 3
        assert vp_int(-18, 3) == 2

    def test_vp_int_zero_is_undefined(self):
        with pytest.raises(UndefinedValuation):
            vp_int(0, 5)

    def test_vp_factorial_examples(self):
        assert vp_factorial(0, 2) == 0
        assert vp_factorial(4, 2) == 3
        assert vp_factorial(9, 3) == vp_by_division(math.factorial(9), 3) == 4

    def test_vp_factorial_incremental_oracle(self):
        for p in (2, 3, 5, 7):
            acc = 0
            for n in range(1, 2000):
                acc += vp_by_division(n, p)
                assert vp_factorial(n, p) == acc

    def test_vp_binomial_examples(self):
        assert vp_binomial(10, 0, 3) == 0
        assert vp_binomial(4, 2, 2) == 1
        assert vp_binomial(9, 3, 3) == 1

    def test_vp_binomial_rejects_bad_k(self):
        with pytest.raises(InvalidArgument):
            vp_binomial(4, 5, 2)

    @given(st.integers(min_value=0, max_value=300), st.data(),
           st.sampled_from([2, 3, 5]))
    def test_vp_binomial_matches_big_integer(self, n, data, p):
        k = data.draw(st.integers(min_value=0, max_value=n))
        assert vp_binomial(n, k, p) == vp_by_division(math.comb(n, k), p)


class TestHeitmannBinomialValuation:
    def test_diagonal_is_zero(self):
        for p in (2, 3, 5):
            for L in (1, 2):
                for j in range(1, p**L + 1):
                    assert heitmann_binomial_valuation(j, j, L, p) == 0

    def test_examples(self):
        assert heitmann_binomial_valuation(2, 3, 2, 2) == 1
        assert heitmann_binomial_valuation(2, 4, 2, 2) == 0

    def test_rejects_out_of_range(self):
        with pytest.raises(InvalidArgument):
            heitmann_binomial_valuation(0, 1, 1, 2)
        with pytest.raises(InvalidArgument):
            heitmann_binomial_valuation(3, 2, 1, 2)
        with pytest.raises(InvalidArgument):
            heitmann_binomial_valuation(1, 5, 1, 2)

    def test_matches_legendre_route(self):
        # p <= 7, p^L <= 300: the tau identity equals v_p(C(p^L - j, i - j))
        for p in (2, 3, 5, 7):
            L = 1
            while p ** (L + 1) <= 300 and L < 5:
                L += 1
            for Lc in range(1, L + 1):
                n = p**Lc
                for i in range(1, n + 1):
                    for j in range(1, i + 1):
                        got = heitmann_binomial_valuation(j, i, Lc, p)
                        assert got == vp_binomial(n - j, i - j, p)


class TestCentralBinomial:
    def test_examples(self):
        assert vp_central_binomial_pL(4, 2, 2) == 0
        assert vp_central_binomial_pL(2, 2, 2) == 1 == vp_by_division(math.comb(4, 2), 2)
        assert vp_central_binomial_pL(3, 2, 3) == 1 == vp_by_division(math.comb(9, 3), 3)

    def test_rejects_out_of_range(self):
        with pytest.raises(InvalidArgument):
            vp_central_binomial_pL(0, 2, 2)
        with pytest.raises(InvalidArgument):
            vp_central_binomial_pL(5, 2, 2)

    def test_matches_vp_binomial(self):
        for p in (2, 3, 5):
            for L in (1, 2, 3):
                if p**L > 200:
                    continue
                for i in range(1, p**L + 1):
                    assert vp_central_binomial_pL(i, L, p) == vp_binomial(p**L, i, p)


class TestEpsilonInequality:
    def test_small_cases_clean(self):
        assert check_epsilon_inequality(1, 2, 2) == []
        assert check_epsilon_inequality(2, 3**5, 3) == []

    def test_exact_cancellation_at_p_to_K(self):
        # j = p^K gives value exactly 1
        p, K = 3, 2
        j = p**K
        value = Fraction(j, p**K) + K - tau(j, p).as_fraction()
        assert value == 1
        assert check_epsilon_inequality(K, j, p) == []

    def test_rejects_bad_bounds(self):
        with pytest.raises(InvalidArgument):
            check_epsilon_inequality(0, 5, 2)

    def test_power_growth(self):
        for p in (2, 3, 5):
            for M in range(0, 61):
                assert p**M >= M + 1
