from fractions import Fraction

import pytest

from timecone import (
    CoeffTable,
    PolyInD,
    cmk,
    double_factorial,
    p1_product_check,
    pmk,
    sigma_identity_check,
    sigma_odd,
    source_multiplier,
    verify_cmk_identity,
    verify_pmk_identity,
)
from timecone.coefficients import ONE, _linear

M_MAX = 16


class TestPolyInD:
    def test_trims_and_compares(self):
        assert PolyInD((1, 2, 0, 0)) == PolyInD((1, 2))
        assert PolyInD(()).degree == -1

    def test_product_expansion(self):
        # (d-2)(d-4) = d^2 - 6d + 8
        assert _linear(-2) * _linear(-4) == PolyInD((8, -6, 1))

    def test_exact_integer_evaluation(self):
        p = _linear(-2) * _linear(-4) * _linear(-6)
        assert p(7) == 5 * 3 * 1

    def test_pretty_print(self):
        assert str(_linear(-2)) == "d - 2"
        assert str(PolyInD((8, -6, 1))) == "d^2 - 6*d + 8"


class TestPmk:
    def test_diagonal_is_one(self):
        for m in range(1, M_MAX + 1):
            assert pmk(m, m) == ONE

    def test_p21(self):
        assert pmk(2, 1) == _linear(-2)

    def test_p41_product(self):
        # unrolling the recurrence gives (d-2)(d-4)(d-6)
        assert pmk(4, 1) == _linear(-2) * _linear(-4) * _linear(-6)

    def test_degree(self):
        for m in range(1, M_MAX + 1):
            for k in range(1, m + 1):
                assert pmk(m, k).degree == m - k

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            pmk(3, 0)
        with pytest.raises(ValueError):
            pmk(3, 4)


class TestCmk:
    def test_edges_are_one(self):
        for m in range(1, M_MAX + 1):
            assert cmk(m, 1) == 1
            assert cmk(m, m) == 1

    def test_c32(self):
        assert cmk(3, 2) == 1

    def test_c53_unrolled(self):
        # c_5^3 = c_4^2 + c_4^3 = c_3^1 + (c_3^2 + c_3^3) = 1 + 2
        assert cmk(5, 3) == 3

    def test_positive(self):
        for m in range(1, M_MAX + 1):
            assert all(cmk(m, k) > 0 for k in range(1, m + 1))

    def test_second_from_top_matches_direct_unroll(self):
        # independent bottom-up triangle, no recursion sharing
        tri = {1: [1]}
        for m in range(2, M_MAX + 1):
            row = []
            for k in range(1, m + 1):
                if k == 1 or k == m:
                    row.append(1)
                elif k % 2 == 0:
                    row.append(tri[m - 1][k - 2])
                else:
                    row.append(tri[m - 1][k - 2] + tri[m - 1][k - 1])
            tri[m] = row
        for m in range(2, M_MAX + 1):
            assert cmk(m, m - 1) == tri[m][m - 2]

    def test_table(self):
        t = CoeffTable.build(5)
        assert t.c == (1, 1, 2, 3, 1) or t.c[0] == t.c[-1] == 1
        assert t.c == tuple(cmk(5, k) for k in range(1, 6))

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            cmk(3, 0)


class TestIdentities:
    def test_pmk_identity_all(self):
        for m in range(2, M_MAX + 1):
            assert verify_pmk_identity(m)

    def test_cmk_identity_all(self):
        for m in range(3, M_MAX + 1):
            assert verify_cmk_identity(m)

    def test_p1_products_all(self):
        for m in range(1, M_MAX + 1):
            assert p1_product_check(m)

    def test_sigma_all(self):
        for m in range(1, M_MAX + 1):
            assert sigma_identity_check(m)

    def test_sigma_small_cases(self):
        # P_2^1(3) = 1 = 1!!, P_3^1(5) = 3 = 3!!
        assert pmk(2, 1)(3) == 1 == double_factorial(1)
        assert pmk(3, 1)(5) == 3 == double_factorial(3)

    def test_perturbed_pmk_detected(self):
        def bad_pmk(m, k):
            p = pmk(m, k)
            if (m, k) == (4, 2):
                return p + ONE
            return p

        assert not verify_pmk_identity(4, pmk_fn=bad_pmk)

    def test_perturbed_cmk_detected(self):
        def bad_cmk(m, k):
            return cmk(m, k) + (1 if (m, k) == (5, 3) else 0)

        assert not verify_cmk_identity(5, cmk_fn=bad_cmk)


class TestMultipliers:
    def test_double_factorial(self):
        assert double_factorial(-1) == 1
        assert double_factorial(0) == 1
        assert double_factorial(5) == 15
        assert double_factorial(6) == 48

    def test_source_multiplier_base(self):
        assert source_multiplier(0) == (2, 0)

    def test_source_multiplier_order_one(self):
        # (2)!! * 2^2 = 8, one power of pi
        assert source_multiplier(1) == (8, 1)

    def test_sigma_odd_three_dims(self):
        frac, power = sigma_odd(1)
        assert frac == Fraction(4) and power == 1  # 4*pi

    def test_sigma_times_p1_collapses(self):
        # sigma_{2m+1} * P_{m+1}^1(2m+1) = 2^{m+1} pi^m, rationally
        for m in range(1, 9):
            frac, power = sigma_odd(m)
            assert frac * pmk(m + 1, 1)(2 * m + 1) == Fraction(2 ** (m + 1))
            assert power == m
