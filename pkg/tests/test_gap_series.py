"""
Testes da série do critério f_r, do denominador D e das verificações de consistência
"""

import random
from fractions import Fraction
from unittest.mock import patch

import mpmath
import pytest

from app.exceptions import (
    CertificateUnavailableError,
    DegenerateMollifierError,
    DomainError,
    InfeasibleMollifierError,
    UnsupportedParameterError,
)
from app.models.gap_models import GapConfig
from app.services.gap_series import (
    D_denominator,
    SeriesBasis,
    closed_form_r1,
    closed_form_r1_engine_coeffs,
    constant_term_ratio,
    ct_consistency,
    ct_kernel,
    d_rational,
    evaluate_normalized,
    f_r,
    i_hat,
    k_hat,
    m_series_coeffs,
    normalized_coefficients,
    real_part_coeffs,
    REFERENCE_F2,
    reference_lambda_table,
    series_coefficients,
    tail_certificate,
)
from app.services.rational_poly import RationalPoly
from tests.conftest import random_poly

ONE = RationalPoly([1])
HALF = Fraction(1, 2)


class TestCoefficients:
    """Testes de î, k̂ e D"""

    def test_small_values(self):
        assert i_hat(1, 0, HALF, ONE) == Fraction(-1, 6)
        assert k_hat(1, 0, HALF, ONE) == Fraction(-1, 4)
        assert d_rational(1, ONE) == Fraction(5, 12)

    def test_D_with_pi(self):
        with mpmath.workprec(256):
            assert abs(D_denominator(1, ONE) - 5 * mpmath.pi / 12) < mpmath.mpf(2) ** -250

    def test_D_for_constant_poly(self):
        """P = 1: Q_{r−1} = 1/r e Q_r = 1/(r+1)"""
        for r in (1, 2, 3):
            s = r * r
            weight = RationalPoly.monomial(s - 1) * RationalPoly([1, -1]) ** (2 * r)
            expected = 2 * weight.definite_integral() / r**2 - 2 * (
                weight * RationalPoly([1, -1])
            ).definite_integral() / (r * (r + 1))
            assert d_rational(r, ONE) == expected

    def test_scaling(self, reference_poly):
        s = Fraction(-3, 7)
        for j in (0, 3, 8):
            assert i_hat(2, j, HALF, reference_poly * s) == s**2 * i_hat(2, j, HALF, reference_poly)
            assert k_hat(2, j, HALF, reference_poly * s) == s**2 * k_hat(2, j, HALF, reference_poly)

    def test_i_hat_bound(self, reference_poly):
        """|î(r,2j,½)| ≤ ‖P‖₁²(r²−1)!/(2j+1)·4(r+2j+1)!/(r²+r+2j+1)!"""
        from math import factorial

        r = 2
        for j in range(0, 12):
            bound = (
                reference_poly.norm1() ** 2
                * factorial(r * r - 1)
                / (2 * j + 1)
                * Fraction(4 * factorial(r + 2 * j + 1), factorial(r * r + r + 2 * j + 1))
            )
            assert abs(i_hat(r, 2 * j, HALF, reference_poly)) <= bound

    def test_degenerate_and_infeasible(self):
        """D_rat = 0 e D_rat < 0 levantam erros com exit code 1"""
        with patch("app.services.gap_series.d_rational_bilinear", return_value=Fraction(0)):
            with pytest.raises(DegenerateMollifierError) as exc_info:
                d_rational(2, ONE)
            assert exc_info.value.exit_code == 1
        with patch("app.services.gap_series.d_rational_bilinear", return_value=Fraction(-1, 3)):
            with pytest.raises(InfeasibleMollifierError):
                d_rational(2, ONE)


class TestSeriesEvaluation:
    """Testes de f_r"""

    @pytest.mark.slow
    def test_reference_partial_sum(self, reference_config):
        """f_2(2.9125π) = 0.999984579071399 a 10⁻¹² com J = 80 (sympy confere 0.99998457907139815)"""
        evaluation = f_r(Fraction("2.9125"), reference_config)
        with mpmath.workprec(256):
            assert abs(evaluation.value - mpmath.mpf(REFERENCE_F2)) < mpmath.mpf("1e-12")
            assert abs(evaluation.value - mpmath.mpf("0.9999845837")) < mpmath.mpf("1e-8")
            assert evaluation.tail.bound < mpmath.mpf("1e-100")
        assert len(evaluation.coefficients) == 80

    def test_domain_errors(self):
        config = GapConfig(r=1, poly=[1], J=10)
        with pytest.raises(DomainError):
            f_r(0, config)
        with pytest.raises(DomainError):
            f_r(Fraction(-1), config)
        with pytest.raises(UnsupportedParameterError):
            f_r(1, GapConfig(r=1, poly=[1], J=10, eta=Fraction(1, 3)))

    def test_zero_and_cubic_start(self):
        """f(0) = 0 e f(κ) ~ B_1 π² κ³ para κ pequeno"""
        coeffs, d_rat = series_coefficients(1, ONE, 10)
        normalized = normalized_coefficients(coeffs, d_rat)
        assert evaluate_normalized(normalized, 0, 128) == 0
        with mpmath.workprec(128):
            kappa = mpmath.mpf("1e-6")
            value = evaluate_normalized(normalized, kappa, 128)
            leading = mpmath.mpf(normalized[0].numerator) / normalized[0].denominator * mpmath.pi**2
            assert abs(value / kappa**3 - leading) < abs(leading) * mpmath.mpf("1e-9")

    def test_scaling_bit_identical(self, reference_poly):
        """f_r sob P e sob sP é idêntico bit a bit"""
        config = GapConfig(r=2, poly=reference_poly.coefficients, J=12)
        scaled = GapConfig(r=2, poly=(reference_poly * Fraction(-5, 3)).coefficients, J=12)
        a = f_r(Fraction(5, 2), config, with_tail=False).value
        b = f_r(Fraction(5, 2), scaled, with_tail=False).value
        assert a == b

    def test_precision_stability(self):
        low = f_r(Fraction(29, 10), GapConfig(r=2, poly=[1], J=20, precision=256), with_tail=False).value
        high = f_r(Fraction(29, 10), GapConfig(r=2, poly=[1], J=20, precision=320), with_tail=False).value
        with mpmath.workprec(320):
            assert abs(high - low) < mpmath.mpf(2) ** -248

    @pytest.mark.parametrize("r", [1, 2, 3])
    @pytest.mark.parametrize("kappa", [Fraction(1), Fraction(2), Fraction("2.9125")])
    def test_partial_sum_stability(self, r, kappa):
        """|S_{J₂} − S_{J₁}| ≤ cauda(J₁)"""
        short = f_r(kappa, GapConfig(r=r, poly=[1], J=20))
        longer = f_r(kappa, GapConfig(r=r, poly=[1], J=30), with_tail=False)
        with mpmath.workprec(256):
            assert abs(longer.value - short.value) <= short.tail.bound


class TestTailCertificate:
    """Testes da cota de cauda"""

    def test_reference_bounds(self, reference_config, reference_poly):
        """î < 10⁻¹⁸⁴, k̂ < 10⁻¹³⁰ e total < 10⁻¹⁰⁰ na configuração de referência"""
        tail = tail_certificate(reference_config, Fraction("2.9125"), d_rational(2, reference_poly))
        with mpmath.workprec(256):
            assert tail.i_bound < mpmath.mpf("1e-184")
            assert tail.k_bound < mpmath.mpf("1e-130")
            assert tail.bound < mpmath.mpf("1e-100")
        assert tail.method == "combined"
        assert tail.J == 80
        assert len(tail.chain) == 2

    def test_truncation_too_small(self):
        with pytest.raises(CertificateUnavailableError):
            tail_certificate(GapConfig(r=2, poly=[1], J=2), Fraction(3), d_rational(2, ONE))

    def test_eta_restriction(self):
        with pytest.raises(UnsupportedParameterError):
            tail_certificate(GapConfig(r=2, poly=[1], J=80, eta=Fraction(2, 5)), 1, Fraction(1))


class TestClosedForm:
    """Testes da redução r = 1, P = 1"""

    def test_first_coefficient(self):
        eta = Fraction(1, 3)
        expected = -(eta**3) / 72 + eta**4 / 24 - eta**5 / 24 + eta**6 / 72
        assert m_series_coeffs(1, eta, ONE, 2)[1] == expected
        assert closed_form_r1_engine_coeffs(eta, 1)[0] == expected

    def test_closed_form_polynomial(self):
        B0 = closed_form_r1(Fraction(1, 2), 1)[0]
        eta = Fraction(1, 2)
        assert B0 == -Fraction(10, 3) * eta**3 + 10 * eta**4 - 10 * eta**5 + Fraction(10, 3) * eta**6

    def test_even_coefficients_small(self):
        engine = m_series_coeffs(1, HALF, ONE, 12)
        closed = closed_form_r1_engine_coeffs(HALF, 6)
        assert [engine[2 * k - 1] for k in range(1, 7)] == closed

    @pytest.mark.slow
    @pytest.mark.parametrize("eta", [Fraction(1, 2), Fraction(1, 3), Fraction(2, 5), Fraction(1, 7)])
    def test_even_coefficients_k_upto_20(self, eta):
        engine = m_series_coeffs(1, eta, ONE, 40)
        closed = closed_form_r1_engine_coeffs(eta, 20)
        assert [engine[2 * k - 1] for k in range(1, 21)] == closed

    def test_real_part_uses_even_indices(self):
        coeffs = [Fraction(k) for k in range(1, 9)]
        assert real_part_coeffs(coeffs) == [-2, 4, -6, 8]

    def test_m_series_domain(self):
        with pytest.raises(DomainError):
            m_series_coeffs(1, HALF, ONE, 0)


class TestConstantTerm:
    """Testes da identidade de termo constante"""

    def test_kernel(self):
        assert all(ct_kernel(r) == 0 for r in range(1, 20))

    @pytest.mark.parametrize("r", [1, 2, 3])
    @pytest.mark.parametrize("eta", [Fraction(1, 2), Fraction(1, 3), Fraction(2, 5)])
    def test_constant_poly(self, r, eta):
        assert ct_consistency(r, ONE, eta) == 0

    def test_reference_poly(self, reference_poly):
        assert ct_consistency(2, reference_poly) == 0

    @pytest.mark.slow
    def test_random_polys(self):
        """Resíduo zero para r ∈ {1,2,3}, η ∈ {1/2,1/3,2/5} e 20 P aleatórios de grau ≤ 4"""
        rng = random.Random(2024)
        polys = [random_poly(rng) for _ in range(20)]
        for r in (1, 2, 3):
            for eta in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 5)):
                for P in polys:
                    assert ct_consistency(r, P, eta) == 0

    def test_constant_term_ratio(self, reference_poly):
        """O termo j = 0 de f_r é exatamente −c/π"""
        assert constant_term_ratio(1, ONE) == -1
        assert constant_term_ratio(2, reference_poly) == -1
        assert constant_term_ratio(3, ONE, Fraction(1, 3)) == -1


class TestSeriesBasis:
    """Testes da base bilinear"""

    def test_matches_direct_computation(self, reference_poly):
        basis = SeriesBasis(2, 3, 6)
        assert basis.coefficients(reference_poly.coefficients) == series_coefficients(2, reference_poly, 6)

    def test_shorter_vector(self):
        basis = SeriesBasis(1, 2, 4)
        assert basis.coefficients([Fraction(1)]) == series_coefficients(1, ONE, 4)


class TestReferenceTable:
    def test_entries(self):
        table = reference_lambda_table()
        assert (2, "1,-0.1,100,-0.2", Fraction("2.9125")) in table
        assert len(table) == 4
