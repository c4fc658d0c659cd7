"""
Testes do laboratório de lemas
"""

import math
from fractions import Fraction

import mpmath
import pytest

from app.exceptions import CapacityError, PreconditionError
from app.models.lemma_models import CSV_HEADER, ComparisonRow
from app.services.arith_kernel import H_poly
from app.services.lemma_lab import (
    EXACT_GROWTH_LIMIT,
    GROWTH_LIMIT,
    check_divisor_mean,
    check_f_mean,
    check_lemma6,
    check_mertens,
    check_prime_sum,
    check_sigma_mean,
    growth_lemma9,
    rows_to_csv,
)
from app.services.rational_poly import RationalPoly


class TestLemma6:
    """Identidade da série geradora de d_r(p^j)"""

    def test_small_case(self):
        """r = 2, λ = 1: (1 − x)² Σ_{j≥1}(j+1)x^j = 2x − x²"""
        assert H_poly(1, 2) * 2 == RationalPoly([2, -1])
        assert check_lemma6(2, 1, 10).is_zero()

    @pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
    @pytest.mark.parametrize("lam", [1, 2, 3, 4])
    def test_residual_is_zero(self, r, lam):
        assert check_lemma6(r, lam, lam + r + 6).is_zero()

    def test_order_too_small(self):
        with pytest.raises(PreconditionError):
            check_lemma6(3, 2, 4)

    @pytest.mark.slow
    def test_full_grid(self):
        """r ≤ 6, λ ≤ 10 na ordem 200"""
        failures = [(r, lam) for r in range(1, 7) for lam in range(1, 11) if not check_lemma6(r, lam, 200).is_zero()]
        assert failures == []


class TestDivisorMeans:
    """Médias de d_r e de σ_r"""

    def test_harmonic_constant(self):
        """r = 1: Σ_{h≤x} 1/h − log x → γ"""
        row = check_divisor_mean(1, 1, 100_000)
        assert abs(float(row.deviation.real) - float(mpmath.euler)) < 1e-4

    def test_row_fields(self):
        row = check_divisor_mean(2, 6, 1000)
        assert row.x == 1000
        assert row.is_real
        assert row.ratio is not None

    @pytest.mark.slow
    def test_ratio_corridor_shrinks(self):
        """|razão − 1| em 10⁶ menor que em 10⁴"""
        small = check_divisor_mean(2, 1, 10_000)
        large = check_divisor_mean(2, 1, 1_000_000)
        assert abs(float(large.ratio.real) - 1) < abs(float(small.ratio.real) - 1)

    @pytest.mark.slow
    def test_sigma_mean_corridor_shrinks(self):
        small = check_sigma_mean(1, 10_000)
        large = check_sigma_mean(1, 1_000_000)
        assert abs(float(large.ratio.real) - 1) < abs(float(small.ratio.real) - 1)

    @pytest.mark.slow
    def test_sigma_mean_r2_corridor(self):
        row = check_sigma_mean(2, 1_000_000)
        assert 0.8 <= float(row.ratio.real) <= 1.2

    def test_sigma_mean_theta_range(self):
        with pytest.raises(PreconditionError):
            check_sigma_mean(1, 1000, theta=1)

    def test_sigma_mean_with_cutoff(self):
        row = check_sigma_mean(2, 10_000, g=RationalPoly([1, -1]), theta=Fraction(1, 2))
        assert "theta=1/2" in row.label
        assert float(row.lhs.real) > 0


class TestPrimeSums:
    """Somas sobre primos"""

    def test_mertens_window(self):
        row = check_mertens(100_000)
        assert row.label == "mertens"
        assert -1.5 <= float(row.deviation.real) <= -1.1

    def test_oscillating_sum_is_complex(self):
        row = check_prime_sum(2, 0.5, 0, 10_000)
        assert not row.is_real
        fields = row.csv_fields()
        assert float(fields["deviation"]) >= 0

    @pytest.mark.slow
    def test_w2_corridor(self):
        """w = 2, α = 0: razão em [0.8, 1.2] em 10⁶ e mais perto de 1 que em 10⁴"""
        small = check_prime_sum(2, 0.0, 0, 10_000)
        large = check_prime_sum(2, 0.0, 0, 1_000_000)
        assert 0.8 <= float(large.ratio.real) <= 1.2
        assert abs(float(large.ratio.real) - 1) < abs(float(small.ratio.real) - 1)

    @pytest.mark.slow
    def test_small_alpha_tracks_main_term(self):
        """α = 0.001 em 10⁶: a razão complexa segue a de α = 0 a 10⁻²"""
        still = check_prime_sum(2, 0.0, 0, 1_000_000)
        moving = check_prime_sum(2, 0.001, 0, 1_000_000)
        assert not moving.is_real
        assert abs(complex(moving.ratio) - complex(still.ratio)) < 1e-2
        assert abs(complex(moving.ratio) - 1) < 0.1

    def test_w_must_be_positive(self):
        with pytest.raises(PreconditionError):
            check_prime_sum(0, 0.0, 0, 1000)


class TestFMean:
    """Média de d_r(mk)f(nk)"""

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            check_f_mean(2, 8, 4, 1.0, 1000)
        with pytest.raises(PreconditionError):
            check_f_mean(2, 9, 6, 1.0, 1000)

    def test_capacity(self):
        with pytest.raises(CapacityError) as exc_info:
            check_f_mean(2, 6, 6, 1.0, 10**8)
        assert exc_info.value.exit_code == 2

    def test_row(self):
        row = check_f_mean(2, 6, 3, 1.0, 2000)
        assert row.x == 2000
        assert "m=6 n=3" in row.label

    @pytest.mark.slow
    def test_harmonic_case(self):
        """r = 1, m = n = 1, α = 0: Σ 1/k contra log x"""
        row = check_f_mean(1, 1, 1, 0.0, 1_000_000)
        assert abs(float(row.ratio.real) - 1) < 0.05
        assert abs(float(row.deviation.real) - float(mpmath.euler)) < 1e-4

    @pytest.mark.slow
    def test_oscillating_r2(self):
        x = 1_000_000
        row = check_f_mean(2, 2, 1, 0.5 / math.log(x), x)
        assert abs(complex(row.ratio) - 1) < 0.15


class TestGrowth:
    """Crescimento normalizado da soma dupla"""

    def test_deterministic(self):
        first = growth_lemma9(1, 1, [50, 20, 100])
        second = growth_lemma9(1, 1, [100, 50, 20])
        assert [row.x for row in first] == [20, 50, 100]
        assert [row.lhs for row in first] == [row.lhs for row in second]

    def test_normalization(self):
        rows = growth_lemma9(2, 2, [200])
        assert float(rows[0].main_term.real) == pytest.approx(math.log(200) ** 6)

    def test_limit(self):
        with pytest.raises(CapacityError):
            growth_lemma9(1, 1, [GROWTH_LIMIT + 1])

    def test_exact_matches_float(self):
        exact = growth_lemma9(1, 0, [60, 120], exact=True)
        approx = growth_lemma9(1, 0, [60, 120])
        for a, b in zip(exact, approx):
            assert a.x == b.x
            assert float(a.lhs.real) == pytest.approx(float(b.lhs.real), rel=1e-12)

    def test_exact_preconditions(self):
        with pytest.raises(PreconditionError):
            growth_lemma9(1, 1, [50], exact=True)
        with pytest.raises(CapacityError):
            growth_lemma9(1, 0, [EXACT_GROWTH_LIMIT + 1], exact=True)

    @pytest.mark.slow
    def test_ratio_bounded(self):
        """Razões normalizadas crescem no máximo por um fator log entre 250 e 4000"""
        xs = [250, 500, 1000, 2000, 4000]
        ratios = [float(row.ratio.real) for row in growth_lemma9(1, 0, xs)]
        assert all(math.isfinite(q) and q > 0 for q in ratios)
        for x, q in zip(xs, ratios):
            assert q <= 2 * ratios[0] * math.log(x) / math.log(xs[0])


class TestCsv:
    def test_header_and_rows(self):
        rows = [check_divisor_mean(1, 1, 100), check_divisor_mean(1, 1, 1000)]
        lines = rows_to_csv(rows).strip().split("\n")
        assert lines[0] == ",".join(CSV_HEADER)
        assert len(lines) == 3
        assert lines[1].startswith("100,")

    def test_zero_main_term(self):
        row = ComparisonRow(x=1, lhs=1.0, main_term=0.0)
        assert row.ratio is None
        assert row.csv_fields()["ratio_re"] == "nan"
