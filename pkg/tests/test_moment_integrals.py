"""
Testes das integrais de estrutura i_P e k_P
"""

import random
from fractions import Fraction

import pytest

from app.exceptions import UnsupportedParameterError
from app.models.gap_models import IIndex, KIndex
from app.services.moment_integrals import (
    i_P,
    i_P_bound,
    i_P_numeric,
    k_P,
    k_P_bound,
    k_P_numeric,
    weighted_moment,
)
from app.services.rational_poly import RationalPoly
from tests.conftest import random_poly

ONE = RationalPoly([1])


def _random_iindex(rng: random.Random) -> IIndex:
    r = rng.randint(1, 3)
    return IIndex(
        r=r,
        n1=rng.randint(0, 4),
        n2=rng.randint(0, 4),
        n3=rng.randint(0, 6),
        n4=rng.randint(0, 3),
        n5=rng.randint(0, 3),
    )


def _random_kindex(rng: random.Random) -> KIndex:
    return KIndex(r=rng.randint(1, 3), n1=rng.randint(0, 6), n2=rng.randint(0, 4), n3=rng.randint(0, 3))


class TestIP:
    """Testes de i_P"""

    def test_examples(self):
        assert i_P(IIndex(r=1, n1=0, n2=0, n3=0, n4=0, n5=0), ONE) == Fraction(1, 2)
        assert i_P(IIndex(r=1, n1=1, n2=1, n3=0, n4=0, n5=0), ONE) == Fraction(1, 8)
        assert i_P(IIndex(r=2, n1=0, n2=0, n3=0, n4=0, n5=0), ONE) == Fraction(1, 20)

    def test_scaling(self, reference_poly):
        """i_{sP} = s²·i_P"""
        idx = IIndex(r=2, n1=2, n2=3, n3=4, n4=1, n5=2)
        s = Fraction(-7, 3)
        assert i_P(idx, reference_poly * s) == s**2 * i_P(idx, reference_poly)

    def test_bound(self):
        """|i_P| ≤ i_P_bound em índices aleatórios"""
        rng = random.Random(3)
        assert i_P_bound(IIndex(r=1, n1=0, n2=0, n3=0, n4=0, n5=0), ONE) == Fraction(1, 2)
        for _ in range(60):
            idx, P = _random_iindex(rng), random_poly(rng)
            assert abs(i_P(idx, P)) <= i_P_bound(idx, P)

    def test_bound_scaling(self, reference_poly):
        idx = IIndex(r=2, n1=1, n2=2, n3=3, n4=1, n5=1)
        assert i_P_bound(idx, reference_poly * 3) == 9 * i_P_bound(idx, reference_poly)

    @pytest.mark.slow
    def test_quadrature_oracle(self):
        """Valor exato contra dblquad (coeficientes em [−100, 100], grau ≤ 4)"""
        rng = random.Random(17)
        for _ in range(40):
            idx, P = _random_iindex(rng), random_poly(rng, bound=100)
            exact = float(i_P(idx, P))
            assert abs(i_P_numeric(idx, P) - exact) <= 1e-12 * max(1.0, abs(exact))


class TestKP:
    """Testes de k_P"""

    def test_examples(self):
        assert k_P(KIndex(r=1, n1=0, n2=0, n3=0), ONE) == Fraction(1, 2)
        assert k_P(KIndex(r=1, n1=2, n2=1, n3=0), ONE) == Fraction(9, 10)
        assert k_P(KIndex(r=1, n1=1, n2=2, n3=1), ONE) == Fraction(1, 5)

    def test_scaling(self, reference_poly):
        idx = KIndex(r=2, n1=5, n2=3, n3=1)
        s = Fraction(5, 2)
        assert k_P(idx, reference_poly * s) == s**2 * k_P(idx, reference_poly)

    def test_bound(self):
        rng = random.Random(4)
        assert k_P_bound(KIndex(r=1, n1=0, n2=0, n3=0), ONE) == 1
        assert k_P_bound(KIndex(r=1, n1=2, n2=1, n3=0), ONE) == 2
        for _ in range(60):
            idx, P = _random_kindex(rng), random_poly(rng)
            assert abs(k_P(idx, P)) <= k_P_bound(idx, P)

    def test_bound_requires_half(self):
        with pytest.raises(UnsupportedParameterError):
            k_P_bound(KIndex(r=1, n1=0, n2=0, n3=0, eta=Fraction(1, 3)), ONE)

    def test_other_eta(self):
        """η = 1/3 muda apenas o peso (3 − x)^{n1}"""
        value = k_P(KIndex(r=1, n1=1, n2=0, n3=0, eta=Fraction(1, 3)), ONE)
        # ∫₀¹(3 − x)(1 − x)dx = 3 − 3/2 − 1/2 + 1/3
        assert value == Fraction(4, 3)

    @pytest.mark.slow
    def test_quadrature_oracle(self):
        rng = random.Random(23)
        for _ in range(40):
            idx, P = _random_kindex(rng), random_poly(rng, bound=100)
            exact = float(k_P(idx, P))
            assert abs(k_P_numeric(idx, P) - exact) <= 1e-12 * max(1.0, abs(exact))


class TestWeightedMoment:
    """Testes de μ(a, n) = ∫₀¹ x^a (h − x)^n dx"""

    def test_against_expansion(self):
        h = Fraction(2)
        for a in range(6):
            for n in range(6):
                poly = RationalPoly.monomial(a) * RationalPoly([h, -1]) ** n
                assert weighted_moment(a, n, h) == poly.definite_integral()
