"""
Fixtures compartilhadas dos testes
"""

import random
from fractions import Fraction

import pytest

from app.models.gap_models import GapConfig
from app.services.rational_poly import RationalPoly, parse_poly_spec

REFERENCE_SPEC = "1,-0.1,100,-0.2"


@pytest.fixture
def reference_poly() -> RationalPoly:
    """P(x) = 1 − 0.1x + 100x² − 0.2x³"""
    return parse_poly_spec(REFERENCE_SPEC)


@pytest.fixture
def reference_config(reference_poly) -> GapConfig:
    return GapConfig(r=2, poly=reference_poly.coefficients, J=80, precision=256)


def random_poly(rng: random.Random, max_degree: int = 4, bound: int = 20) -> RationalPoly:
    """Polinômio racional aleatório não nulo"""
    degree = rng.randint(0, max_degree)
    coeffs = [Fraction(rng.randint(-bound, bound), rng.randint(1, 9)) for _ in range(degree + 1)]
    if not any(coeffs):
        coeffs[0] = Fraction(1)
    return RationalPoly(coeffs)
