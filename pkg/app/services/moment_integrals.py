"""
Integrais de estrutura i_P e k_P (exatas) e suas cotas grosseiras
"""

from fractions import Fraction
from math import factorial
from typing import Optional

from cachetools import LRUCache, cached
from scipy import integrate

from app.exceptions import UnsupportedParameterError
from app.models.gap_models import IIndex, KIndex
from app.services.cache_service import integral_cache
from app.services.rational_poly import (
    BivariatePoly,
    RationalPoly,
    compute_Q,
    triangle_monomial,
)


def i_P(idx: IIndex, P: RationalPoly) -> Fraction:
    """∫₀¹∫₀^{1−x} x^{r²−1}(1−x)^{n1}(1−y−x)^{n2} y^{n3} Q_{n4}(x) Q_{n5}(x+y) dy dx"""
    return i_P_bilinear(idx, P, P)


def k_P(idx: KIndex, P: RationalPoly) -> Fraction:
    """∫₀¹∫₀^{1−x} x^{r−1}(η⁻¹−x)^{n1} y^{r²−1}(1−y)^{n2} P(x+y) Q_{n3}(y) dy dx"""
    return k_P_bilinear(idx, P, P)


def i_P_bilinear(idx: IIndex, P1: RationalPoly, P2: RationalPoly) -> Fraction:
    """Forma bilinear de i_P: Q_{n4} vem de P1 e Q_{n5} de P2"""
    key = integral_cache.generate_key("i_P", *idx.astuple(), P1.key(), P2.key())
    return integral_cache.get_or_set(key, lambda: _i_P(idx, P1, P2))


def _i_P(idx: IIndex, P1: RationalPoly, P2: RationalPoly) -> Fraction:
    # y^{n3} fica fora do integrando: só desloca a potência de y
    base = _i_integrand(idx.r, idx.n1, idx.n2, idx.n4, idx.n5, P1, P2)
    return sum((c * triangle_monomial(a, b + idx.n3) for (a, b), c in base.items()), Fraction(0))


def _i_integrand(r: int, n1: int, n2: int, n4: int, n5: int, P1: RationalPoly, P2: RationalPoly) -> BivariatePoly:
    key = integral_cache.generate_key("i_integrand", r, n1, n2, n4, n5, P1.key(), P2.key())

    def build() -> BivariatePoly:
        x_part = RationalPoly.monomial(r * r - 1) * RationalPoly([1, -1]) ** n1 * compute_Q(P1, n4)
        corner = BivariatePoly({(0, 0): 1, (1, 0): -1, (0, 1): -1}) ** n2
        return BivariatePoly.from_x(x_part) * corner * BivariatePoly.from_sum(compute_Q(P2, n5))

    return integral_cache.get_or_set(key, build)


def k_P_bilinear(idx: KIndex, P1: RationalPoly, P2: RationalPoly) -> Fraction:
    """Forma bilinear de k_P: P(x+y) vem de P1 e Q_{n3}(y) de P2"""
    key = integral_cache.generate_key("k_P", *idx.astuple(), P1.key(), P2.key())
    return integral_cache.get_or_set(key, lambda: _k_P(idx, P1, P2))


def _k_P(idx: KIndex, P1: RationalPoly, P2: RationalPoly) -> Fraction:
    # integra primeiro em y (polinômio em x), depois contra x^{r−1}(η⁻¹ − x)^{n1}
    g = _k_inner(idx.r, idx.n2, idx.n3, P1, P2)
    h = 1 / idx.eta
    return sum((c * weighted_moment(idx.r - 1 + m, idx.n1, h) for m, c in enumerate(g) if c), Fraction(0))


def _k_inner(r: int, n2: int, n3: int, P1: RationalPoly, P2: RationalPoly) -> RationalPoly:
    """x ↦ ∫₀^{1−x} y^{r²−1}(1−y)^{n2} P1(x+y) Q_{n3}(y) dy"""
    key = integral_cache.generate_key("k_inner", r, n2, n3, P1.key(), P2.key())

    def build() -> RationalPoly:
        y_part = RationalPoly.monomial(r * r - 1) * RationalPoly([1, -1]) ** n2 * compute_Q(P2, n3)
        return (BivariatePoly.from_y(y_part) * BivariatePoly.from_sum(P1)).integrate_y()

    return integral_cache.get_or_set(key, build)


@cached(LRUCache(maxsize=200_000))
def weighted_moment(a: int, n: int, h: Fraction) -> Fraction:
    """μ(a, n) = ∫₀¹ x^a (h − x)^n dx

    Integração por partes: μ(a, n) = −(h−1)^{n+1}/(n+1) + a/(n+1)·μ(a−1, n+1).
    """
    h = Fraction(h)
    top = n + a + 1
    value = (h**top - (h - 1) ** top) / top
    for i in range(1, a + 1):
        m = n + a - i
        value = -((h - 1) ** (m + 1)) / (m + 1) + Fraction(i, m + 1) * value
    return value


def i_P_bound(idx: IIndex, P: RationalPoly) -> Fraction:
    """‖P‖₁²(r²−1)!(n1+n3+1)!/((n1+n3+r²+1)!(n3+1)) ≥ |i_P(idx, P)|"""
    r2 = idx.r * idx.r
    s = idx.n1 + idx.n3
    return P.norm1() ** 2 * Fraction(factorial(r2 - 1) * factorial(s + 1), factorial(s + r2 + 1) * (idx.n3 + 1))


def k_P_bound(idx: KIndex, P: RationalPoly) -> Fraction:
    """‖P‖₁²·2^{n1}(r²−1)!·n2!/(r·(r²+n2)!) ≥ |k_P(idx, P)|

    Usa η⁻¹ − x ≤ 2, |P|, |Q_{n3}| ≤ ‖P‖₁ e amplia o triângulo ao quadrado unitário.
    """
    if idx.eta != Fraction(1, 2):
        raise UnsupportedParameterError("k_P_bound exige η = 1/2", {"eta": str(idx.eta)})
    r2 = idx.r * idx.r
    return P.norm1() ** 2 * Fraction(2**idx.n1 * factorial(r2 - 1) * factorial(idx.n2), idx.r * factorial(r2 + idx.n2))


# Oráculos de quadratura (conferência)


def _float_poly(P: RationalPoly):
    coeffs = [float(c) for c in P]
    return lambda t: sum(c * t**k for k, c in enumerate(coeffs))


def i_P_numeric(idx: IIndex, P: RationalPoly) -> float:
    Q4, Q5 = _float_poly(compute_Q(P, idx.n4)), _float_poly(compute_Q(P, idx.n5))
    r2 = idx.r * idx.r

    def integrand(y: float, x: float) -> float:
        return x ** (r2 - 1) * (1 - x) ** idx.n1 * (1 - y - x) ** idx.n2 * y**idx.n3 * Q4(x) * Q5(x + y)

    value, _ = integrate.dblquad(integrand, 0.0, 1.0, 0.0, lambda x: 1.0 - x, epsabs=1e-14, epsrel=1e-13)
    return value


def k_P_numeric(idx: KIndex, P: RationalPoly, eta: Optional[Fraction] = None) -> float:
    Pf, Q3 = _float_poly(P), _float_poly(compute_Q(P, idx.n3))
    h = float(1 / (eta or idx.eta))
    r2 = idx.r * idx.r

    def integrand(y: float, x: float) -> float:
        return x ** (idx.r - 1) * (h - x) ** idx.n1 * y ** (r2 - 1) * (1 - y) ** idx.n2 * Pf(x + y) * Q3(y)

    value, _ = integrate.dblquad(integrand, 0.0, 1.0, 0.0, lambda x: 1.0 - x, epsabs=1e-14, epsrel=1e-13)
    return value
