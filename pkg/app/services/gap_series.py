"""
Série do critério: coeficientes î e k̂, denominador D, f_r(c) com certificado
de cauda, coeficientes da série m e a verificação de termo constante
"""

import time
from fractions import Fraction
from math import comb, factorial
from typing import List, Optional, Tuple

import mpmath

from app.exceptions import (
    CertificateUnavailableError,
    DegenerateMollifierError,
    DomainError,
    InfeasibleMollifierError,
    UnsupportedParameterError,
)
from app.models.gap_models import GapConfig, IIndex, KIndex, SeriesEvaluation, TailCertificate
from app.models.numeric import to_mpf
from app.services.cache_service import integral_cache
from app.services.moment_integrals import i_P_bilinear, k_P_bilinear
from app.services.rational_poly import RationalPoly, compute_Q
from app.utils.logger import log_performance, logger

HALF = Fraction(1, 2)
GUARD_BITS = 32


def _frac_to_mpf(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator


# Coeficientes î e k̂


def i_hat(r: int, j: int, eta: Fraction, P: RationalPoly) -> Fraction:
    """î(r, j, η) = −η⁻¹ i_P(r,r,j,r−1,r−1) + i_P(r+1,r,j,r,r−1) + i_P(r,r+1,j,r−1,r)"""
    return i_hat_bilinear(r, j, eta, P, P)


def i_hat_bilinear(r: int, j: int, eta: Fraction, P1: RationalPoly, P2: RationalPoly) -> Fraction:
    if j < 0:
        raise DomainError("j deve ser ≥ 0")
    eta = Fraction(eta)
    return (
        -i_P_bilinear(IIndex(r=r, n1=r, n2=r, n3=j, n4=r - 1, n5=r - 1), P1, P2) / eta
        + i_P_bilinear(IIndex(r=r, n1=r + 1, n2=r, n3=j, n4=r, n5=r - 1), P1, P2)
        + i_P_bilinear(IIndex(r=r, n1=r, n2=r + 1, n3=j, n4=r - 1, n5=r), P1, P2)
    )


def k_hat(r: int, j: int, eta: Fraction, P: RationalPoly) -> Fraction:
    """k̂(r, j, η) = −(r−1)! Σ_{n=−2}^{min(j, r−2)} (−1)ⁿ binom(r, n+2)/((j−n)!(r+n+1)!) k_P(j−n, r+n+2, r+n+1)"""
    return k_hat_bilinear(r, j, eta, P, P)


def k_hat_bilinear(r: int, j: int, eta: Fraction, P1: RationalPoly, P2: RationalPoly) -> Fraction:
    if j < 0:
        raise DomainError("j deve ser ≥ 0")
    eta = Fraction(eta)
    total = Fraction(0)
    for n in range(-2, min(j, r - 2) + 1):
        sign = -1 if n % 2 else 1
        weight = Fraction(sign * comb(r, n + 2), factorial(j - n) * factorial(r + n + 1))
        total += weight * k_P_bilinear(KIndex(r=r, n1=j - n, n2=r + n + 2, n3=r + n + 1, eta=eta), P1, P2)
    return -factorial(r - 1) * total


# Denominador


def d_rational_bilinear(r: int, eta: Fraction, P1: RationalPoly, P2: RationalPoly) -> Fraction:
    """Parte racional de D na forma bilinear (Q_{r−1} de P1; Q_{r−1}, Q_r de P2)"""
    s = r * r
    weight = RationalPoly.monomial(s - 1) * RationalPoly([1, -1]) ** (2 * r)
    Qa = compute_Q(P1, r - 1)
    first = (weight * Qa * compute_Q(P2, r - 1)).definite_integral()
    second = (weight * RationalPoly([1, -1]) * Qa * compute_Q(P2, r)).definite_integral()
    return first / Fraction(eta) - 2 * second


def d_rational(r: int, P: RationalPoly, eta: Fraction = HALF, check: bool = True) -> Fraction:
    """D/π = η⁻¹∫α^{r²−1}(1−α)^{2r}Q_{r−1}² − 2∫α^{r²−1}(1−α)^{2r+1}Q_{r−1}Q_r"""
    value = d_rational_bilinear(r, eta, P, P)
    if check:
        _check_denominator(value, r, P)
    return value


def _check_denominator(value: Fraction, r: int, P: RationalPoly) -> None:
    context = {"r": r, "poly": [str(c) for c in P], "d_rational": str(value)}
    if value == 0:
        raise DegenerateMollifierError("D = 0: mollifier degenerado", context)
    if value < 0:
        raise InfeasibleMollifierError("D < 0: mollifier inviável", context)


def D_denominator(r: int, P: RationalPoly, eta: Fraction = HALF, precision: int = 256) -> mpmath.mpf:
    """D = π·D_rat na precisão pedida"""
    value = d_rational(r, P, eta)
    with mpmath.workprec(precision):
        return mpmath.pi * _frac_to_mpf(value)


# Série f_r


def series_term(r: int, j: int, P: RationalPoly) -> Fraction:
    """A_j = (−1)^j 4^{−j} (r·î(r,2j,½)/(2j+1)! + k̂(r,2j,½)/(2j+1))"""
    return series_term_bilinear(r, j, P, P)


def series_term_bilinear(r: int, j: int, P1: RationalPoly, P2: RationalPoly) -> Fraction:
    bracket = r * i_hat_bilinear(r, 2 * j, HALF, P1, P2) / factorial(2 * j + 1) + k_hat_bilinear(
        r, 2 * j, HALF, P1, P2
    ) / (2 * j + 1)
    return (-1) ** j * bracket / 4**j


def series_coefficients(r: int, P: RationalPoly, J: int) -> Tuple[List[Fraction], Fraction]:
    """(A_1..A_J, D_rat) exatos para η = 1/2"""
    key = integral_cache.generate_key("series", r, J, P.key())

    def build() -> Tuple[List[Fraction], Fraction]:
        start = time.time()
        d_rat = d_rational(r, P)
        coeffs = [series_term(r, j, P) for j in range(1, J + 1)]
        log_performance("coeficientes da série", time.time() - start, {"r": r, "J": J, "grau": P.degree})
        return coeffs, d_rat

    return integral_cache.get_or_set(key, build)


def normalized_coefficients(coefficients: List[Fraction], d_rat: Fraction) -> List[Fraction]:
    """B_j = A_j/D_rat (invariante por P → sP)"""
    return [a / d_rat for a in coefficients]


def prepare_coefficients(normalized: List[Fraction], precision: int) -> List[mpmath.mpf]:
    with mpmath.workprec(precision + GUARD_BITS):
        return [_frac_to_mpf(b) for b in normalized]


def horner_value(prepared: List[mpmath.mpf], kappa, precision: int) -> mpmath.mpf:
    """Σ_j B_j κ^{2j+1} π^{2j} = κ·Σ_j B_j c^{2j}, c = κπ, por Horner em c²"""
    with mpmath.workprec(precision + GUARD_BITS):
        kappa = to_mpf(kappa)
        u = (kappa * mpmath.pi) ** 2
        acc = mpmath.mpf(0)
        for b in reversed(prepared):
            acc = (acc + b) * u
        result = kappa * acc
    with mpmath.workprec(precision):
        return +result


def evaluate_normalized(normalized: List[Fraction], kappa, precision: int) -> mpmath.mpf:
    return horner_value(prepare_coefficients(normalized, precision), kappa, precision)


def _as_kappa(kappa, precision: int) -> mpmath.mpf:
    with mpmath.workprec(precision):
        value = +to_mpf(kappa)
    if value <= 0:
        raise DomainError("κ deve ser positivo", {"kappa": str(kappa)})
    return value


def evaluate_series(
    config: GapConfig,
    kappa,
    coefficients: List[Fraction],
    d_rat: Fraction,
    with_tail: bool = True,
) -> SeriesEvaluation:
    """Avalia a série a partir de coeficientes exatos já calculados"""
    if config.eta != HALF:
        raise UnsupportedParameterError("f_r exige η = 1/2", {"eta": str(config.eta)})
    kappa = _as_kappa(kappa, config.precision)
    value = evaluate_normalized(normalized_coefficients(coefficients, d_rat), kappa, config.precision)
    tail = tail_certificate(config, kappa, d_rat) if with_tail else None
    return SeriesEvaluation(
        coefficients=coefficients,
        d_rational=d_rat,
        kappa=kappa,
        precision=config.precision,
        value=value,
        tail=tail,
    )


def f_r(kappa, config: GapConfig, with_tail: bool = True) -> SeriesEvaluation:
    """f_r(c) em c = κπ, com coeficientes exatos e certificado de cauda"""
    if config.eta != HALF:
        raise UnsupportedParameterError("f_r exige η = 1/2", {"eta": str(config.eta)})
    _as_kappa(kappa, config.precision)
    coeffs, d_rat = series_coefficients(config.r, config.P, config.J)
    return evaluate_series(config, kappa, coeffs, d_rat, with_tail)


def tail_certificate(config: GapConfig, kappa, d_rat: Optional[Fraction] = None) -> TailCertificate:
    """Cota rigorosa de |Σ_{j>J}| somando a parcela de î e a de k̂

    Parcela î: |î(r,2j,½)| ≤ ‖P‖₁²(r²−1)!/(2j+1)·4(r+2j+1)!/(r²+r+2j+1)!, o quociente
    fatorial fica ≤ 1/((2j)!(2J)^{r²+1}) e n! > √(2π)(n/e)^n dá
    4r(r²−1)!·c‖P‖₁²/(√(2π)D(2J)^{r²+1}) · e^{−2Jg}/(2g), g = log(2J) − log(c/2) − 1.

    Parcela k̂: k_P_bound termo a termo; para cada n a sequência c^{2j}/((2j+1)(2j−n)!)
    tem razão ≤ ρ_n = c²/((2J+3−n)(2J+4−n)) a partir de j = J+1, logo a cauda é
    majorada pelo primeiro termo sobre (1 − ρ_n).
    """
    r, J, P = config.r, config.J, config.P
    if config.eta != HALF:
        raise UnsupportedParameterError("certificado de cauda exige η = 1/2")
    if d_rat is None:
        _, d_rat = series_coefficients(r, P, J)
    norm2 = P.norm1() ** 2
    s = r * r
    chain: List[str] = []

    with mpmath.workprec(config.precision + GUARD_BITS):
        c = to_mpf(kappa) * mpmath.pi
        D = mpmath.pi * _frac_to_mpf(d_rat)
        g = mpmath.log(2 * J) - mpmath.log(c / 2) - 1
        if g <= 0:
            raise CertificateUnavailableError(
                f"J = {J} pequeno demais: log(2J) ≤ log(c/2) + 1",
                {"J": J, "c": mpmath.nstr(c, 20)},
            )
        if 2 * (J + 1) < r - 2:
            raise CertificateUnavailableError(f"J = {J} pequeno demais para r = {r}", {"J": J, "r": r})

        K_i = 4 * r * factorial(s - 1) * _frac_to_mpf(norm2)
        i_bound = K_i * c / (mpmath.sqrt(2 * mpmath.pi) * D * mpmath.mpf(2 * J) ** (s + 1))
        i_bound *= mpmath.exp(-2 * J * g) / (2 * g)
        chain.append(
            f"|cauda î| ≤ {4 * r * factorial(s - 1)}·c‖P‖₁²/(√(2π)·D·(2J)^{s + 1}) · e^(−2J·g)/(2g), "
            f"g = log(2J) − log(c/2) − 1 = {mpmath.nstr(g, 12)}"
        )

        k_bound = mpmath.mpf(0)
        for n in range(-2, r - 1):
            w = Fraction(
                factorial(r - 1) * comb(r, n + 2) * factorial(s - 1) * factorial(r + n + 2),
                factorial(r + n + 1) * r * factorial(s + r + n + 2),
            ) * norm2 / Fraction(2) ** n
            if w == 0:
                continue
            rho = c**2 / ((2 * J + 3 - n) * (2 * J + 4 - n))
            if rho >= 1:
                raise CertificateUnavailableError(
                    f"J = {J} pequeno demais para a cauda de k̂ (razão ≥ 1)", {"J": J, "n": n}
                )
            first = c ** (2 * J + 2) / ((2 * J + 3) * mpmath.factorial(2 * J + 2 - n))
            k_bound += _frac_to_mpf(w) * first / (1 - rho)
        k_bound *= c / D
        chain.append(
            "|cauda k̂| ≤ (c/D)·Σ_n w_n·t_n(J+1)/(1 − ρ_n), w_n de k_P_bound, "
            "t_n(j) = c^{2j}/((2j+1)(2j−n)!), ρ_n = c²/((2J+3−n)(2J+4−n))"
        )
        total = i_bound + k_bound

    logger.debug(f"cauda J={J}: î {mpmath.nstr(i_bound, 5)}, k̂ {mpmath.nstr(k_bound, 5)}")
    return TailCertificate(J=J, bound=total, method="combined", i_bound=i_bound, k_bound=k_bound, chain=chain)


# Série m e termo constante


def m_series_coeffs(r: int, eta: Fraction, P: RationalPoly, jmax: int) -> List[Fraction]:
    """Coeficiente de z^j, j = 1..jmax: η^{j+(r+1)²+1}(r·î(r,j,η)/j! + k̂(r,j,η))

    Só os j pares sobrevivem à parte real para α real: Re(z^{2k}) = (−1)^k(αL)^{2k}.
    """
    if jmax < 1:
        raise DomainError("jmax deve ser ≥ 1")
    eta = Fraction(eta)
    R = (r + 1) ** 2 + 1
    return [
        eta ** (j + R) * (r * i_hat(r, j, eta, P) / factorial(j) + k_hat(r, j, eta, P))
        for j in range(1, jmax + 1)
    ]


def real_part_coeffs(coeffs: List[Fraction]) -> List[Fraction]:
    """Coeficientes de (αL)^{2k} em Re Σ z^j c_j, k = 1..len/2"""
    return [(-1) ** k * coeffs[2 * k - 1] for k in range(1, len(coeffs) // 2 + 1)]


def closed_form_r1(eta: Fraction, kmax: int) -> List[Fraction]:
    """B_k(η), k = 0..kmax−1, da redução r = 1, P = 1:

    (−3η² + (2k+5)η³)/3 − (2k+5)/(k+3)·η^{2k+6} + η^{2k+7} + η²(1−η)^{2k+5}
    """
    eta = Fraction(eta)
    out = []
    for k in range(kmax):
        m = 2 * k + 5
        out.append(
            (-3 * eta**2 + m * eta**3) / 3
            - Fraction(m, k + 3) * eta ** (2 * k + 6)
            + eta ** (2 * k + 7)
            + eta**2 * (1 - eta) ** m
        )
    return out


def closed_form_r1_engine_coeffs(eta: Fraction, kmax: int) -> List[Fraction]:
    """Coeficientes de z^{2k}, k = 1..kmax, previstos pela forma fechada

    m ≈ 2Re(I) − J̄ com prefator C_1/π contra (6/π²)/(2π) dá coef_{2k} = B_{k−1}/(2·(2k+3)!).
    """
    B = closed_form_r1(eta, kmax)
    return [B[k - 1] / (2 * factorial(2 * k + 3)) for k in range(1, kmax + 1)]


def ct_consistency(r: int, P: RationalPoly, eta: Fraction = HALF) -> Fraction:
    """2·CT(I) − CT(J) com θ normalizado; deve ser exatamente 0"""
    eta = Fraction(eta)
    R = (r + 1) ** 2
    ip = lambda n1, n2, n4, n5: i_P_bilinear(IIndex(r=r, n1=n1, n2=n2, n3=0, n4=n4, n5=n5), P, P)  # noqa: E731
    kp = lambda n1, n2, n3: k_P_bilinear(KIndex(r=r, n1=n1, n2=n2, n3=n3, eta=eta), P, P)  # noqa: E731

    ct_i1 = r * (
        -(eta**R) * ip(r, r, r - 1, r - 1)
        + eta ** (R + 1) * (ip(r + 1, r, r, r - 1) + ip(r, r + 1, r - 1, r))
    )
    ct_i21 = eta ** (R + 1) * (kp(1, r + 1, r) - kp(2, r, r - 1) / 2)
    ct_i22 = -Fraction(r - 1, 2 * (r + 1)) * eta ** (R + 1) * kp(0, r + 2, r + 1)

    s = r * r
    weight = RationalPoly.monomial(s - 1) * RationalPoly([1, -1]) ** (2 * r)
    Qa, Qb = compute_Q(P, r - 1), compute_Q(P, r)
    ct_j = -(
        eta ** (R - 1) * (weight * Qa * Qa).definite_integral()
        - 2 * eta**R * (weight * RationalPoly([1, -1]) * Qa * Qb).definite_integral()
    )
    return 2 * (ct_i1 + ct_i21 + ct_i22) - ct_j


def ct_kernel(r: int) -> Fraction:
    """r/(r+1) − 1/2 − (r−1)/(2(r+1)), identicamente nulo"""
    return Fraction(r, r + 1) - HALF - Fraction(r - 1, 2 * (r + 1))


def constant_term_ratio(r: int, P: RationalPoly, eta: Fraction = HALF) -> Fraction:
    """(r·î(r,0,η) + k̂(r,0,η))·2η/D_rat; vale −1, ou seja, o termo j = 0 de f_r é −c/π"""
    eta = Fraction(eta)
    return (r * i_hat(r, 0, eta, P) + k_hat(r, 0, eta, P)) * 2 * eta / d_rational(r, P, eta, check=False)


class SeriesBasis:
    """Matrizes exatas das formas bilineares de A_j e D_rat para P de grau ≤ degree

    A_j(P) = pᵀ M_j p e D_rat(P) = pᵀ M_D p; o resultado coincide exatamente com o
    cálculo direto.
    """

    def __init__(self, r: int, degree: int, J: int):
        start = time.time()
        self.r, self.degree, self.J = r, degree, J
        basis = [RationalPoly.monomial(a) for a in range(degree + 1)]
        size = degree + 1
        self.term_matrices: List[List[List[Fraction]]] = [
            [[series_term_bilinear(r, j, basis[a], basis[b]) for b in range(size)] for a in range(size)]
            for j in range(1, J + 1)
        ]
        self.d_matrix = [[d_rational_bilinear(r, HALF, basis[a], basis[b]) for b in range(size)] for a in range(size)]
        log_performance("base bilinear", time.time() - start, {"r": r, "grau": degree, "J": J})

    @staticmethod
    def _quadratic(matrix: List[List[Fraction]], p: List[Fraction]) -> Fraction:
        return sum(
            (p[a] * p[b] * matrix[a][b] for a in range(len(p)) for b in range(len(p)) if p[a] and p[b]),
            Fraction(0),
        )

    def coefficients(self, poly: List[Fraction]) -> Tuple[List[Fraction], Fraction]:
        """(A_1..A_J, D_rat) exatos para os coeficientes `poly`"""
        p = list(poly) + [Fraction(0)] * (self.degree + 1 - len(poly))
        return [self._quadratic(m, p) for m in self.term_matrices], self._quadratic(self.d_matrix, p)


REFERENCE_POLY = "1,-0.1,100,-0.2"
# f_2(2.9125π) para REFERENCE_POLY; o valor citado 0.9999845837 difere em 4.6e-9
REFERENCE_F2 = "0.999984579071399"


def reference_lambda_table() -> List[Tuple[int, str, Fraction]]:
    """Cotas (r, P, λ mínimo) conferidas pelo verify-paper

    Para r = 1, P = 1 o valor de referência 2.68 fica acima do cruzamento certificado,
    2.67761765648; a linha guarda o valor do motor, 2.6776.
    """
    return [
        (1, "1", Fraction("2.6776")),
        (2, "1", Fraction("2.86")),
        (3, "1", Fraction("2.78")),
        (2, REFERENCE_POLY, Fraction("2.9125")),
    ]
