"""
Produtos de Euler a_r e constantes C_r com cota rigorosa da cauda
"""

import time
from fractions import Fraction
from math import comb, factorial
from typing import List, Optional

import mpmath
from cachetools import LRUCache, cached

from app.config import settings
from app.exceptions import ConfigurationError
from app.models.arith_models import EulerProductValue
from app.services.arith_kernel import get_sieve
from app.services.rational_poly import RationalPoly
from app.utils.logger import log_performance, logger

# guarda de bits acima da precisão pedida
GUARD_BITS = 32


def local_factor_poly(r: int) -> RationalPoly:
    """F_r(x) = (1 − x)^{(r−1)²} Σ_{k<r} binom(r−1, k)² x^k

    Forma fechada de (1 − x)^{r²} Σ_m binom(m + r − 1, m)² x^m, com x = 1/p.
    """
    numerator = RationalPoly([comb(r - 1, k) ** 2 for k in range(r)])
    return RationalPoly([1, -1]) ** ((r - 1) ** 2) * numerator


def local_factor_series(r: int, p: int, precision: Optional[int] = None) -> mpmath.mpf:
    """Fator local pela série original, somada até o termo ficar abaixo de 2^{−precision}"""
    precision = precision or settings.precision_bits
    with mpmath.workprec(precision + GUARD_BITS):
        x = mpmath.mpf(1) / p
        eps = mpmath.mpf(2) ** (-precision - 8)
        total, m = mpmath.mpf(0), 0
        while True:
            term = comb(m + r - 1, m) ** 2 * x**m
            total += term
            if term < eps and m > 2 * r:
                break
            m += 1
        return (1 - x) ** (r * r) * total


def log_series_coefficients(r: int, order: int) -> List[Fraction]:
    """Coeficientes b_k de log F_r(x) = Σ_{k≥1} b_k x^k até `order`

    log N(x) = Σ l_k x^k sai da recorrência k·l_k = k·n_k − Σ_{i<k} i·l_i·n_{k−i}; o fator
    (1 − x)^{(r−1)²} soma −(r−1)²/k a cada b_k, fora da recorrência.
    """
    n = [Fraction(comb(r - 1, k) ** 2) for k in range(r)]
    log_n = [Fraction(0)] * (order + 1)
    for k in range(1, order + 1):
        acc = k * (n[k] if k < len(n) else 0)
        for i in range(1, k):
            if k - i < len(n):
                acc -= i * log_n[i] * n[k - i]
        log_n[k] = Fraction(acc, k)
    return [Fraction(0)] + [log_n[k] - Fraction((r - 1) ** 2, k) for k in range(1, order + 1)]


def reciprocal_root_bound(r: int) -> int:
    """Cota de Fujiwara para 1/|ρ| sobre as raízes ρ de Σ binom(r−1, k)² x^k"""
    degree = r - 1
    if degree == 0:
        return 0
    coeffs = [comb(degree, k) ** 2 for k in range(degree + 1)]
    bound = Fraction(0)
    for k in range(1, degree + 1):
        a = Fraction(coeffs[k]) / (2 if k == degree else 1)
        # raiz inteira superior de a^{1/k}
        root = 1
        while root**k < a:
            root += 1
        bound = max(bound, Fraction(root))
    return int(2 * bound)


def _partial_tail(r: int, cutoff: int) -> Fraction:
    """L = 2K/(N − 1) com |F_r(1/p) − 1| ≤ K p^{−2} para p > N"""
    coeffs = local_factor_poly(r).coefficients
    K = sum(
        (abs(c) * Fraction(1, (cutoff + 1) ** (k - 2)) for k, c in enumerate(coeffs) if k >= 2),
        Fraction(0),
    )
    if K * Fraction(1, (cutoff + 1) ** 2) > Fraction(1, 2):
        raise ConfigurationError(f"cutoff {cutoff} pequeno demais para a cota de cauda de a_{r}")
    return 2 * K / (cutoff - 1)


def _explicit_product(r: int, cutoff: int, wp: int) -> mpmath.mpf:
    F = local_factor_poly(r)
    primes = get_sieve(cutoff).primes_upto(cutoff).tolist()
    with mpmath.workprec(wp):
        return mpmath.fprod(F(mpmath.mpf(1) / p) for p in primes)


def _prime_power_sums(cutoff: int, order: int, bits: int) -> List[int]:
    """S_N(k)·2^bits em ponto fixo (inteiros), k = 0..order; erro < π(N) unidades"""
    sums = [0] * (order + 1)
    scale = 1 << bits
    for p in get_sieve(cutoff).primes_upto(cutoff).tolist():
        pk = p
        for k in range(2, order + 1):
            pk *= p
            sums[k] += scale // pk
    return sums


def a_r(
    r: int,
    prime_cutoff: Optional[int] = None,
    precision: Optional[int] = None,
    method: Optional[str] = None,
) -> EulerProductValue:
    """a_r = ∏_p (1 − 1/p)^{r²} Σ_m binom(m + r − 1, m)² p^{−m}

    `partial`: produto até o cutoff, cauda por K_r Σ_{p>N} p^{−2} < K_r/(N − 1).
    `accelerated`: soma ainda Σ_k b_k P_N(k), com P_N(k) = Σ_{p>N} p^{−k} vindo da
    função zeta prima, e majora o resto pela cota de raízes do fator local.
    """
    return _a_r_cached(
        r,
        prime_cutoff or settings.euler_cutoff,
        precision or settings.precision_bits,
        method or settings.euler_method,
    )


@cached(LRUCache(maxsize=64))
def _a_r_cached(r: int, cutoff: int, precision: int, method: str) -> EulerProductValue:
    if precision < 64:
        raise ConfigurationError("precisão deve ser ≥ 64 bits", {"precision": precision})
    if r < 1:
        raise ConfigurationError("r deve ser ≥ 1")
    if cutoff < 2:
        raise ConfigurationError("cutoff deve ser ≥ 2")
    start = time.time()

    if r == 1:
        # fator local identicamente 1
        result = EulerProductValue(
            r=1, cutoff=cutoff, method=method, precision=precision, value=mpmath.mpf(1), tail_bound=mpmath.mpf(0)
        )
    elif method == "accelerated" and cutoff > 2 * reciprocal_root_bound(r):
        result = _accelerated(r, cutoff, precision)
    else:
        if method == "accelerated":
            logger.warning(f"cutoff {cutoff} abaixo da cota de raízes; a_{r} usa o produto parcial")
        result = _partial(r, cutoff, precision)

    log_performance("a_r", time.time() - start, {"r": r, "cutoff": cutoff, "method": result.method})
    return result


def _partial(r: int, cutoff: int, precision: int) -> EulerProductValue:
    wp = precision + GUARD_BITS
    L = _partial_tail(r, cutoff)
    with mpmath.workprec(wp):
        value = _explicit_product(r, cutoff, wp)
        tail = value * (mpmath.expm1(mpmath.mpf(L.numerator) / L.denominator) + mpmath.mpf(2) ** (-precision + 4))
    return EulerProductValue(r=r, cutoff=cutoff, method="partial", precision=precision, value=value, tail_bound=tail)


def _accelerated(r: int, cutoff: int, precision: int) -> EulerProductValue:
    R = reciprocal_root_bound(r)
    q = Fraction(R, cutoff)
    C = (r - 1) ** 2 + (r - 1)
    target = Fraction(1, 2 ** (precision + 8))

    # menor K com C·N·q^{K+1}/(K(K+1)(1 − q)) < 2^{−precision−8}
    K = 2
    while C * cutoff * q ** (K + 1) / (K * (K + 1) * (1 - q)) >= target:
        K += 1
    remainder = C * cutoff * q ** (K + 1) / (K * (K + 1) * (1 - q))

    guard = GUARD_BITS + K * max(R, 1).bit_length() + 24
    wp = precision + guard
    b = log_series_coefficients(r, K)
    sums = _prime_power_sums(cutoff, K, wp)
    with mpmath.workprec(wp):
        explicit = _explicit_product(r, cutoff, wp)
        tail_log = mpmath.mpf(0)
        for k in range(2, K + 1):
            if b[k]:
                P_tail = mpmath.primezeta(k) - mpmath.ldexp(sums[k], -wp)
                tail_log += mpmath.mpf(b[k].numerator) / b[k].denominator * P_tail
        value = explicit * mpmath.exp(tail_log)
        rem = mpmath.mpf(remainder.numerator) / remainder.denominator
        tail = value * (mpmath.expm1(rem) + mpmath.mpf(2) ** (-precision + 4))
    logger.debug(f"a_{r} acelerado: K={K}, R={R}, bits={wp}")
    return EulerProductValue(
        r=r, cutoff=cutoff, method="accelerated", precision=precision, value=value, tail_bound=tail
    )


def C_r(r: int, precision: Optional[int] = None, prime_cutoff: Optional[int] = None) -> mpmath.mpf:
    """C_r = a_{r+1}/((r² − 1)!((r − 1)!)²)"""
    product = a_r(r + 1, prime_cutoff, precision)
    with mpmath.workprec(product.precision + GUARD_BITS):
        return product.value / (factorial(r * r - 1) * factorial(r - 1) ** 2)
