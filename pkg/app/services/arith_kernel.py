"""
Núcleo aritmético exato: crivo de menor fator primo, d_r, φ, μ, σ_r, H_{λ,r},
R_k, k_p, f(k) e C_j(k), com oráculos de força bruta
"""

import time
from fractions import Fraction
from math import comb, isqrt
from typing import Callable, List, Optional, Tuple, Union

import mpmath
import numpy as np
from cachetools import LRUCache, cached

from app.config import settings
from app.exceptions import CapacityError, DomainError
from app.models.arith_models import FactoredInteger
from app.services.rational_poly import RationalPoly
from app.utils.logger import log_performance

IntLike = Union[int, FactoredInteger]


class PrimeSieve:
    """Tabelas imutáveis do crivo até `limit`

    Attributes:
        limit: maior inteiro coberto
        spf: spf[n] = menor fator primo de n (spf[0] = spf[1] = 0)
        primes: primos ≤ limit em ordem crescente
    """

    def __init__(self, limit: int):
        start = time.time()
        self.limit = max(limit, 2)
        spf = np.zeros(self.limit + 1, dtype=np.int32)
        for p in range(2, isqrt(self.limit) + 1):
            if spf[p] == 0:
                spf[p] = p
                block = spf[p * p :: p]
                block[block == 0] = p
        rest = np.nonzero(spf == 0)[0]
        rest = rest[rest >= 2]
        spf[rest] = rest
        self.spf = spf
        self.spf.setflags(write=False)
        candidates = np.arange(2, self.limit + 1, dtype=np.int32)
        self.primes = (np.nonzero(spf[2:] == candidates)[0] + 2).astype(np.int64)
        self.primes.setflags(write=False)
        log_performance("crivo", time.time() - start, {"limit": self.limit, "primes": len(self.primes)})

    def factorize(self, n: int) -> List[Tuple[int, int]]:
        factors: List[Tuple[int, int]] = []
        while n > 1:
            p = int(self.spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors.append((p, e))
        return factors

    def primes_upto(self, x: int) -> np.ndarray:
        return self.primes[: np.searchsorted(self.primes, x, side="right")]

    def multiplicative_table(
        self, x: int, local: Callable[[int, int], object], dtype=np.float64
    ) -> np.ndarray:
        """Tabela t[n] = f(n) para 1 ≤ n ≤ x de uma função multiplicativa

        `local(p, k)` devolve f(p^k). Para dtype inteiro os valores locais devem ser
        inteiros não nulos (a troca de f(p^{k−1}) por f(p^k) é divisão exata).
        """
        table = np.ones(x + 1, dtype=dtype)
        table[0] = 0
        integral = np.issubdtype(dtype, np.integer)
        for p in self.primes_upto(x).tolist():
            table[p::p] *= local(p, 1)
            q, k = p * p, 2
            while q <= x:
                previous, current = local(p, k - 1), local(p, k)
                if integral:
                    table[q::q] = table[q::q] // previous * current
                else:
                    table[q::q] *= current / previous
                q *= p
                k += 1
        return table


_sieve: Optional[PrimeSieve] = None


def get_sieve(n: int) -> PrimeSieve:
    """Crivo compartilhado cobrindo pelo menos n (cresce sob demanda até SIEVE_LIMIT)"""
    global _sieve
    if n > settings.sieve_limit:
        raise CapacityError(
            f"{n} excede o limite do crivo {settings.sieve_limit}",
            {"n": n, "sieve_limit": settings.sieve_limit},
        )
    if _sieve is None or _sieve.limit < n:
        size = max(n, 1 << 16, 2 * (_sieve.limit if _sieve else 0))
        _sieve = PrimeSieve(min(size, settings.sieve_limit))
    return _sieve


def _as_factored(n: IntLike) -> FactoredInteger:
    return n if isinstance(n, FactoredInteger) else factorize(n)


def factorize(n: int) -> FactoredInteger:
    """Fatoração pelo crivo de menor fator primo"""
    if n < 1:
        raise DomainError(f"n deve ser positivo, recebido {n}")
    return FactoredInteger(value=n, factors=get_sieve(n).factorize(n))


def d_r_prime_power(a: int, r: int) -> int:
    """d_r(p^a) = binom(a + r − 1, a)"""
    return comb(a + r - 1, a)


def d_r(n: IntLike, r: int) -> int:
    """Número de r-uplas ordenadas de inteiros positivos com produto n"""
    if r < 1:
        raise DomainError("r deve ser ≥ 1")
    result = 1
    for _, a in _as_factored(n).factors:
        result *= d_r_prime_power(a, r)
    return result


@cached(LRUCache(maxsize=100_000))
def d_r_bruteforce(n: int, r: int) -> int:
    """Oráculo: enumeração das fatorações ordenadas"""
    if r == 1:
        return 1
    return sum(d_r_bruteforce(n // d, r - 1) for d in _divisors(n))


def _divisors(n: int) -> List[int]:
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def phi(n: IntLike) -> int:
    result = 1
    for p, a in _as_factored(n).factors:
        result *= (p - 1) * p ** (a - 1)
    return result


def mobius(n: IntLike) -> int:
    factors = _as_factored(n).factors
    if any(a > 1 for _, a in factors):
        return 0
    return -1 if len(factors) % 2 else 1


def is_squarefree(n: IntLike) -> bool:
    return _as_factored(n).is_squarefree()


def H_poly(lam: int, r: int) -> RationalPoly:
    """H_{λ,r}(x) = λ Σ_{i=0}^{r−1} binom(r−1, i)(−1)^i x^i/(λ + i); grau r − 1"""
    if lam < 1 or r < 1:
        raise DomainError("λ e r devem ser ≥ 1")
    return RationalPoly(Fraction(lam * comb(r - 1, i) * (-1) ** i, lam + i) for i in range(r))


def sigma_r(m: IntLike, r: int) -> Fraction:
    """σ_r(m) = ∏_{p^λ‖m} d_r(p^λ) H_{λ,r}(1/p), exato"""
    result = Fraction(1)
    for p, lam in _as_factored(m).factors:
        result *= d_r_prime_power(lam, r) * H_poly(lam, r)(Fraction(1, p))
    return result


def sigma_r_series(m: IntLike, r: int, precision: Optional[int] = None) -> mpmath.mpf:
    """σ_r(m) pela definição em série: ∏ (1 − 1/p)^r p^λ Σ_{j≥λ} d_r(p^j) p^{−j}

    A série local é somada até o termo ficar abaixo de 2^{−precision}.
    """
    precision = precision or settings.precision_bits
    with mpmath.workprec(precision + 16):
        eps = mpmath.mpf(2) ** (-precision - 8)
        result = mpmath.mpf(1)
        for p, lam in _as_factored(m).factors:
            x = mpmath.mpf(1) / p
            total, j = mpmath.mpf(0), lam
            while True:
                term = d_r_prime_power(j, r) * x**j
                total += term
                if term < eps and j > lam + r:
                    break
                j += 1
            result *= (1 - x) ** r * mpmath.mpf(p) ** lam * total
        return +result


def R_k(k: IntLike, s, precision: Optional[int] = None):
    """R_k(s) = ∏_{p^λ‖k} (1 − p^{−1} + λ(1 − p^{−s})(1 − p^{s−1}))

    Para s inteiro o resultado é racional exato; caso contrário mpmath.
    """
    factors = _as_factored(k).factors
    if isinstance(s, int):
        result = Fraction(1)
        for p, lam in factors:
            ps = Fraction(p) ** s
            result *= 1 - Fraction(1, p) + lam * (1 - 1 / ps) * (1 - ps / p)
        return result
    with mpmath.workprec(precision or settings.precision_bits):
        s = mpmath.mpmathify(s)
        result = mpmath.mpc(1)
        for p, lam in factors:
            result *= 1 - mpmath.mpf(1) / p + lam * (1 - mpmath.power(p, -s)) * (1 - mpmath.power(p, s - 1))
        return result


def k_p(p: int, alpha, precision: Optional[int] = None) -> mpmath.mpc:
    """k_p(α) = (1 − p^{iα})(1 − p^{−1−iα})/(1 − p^{−1})"""
    with mpmath.workprec(precision or settings.precision_bits):
        ia = mpmath.mpc(0, mpmath.mpmathify(alpha))
        return (1 - mpmath.power(p, ia)) * (1 - mpmath.power(p, -1 - ia)) / (1 - mpmath.mpf(1) / p)


def f_weight(k: IntLike, alpha, precision: Optional[int] = None) -> mpmath.mpc:
    """f(k) = R_k(1 + iα)/φ(k) = ∏_{p^a‖k} (1 + a·k_p(α)) p^{−a}"""
    with mpmath.workprec(precision or settings.precision_bits):
        result = mpmath.mpc(1)
        for p, a in _as_factored(k).factors:
            result *= (1 + a * k_p(p, alpha, precision)) / mpmath.mpf(p) ** a
        return result


def C_j(k: IntLike, j: int, precision: Optional[int] = None):
    """C_j(k) = Σ_{p|k} log^j p / p + Σ_{p^a‖k, a≥2} a·log^j p (racional exato quando j = 0)"""
    factors = _as_factored(k).factors
    if j == 0:
        return sum((Fraction(1, p) + (a if a >= 2 else 0) for p, a in factors), Fraction(0))
    with mpmath.workprec(precision or settings.precision_bits):
        total = mpmath.mpf(0)
        for p, a in factors:
            logj = mpmath.log(p) ** j
            total += logj / p + (a * logj if a >= 2 else 0)
        return total


# Tabelas vetorizadas para o laboratório de lemas


def divisor_table(x: int, r: int) -> np.ndarray:
    """d_r(n) para n ≤ x (int64)"""
    return get_sieve(x).multiplicative_table(x, lambda p, a: d_r_prime_power(a, r), dtype=np.int64)


def phi_table(x: int) -> np.ndarray:
    return get_sieve(x).multiplicative_table(x, lambda p, a: (p - 1) * p ** (a - 1), dtype=np.int64)


def sigma_table(x: int, r: int) -> np.ndarray:
    """σ_r(n) em ponto flutuante para n ≤ x"""
    return get_sieve(x).multiplicative_table(
        x, lambda p, a: float(d_r_prime_power(a, r) * H_poly(a, r)(Fraction(1, p)))
    )


def f_weight_table(x: int, alpha: float) -> np.ndarray:
    """f(k) complexo (precisão dupla) para k ≤ x"""

    def local(p: int, a: int) -> complex:
        ia = 1j * alpha * np.log(p)
        kp = (1 - np.exp(ia)) * (1 - np.exp(-ia) / p) / (1 - 1 / p)
        return (1 + a * kp) / float(p) ** a

    return get_sieve(x).multiplicative_table(x, local, dtype=np.complex128)


def C_j_table(x: int, j: int) -> np.ndarray:
    """C_j(k) para k ≤ x (float64), aditiva sobre as potências primas"""
    table = np.zeros(x + 1, dtype=np.float64)
    for p in get_sieve(x).primes_upto(x).tolist():
        logj = float(np.log(p)) ** j
        table[p::p] += logj / p
        q, a = p * p, 2
        while q <= x:
            # p^a‖k com a ≥ 2 acumula a·log^j p
            table[q::q] += logj * (2 if a == 2 else 1)
            q *= p
            a += 1
    return table


def valuation_array(values: np.ndarray, p: int) -> np.ndarray:
    """v_p(n) elemento a elemento"""
    v = np.zeros(values.shape, dtype=np.int64)
    rest = values.copy()
    mask = rest % p == 0
    while mask.any():
        v[mask] += 1
        rest[mask] //= p
        mask = (rest % p == 0) & (rest > 0)
    return v


def shifted_divisor_table(x: int, r: int, m: int) -> np.ndarray:
    """d_r(m·h) para h ≤ x usando apenas o crivo até x

    d_r(mh) = d_r(h) · ∏_{p^a‖m} d_r(p^{a+b})/d_r(p^b), b = v_p(h).
    """
    table = divisor_table(x, r).copy()
    h = np.arange(x + 1, dtype=np.int64)
    h[0] = 1
    for p, a in factorize(m).factors:
        b = valuation_array(h, p)
        for value in np.unique(b).tolist():
            idx = b == value
            table[idx] = table[idx] // d_r_prime_power(value, r) * d_r_prime_power(value + a, r)
    table[0] = 0
    return table

