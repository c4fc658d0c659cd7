"""
Laboratório de lemas: verificações empíricas por crivo das médias aritméticas
"""

import bisect
import csv
import io
import math
import time
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, List, Optional, Sequence, Union

import mpmath
import numpy as np

from app.config import settings
from app.exceptions import CapacityError, PreconditionError
from app.models.lemma_models import CSV_HEADER, ComparisonRow
from app.services.arith_kernel import (
    C_j,
    C_j_table,
    H_poly,
    d_r_prime_power,
    divisor_table,
    f_weight_table,
    get_sieve,
    is_squarefree,
    phi_table,
    shifted_divisor_table,
    sigma_r,
    sigma_table,
)
from app.services.euler_products import a_r
from app.services.rational_poly import RationalPoly
from app.utils.logger import log_performance

GROWTH_LIMIT = 5000
EXACT_GROWTH_LIMIT = 300
RationalLike = Union[int, Fraction, str]


def _fsum_complex(values: np.ndarray) -> mpmath.mpc:
    return mpmath.mpc(math.fsum(values.real.tolist()), math.fsum(values.imag.tolist()))


def _poly_values(g: RationalPoly, t: np.ndarray) -> np.ndarray:
    coeffs = [float(c) for c in reversed(g.coefficients)] or [0.0]
    return np.polyval(coeffs, t)


def _cutoff(x: int, theta: Fraction) -> int:
    """⌊x^{1−θ}⌋ (exato para θ = 0)"""
    if theta == 0:
        return x
    with mpmath.workprec(128):
        return int(mpmath.floor(mpmath.power(x, 1 - mpmath.mpf(theta.numerator) / theta.denominator)))


def check_lemma6(r: int, lam: int, order: int) -> RationalPoly:
    """(1 − x)^r Σ_{j≥λ} d_r(p^j)x^j − d_r(p^λ)x^λ H_{λ,r}(x) truncado em `order`

    Identidade exata: o resíduo é o polinômio nulo.
    """
    if order < lam + r:
        raise PreconditionError("ordem deve ser ≥ λ + r", {"order": order, "lambda": lam, "r": r})
    series = RationalPoly([0] * lam + [d_r_prime_power(j, r) for j in range(lam, order + 1)])
    lhs = (RationalPoly([1, -1]) ** r * series).truncate(order)
    rhs = (H_poly(lam, r) * d_r_prime_power(lam, r)).shift(lam).truncate(order)
    return lhs - rhs


def check_divisor_mean(r: int, n: int, x: int) -> ComparisonRow:
    """Σ_{h≤x} d_r(nh)/h contra σ_r(n)(log x)^r/r!"""
    start = time.time()
    table = shifted_divisor_table(x, r, n)
    h = np.arange(1, x + 1, dtype=np.float64)
    lhs = math.fsum((table[1:] / h).tolist())
    main = float(sigma_r(n, r)) * math.log(x) ** r / factorial(r)
    log_performance("check_divisor_mean", time.time() - start, {"r": r, "n": n, "x": x})
    return ComparisonRow(x=x, lhs=lhs, main_term=main, label=f"divisor_mean r={r} n={n}")


def check_sigma_mean(
    r: int, x: int, g: Optional[RationalPoly] = None, theta: RationalLike = 0
) -> ComparisonRow:
    """Σ_{m≤x^{1−θ}} φ(m)σ_r(m)²m⁻²·g(log m/log x) contra
    a_{r+1}(log x)^{r²}/(r²−1)!·∫₀^{1−θ}δ^{r²−1}g(δ)dδ
    """
    g = g if g is not None else RationalPoly([1])
    theta = Fraction(theta)
    if not (0 <= theta < 1):
        raise PreconditionError("θ deve estar em [0, 1)", {"theta": str(theta)})
    start = time.time()
    M = _cutoff(x, theta)
    m = np.arange(1, M + 1, dtype=np.float64)
    values = phi_table(M)[1:] * sigma_table(M, r)[1:] ** 2 / m**2 * _poly_values(g, np.log(m) / math.log(x))
    lhs = math.fsum(values.tolist())

    s = r * r
    integral = (RationalPoly.monomial(s - 1) * g).definite_integral(0, 1 - theta)
    a = a_r(r + 1)
    main = float(a.value) * math.log(x) ** s / factorial(s - 1) * float(integral)
    log_performance("check_sigma_mean", time.time() - start, {"r": r, "x": x})
    return ComparisonRow(x=x, lhs=lhs, main_term=main, label=f"sigma_mean r={r} theta={theta}")


def check_prime_sum(
    w: int,
    alpha: float,
    theta: RationalLike,
    y: int,
    g: Optional[RationalPoly] = None,
    precision: Optional[int] = None,
) -> ComparisonRow:
    """Σ_{p≤y^{1−θ}} (log p)^w p^{−1+iα} g(log p/log y) contra
    Σ_j (iα)^j/j!·(log y)^{j+w}∫₀^{1−θ}β^{j+w−1}g(β)dβ
    """
    if w < 1:
        raise PreconditionError("w deve ser ≥ 1", {"w": w})
    g = g if g is not None else RationalPoly([1])
    theta = Fraction(theta)
    start = time.time()
    P = _cutoff(y, theta)
    primes = get_sieve(P).primes_upto(P).astype(np.float64)
    logs = np.log(primes)
    values = logs**w / primes * np.exp(1j * alpha * logs) * _poly_values(g, logs / math.log(y))
    lhs = _fsum_complex(values.astype(np.complex128))

    with mpmath.workprec(precision or settings.precision_bits):
        L = mpmath.log(y)
        ia = mpmath.mpc(0, alpha)
        bound_g = float(g.norm1())
        main = mpmath.mpc(0)
        j = 0
        while True:
            integral = (RationalPoly.monomial(j + w - 1) * g).definite_integral(0, 1 - theta)
            main += ia**j / mpmath.factorial(j) * L ** (j + w) * mpmath.mpf(integral.numerator) / integral.denominator
            # termos omitidos ≤ Σ_{i>j} (|α|L)^i/i!·L^w·‖g‖₁
            omitted = (abs(alpha) * L) ** (j + 1) / mpmath.factorial(j + 1) * L**w * bound_g
            if omitted < mpmath.mpf(10) ** -20 and j + 1 > abs(alpha) * L:
                break
            j += 1
    log_performance("check_prime_sum", time.time() - start, {"w": w, "y": y, "alpha": alpha})
    return ComparisonRow(x=y, lhs=lhs, main_term=main, label=f"prime_sum w={w} alpha={alpha}")


def check_mertens(y: int) -> ComparisonRow:
    """Σ_{p≤y} log p/p contra log y; o desvio tende a uma constante ≈ −1.33"""
    row = check_prime_sum(1, 0.0, 0, y)
    return row.model_copy(update={"label": "mertens"})


def check_f_mean(r: int, m: int, n: int, alpha: float, x: int) -> ComparisonRow:
    """Σ_{k≤x} d_r(mk)f(nk) contra σ_r(m)/n·l^r·Σ_j binom(r,j)(−iαl)^j/(r+j)!, l = log x"""
    if not is_squarefree(n) or m % n:
        raise PreconditionError("n deve ser livre de quadrados e dividir m", {"m": m, "n": n})
    if n * x > settings.sieve_limit:
        raise CapacityError(f"n·x = {n * x} excede o limite do crivo", {"n": n, "x": x})
    start = time.time()
    divisors = shifted_divisor_table(x, r, m)[1:].astype(np.float64)
    weights = f_weight_table(n * x, alpha)[n :: n][:x]
    lhs = _fsum_complex(divisors * weights)

    with mpmath.workprec(settings.precision_bits):
        l = mpmath.log(x)
        bracket = mpmath.fsum(
            comb(r, j) * mpmath.mpc(0, -alpha * l) ** j / mpmath.factorial(r + j) for j in range(r + 1)
        )
        s = sigma_r(m, r)
        main = mpmath.mpf(s.numerator) / s.denominator / n * l**r * bracket
    log_performance("check_f_mean", time.time() - start, {"r": r, "m": m, "n": n, "x": x})
    return ComparisonRow(x=x, lhs=lhs, main_term=main, label=f"f_mean r={r} m={m} n={n}")


def _growth_exact(r: int, xs: List[int]) -> List[Fraction]:
    """S(x) racional exato para j = 0; cada par (h, k) entra no menor corte ≥ max(h, k)"""
    X = xs[-1]
    d = divisor_table(X, r).tolist()
    C = [Fraction(0)] + [C_j(k, 0) for k in range(1, X + 1)]
    buckets = [Fraction(0)] * len(xs)
    for h in range(1, X + 1):
        for k in range(1, X + 1):
            g = math.gcd(h, k)
            c = C[k // g]
            if c:
                buckets[bisect.bisect_left(xs, max(h, k))] += Fraction(d[h] * d[k] * g, h * k) * c
    totals, running = [], Fraction(0)
    for value in buckets:
        running += value
        totals.append(running)
    return totals


def growth_lemma9(r: int, j: int, xs: Sequence[int], exact: bool = False) -> List[ComparisonRow]:
    """S(x) = Σ_{h,k≤x} d_r(h)d_r(k)(h,k)/(hk)·C_j(k/(h,k)) normalizado por (log x)^{r²+r}

    Uma linha por corte; main_term guarda (log x)^{r²+r} e ratio a razão normalizada.
    Com `exact` (só j = 0, max(xs) ≤ EXACT_GROWTH_LIMIT) a soma é racional exata e
    arredondada uma única vez na precisão configurada; sem ele, soma de float64 com fsum.
    """
    xs = sorted(set(xs))
    X = xs[-1]
    if X > GROWTH_LIMIT:
        raise CapacityError(f"max(xs) = {X} excede {GROWTH_LIMIT}", {"xs": list(xs)})
    start = time.time()
    if exact:
        if j != 0:
            raise PreconditionError("soma exata só para j = 0", {"j": j})
        if X > EXACT_GROWTH_LIMIT:
            raise CapacityError(f"max(xs) = {X} excede {EXACT_GROWTH_LIMIT} no modo exato", {"xs": list(xs)})
        rows = []
        with mpmath.workprec(settings.precision_bits):
            for x, S in zip(xs, _growth_exact(r, xs)):
                lhs = mpmath.mpf(S.numerator) / S.denominator
                rows.append(
                    ComparisonRow(x=x, lhs=lhs, main_term=mpmath.log(x) ** (r * r + r), label=f"growth r={r} j=0 exato")
                )
        log_performance("growth_lemma9", time.time() - start, {"r": r, "j": j, "xmax": X, "exact": True})
        return rows
    d = divisor_table(X, r).astype(np.float64)
    C = C_j_table(X, j)
    k = np.arange(1, X + 1, dtype=np.int64)
    totals = {x: [] for x in xs}
    for h in range(1, X + 1):
        g = np.gcd(h, k)
        row = d[h] * d[1:] * g / (h * k) * C[k // g]
        prefix = np.cumsum(row)
        for x in xs:
            if h <= x:
                totals[x].append(float(prefix[x - 1]))
    rows = []
    for x in xs:
        S = math.fsum(totals[x])
        rows.append(
            ComparisonRow(x=x, lhs=S, main_term=math.log(x) ** (r * r + r), label=f"growth r={r} j={j}")
        )
    log_performance("growth_lemma9", time.time() - start, {"r": r, "j": j, "xmax": X})
    return rows


def rows_to_csv(rows: Iterable[ComparisonRow]) -> str:
    """CSV com cabeçalho (x, lhs_re, lhs_im, main_re, main_im, ratio_re, ratio_im, deviation)"""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(CSV_HEADER), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.csv_fields())
    return buffer.getvalue()
