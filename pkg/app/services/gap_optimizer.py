"""
Cota certificada λ_r, busca de polinômios P e certificados verificáveis
"""

import time
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from scipy.optimize import minimize

from app.config import settings
from app.exceptions import (
    CertificateUnavailableError,
    CertificateVerificationError,
    DegenerateMollifierError,
    InfeasibleMollifierError,
    SearchExhaustedError,
)
from app.models.gap_models import GapConfig, LambdaReport, SearchState
from app.models.numeric import mp_to_exact, mp_to_str, to_mpf
from app.models.report_models import GapCertificate
from app.services.gap_series import (
    HALF,
    SeriesBasis,
    evaluate_series,
    horner_value,
    normalized_coefficients,
    prepare_coefficients,
    series_coefficients,
    tail_certificate,
)
from app.utils.logger import log_certificate, log_performance, logger

def lambda_r(config: GapConfig) -> LambdaReport:
    """λ_r = último cruzamento ascendente de f_r por 1 em (0, scan_max], certificado"""
    coefficients, d_rat = series_coefficients(config.r, config.P, config.J)
    return lambda_from_series(config, coefficients, d_rat)


def _certifiable_point(f, grid, values, lo, target, bisection_bits: int, prec: int) -> mpmath.mpf:
    """Maior κ ≤ lo, na resolução da bisseção, com f(κ) < target"""
    with mpmath.workprec(prec):
        if f(lo) < target:
            return lo
        below = [k for k, v in zip(grid, values) if k < lo and v < target]
        a = below[-1] if below else mpmath.mpf(0)
        b = lo
        for _ in range(bisection_bits):
            mid = (a + b) / 2
            if f(mid) < target:
                a = mid
            else:
                b = mid
    if not a:
        raise CertificateUnavailableError("nenhum κ > 0 certificável abaixo do cruzamento", {"kappa": mp_to_str(lo)})
    return a


def lambda_from_series(
    config: GapConfig,
    coefficients: List[Fraction],
    d_rat: Fraction,
    grid_points: Optional[int] = None,
    bisection_bits: Optional[int] = None,
) -> LambdaReport:
    start = time.time()
    grid_points = grid_points or settings.grid_points
    bisection_bits = bisection_bits or settings.bisection_bits
    prec = config.precision
    prepared = prepare_coefficients(normalized_coefficients(coefficients, d_rat), prec)

    def f(kappa: mpmath.mpf) -> mpmath.mpf:
        return horner_value(prepared, kappa, prec)

    with mpmath.workprec(prec):
        scan_max = to_mpf(config.scan_max_kappa)
        step = scan_max / grid_points
        grid = [step * i for i in range(1, grid_points + 1)]
        values = [f(k) for k in grid]

        boundary = values[-1] < 1
        if boundary:
            lo = hi = scan_max
        else:
            # último i com f(κ_i) < 1 ≤ f(κ_{i+1}); f(0) = 0
            last = max(i for i in range(-1, grid_points - 1) if (values[i] if i >= 0 else 0) < 1 <= values[i + 1])
            lo = grid[last] if last >= 0 else mpmath.mpf(0)
            hi = grid[last + 1]
            for _ in range(bisection_bits):
                mid = (lo + hi) / 2
                if f(mid) < 1:
                    lo = mid
                else:
                    hi = mid
            if lo == 0:
                lo = hi / 2**bisection_bits

    # a cota da cauda cresce com κ: T(hi) vale em todo [0, hi]
    with mpmath.workprec(prec):
        target = 1 - tail_certificate(config, hi, d_rat).bound
    if target <= 0:
        raise CertificateUnavailableError("cauda maior que 1 no colchete", {"kappa": mp_to_str(hi), "r": config.r})
    kappa = _certifiable_point(f, grid, values, lo, target, bisection_bits, prec)
    evaluation = evaluate_series(config, kappa, coefficients, d_rat)
    with mpmath.workprec(prec):
        margin = 1 - (evaluation.value + evaluation.tail.bound)
    if margin <= 0:
        raise CertificateUnavailableError(
            "não foi possível certificar f < 1 abaixo do cruzamento",
            {"kappa": mp_to_str(kappa), "r": config.r},
        )

    with mpmath.workprec(prec):
        c_star = evaluation.kappa * mpmath.pi
    report = LambdaReport(
        config=config,
        c_star=c_star,
        kappa_star=evaluation.kappa,
        lambda_lower=evaluation.kappa,
        f_at_c_star=evaluation,
        bracket=(lo, hi),
        boundary=boundary,
        margin=margin,
    )
    log_performance(
        "lambda_r",
        time.time() - start,
        {"r": config.r, "lambda": mpmath.nstr(report.lambda_lower, 12), "boundary": boundary},
    )
    return report


# Avaliação rápida em ponto flutuante (só orienta a busca)


class FastObjective:
    """λ aproximado em float64 a partir das matrizes exatas da base bilinear"""

    def __init__(self, basis: SeriesBasis, scan_max: float, grid_points: int = 512, bisection_steps: int = 48):
        J = basis.J
        with mpmath.workprec(80):
            pi_powers = [mpmath.pi ** (2 * j) for j in range(1, J + 1)]
            # β_j = A_j π^{2j} por entrada; f(κ) = κ Σ β_j κ^{2j} / D
            self.term_tensor = np.array(
                [
                    [[float(mpmath.mpf(q.numerator) / q.denominator * pi_powers[j]) for q in row] for row in matrix]
                    for j, matrix in enumerate(basis.term_matrices)
                ]
            )
        self.d_matrix = np.array([[float(q) for q in row] for row in basis.d_matrix])
        self.grid = np.linspace(scan_max / grid_points, scan_max, grid_points)
        self.bisection_steps = bisection_steps

    def series(self, p: np.ndarray) -> Optional[np.ndarray]:
        d = float(p @ self.d_matrix @ p)
        if not d > 0:
            return None
        return np.einsum("jab,a,b->j", self.term_tensor, p, p) / d

    @staticmethod
    def _value(beta: np.ndarray, kappa):
        # polyval em κ² com coeficientes do maior grau para o menor
        return kappa * np.polyval(np.concatenate((beta[::-1], [0.0])), kappa * kappa)

    def lam(self, p: np.ndarray) -> Optional[float]:
        beta = self.series(p)
        if beta is None:
            return None
        values = self._value(beta, self.grid)
        if not np.all(np.isfinite(values)):
            return None
        if values[-1] < 1:
            return float(self.grid[-1])
        above = values >= 1
        below = np.concatenate(([True], values[:-1] < 1))
        idx = np.nonzero(above & below)[0][-1]
        lo = self.grid[idx - 1] if idx > 0 else 0.0
        hi = self.grid[idx]
        for _ in range(self.bisection_steps):
            mid = 0.5 * (lo + hi)
            if self._value(beta, mid) < 1:
                lo = mid
            else:
                hi = mid
        return float(lo)


def _round_coefficients(t: Sequence[float]) -> Tuple[Fraction, ...]:
    """c_i = sinh(t_i) arredondado a 6 algarismos, como racional exato"""
    return tuple(Fraction(f"{np.sinh(np.clip(v, -40.0, 40.0)):.6g}") for v in t)


def optimize_poly(
    r: int,
    degree: int,
    budget: Optional[int] = None,
    seed: Optional[int] = None,
    restarts: Optional[int] = None,
    J: Optional[int] = None,
    precision: Optional[int] = None,
) -> SearchState:
    """Busca P = 1 + c_1x + ... + c_d x^d maximizando λ (Nelder–Mead com reinícios)

    A constante fica em 1 pela invariância de escala; c_i = sinh(t_i) deixa o simplex
    percorrer várias ordens de grandeza. Só λ certificados atualizam o melhor estado.
    """
    start = time.time()
    budget = budget or settings.optimizer_budget
    seed = settings.seed if seed is None else seed
    restarts = restarts or settings.optimizer_restarts
    base = GapConfig.from_settings(r=r, poly=[1], J=J, precision=precision, eta=HALF)

    state = SearchState(r=r, degree=degree, coefficients=[Fraction(1)], budget=budget, seed=seed)
    baseline = lambda_r(base)
    state.best = baseline
    state.evaluations = 1
    state.history.append(f"P=1: λ ≥ {mpmath.nstr(baseline.lambda_lower, 12)}")
    if degree == 0:
        return state

    basis = SeriesBasis(r, degree, base.J)
    fast = FastObjective(basis, float(base.scan_max_kappa), settings.grid_points)
    rng = np.random.default_rng(seed)
    memo: Dict[Tuple[Fraction, ...], float] = {}
    infeasible = 0

    def objective(t: np.ndarray) -> float:
        nonlocal infeasible
        key = _round_coefficients(t)
        if key in memo:
            return memo[key]
        state.evaluations += 1
        p = np.array([1.0] + [float(c) for c in key])
        lam = fast.lam(p)
        if lam is None:
            infeasible += 1
            memo[key] = np.inf
        else:
            memo[key] = -lam
        return memo[key]

    candidates: List[Tuple[float, Tuple[Fraction, ...]]] = []
    for attempt in range(restarts):
        remaining = budget - state.evaluations
        if remaining <= degree + 1:
            break
        maxfev = remaining // (restarts - attempt)
        x0 = np.zeros(degree) if attempt == 0 else rng.normal(0.0, 2.5, size=degree)
        simplex = np.vstack([x0] + [x0 + np.eye(degree)[i] for i in range(degree)])
        result = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={"initial_simplex": simplex, "maxfev": max(maxfev, degree + 2), "xatol": 1e-7, "fatol": 1e-10},
        )
        key = _round_coefficients(result.x)
        if np.isfinite(memo.get(key, np.inf)):
            candidates.append((memo[key], key))
        logger.debug(f"reinício {attempt}: λ≈{-result.fun:.8f} com {state.evaluations} avaliações")

    if not candidates:
        raise SearchExhaustedError(
            "todos os candidatos foram inviáveis",
            {"r": r, "degree": degree, "evaluations": state.evaluations, "infeasible": infeasible},
        )

    # desempate lexicográfico nos coeficientes
    for _, key in sorted(set(candidates)):
        poly = [Fraction(1), *key]
        config = base.model_copy(update={"poly": poly})
        try:
            coefficients, d_rat = basis.coefficients(poly)
            report = lambda_from_series(config, coefficients, d_rat)
        except (DegenerateMollifierError, InfeasibleMollifierError, CertificateUnavailableError) as exc:
            logger.debug(f"candidato {list(map(str, poly))} descartado: {exc}")
            continue
        if report.lambda_lower > state.best.lambda_lower or (
            report.lambda_lower == state.best.lambda_lower and poly < list(state.coefficients)
        ):
            state.best = report
            state.coefficients = poly
            state.history.append(
                f"P={','.join(map(str, poly))}: λ ≥ {mpmath.nstr(report.lambda_lower, 12)}"
            )

    log_performance(
        "optimize_poly",
        time.time() - start,
        {"r": r, "grau": degree, "avaliacoes": state.evaluations, "lambda": mpmath.nstr(state.best.lambda_lower, 12)},
    )
    return state


# Certificados


def certify(report: LambdaReport) -> GapCertificate:
    """Registro verificável: coeficientes exatos, κ*, soma parcial, cauda e margem"""
    config, evaluation = report.config, report.f_at_c_star
    certificate = GapCertificate(
        r=config.r,
        eta=str(config.eta),
        poly=[str(c) for c in config.poly],
        J=config.J,
        precision_bits=config.precision,
        kappa_star=mp_to_exact(report.kappa_star),
        partial_sum=mp_to_exact(evaluation.value),
        tail_bound=mp_to_exact(evaluation.tail.bound),
        margin=mp_to_exact(report.margin),
        d_rational=str(evaluation.d_rational),
        coefficients=[str(a) for a in evaluation.coefficients],
    )
    log_certificate("lambda", mp_to_str(report.margin), {"r": config.r, "kappa_star": mp_to_str(report.kappa_star)})
    return certificate


def verify_certificate(
    certificate: GapCertificate,
    series: Optional[Callable[[GapConfig], Tuple[List[Fraction], Fraction]]] = None,
) -> bool:
    """Recomputa coeficientes, soma parcial, cauda e margem; qualquer divergência levanta erro"""
    config = GapConfig(
        r=certificate.r,
        eta=certificate.eta,
        poly=certificate.poly,
        J=certificate.J,
        precision=certificate.precision_bits,
    )
    coefficients, d_rat = (series or (lambda c: series_coefficients(c.r, c.P, c.J)))(config)

    if [str(a) for a in coefficients] != list(certificate.coefficients):
        raise CertificateVerificationError("coeficientes A_j não conferem", {"r": config.r})
    if str(d_rat) != certificate.d_rational:
        raise CertificateVerificationError("D/π não confere", {"d_rational": certificate.d_rational})

    prec = config.precision
    with mpmath.workprec(prec):
        kappa = +to_mpf(certificate.kappa_star)
    evaluation = evaluate_series(config, kappa, coefficients, d_rat)
    with mpmath.workprec(prec + 16):
        tol = mpmath.mpf(2) ** (-(prec - 8))
        partial = to_mpf(certificate.partial_sum)
        tail = to_mpf(certificate.tail_bound)
        margin = to_mpf(certificate.margin)
        if abs(evaluation.value - partial) > tol:
            raise CertificateVerificationError("soma parcial não confere", {"partial_sum": certificate.partial_sum})
        if abs(evaluation.tail.bound - tail) > tol * tail:
            raise CertificateVerificationError("cota de cauda não confere", {"tail_bound": certificate.tail_bound})
        recomputed = 1 - (evaluation.value + evaluation.tail.bound)
        if recomputed <= 0 or abs(recomputed - margin) > tol:
            raise CertificateVerificationError("margem não confere", {"margin": certificate.margin})

    log_certificate("verificado", mp_to_str(margin), {"r": config.r})
    return True
