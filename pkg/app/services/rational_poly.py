"""
Álgebra exata de polinômios racionais: perfil P do mollifier, momentos Q_u,
composição afim e integrais de monômios sobre o triângulo {x ≥ 0, y ≥ 0, x + y ≤ 1}
"""

import re
from fractions import Fraction
from math import comb, factorial
from typing import Dict, Iterable, Iterator, List, Tuple, Union

import mpmath
from cachetools import LRUCache, cached
from scipy import integrate

from app.exceptions import PolynomialParseError
from app.models.numeric import to_fraction
from app.services.cache_service import integral_cache

Scalar = Union[int, Fraction]

_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_RATIO = re.compile(r"^[+-]?\d+/[1-9]\d*$")


class RationalPoly:
    """Polinômio denso com coeficientes racionais exatos, termo constante primeiro"""

    __slots__ = ("_coeffs",)

    def __init__(self, coefficients: Iterable = ()):
        coeffs = [to_fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self._coeffs: Tuple[Fraction, ...] = tuple(coeffs)

    # Construtores

    @classmethod
    def monomial(cls, degree: int, coefficient: Scalar = 1) -> "RationalPoly":
        return cls([0] * degree + [coefficient])

    @classmethod
    def x(cls) -> "RationalPoly":
        return cls.monomial(1)

    # Acesso

    @property
    def coefficients(self) -> List[Fraction]:
        return list(self._coeffs)

    @property
    def degree(self) -> int:
        """Grau; −1 para o polinômio nulo"""
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def __getitem__(self, k: int) -> Fraction:
        return self._coeffs[k] if 0 <= k < len(self._coeffs) else Fraction(0)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    def norm1(self) -> Fraction:
        """‖P‖₁ = soma dos valores absolutos dos coeficientes"""
        return sum((abs(c) for c in self._coeffs), Fraction(0))

    def key(self) -> Tuple[str, ...]:
        """Representação canônica usada nas chaves de cache"""
        return tuple(str(c) for c in self._coeffs)

    # Aritmética

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalPoly):
            return self._coeffs == other._coeffs
        if isinstance(other, (int, Fraction)):
            return self._coeffs == RationalPoly([other])._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __neg__(self) -> "RationalPoly":
        return RationalPoly(-c for c in self._coeffs)

    def __add__(self, other) -> "RationalPoly":
        other = _as_poly(other)
        n = max(len(self), len(other))
        return RationalPoly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __sub__(self, other) -> "RationalPoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "RationalPoly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "RationalPoly":
        if isinstance(other, (int, Fraction)):
            return RationalPoly(c * other for c in self._coeffs)
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return RationalPoly()
        out = [Fraction(0)] * (len(self) + len(other) - 1)
        for i, a in enumerate(self._coeffs):
            if a:
                for j, b in enumerate(other._coeffs):
                    out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "RationalPoly":
        if exponent < 0:
            raise ValueError("expoente negativo")
        result, base = RationalPoly([1]), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def truncate(self, order: int) -> "RationalPoly":
        """Mantém os termos de grau ≤ order"""
        return RationalPoly(self._coeffs[: order + 1])

    def shift(self, k: int) -> "RationalPoly":
        """Multiplica por x^k"""
        return RationalPoly([0] * k + list(self._coeffs)) if self._coeffs else RationalPoly()

    def __call__(self, x):
        """Avalia por Horner; aceita racionais, mpf, mpc ou floats"""
        coeffs = self._coeffs
        if isinstance(x, (mpmath.mpf, mpmath.mpc)):
            # Fraction com mpf cairia em float
            coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in coeffs]
        elif isinstance(x, (float, complex)):
            coeffs = [float(c) for c in coeffs]
        acc = 0
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    # Cálculo

    def antiderivative(self) -> "RationalPoly":
        return RationalPoly([0] + [c / (k + 1) for k, c in enumerate(self._coeffs)])

    def definite_integral(self, a: Scalar = 0, b: Scalar = 1) -> Fraction:
        F = self.antiderivative()
        return Fraction(F(to_fraction(b))) - Fraction(F(to_fraction(a)))

    def derivative(self) -> "RationalPoly":
        return RationalPoly(k * c for k, c in enumerate(self._coeffs) if k)

    def __repr__(self) -> str:
        return f"RationalPoly([{', '.join(str(c) for c in self._coeffs)}])"


def _as_poly(value) -> RationalPoly:
    return value if isinstance(value, RationalPoly) else RationalPoly([value])


def parse_poly_spec(spec: str) -> RationalPoly:
    """Converte "1,-0.1,100,-0.2" (constante primeiro) em RationalPoly exato

    Aceita decimais, notação científica e frações "a/b"; o menos tipográfico
    "−" é aceito. A posição do erro é contada a partir de 1.
    """
    tokens = spec.replace("−", "-").split(",")
    coeffs = []
    for position, raw in enumerate(tokens, start=1):
        token = raw.strip()
        if not (_DECIMAL.match(token) or _RATIO.match(token)):
            raise PolynomialParseError(raw.strip(), position)
        coeffs.append(Fraction(token))
    return RationalPoly(coeffs)


def affine_compose(P: RationalPoly, c0: Scalar, c1: Scalar) -> RationalPoly:
    """t ↦ P(c0 + c1·t) com coeficientes exatos"""
    inner = RationalPoly([c0, c1])
    result = RationalPoly()
    for coef in reversed(P.coefficients):
        result = result * inner + coef
    return result


def compute_Q(P: RationalPoly, u: int) -> RationalPoly:
    """Q_u(x) = ∫₀¹ θ^u P(x + θ(1 − x)) dθ

    Expandindo (x + θ(1−x))^k pelo binômio, cada θ^{u+i} integra a 1/(u+i+1).
    """
    if u < 0:
        raise ValueError("u deve ser ≥ 0")
    return integral_cache.get_or_set(
        integral_cache.generate_key("Q", u, *P.key()), lambda: _compute_Q(P, u)
    )


def _compute_Q(P: RationalPoly, u: int) -> RationalPoly:
    x = RationalPoly.x()
    one_minus_x = RationalPoly([1, -1])
    result = RationalPoly()
    for k, pk in enumerate(P):
        if not pk:
            continue
        for i in range(k + 1):
            weight = pk * comb(k, i) / Fraction(u + i + 1)
            result = result + (one_minus_x**i) * (x ** (k - i)) * weight
    return result


class BivariatePoly:
    """Polinômio em (x, y) com suporte finito; chaves (potência de x, potência de y)"""

    __slots__ = ("_terms",)

    def __init__(self, terms: Dict[Tuple[int, int], Scalar] = None):
        self._terms: Dict[Tuple[int, int], Fraction] = {}
        for (a, b), c in (terms or {}).items():
            c = to_fraction(c)
            if c:
                self._terms[(a, b)] = c

    @classmethod
    def from_x(cls, P: RationalPoly) -> "BivariatePoly":
        return cls({(k, 0): c for k, c in enumerate(P)})

    @classmethod
    def from_y(cls, P: RationalPoly) -> "BivariatePoly":
        return cls({(0, k): c for k, c in enumerate(P)})

    @classmethod
    def from_sum(cls, P: RationalPoly) -> "BivariatePoly":
        """(x, y) ↦ P(x + y)"""
        terms: Dict[Tuple[int, int], Fraction] = {}
        for k, c in enumerate(P):
            if not c:
                continue
            for i in range(k + 1):
                key = (i, k - i)
                terms[key] = terms.get(key, Fraction(0)) + c * comb(k, i)
        return cls(terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, BivariatePoly) and self._terms == other._terms

    def __add__(self, other: "BivariatePoly") -> "BivariatePoly":
        terms = dict(self._terms)
        for key, c in other._terms.items():
            terms[key] = terms.get(key, Fraction(0)) + c
        return BivariatePoly(terms)

    def __neg__(self) -> "BivariatePoly":
        return BivariatePoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "BivariatePoly") -> "BivariatePoly":
        return self + (-other)

    def __mul__(self, other) -> "BivariatePoly":
        if isinstance(other, (int, Fraction)):
            return BivariatePoly({k: c * other for k, c in self._terms.items()})
        terms: Dict[Tuple[int, int], Fraction] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                key = (a1 + a2, b1 + b2)
                terms[key] = terms.get(key, Fraction(0)) + c1 * c2
        return BivariatePoly(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "BivariatePoly":
        result, base = BivariatePoly({(0, 0): 1}), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __call__(self, x, y):
        return sum(c * x**a * y**b for (a, b), c in self._terms.items())

    def integrate_y(self) -> RationalPoly:
        """x ↦ ∫₀^{1−x} F(x, y) dy como polinômio exato em x"""
        result = RationalPoly()
        one_minus_x = RationalPoly([1, -1])
        for (a, b), c in self._terms.items():
            result = result + (one_minus_x ** (b + 1)).shift(a) * (c / (b + 1))
        return result

    def __repr__(self) -> str:
        body = ", ".join(f"x^{a}y^{b}: {c}" for (a, b), c in sorted(self._terms.items()))
        return f"BivariatePoly({{{body}}})"


@cached(LRUCache(maxsize=65536))
def triangle_monomial(a: int, b: int) -> Fraction:
    """∫₀¹∫₀^{1−x} x^a y^b dy dx = a!·b!/(a+b+2)!"""
    return Fraction(factorial(a) * factorial(b), factorial(a + b + 2))


def triangle_integral(F: BivariatePoly) -> Fraction:
    """Integral exata sobre o triângulo como combinação de triangle_monomial"""
    return sum((c * triangle_monomial(a, b) for (a, b), c in F.items()), Fraction(0))


def triangle_integral_numeric(F: BivariatePoly) -> float:
    """Oráculo de quadratura adaptativa (apenas para conferência)"""
    terms = [(a, b, float(c)) for (a, b), c in F.items()]

    def integrand(y: float, x: float) -> float:
        return sum(c * x**a * y**b for a, b, c in terms)

    value, _ = integrate.dblquad(integrand, 0.0, 1.0, 0.0, lambda x: 1.0 - x, epsabs=1e-14, epsrel=1e-13)
    return value
