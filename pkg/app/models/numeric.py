"""
Tipos numéricos anotados para os modelos (racionais exatos e reais mpmath)
"""

import math
from fractions import Fraction
from typing import Annotated, Any, Union

import mpmath
from pydantic import BeforeValidator, PlainSerializer


def to_fraction(value: Any) -> Fraction:
    """Converte int, str "p/q" ou decimal e Fraction em racional exato"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleano não é racional")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        # floats só entram por conversão explícita e exata
        return Fraction(value)
    raise TypeError(f"não é um racional: {value!r}")


def mp_digits(x: mpmath.mpf) -> int:
    """Dígitos decimais suficientes para reproduzir o mantissa de x"""
    if not x:
        return 17
    bits = max(53, abs(int(x.man)).bit_length())
    return int(math.ceil(bits * math.log10(2))) + 2


def mp_to_str(x: Union[mpmath.mpf, int, Fraction]) -> str:
    """String decimal em precisão total"""
    if isinstance(x, (int, Fraction)):
        x = mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpf(x)
    return mpmath.nstr(x, mp_digits(x), strip_zeros=True)


def mp_to_exact(x: mpmath.mpf) -> str:
    """Valor diádico exato de x como racional "p/q" (q potência de 2)"""
    if not x:
        return "0"
    man, exp = x.man_exp
    return str(Fraction(int(man)) * Fraction(2) ** int(exp))


def to_mpf(value: Any) -> mpmath.mpf:
    """Converte string decimal, racional ou número em mpf sem perder dígitos"""
    if isinstance(value, mpmath.mpf):
        return value
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    if isinstance(value, str):
        if "/" in value:
            q = Fraction(value.strip())
            bits = max(mpmath.mp.prec, q.numerator.bit_length() + 8)
            with mpmath.workprec(bits):
                return mpmath.mpf(q.numerator) / q.denominator
        digits = sum(ch.isdigit() for ch in value)
        bits = max(mpmath.mp.prec, int(digits * 3.33) + 8)
        with mpmath.workprec(bits):
            return mpmath.mpf(value)
    return mpmath.mpf(value)


def to_mpc(value: Any) -> mpmath.mpc:
    if isinstance(value, mpmath.mpc):
        return value
    if isinstance(value, dict):
        return mpmath.mpc(to_mpf(value["re"]), to_mpf(value["im"]))
    if isinstance(value, complex):
        return mpmath.mpc(value.real, value.imag)
    return mpmath.mpc(to_mpf(value), 0)


Rational = Annotated[
    Fraction,
    BeforeValidator(to_fraction),
    PlainSerializer(lambda q: str(q), return_type=str),
]

MpReal = Annotated[
    mpmath.mpf,
    BeforeValidator(to_mpf),
    PlainSerializer(mp_to_str, return_type=str),
]

MpComplex = Annotated[
    mpmath.mpc,
    BeforeValidator(to_mpc),
    PlainSerializer(lambda z: {"re": mp_to_str(z.real), "im": mp_to_str(z.imag)}, return_type=dict),
]
