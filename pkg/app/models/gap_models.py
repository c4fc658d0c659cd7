"""
Modelos Pydantic da série do critério, certificados de cauda e relatórios de λ
"""

from fractions import Fraction
from typing import List, Literal, Optional, Tuple

import mpmath
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.config import settings
from .numeric import MpReal, Rational


class IIndex(BaseModel):
    """Vetor de índices (n1, ..., n5) da integral i_P"""

    model_config = ConfigDict(frozen=True)

    r: int = Field(ge=1, description="Índice r do mollifier")
    n1: int = Field(ge=0)
    n2: int = Field(ge=0)
    n3: int = Field(ge=0)
    n4: int = Field(ge=0)
    n5: int = Field(ge=0)

    def astuple(self) -> Tuple[int, int, int, int, int, int]:
        return (self.r, self.n1, self.n2, self.n3, self.n4, self.n5)


class KIndex(BaseModel):
    """Vetor de índices (n1, n2, n3) da integral k_P, com η racional"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    r: int = Field(ge=1, description="Índice r do mollifier")
    n1: int = Field(ge=0)
    n2: int = Field(ge=0)
    n3: int = Field(ge=0)
    eta: Rational = Field(default=Fraction(1, 2), description="Comprimento relativo η do mollifier")

    @field_validator("eta")
    @classmethod
    def _check_eta(cls, value: Fraction) -> Fraction:
        if value <= 0:
            raise ValueError("η deve ser positivo")
        return value

    def astuple(self) -> Tuple[int, int, int, int, Fraction]:
        return (self.r, self.n1, self.n2, self.n3, self.eta)


class GapConfig(BaseModel):
    """Parâmetros de uma avaliação do critério: r, η, P, truncamento J, precisão e varredura"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    r: int = Field(ge=1, description="Potência r em a(n) = d_r(n)P(log n/log y)")
    eta: Rational = Field(default=Fraction(1, 2), description="η em (0, 1/2]")
    poly: List[Rational] = Field(description="Coeficientes exatos de P, constante primeiro")
    J: int = Field(default=80, ge=1, description="Índice de truncamento da série")
    precision: int = Field(default=256, ge=64, description="Precisão de trabalho em bits")
    scan_max_kappa: Rational = Field(default=Fraction(4), description="scan_max = κ·π")

    @field_validator("eta")
    @classmethod
    def _check_eta(cls, value: Fraction) -> Fraction:
        if not (0 < value <= Fraction(1, 2)):
            raise ValueError("η deve estar em (0, 1/2]")
        return value

    @field_validator("scan_max_kappa")
    @classmethod
    def _check_scan(cls, value: Fraction) -> Fraction:
        if value <= 0:
            raise ValueError("scan_max deve ser positivo")
        return value

    @model_validator(mode="after")
    def _check_poly(self) -> "GapConfig":
        if not any(self.poly):
            raise ValueError("P não pode ser identicamente nulo")
        return self

    @property
    def P(self):
        from app.services.rational_poly import RationalPoly

        return RationalPoly(self.poly)

    @classmethod
    def from_settings(cls, **overrides) -> "GapConfig":
        """Monta a configuração a partir de `settings`, aplicando sobrescritas"""
        from app.services.rational_poly import parse_poly_spec

        values = {
            "r": settings.default_r,
            "eta": settings.eta,
            "poly": parse_poly_spec(settings.default_poly).coefficients,
            "J": settings.truncation_j,
            "precision": settings.precision_bits,
            "scan_max_kappa": Fraction(str(settings.scan_max_pi)),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


class TailCertificate(BaseModel):
    """Cota rigorosa da cauda descartada Σ_{j>J} e a cadeia de desigualdades usada"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    J: int = Field(ge=1, description="Índice de truncamento")
    bound: MpReal = Field(description="Cota total (î + k̂)")
    method: Literal["i-hat-tail", "k-hat-tail", "combined"] = Field(default="combined")
    i_bound: Optional[MpReal] = Field(default=None, description="Parcela da cauda de î")
    k_bound: Optional[MpReal] = Field(default=None, description="Parcela da cauda de k̂")
    chain: List[str] = Field(default_factory=list, description="Desigualdades aplicadas")

    @field_validator("bound")
    @classmethod
    def _check_bound(cls, value: mpmath.mpf) -> mpmath.mpf:
        if value < 0:
            raise ValueError("cota de cauda negativa")
        return value


class SeriesEvaluation(BaseModel):
    """Coeficientes exatos A_j de f_r e o valor em c = κπ"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    coefficients: List[Rational] = Field(description="A_j exatos, j = 1..J (f = Σ A_j κ^{2j+1}π^{2j}/D_rat)")
    d_rational: Rational = Field(description="Parte racional de D = π·D_rat")
    kappa: MpReal = Field(description="Ponto de avaliação c = κπ")
    precision: int = Field(description="Precisão da avaliação em bits")
    value: MpReal = Field(description="Soma parcial Σ_{j≤J}")
    tail: Optional[TailCertificate] = Field(default=None, description="Certificado da cauda")


class LambdaReport(BaseModel):
    """Cota inferior certificada λ ≥ c*/π"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    config: GapConfig
    c_star: MpReal = Field(description="c* = κ*·π")
    kappa_star: MpReal = Field(description="κ* = c*/π")
    lambda_lower: MpReal = Field(description="Cota inferior para λ")
    f_at_c_star: SeriesEvaluation = Field(description="f_r(c*) com certificado de cauda")
    bracket: Tuple[MpReal, MpReal] = Field(description="(κ_lo, κ_hi) com f(κ_lo) < 1 ≤ f(κ_hi)")
    boundary: bool = Field(default=False, description="Sem cruzamento até scan_max")
    margin: MpReal = Field(description="1 − (valor + cauda)")

    @model_validator(mode="after")
    def _check_certified(self) -> "LambdaReport":
        if self.margin <= 0:
            raise ValueError("relatório sem viabilidade certificada")
        return self


class SearchState(BaseModel):
    """Estado da busca por polinômios P"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    r: int = Field(ge=1)
    degree: int = Field(ge=0)
    coefficients: List[Rational] = Field(description="Melhor vetor de coeficientes (constante = 1)")
    best: Optional[LambdaReport] = Field(default=None, description="Melhor relatório certificado")
    budget: int = Field(ge=1, description="Orçamento de avaliações")
    evaluations: int = Field(default=0, description="Avaliações consumidas")
    seed: int = Field(default=0)
    history: List[str] = Field(default_factory=list, description="λ certificados a cada melhora")
